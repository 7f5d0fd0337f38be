//! Error norms against a reference trajectory, convergence-order
//! estimation, and energy accounting.

use std::fmt;

use crate::constitutive::SystemParams;
use crate::simulate::{
    commensurate_stride, eval_forcing, run, step_count, ForcingSpec, RunConfig, RunError,
    Trajectory,
};
use crate::integrator::IntegratorParams;

/// Per-sample RMS error of a coarse run against a reference on the same
/// grid: `e_p = sqrt(sum (p_i - p_ref_i)^2 / M)` over the M post-initial
/// samples. The normalization is per sample, so values computed on grids
/// of different resolution are directly comparable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub e_u: f64,
    pub e_v: f64,
    /// Number of compared steps (samples past the initial state).
    pub m: usize,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// `(dt, e_u, e_v)` sorted by decreasing dt.
    pub entries: Vec<(f64, f64, f64)>,
    pub observed_order_u: f64,
    pub observed_order_v: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    GridMismatch { detail: String },
    Run(RunError),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::GridMismatch { detail } => write!(f, "grid mismatch: {detail}"),
            AnalysisError::Run(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AnalysisError {}

impl From<RunError> for AnalysisError {
    fn from(e: RunError) -> Self {
        AnalysisError::Run(e)
    }
}

pub fn error_norm(traj: &Trajectory, reference: &Trajectory) -> Result<ErrorReport, AnalysisError> {
    if traj.len() != reference.len() {
        return Err(AnalysisError::GridMismatch {
            detail: format!(
                "trajectory has {} samples, reference has {}",
                traj.len(),
                reference.len()
            ),
        });
    }
    if traj.len() < 2 {
        return Err(AnalysisError::GridMismatch {
            detail: "need at least one step to compare".into(),
        });
    }
    // sum over the post-initial samples i = 1..M
    let mut sum_u = 0.0;
    let mut sum_v = 0.0;
    for (i, (a, b)) in traj.states.iter().zip(&reference.states).enumerate() {
        if (a.t - b.t).abs() > 1e-9 * (1.0 + a.t.abs()) {
            return Err(AnalysisError::GridMismatch {
                detail: format!("time stamps differ: {} vs {}", a.t, b.t),
            });
        }
        if i == 0 {
            continue;
        }
        sum_u += (a.u - b.u) * (a.u - b.u);
        sum_v += (a.v - b.v) * (a.v - b.v);
    }
    let m = traj.len() - 1;
    Ok(ErrorReport {
        e_u: (sum_u / m as f64).sqrt(),
        e_v: (sum_v / m as f64).sqrt(),
        m,
        dt: traj.dt,
    })
}

/// Mean observed order from successive log-ratios of the error entries.
fn observed_order(entries: &[(f64, f64)]) -> f64 {
    if entries.len() < 2 {
        return f64::NAN;
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for pair in entries.windows(2) {
        let (dt_coarse, e_coarse) = pair[0];
        let (dt_fine, e_fine) = pair[1];
        total += (e_coarse / e_fine).ln() / (dt_coarse / dt_fine).ln();
        count += 1;
    }
    total / count as f64
}

/// Convergence sweep against a single fine reference run.
///
/// The reference integrates the same problem with `alpha = beta = 1` at
/// `dt_ref` once; each coarse run is compared against the subsampled
/// reference. Each dt must be an integer multiple of `dt_ref`.
pub fn convergence_study(
    base: &RunConfig,
    dts: &[f64],
    dt_ref: f64,
) -> Result<ConvergenceReport, AnalysisError> {
    let mut dts: Vec<f64> = dts.to_vec();
    dts.sort_by(|a, b| b.partial_cmp(a).unwrap());

    // reference long enough to cover every coarse grid
    let mut n_fine = 0usize;
    let mut strides = Vec::with_capacity(dts.len());
    for &dt in &dts {
        let stride = commensurate_stride(dt, dt_ref)?;
        let n_coarse = step_count(base.t_end, dt);
        n_fine = n_fine.max(stride * n_coarse);
        strides.push((stride, n_coarse));
    }

    let ref_ip = IntegratorParams::new(dt_ref, 1.0, 1.0, base.ip.controls)
        .map_err(|_| AnalysisError::GridMismatch {
            detail: format!("invalid dt_ref = {dt_ref}"),
        })?;
    let ref_config = RunConfig {
        ip: ref_ip,
        t_end: n_fine as f64 * dt_ref,
        ..*base
    };
    let reference = run(&ref_config)?;

    let mut entries = Vec::with_capacity(dts.len());
    for (&dt, &(stride, n_coarse)) in dts.iter().zip(&strides) {
        let coarse_config = RunConfig {
            ip: base.ip.with_dt(dt).map_err(|_| AnalysisError::GridMismatch {
                detail: format!("invalid dt = {dt}"),
            })?,
            ..*base
        };
        let coarse = run(&coarse_config)?;
        let mut sub = reference.subsample(stride);
        sub.states.truncate(n_coarse + 1);
        sub.dissipated.truncate(n_coarse + 1);
        sub.diagnostics.truncate(n_coarse);
        let report = error_norm(&coarse, &sub)?;
        entries.push((dt, report.e_u, report.e_v));
    }

    let order_u = observed_order(&entries.iter().map(|&(dt, eu, _)| (dt, eu)).collect::<Vec<_>>());
    let order_v = observed_order(&entries.iter().map(|&(dt, _, ev)| (dt, ev)).collect::<Vec<_>>());
    Ok(ConvergenceReport {
        entries,
        observed_order_u: order_u,
        observed_order_v: order_v,
    })
}

/// Final sample of the running dissipated energy.
pub fn dissipated_energy_total(traj: &Trajectory) -> f64 {
    *traj.dissipated.last().expect("trajectory is never empty")
}

/// Defect of the discrete energy balance over the whole run:
/// `|[kinetic + elastic]_0^T + E_d(T) - W_ext(T)|`, with the external work
/// accumulated by the same trapezoidal rule as the dissipation.
pub fn energy_balance_residual(
    traj: &Trajectory,
    forcing: &ForcingSpec,
    sys: &SystemParams,
) -> f64 {
    let first = traj.states.first().expect("trajectory is never empty");
    let last = traj.states.last().unwrap();
    let mech = |s: &crate::integrator::State| {
        0.5 * sys.mass() * s.v * s.v + 0.5 * sys.stiffness() * s.u * s.u
    };
    let mut w_ext = 0.0;
    for pair in traj.states.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        w_ext += 0.5
            * traj.dt
            * (eval_forcing(forcing, a.t) * a.v + eval_forcing(forcing, b.t) * b.v);
    }
    (mech(last) - mech(first) + dissipated_energy_total(traj) - w_ext).abs()
}

/// Helper for sweeps: rerun `base` at a different step size.
pub fn with_dt(base: &RunConfig, dt: f64) -> RunConfig {
    RunConfig {
        ip: base.ip.with_dt(dt).expect("dt > 0"),
        ..*base
    }
}

/// Helper for sweeps: rerun `base` with different trapezoidal weights.
pub fn with_weights(base: &RunConfig, alpha: f64, beta: f64) -> RunConfig {
    RunConfig {
        ip: IntegratorParams::new(base.ip.dt(), alpha, beta, base.ip.controls)
            .expect("weights in range"),
        ..*base
    }
}
