//! One step of the two-parameter generalized trapezoidal scheme.
//!
//! The momentum balance is integrated with weight `alpha`, the spring rate
//! equation with weight `beta`. Each step forms a trial force from known
//! time-level-n data; its magnitude against the yield force decides the
//! stick branch (zero velocity) or a scalar solve for the dashpot force.

use std::fmt;

use crate::constitutive::{
    invert_phi, phi, phi_derivative, sign, DashpotParams, InvalidParam, SystemParams,
};
use crate::rootfind::{solve_bracketed, RootError, RootResult, SolverControls};

/// Time step and trapezoidal weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorParams {
    dt: f64,
    alpha: f64,
    beta: f64,
    pub controls: SolverControls,
}

impl IntegratorParams {
    /// Requires `dt > 0`, `alpha` in `(0, 1]` and `beta` in `[0, 1]`.
    ///
    /// `alpha = 0` is rejected: the trial-force expression divides by
    /// `alpha`. Explicitness is available through `beta = 0` instead.
    pub fn new(
        dt: f64,
        alpha: f64,
        beta: f64,
        controls: SolverControls,
    ) -> Result<Self, InvalidParam> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(InvalidParam {
                name: "dt",
                value: dt,
                constraint: "dt > 0",
            });
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(InvalidParam {
                name: "alpha",
                value: alpha,
                constraint: "0 < alpha <= 1",
            });
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(InvalidParam {
                name: "beta",
                value: beta,
                constraint: "0 <= beta <= 1",
            });
        }
        Ok(Self {
            dt,
            alpha,
            beta,
            controls,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Same weights and controls with a different time step.
    pub fn with_dt(&self, dt: f64) -> Result<Self, InvalidParam> {
        Self::new(dt, self.alpha, self.beta, self.controls)
    }
}

/// One time level of the index-reduced system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub f_s: f64,
    pub f_d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    /// Trial force deciding stick versus slip.
    pub predictor: f64,
    pub yielded: bool,
    pub solver_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepError {
    Solver(RootError),
    /// Closed-form dashpot solve requested for a nonlinear exponent.
    NotLinear { exponent: f64 },
}

impl fmt::Display for StepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepError::Solver(e) => write!(f, "dashpot solve failed: {e}"),
            StepError::NotLinear { exponent } => {
                write!(f, "closed-form dashpot solve requires exponent 1, got {exponent}")
            }
        }
    }
}

impl std::error::Error for StepError {}

impl From<RootError> for StepError {
    fn from(e: RootError) -> Self {
        StepError::Solver(e)
    }
}

/// Initial state for given displacement and velocity.
///
/// The initial displacement is taken as purely elastic (`f_s = k u0`); the
/// initial dashpot force inverts the flow law at `v0`, and is zero when the
/// system starts at rest.
pub fn initialize(sys: &SystemParams, dp: &DashpotParams, u0: f64, v0: f64) -> State {
    State {
        t: 0.0,
        u: u0,
        v: v0,
        f_s: sys.stiffness() * u0,
        f_d: invert_phi(dp, v0),
    }
}

/// Trial force from time-level-n data.
pub fn predictor(
    sys: &SystemParams,
    ip: &IntegratorParams,
    s: &State,
    f_ext_n: f64,
    f_ext_np1: f64,
) -> f64 {
    let a = ip.alpha();
    let inv_a = 1.0 / a;
    f_ext_np1 + (inv_a - 1.0) * f_ext_n - inv_a * s.f_s - (inv_a - 1.0) * s.f_d
        + (sys.mass() / (a * ip.dt()) - sys.stiffness() * ip.dt() * (1.0 - ip.beta())) * s.v
}

fn coupling_factor(sys: &SystemParams, ip: &IntegratorParams) -> f64 {
    1.0 + ip.alpha() * ip.beta() * ip.dt() * ip.dt() * sys.stiffness() / sys.mass()
}

/// Closed-form dashpot force for a linear flow branch (exponent 1).
pub fn solve_dashpot_linear(
    sys: &SystemParams,
    dp: &DashpotParams,
    ip: &IntegratorParams,
    f_hat: f64,
) -> Result<f64, StepError> {
    if !dp.is_linear() {
        return Err(StepError::NotLinear {
            exponent: dp.exponent(),
        });
    }
    let c = ip.alpha()
        / (dp.gamma()
            * sys.mass()
            * (1.0 / ip.dt() + ip.alpha() * ip.beta() * ip.dt() * sys.stiffness() / sys.mass()));
    Ok((c * f_hat + sign(f_hat) * dp.yield_force()) / (1.0 + c))
}

/// Dashpot force from the scalar yield equation, solved on the bracket
/// between the yield point and the trial force.
///
/// Requires `|f_hat| > f_y`. The residual is strictly increasing along the
/// bracket, negative at the yield point and positive at the trial force, so
/// a root is always bracketed.
pub fn solve_dashpot_nonlinear(
    sys: &SystemParams,
    dp: &DashpotParams,
    ip: &IntegratorParams,
    f_hat: f64,
) -> Result<(f64, RootResult), StepError> {
    let s = sign(f_hat);
    debug_assert!(f_hat.abs() > dp.yield_force());

    let c2 = coupling_factor(sys, ip);
    let ad_m = ip.alpha() * ip.dt() / sys.mass();

    let residual = |f_d: f64| c2 * phi(dp, f_d) - ad_m * (f_hat - f_d);
    let derivative = |f_d: f64| c2 * phi_derivative(dp, f_d) + ad_m;

    let yield_pt = dp.yield_force() * s;
    let (lo, hi) = if s >= 0.0 {
        (yield_pt, f_hat)
    } else {
        (f_hat, yield_pt)
    };

    // residual tolerances scale with the trial-force magnitude
    let controls = SolverControls {
        residual_tol: ip.controls.residual_tol * (1.0 + f_hat.abs() * ad_m),
        step_tol: ip.controls.step_tol * (1.0 + f_hat.abs()),
        max_iterations: ip.controls.max_iterations,
    };

    let result = solve_bracketed(residual, derivative, lo, hi, yield_pt, &controls)?;
    Ok((result.root, result))
}

/// Advance one time step.
pub fn step(
    sys: &SystemParams,
    dp: &DashpotParams,
    ip: &IntegratorParams,
    s: &State,
    f_ext_n: f64,
    f_ext_np1: f64,
) -> Result<(State, StepDiagnostics), StepError> {
    let f_hat = predictor(sys, ip, s, f_ext_n, f_ext_np1);

    let (v_new, f_d_new, iterations) = if f_hat.abs() <= dp.yield_force() {
        (0.0, f_hat, 0)
    } else {
        let (f_d, result) = if dp.is_linear() {
            let f_d = solve_dashpot_linear(sys, dp, ip, f_hat)?;
            (f_d, None)
        } else {
            let (f_d, r) = solve_dashpot_nonlinear(sys, dp, ip, f_hat)?;
            (f_d, Some(r))
        };
        (
            phi(dp, f_d),
            f_d,
            result.map(|r| r.iterations).unwrap_or(0),
        )
    };

    let f_s_new = s.f_s
        + sys.stiffness() * ip.dt() * ((1.0 - ip.beta()) * s.v + ip.beta() * v_new);
    let u_new = f_s_new / sys.stiffness();

    Ok((
        State {
            t: s.t + ip.dt(),
            u: u_new,
            v: v_new,
            f_s: f_s_new,
            f_d: f_d_new,
        },
        StepDiagnostics {
            predictor: f_hat,
            yielded: f_hat.abs() > dp.yield_force(),
            solver_iterations: iterations,
        },
    ))
}

/// Defects of the discrete momentum, spring, and flow-law relations for a
/// pair of consecutive states. All three vanish to solver tolerance for
/// states produced by `step`.
pub fn discrete_residuals(
    sys: &SystemParams,
    dp: &DashpotParams,
    ip: &IntegratorParams,
    s_n: &State,
    s_np1: &State,
    f_ext_n: f64,
    f_ext_np1: f64,
) -> (f64, f64, f64) {
    let a = ip.alpha();
    let momentum = s_np1.v
        - s_n.v
        - ip.dt() / sys.mass()
            * ((1.0 - a) * (f_ext_n - s_n.f_s - s_n.f_d)
                + a * (f_ext_np1 - s_np1.f_s - s_np1.f_d));
    let spring = s_np1.f_s
        - s_n.f_s
        - sys.stiffness() * ip.dt() * ((1.0 - ip.beta()) * s_n.v + ip.beta() * s_np1.v);
    let constitutive = s_np1.v - phi(dp, s_np1.f_d);
    (momentum, spring, constitutive)
}
