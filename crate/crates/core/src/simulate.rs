//! Full time-interval runs and forcing functions.

use std::fmt;

use crate::constitutive::{DashpotParams, SystemParams};
use crate::integrator::{initialize, step, IntegratorParams, State, StepDiagnostics, StepError};

/// External force applied to the mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForcingSpec {
    Zero,
    Constant { amplitude: f64 },
    /// `A * sin(omega t) * exp(lambda t)`.
    DampedSine {
        amplitude: f64,
        angular_frequency: f64,
        decay_rate: f64,
    },
}

impl ForcingSpec {
    /// The forcing used in all reference experiments:
    /// `2 sin(2 pi t) exp(-0.2 t)`.
    pub fn reference() -> Self {
        ForcingSpec::DampedSine {
            amplitude: 2.0,
            angular_frequency: 2.0 * std::f64::consts::PI,
            decay_rate: -0.2,
        }
    }
}

pub fn eval_forcing(spec: &ForcingSpec, t: f64) -> f64 {
    match *spec {
        ForcingSpec::Zero => 0.0,
        ForcingSpec::Constant { amplitude } => amplitude,
        ForcingSpec::DampedSine {
            amplitude,
            angular_frequency,
            decay_rate,
        } => amplitude * (angular_frequency * t).sin() * (decay_rate * t).exp(),
    }
}

/// Complete description of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub sys: SystemParams,
    pub dp: DashpotParams,
    pub ip: IntegratorParams,
    pub forcing: ForcingSpec,
    pub u0: f64,
    pub v0: f64,
    pub t_end: f64,
}

/// Uniformly sampled run output. `dt` is the sample spacing, which equals
/// the integration step times the storage stride.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub states: Vec<State>,
    /// Running dissipated energy at the sample times; starts at 0.
    pub dissipated: Vec<f64>,
    /// Diagnostics of the step that produced each recorded sample
    /// (empty slot for the initial state).
    pub diagnostics: Vec<StepDiagnostics>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Every `stride`-th sample, starting at the initial state.
    pub fn subsample(&self, stride: usize) -> Trajectory {
        assert!(stride >= 1);
        let pick = |i: usize| i.is_multiple_of(stride);
        Trajectory {
            dt: self.dt * stride as f64,
            states: self
                .states
                .iter()
                .enumerate()
                .filter(|(i, _)| pick(*i))
                .map(|(_, s)| *s)
                .collect(),
            dissipated: self
                .dissipated
                .iter()
                .enumerate()
                .filter(|(i, _)| pick(*i))
                .map(|(_, e)| *e)
                .collect(),
            diagnostics: self
                .diagnostics
                .iter()
                .enumerate()
                .filter(|(i, _)| (i + 1) % stride == 0)
                .map(|(_, d)| *d)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    Step { index: usize, source: StepError },
    /// Reference step does not evenly divide the coarse step.
    NotCommensurate { dt: f64, dt_ref: f64 },
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Step { index, source } => {
                write!(f, "step {index} failed: {source}")
            }
            RunError::NotCommensurate { dt, dt_ref } => write!(
                f,
                "dt_ref = {dt_ref} is not an integer sub-multiple of dt = {dt}"
            ),
        }
    }
}

impl std::error::Error for RunError {}

/// Number of steps covering `(0, t_end]`, with the last step landing at or
/// just past `t_end`. A ratio within 1e-9 of an integer is treated as exact.
pub fn step_count(t_end: f64, dt: f64) -> usize {
    let ratio = t_end / dt;
    let rounded = ratio.round();
    if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) {
        rounded as usize
    } else {
        ratio.ceil() as usize
    }
}

fn run_steps(config: &RunConfig, n_steps: usize, stride: usize) -> Result<Trajectory, RunError> {
    let dt = config.ip.dt();
    let n_samples = n_steps / stride;

    let mut states = Vec::with_capacity(n_samples + 1);
    let mut dissipated = Vec::with_capacity(n_samples + 1);
    let mut diagnostics = Vec::with_capacity(n_samples);

    let mut s = initialize(&config.sys, &config.dp, config.u0, config.v0);
    states.push(s);
    dissipated.push(0.0);

    let mut energy = 0.0;
    for i in 0..n_steps {
        // index-based time stamps, no accumulated addition
        let t_n = i as f64 * dt;
        let t_np1 = (i + 1) as f64 * dt;
        let f_n = eval_forcing(&config.forcing, t_n);
        let f_np1 = eval_forcing(&config.forcing, t_np1);
        let (mut next, diag) = step(&config.sys, &config.dp, &config.ip, &s, f_n, f_np1)
            .map_err(|source| RunError::Step { index: i, source })?;
        next.t = t_np1;

        // trapezoidal accumulation of v * f_d; nonnegative integrand
        energy += 0.5 * dt * (s.v * s.f_d + next.v * next.f_d);
        s = next;

        if (i + 1) % stride == 0 {
            states.push(s);
            dissipated.push(energy);
            diagnostics.push(diag);
        }
    }

    Ok(Trajectory {
        dt: dt * stride as f64,
        states,
        dissipated,
        diagnostics,
    })
}

/// Run the configured problem over `(0, t_end]`, recording every step.
pub fn run(config: &RunConfig) -> Result<Trajectory, RunError> {
    run_with_stride(config, 1)
}

/// Run recording only every `stride`-th step.
pub fn run_with_stride(config: &RunConfig, stride: usize) -> Result<Trajectory, RunError> {
    assert!(stride >= 1);
    let n = step_count(config.t_end, config.ip.dt());
    // round up so the final recorded sample is a full stride
    let n = n.div_ceil(stride) * stride;
    run_steps(config, n, stride)
}

/// Integer ratio `dt / dt_ref`, if `dt_ref` divides `dt` within 1e-9.
pub fn commensurate_stride(dt: f64, dt_ref: f64) -> Result<usize, RunError> {
    let ratio = dt / dt_ref;
    let rounded = ratio.round();
    if rounded >= 1.0 && (ratio - rounded).abs() <= 1e-9 * ratio {
        Ok(rounded as usize)
    } else {
        Err(RunError::NotCommensurate { dt, dt_ref })
    }
}

/// Reference run: the same problem integrated with fully implicit weights
/// (`alpha = beta = 1`) at the fine step `dt_ref`, sampled back onto the
/// coarse grid of `config.ip.dt()`.
pub fn run_benchmark(config: &RunConfig, dt_ref: f64) -> Result<Trajectory, RunError> {
    let stride = commensurate_stride(config.ip.dt(), dt_ref)?;
    let n_coarse = step_count(config.t_end, config.ip.dt());
    let bench_ip = IntegratorParams::new(dt_ref, 1.0, 1.0, config.ip.controls)
        .expect("dt_ref > 0 implied by commensurate check");
    let bench = RunConfig {
        ip: bench_ip,
        ..*config
    };
    run_steps(&bench, n_coarse * stride, stride)
}
