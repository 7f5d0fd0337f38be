//! Safeguarded scalar root finding.
//!
//! Newton iteration from a caller-supplied guess, falling back to bisection
//! whenever a Newton step would leave the current bracket or the derivative
//! is too small to trust. Convergence is guaranteed for a continuous
//! bracketed residual; monotone residuals get the fast Newton path.

use std::fmt;

use crate::constitutive::InvalidParam;

/// Stopping controls for the scalar solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverControls {
    /// Absolute residual tolerance.
    pub residual_tol: f64,
    /// Bracket-width tolerance.
    pub step_tol: f64,
    pub max_iterations: usize,
}

impl SolverControls {
    pub fn new(
        residual_tol: f64,
        step_tol: f64,
        max_iterations: usize,
    ) -> Result<Self, InvalidParam> {
        if !(residual_tol > 0.0) {
            return Err(InvalidParam {
                name: "residual_tol",
                value: residual_tol,
                constraint: "residual_tol > 0",
            });
        }
        if !(step_tol > 0.0) {
            return Err(InvalidParam {
                name: "step_tol",
                value: step_tol,
                constraint: "step_tol > 0",
            });
        }
        if max_iterations == 0 {
            return Err(InvalidParam {
                name: "max_iterations",
                value: 0.0,
                constraint: "max_iterations >= 1",
            });
        }
        Ok(Self {
            residual_tol,
            step_tol,
            max_iterations,
        })
    }
}

impl Default for SolverControls {
    fn default() -> Self {
        Self {
            residual_tol: 1e-12,
            step_tol: 1e-14,
            max_iterations: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: f64,
    pub iterations: usize,
    pub converged: bool,
    pub final_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RootError {
    /// The residual does not change sign over the supplied interval.
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    /// Iteration budget exhausted; carries the best iterate found.
    NotConverged(RootResult),
}

impl fmt::Display for RootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::NoBracket { lo, hi, f_lo, f_hi } => write!(
                f,
                "no sign change on [{lo}, {hi}]: residual({lo}) = {f_lo}, residual({hi}) = {f_hi}"
            ),
            RootError::NotConverged(r) => write!(
                f,
                "no convergence after {} iterations: best root {} with residual {}",
                r.iterations, r.root, r.final_residual
            ),
        }
    }
}

impl std::error::Error for RootError {}

/// Newton iteration on `[lo, hi]` started from `guess`, with bisection
/// whenever the Newton step leaves the bracket or the derivative is below
/// machine scale. Every iterate stays inside the initial bracket.
///
/// Requires `residual(lo) * residual(hi) <= 0`. Iterates are deterministic:
/// identical inputs produce bit-identical results.
pub fn solve_bracketed<F, D>(
    residual: F,
    derivative: D,
    lo: f64,
    hi: f64,
    guess: f64,
    controls: &SolverControls,
) -> Result<RootResult, RootError>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = residual(a);
    let fb = residual(b);

    if fa == 0.0 {
        return Ok(RootResult {
            root: a,
            iterations: 0,
            converged: true,
            final_residual: 0.0,
        });
    }
    if fb == 0.0 {
        return Ok(RootResult {
            root: b,
            iterations: 0,
            converged: true,
            final_residual: 0.0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoBracket {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut x = guess.clamp(a, b);
    let mut fx = residual(x);
    let mut iterations = 0usize;

    loop {
        if fx.abs() <= controls.residual_tol {
            return Ok(RootResult {
                root: x,
                iterations,
                converged: true,
                final_residual: fx,
            });
        }

        // shrink the bracket around the current iterate
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }

        if b - a <= controls.step_tol {
            return Ok(RootResult {
                root: x,
                iterations,
                converged: true,
                final_residual: fx,
            });
        }

        if iterations >= controls.max_iterations {
            return Err(RootError::NotConverged(RootResult {
                root: x,
                iterations,
                converged: false,
                final_residual: fx,
            }));
        }

        let d = derivative(x);
        let newton = x - fx / d;
        x = if newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        fx = residual(x);
        iterations += 1;
    }
}
