//! Nonsmooth dashpot constitutive law.
//!
//! The dashpot flows only once the force magnitude exceeds the yield
//! threshold; below it the velocity is identically zero. The flow branch is
//! a power law in the excess force, which reduces to the classic Bingham
//! law for a unit exponent.

use std::fmt;

/// A parameter failed its validity constraint at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct InvalidParam {
    pub name: &'static str,
    pub value: f64,
    pub constraint: &'static str,
}

impl fmt::Display for InvalidParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid parameter `{}` = {}: must satisfy {}",
            self.name, self.value, self.constraint
        )
    }
}

impl std::error::Error for InvalidParam {}

/// Constitutive triple of the yield dashpot: flow coefficient, power-law
/// exponent, and yield force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DashpotParams {
    gamma: f64,
    exponent: f64,
    yield_force: f64,
}

impl DashpotParams {
    /// Requires `gamma > 0`, `exponent >= 1`, `yield_force >= 0`.
    ///
    /// Exponents below 1 are rejected: they make the flow-branch derivative
    /// unbounded at the yield surface, which the per-step Newton solve
    /// cannot tolerate.
    pub fn new(gamma: f64, exponent: f64, yield_force: f64) -> Result<Self, InvalidParam> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(InvalidParam {
                name: "gamma",
                value: gamma,
                constraint: "gamma > 0",
            });
        }
        if !(exponent >= 1.0) || !exponent.is_finite() {
            return Err(InvalidParam {
                name: "exponent",
                value: exponent,
                constraint: "exponent >= 1",
            });
        }
        if !(yield_force >= 0.0) || !yield_force.is_finite() {
            return Err(InvalidParam {
                name: "yield_force",
                value: yield_force,
                constraint: "yield_force >= 0",
            });
        }
        Ok(Self {
            gamma,
            exponent,
            yield_force,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn yield_force(&self) -> f64 {
        self.yield_force
    }

    /// True when the flow branch is linear in the excess force.
    pub fn is_linear(&self) -> bool {
        self.exponent == 1.0
    }
}

/// Mass and spring stiffness of the lumped system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    mass: f64,
    stiffness: f64,
}

impl SystemParams {
    /// Requires `mass > 0` and `stiffness > 0` (displacement recovery
    /// divides by the stiffness).
    pub fn new(mass: f64, stiffness: f64) -> Result<Self, InvalidParam> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(InvalidParam {
                name: "mass",
                value: mass,
                constraint: "mass > 0",
            });
        }
        if !(stiffness > 0.0) || !stiffness.is_finite() {
            return Err(InvalidParam {
                name: "stiffness",
                value: stiffness,
                constraint: "stiffness > 0",
            });
        }
        Ok(Self { mass, stiffness })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn stiffness(&self) -> f64 {
        self.stiffness
    }
}

/// Sign with the convention `sign(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Dashpot velocity as a function of dashpot force.
///
/// Zero inside the yield surface; `gamma * (|f| - f_y)^N * sign(f)` outside.
pub fn phi(params: &DashpotParams, f: f64) -> f64 {
    let excess = f.abs() - params.yield_force;
    if excess <= 0.0 {
        0.0
    } else {
        params.gamma * excess.powf(params.exponent) * sign(f)
    }
}

/// One-sided derivative of `phi` with respect to the force.
///
/// Zero strictly inside the yield surface. On and outside it, the
/// flow-branch value `gamma * N * (|f| - f_y)^(N-1)`; at the yield surface
/// this is `gamma` for N = 1 and 0 for N > 1 (the outward one-sided limit).
pub fn phi_derivative(params: &DashpotParams, f: f64) -> f64 {
    let excess = f.abs() - params.yield_force;
    if excess < 0.0 {
        0.0
    } else if params.is_linear() {
        params.gamma
    } else {
        params.gamma * params.exponent * excess.powf(params.exponent - 1.0)
    }
}

/// Force whose flow velocity is `v`: `(f_y + (|v|/gamma)^(1/N)) * sign(v)`.
///
/// For `v = 0` any force inside the yield surface qualifies; 0 is returned
/// as the symmetric representative.
pub fn invert_phi(params: &DashpotParams, v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        (params.yield_force + (v.abs() / params.gamma).powf(1.0 / params.exponent)) * sign(v)
    }
}
