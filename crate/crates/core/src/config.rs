//! Run configuration files and the built-in presets.
//!
//! Configs are sectioned key-value text (TOML). Sections: `system`,
//! `dashpot`, `integrator`, `forcing`, `run`. Every field of the embedded
//! types is validated on parse, with errors naming the offending key.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constitutive::{DashpotParams, SystemParams};
use crate::integrator::IntegratorParams;
use crate::rootfind::SolverControls;
use crate::simulate::{ForcingSpec, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Parse(String),
    Validation { key: String, message: String },
    UnknownPreset(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse(msg) => write!(f, "config parse error: {msg}"),
            ConfigError::Validation { key, message } => {
                write!(f, "invalid config value for `{key}`: {message}")
            }
            ConfigError::UnknownPreset(name) => write!(
                f,
                "unknown preset `{name}` (use `preset list` to see the available names)"
            ),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SystemSection {
    mass: f64,
    stiffness: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DashpotSection {
    gamma: f64,
    exponent: f64,
    yield_force: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct IntegratorSection {
    dt: f64,
    alpha: f64,
    beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    step_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ForcingSection {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    angular_frequency: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decay_rate: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RunSection {
    u0: f64,
    v0: f64,
    t_end: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ConfigFile {
    system: SystemSection,
    dashpot: DashpotSection,
    integrator: IntegratorSection,
    forcing: ForcingSection,
    run: RunSection,
}

fn validation(key: &str, err: impl fmt::Display) -> ConfigError {
    ConfigError::Validation {
        key: key.to_string(),
        message: err.to_string(),
    }
}

impl ConfigFile {
    fn validate(&self) -> Result<RunConfig, ConfigError> {
        let sys = SystemParams::new(self.system.mass, self.system.stiffness)
            .map_err(|e| validation(&format!("system.{}", e.name), &e))?;
        let dp = DashpotParams::new(
            self.dashpot.gamma,
            self.dashpot.exponent,
            self.dashpot.yield_force,
        )
        .map_err(|e| validation(&format!("dashpot.{}", e.name), &e))?;

        let defaults = SolverControls::default();
        let controls = SolverControls::new(
            self.integrator.residual_tol.unwrap_or(defaults.residual_tol),
            self.integrator.step_tol.unwrap_or(defaults.step_tol),
            self.integrator.max_iterations.unwrap_or(defaults.max_iterations),
        )
        .map_err(|e| validation(&format!("integrator.{}", e.name), &e))?;
        let ip = IntegratorParams::new(
            self.integrator.dt,
            self.integrator.alpha,
            self.integrator.beta,
            controls,
        )
        .map_err(|e| validation(&format!("integrator.{}", e.name), &e))?;

        let forcing = match self.forcing.kind.as_str() {
            "zero" => ForcingSpec::Zero,
            "constant" => ForcingSpec::Constant {
                amplitude: self
                    .forcing
                    .amplitude
                    .ok_or_else(|| validation("forcing.amplitude", "required for kind = constant"))?,
            },
            "damped_sine" => ForcingSpec::DampedSine {
                amplitude: self.forcing.amplitude.ok_or_else(|| {
                    validation("forcing.amplitude", "required for kind = damped_sine")
                })?,
                angular_frequency: self.forcing.angular_frequency.ok_or_else(|| {
                    validation(
                        "forcing.angular_frequency",
                        "required for kind = damped_sine",
                    )
                })?,
                decay_rate: self.forcing.decay_rate.ok_or_else(|| {
                    validation("forcing.decay_rate", "required for kind = damped_sine")
                })?,
            },
            other => {
                return Err(validation(
                    "forcing.kind",
                    format!("unknown kind `{other}` (expected zero, constant, or damped_sine)"),
                ))
            }
        };

        if !(self.run.t_end > 0.0) || !self.run.t_end.is_finite() {
            return Err(validation("run.t_end", "t_end must be > 0"));
        }
        if !self.run.u0.is_finite() || !self.run.v0.is_finite() {
            return Err(validation("run.u0", "initial conditions must be finite"));
        }

        Ok(RunConfig {
            sys,
            dp,
            ip,
            forcing,
            u0: self.run.u0,
            v0: self.run.v0,
            t_end: self.run.t_end,
        })
    }

    fn from_run_config(config: &RunConfig) -> Self {
        let defaults = SolverControls::default();
        let controls = config.ip.controls;
        let (kind, amplitude, angular_frequency, decay_rate) = match config.forcing {
            ForcingSpec::Zero => ("zero", None, None, None),
            ForcingSpec::Constant { amplitude } => ("constant", Some(amplitude), None, None),
            ForcingSpec::DampedSine {
                amplitude,
                angular_frequency,
                decay_rate,
            } => (
                "damped_sine",
                Some(amplitude),
                Some(angular_frequency),
                Some(decay_rate),
            ),
        };
        ConfigFile {
            system: SystemSection {
                mass: config.sys.mass(),
                stiffness: config.sys.stiffness(),
            },
            dashpot: DashpotSection {
                gamma: config.dp.gamma(),
                exponent: config.dp.exponent(),
                yield_force: config.dp.yield_force(),
            },
            integrator: IntegratorSection {
                dt: config.ip.dt(),
                alpha: config.ip.alpha(),
                beta: config.ip.beta(),
                residual_tol: (controls.residual_tol != defaults.residual_tol)
                    .then_some(controls.residual_tol),
                step_tol: (controls.step_tol != defaults.step_tol).then_some(controls.step_tol),
                max_iterations: (controls.max_iterations != defaults.max_iterations)
                    .then_some(controls.max_iterations),
            },
            forcing: ForcingSection {
                kind: kind.to_string(),
                amplitude,
                angular_frequency,
                decay_rate,
            },
            run: RunSection {
                u0: config.u0,
                v0: config.v0,
                t_end: config.t_end,
            },
        }
    }
}

/// Parse and fully validate a config from its text form.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    file.validate()
}

/// Render a config back to text. `parse_config(render_config(c)) == c`.
pub fn render_config(config: &RunConfig) -> String {
    toml::to_string(&ConfigFile::from_run_config(config)).expect("config serializes")
}

/// The parameter rows of the reference experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetId {
    BinghamN1Benchmark,
    BinghamN1Case1,
    BinghamN1Case2,
    BinghamN1Case3,
    NortonN3Benchmark,
    NortonN3Case1,
    NortonN3Case2,
    NortonN3Case3,
    Imex,
}

impl PresetId {
    pub const ALL: [PresetId; 9] = [
        PresetId::BinghamN1Benchmark,
        PresetId::BinghamN1Case1,
        PresetId::BinghamN1Case2,
        PresetId::BinghamN1Case3,
        PresetId::NortonN3Benchmark,
        PresetId::NortonN3Case1,
        PresetId::NortonN3Case2,
        PresetId::NortonN3Case3,
        PresetId::Imex,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PresetId::BinghamN1Benchmark => "bingham_n1_benchmark",
            PresetId::BinghamN1Case1 => "bingham_n1_case1",
            PresetId::BinghamN1Case2 => "bingham_n1_case2",
            PresetId::BinghamN1Case3 => "bingham_n1_case3",
            PresetId::NortonN3Benchmark => "norton_n3_benchmark",
            PresetId::NortonN3Case1 => "norton_n3_case1",
            PresetId::NortonN3Case2 => "norton_n3_case2",
            PresetId::NortonN3Case3 => "norton_n3_case3",
            PresetId::Imex => "imex",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, ConfigError> {
        Self::ALL
            .iter()
            .copied()
            .find(|p| p.name() == name)
            .ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))
    }

    /// Fully populated run configuration for this preset.
    pub fn config(&self) -> RunConfig {
        let bingham_sys = SystemParams::new(1.0, 100.0).unwrap();
        let bingham_dp = DashpotParams::new(1.0, 1.0, 1.0).unwrap();
        let norton_sys = SystemParams::new(1.0, 10.0).unwrap();
        let norton_dp = DashpotParams::new(1.0, 3.0, 1.0).unwrap();

        let (sys, dp, dt, alpha, beta) = match self {
            PresetId::BinghamN1Benchmark => (bingham_sys, bingham_dp, 1e-6, 1.0, 1.0),
            PresetId::BinghamN1Case1 => (bingham_sys, bingham_dp, 1e-4, 1.0, 0.5),
            PresetId::BinghamN1Case2 => (bingham_sys, bingham_dp, 1e-4, 0.5, 1.0),
            PresetId::BinghamN1Case3 => (bingham_sys, bingham_dp, 1e-4, 0.5, 0.5),
            PresetId::NortonN3Benchmark => (norton_sys, norton_dp, 1e-7, 1.0, 1.0),
            PresetId::NortonN3Case1 => (norton_sys, norton_dp, 1e-7, 1.0, 0.5),
            PresetId::NortonN3Case2 => (norton_sys, norton_dp, 1e-7, 0.5, 1.0),
            PresetId::NortonN3Case3 => (norton_sys, norton_dp, 1e-7, 0.5, 0.5),
            PresetId::Imex => (bingham_sys, bingham_dp, 1e-4, 1.0, 0.0),
        };

        RunConfig {
            sys,
            dp,
            ip: IntegratorParams::new(dt, alpha, beta, SolverControls::default()).unwrap(),
            forcing: ForcingSpec::reference(),
            u0: 0.0,
            v0: 0.0,
            // forcing decays as exp(-0.2 t); response is negligible past this
            t_end: 10.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_bingham_case1_parameters() {
        let c = PresetId::from_name("bingham_n1_case1").unwrap().config();
        assert_eq!(c.sys.mass(), 1.0);
        assert_eq!(c.sys.stiffness(), 100.0);
        assert_eq!(c.dp.yield_force(), 1.0);
        assert_eq!(c.dp.gamma(), 1.0);
        assert_eq!(c.dp.exponent(), 1.0);
        assert_eq!(c.ip.dt(), 1e-4);
        assert_eq!(c.ip.alpha(), 1.0);
        assert_eq!(c.ip.beta(), 0.5);
    }

    #[test]
    fn preset_norton_case3_parameters() {
        let c = PresetId::from_name("norton_n3_case3").unwrap().config();
        assert_eq!(c.sys.stiffness(), 10.0);
        assert_eq!(c.dp.exponent(), 3.0);
        assert_eq!(c.ip.dt(), 1e-7);
        assert_eq!(c.ip.alpha(), 0.5);
        assert_eq!(c.ip.beta(), 0.5);
    }

    #[test]
    fn unknown_preset_rejected() {
        assert!(matches!(
            PresetId::from_name("nope"),
            Err(ConfigError::UnknownPreset(_))
        ));
    }

    #[test]
    fn render_parse_round_trip_all_presets() {
        for preset in PresetId::ALL {
            let config = preset.config();
            let text = render_config(&config);
            let parsed = parse_config(&text).unwrap();
            assert_eq!(parsed, config, "round trip failed for {}", preset.name());
        }
    }

    #[test]
    fn alpha_zero_named_in_error() {
        let mut text = render_config(&PresetId::BinghamN1Case1.config());
        text = text.replace("alpha = 1.0", "alpha = 0.0");
        match parse_config(&text) {
            Err(ConfigError::Validation { key, .. }) => assert_eq!(key, "integrator.alpha"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn bad_exponent_and_stiffness_named_in_error() {
        let base = render_config(&PresetId::BinghamN1Case1.config());
        let bad_n = base.replace("exponent = 1.0", "exponent = 0.5");
        match parse_config(&bad_n) {
            Err(ConfigError::Validation { key, .. }) => assert_eq!(key, "dashpot.exponent"),
            other => panic!("got {other:?}"),
        }
        let bad_k = base.replace("stiffness = 100.0", "stiffness = -1.0");
        match parse_config(&bad_k) {
            Err(ConfigError::Validation { key, .. }) => assert_eq!(key, "system.stiffness"),
            other => panic!("got {other:?}"),
        }
    }

    #[test]
    fn malformed_text_is_parse_error() {
        assert!(matches!(
            parse_config("this is not a config"),
            Err(ConfigError::Parse(_))
        ));
    }

    #[test]
    fn zero_forcing_round_trips() {
        let mut config = PresetId::BinghamN1Case1.config();
        config.forcing = ForcingSpec::Zero;
        let parsed = parse_config(&render_config(&config)).unwrap();
        assert_eq!(parsed.forcing, ForcingSpec::Zero);
    }
}
