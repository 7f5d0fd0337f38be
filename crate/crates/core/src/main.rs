use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use evpsim::analysis::{convergence_study, dissipated_energy_total, error_norm};
use evpsim::config::{parse_config, render_config, PresetId};
use evpsim::output::{write_compare_csv, write_convergence_csv, write_trajectory_csv};
use evpsim::simulate::{commensurate_stride, run, run_with_stride, RunConfig, Trajectory};

#[derive(Parser)]
#[command(
    name = "evpsim",
    about = "Trapezoidal time integration of an elasto-viscoplastic SDOF system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigSource {
    /// Path to a config file (sections: system, dashpot, integrator, forcing, run)
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Name of a built-in preset (see `preset list`)
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct Overrides {
    /// Override the end time of the run
    #[arg(long)]
    t_end: Option<f64>,
    /// Override the integration time step
    #[arg(long)]
    dt: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration and write the trajectory CSV
    Run {
        #[command(flatten)]
        source: ConfigSource,
        #[command(flatten)]
        overrides: Overrides,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Record only every Nth step
        #[arg(long, default_value_t = 1)]
        storage_stride: usize,
    },
    /// Convergence sweep against a fine fully implicit reference run
    Converge {
        #[command(flatten)]
        source: ConfigSource,
        #[command(flatten)]
        overrides: Overrides,
        /// Comma-separated list of coarse time steps
        #[arg(long, value_delimiter = ',', required = true)]
        dts: Vec<f64>,
        /// Reference time step (must divide every entry of --dts)
        #[arg(long)]
        dt_ref: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run two configurations and write a side-by-side CSV
    Compare {
        /// Config file for run A
        #[arg(long, conflicts_with = "preset_a")]
        config_a: Option<PathBuf>,
        /// Preset name for run A
        #[arg(long)]
        preset_a: Option<String>,
        /// Config file for run B
        #[arg(long, conflicts_with = "preset_b")]
        config_b: Option<PathBuf>,
        /// Preset name for run B
        #[arg(long)]
        preset_b: Option<String>,
        /// End time applied to both runs
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Inspect the built-in presets
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    /// List the available preset names
    List,
    /// Print a preset as config text
    Show { name: String },
}

fn load_config(source: &ConfigSource) -> Result<RunConfig, String> {
    match (&source.config, &source.preset) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            parse_config(&text).map_err(|e| e.to_string())
        }
        (None, Some(name)) => Ok(PresetId::from_name(name)
            .map_err(|e| e.to_string())?
            .config()),
        _ => Err("exactly one of --config or --preset is required".to_string()),
    }
}

fn load_one(
    config: &Option<PathBuf>,
    preset: &Option<String>,
    which: &str,
) -> Result<RunConfig, String> {
    match (config, preset) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            parse_config(&text).map_err(|e| e.to_string())
        }
        (None, Some(name)) => Ok(PresetId::from_name(name)
            .map_err(|e| e.to_string())?
            .config()),
        _ => Err(format!(
            "exactly one of --config-{which} or --preset-{which} is required"
        )),
    }
}

fn apply_overrides(config: &mut RunConfig, overrides: &Overrides) -> Result<(), String> {
    if let Some(t_end) = overrides.t_end {
        if !(t_end > 0.0) {
            return Err(format!("--t-end must be > 0, got {t_end}"));
        }
        config.t_end = t_end;
    }
    if let Some(dt) = overrides.dt {
        config.ip = config.ip.with_dt(dt).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn create_out(path: &Path) -> Result<BufWriter<fs::File>, String> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| format!("cannot write output file {}: {e}", path.display()))
}

fn print_summary(traj: &Trajectory) {
    let last = traj.states.last().unwrap();
    println!(
        "# final: t={} u={} v={} f_s={} f_d={}",
        last.t, last.u, last.v, last.f_s, last.f_d
    );
    println!("# E_d(T) = {}", dissipated_energy_total(traj));
}

fn cmd_run(
    source: &ConfigSource,
    overrides: &Overrides,
    out: &Path,
    storage_stride: usize,
) -> Result<(), String> {
    if storage_stride == 0 {
        return Err("--storage-stride must be >= 1".to_string());
    }
    let mut config = load_config(source)?;
    apply_overrides(&mut config, overrides)?;
    let traj = run_with_stride(&config, storage_stride).map_err(|e| e.to_string())?;
    let mut writer = create_out(out)?;
    write_trajectory_csv(&mut writer, &traj)
        .and_then(|()| writer.flush())
        .map_err(|e| format!("cannot write output file {}: {e}", out.display()))?;
    print_summary(&traj);
    println!("# wrote {} rows to {}", traj.len(), out.display());
    Ok(())
}

fn cmd_converge(
    source: &ConfigSource,
    overrides: &Overrides,
    dts: &[f64],
    dt_ref: f64,
    out: &Path,
) -> Result<(), String> {
    let mut config = load_config(source)?;
    apply_overrides(&mut config, overrides)?;
    let report = convergence_study(&config, dts, dt_ref).map_err(|e| e.to_string())?;
    let mut writer = create_out(out)?;
    write_convergence_csv(&mut writer, &report)
        .and_then(|()| writer.flush())
        .map_err(|e| format!("cannot write output file {}: {e}", out.display()))?;
    for (dt, e_u, e_v) in &report.entries {
        println!("# dt={dt} e_u={e_u} e_v={e_v}");
    }
    println!("# observed_order_u = {}", report.observed_order_u);
    println!("# observed_order_v = {}", report.observed_order_v);
    Ok(())
}

fn cmd_compare(
    mut config_a: RunConfig,
    mut config_b: RunConfig,
    t_end: Option<f64>,
    out: &Path,
) -> Result<(), String> {
    if let Some(t) = t_end {
        config_a.t_end = t;
        config_b.t_end = t;
    }
    // subsample the finer run onto the coarser grid
    let (dt_a, dt_b) = (config_a.ip.dt(), config_b.ip.dt());
    let coarse_dt = dt_a.max(dt_b);
    let fine_dt = dt_a.min(dt_b);
    let stride = commensurate_stride(coarse_dt, fine_dt).map_err(|e| {
        format!("grids are not commensurate (dt_a = {dt_a}, dt_b = {dt_b}): {e}")
    })?;

    let traj_a = if dt_a > dt_b {
        run(&config_a)
    } else {
        run_with_stride(&config_a, stride)
    }
    .map_err(|e| format!("run A failed: {e}"))?;
    let traj_b = if dt_b > dt_a {
        run(&config_b)
    } else {
        run_with_stride(&config_b, stride)
    }
    .map_err(|e| format!("run B failed: {e}"))?;

    let n = traj_a.len().min(traj_b.len());
    let mut a = traj_a;
    let mut b = traj_b;
    a.states.truncate(n);
    a.dissipated.truncate(n);
    b.states.truncate(n);
    b.dissipated.truncate(n);

    // grids must agree samplewise before pairing columns
    error_norm(&a, &b).map_err(|e| e.to_string())?;

    let mut writer = create_out(out)?;
    write_compare_csv(&mut writer, &a, &b)
        .and_then(|()| writer.flush())
        .map_err(|e| format!("cannot write output file {}: {e}", out.display()))?;
    println!(
        "# E_d_a(T) = {}  E_d_b(T) = {}",
        dissipated_energy_total(&a),
        dissipated_energy_total(&b)
    );
    println!("# wrote {} rows to {}", n, out.display());
    Ok(())
}

fn real_main() -> Result<(), String> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run {
            source,
            overrides,
            out,
            storage_stride,
        } => cmd_run(source, overrides, out, *storage_stride),
        Command::Converge {
            source,
            overrides,
            dts,
            dt_ref,
            out,
        } => cmd_converge(source, overrides, dts, *dt_ref, out),
        Command::Compare {
            config_a,
            preset_a,
            config_b,
            preset_b,
            t_end,
            out,
        } => {
            let a = load_one(config_a, preset_a, "a")?;
            let b = load_one(config_b, preset_b, "b")?;
            cmd_compare(a, b, *t_end, out)
        }
        Command::Preset { action } => match action {
            PresetAction::List => {
                for preset in PresetId::ALL {
                    println!("{}", preset.name());
                }
                Ok(())
            }
            PresetAction::Show { name } => {
                let preset = PresetId::from_name(name).map_err(|e| e.to_string())?;
                print!("{}", render_config(&preset.config()));
                Ok(())
            }
        },
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
