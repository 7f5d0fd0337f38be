//! CSV artifacts. All numbers are written with full round-trip precision,
//! so re-reading a file reproduces bit-identical values.

use std::io::{self, Write};

use crate::analysis::ConvergenceReport;
use crate::simulate::Trajectory;

/// Trajectory table with the fixed column order `t,u,v,f_s,f_d,E_d`.
pub fn write_trajectory_csv<W: Write>(out: &mut W, traj: &Trajectory) -> io::Result<()> {
    writeln!(out, "t,u,v,f_s,f_d,E_d")?;
    for (s, e) in traj.states.iter().zip(&traj.dissipated) {
        writeln!(out, "{},{},{},{},{},{}", s.t, s.u, s.v, s.f_s, s.f_d, e)?;
    }
    Ok(())
}

/// Side-by-side table of two runs on the same grid.
pub fn write_compare_csv<W: Write>(
    out: &mut W,
    a: &Trajectory,
    b: &Trajectory,
) -> io::Result<()> {
    writeln!(out, "t,u_a,u_b,v_a,v_b,f_d_a,f_d_b,E_d_a,E_d_b")?;
    for ((sa, ea), (sb, eb)) in a
        .states
        .iter()
        .zip(&a.dissipated)
        .zip(b.states.iter().zip(&b.dissipated))
    {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            sa.t, sa.u, sb.u, sa.v, sb.v, sa.f_d, sb.f_d, ea, eb
        )?;
    }
    Ok(())
}

/// Per-dt error table plus the fitted orders as trailing comment lines.
pub fn write_convergence_csv<W: Write>(
    out: &mut W,
    report: &ConvergenceReport,
) -> io::Result<()> {
    writeln!(out, "dt,e_u,e_v")?;
    for (dt, e_u, e_v) in &report.entries {
        writeln!(out, "{dt},{e_u},{e_v}")?;
    }
    writeln!(out, "# observed_order_u = {}", report.observed_order_u)?;
    writeln!(out, "# observed_order_v = {}", report.observed_order_v)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PresetId;
    use crate::simulate::run;

    #[test]
    fn trajectory_csv_round_trips_bit_identical() {
        let mut config = PresetId::BinghamN1Case1.config();
        config.t_end = 0.05;
        let traj = run(&config).unwrap();

        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &traj).unwrap();
        let text = String::from_utf8(buf).unwrap();

        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,u,v,f_s,f_d,E_d");
        for (line, (s, e)) in lines.zip(traj.states.iter().zip(&traj.dissipated)) {
            let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
            assert_eq!(fields, vec![s.t, s.u, s.v, s.f_s, s.f_d, *e]);
        }
    }

    #[test]
    fn trajectory_csv_row_count() {
        let mut config = PresetId::BinghamN1Case1.config();
        config.t_end = 0.01; // 100 steps
        let traj = run(&config).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &traj).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + traj.len());
        assert_eq!(traj.len(), 101);
    }

    #[test]
    fn compare_csv_identical_runs_pair_up() {
        let mut config = PresetId::BinghamN1Case1.config();
        config.t_end = 0.02;
        let traj = run(&config).unwrap();
        let mut buf = Vec::new();
        write_compare_csv(&mut buf, &traj, &traj).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for line in text.lines().skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[1], fields[2]); // u_a == u_b
            assert_eq!(fields[3], fields[4]); // v_a == v_b
            assert_eq!(fields[5], fields[6]); // f_d_a == f_d_b
        }
    }
}
