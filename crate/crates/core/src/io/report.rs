use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::io::snapshot::{csv_header, write_csv_rows, write_snapshot};
use crate::io::{ArtifactMeta, IoError};
use crate::scheme::{RunReport, Trajectory};
use crate::verify::{ResidualReport, SlopeFit};

/// Writes every stored level as a binary snapshot, plus the CSV table.
/// Returns the paths written.
pub fn write_trajectory(dir: &Path, meta: &ArtifactMeta, traj: &Trajectory, csv: bool) -> Result<Vec<PathBuf>, IoError> {
    let snap_dir = dir.join("snapshots");
    fs::create_dir_all(&snap_dir)?;
    let mut written = Vec::new();
    for snap in &traj.snapshots {
        let path = snap_dir.join(format!("level_{:06}.bin", snap.state.step));
        let mut w = BufWriter::new(File::create(&path)?);
        write_snapshot(&mut w, meta, snap)?;
        w.flush()?;
        written.push(path);
    }
    if csv {
        let path = dir.join("trajectory.csv");
        let mut w = BufWriter::new(File::create(&path)?);
        writeln!(w, "{}", csv_header(meta.state_dim, meta.metric_dim))?;
        for snap in &traj.snapshots {
            write_csv_rows(&mut w, &traj.mesh, snap)?;
        }
        w.flush()?;
        written.push(path);
    }
    Ok(written)
}

pub fn run_summary(report: &RunReport, config_hash: u64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "config_hash={config_hash:016x}");
    let _ = writeln!(s, "steps={}", report.steps);
    let _ = writeln!(s, "final_time={:.16e}", report.final_time);
    let _ = writeln!(s, "dt_min={:.16e}", report.dt_min);
    let _ = writeln!(s, "dt_max={:.16e}", report.dt_max);
    let _ = writeln!(s, "dt_ratio={:.16e}", report.dt_ratio);
    let _ = writeln!(s, "max_tv={:.16e}", report.max_total_variation);
    let _ = writeln!(s, "wall_time_s={:.6}", report.wall_time.as_secs_f64());
    s
}

fn fit_fields(s: &mut String, key: &str, fit: &Option<SlopeFit>) {
    match fit {
        Some(f) => {
            let _ = writeln!(s, "{key}.slope={:.6}", f.slope);
            let _ = writeln!(s, "{key}.ci95={:.6}", f.ci_half_width);
            let _ = writeln!(s, "{key}.rms={:.6e}", f.rms_residual);
        }
        None => {
            let _ = writeln!(s, "{key}.slope=nan");
        }
    }
}

/// Machine-readable `key=value` lines.
pub fn study_summary(report: &ResidualReport, threshold: f64, config_hash: u64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "config_hash={config_hash:016x}");
    let _ = writeln!(s, "levels={}", report.levels.len());
    let _ = writeln!(s, "threshold={threshold}");
    for (k, f) in report.epsilon_fits.iter().enumerate() {
        fit_fields(&mut s, &format!("epsilon.{k}"), f);
    }
    for (k, f) in report.jump_fits.iter().enumerate() {
        fit_fields(&mut s, &format!("jump.{k}"), f);
    }
    fit_fields(&mut s, "l1_cauchy", &report.l1_fit);
    let _ = writeln!(s, "tv_spread={:.6e}", report.tv_spread);
    let _ = writeln!(s, "dt_over_dx_spread={:.6e}", report.dt_over_dx_spread);
    let _ = writeln!(s, "pass={}", report.meets(threshold));
    s
}

/// Human-readable table, one row per level.
pub fn study_table(report: &ResidualReport) -> String {
    let boxes = report.epsilon_fits.len();
    let mut s = String::new();
    let _ = write!(s, "{:>6} {:>12} {:>6} {:>10} {:>10}", "n", "dx", "steps", "dt/dx", "max_tv");
    for k in 0..boxes {
        let _ = write!(s, " {:>12} {:>12}", format!("eps[{k}]"), format!("eps1[{k}]"));
    }
    let _ = writeln!(s, " {:>12}", "l1_cauchy");
    for (i, l) in report.levels.iter().enumerate() {
        let _ = write!(s, "{:>6} {:>12.5e} {:>6} {:>10.5} {:>10.5}", l.n, l.dx, l.steps, l.dt_min / l.dx, l.tv.max);
        for r in &l.residuals {
            let _ = write!(s, " {:>12.4e} {:>12.4e}", r.epsilon.norm1(), r.jump.norm1());
        }
        match report.l1_cauchy.get(i) {
            Some(c) => {
                let _ = writeln!(s, " {c:>12.4e}");
            }
            None => {
                let _ = writeln!(s, " {:>12}", "-");
            }
        }
    }
    let slope = |f: &Option<SlopeFit>| f.map_or("n/a".to_string(), |f| format!("{:.3} ± {:.3}", f.slope, f.ci_half_width));
    let _ = writeln!(s);
    for k in 0..boxes {
        let _ = writeln!(s, "box {k}: eps slope {}, eps1 slope {}", slope(&report.epsilon_fits[k]), slope(&report.jump_fits[k]));
    }
    let _ = writeln!(s, "l1 cauchy slope {}", slope(&report.l1_fit));
    s
}

/// `dx` against every residual, for plotting.
pub fn study_csv(report: &ResidualReport) -> String {
    let boxes = report.epsilon_fits.len();
    let mut s = String::from("n,dx,dt_over_dx,max_tv");
    for k in 0..boxes {
        let _ = write!(s, ",eps{k},eps1_{k}");
    }
    s.push('\n');
    for l in &report.levels {
        let _ = write!(s, "{},{:.16e},{:.16e},{:.16e}", l.n, l.dx, l.dt_min / l.dx, l.tv.max);
        for r in &l.residuals {
            let _ = write!(s, ",{:.16e},{:.16e}", r.epsilon.norm1(), r.jump.norm1());
        }
        s.push('\n');
    }
    s
}

pub fn write_study(dir: &Path, report: &ResidualReport, threshold: f64, config_hash: u64) -> Result<Vec<PathBuf>, IoError> {
    fs::create_dir_all(dir)?;
    let files = [
        ("study.txt", study_table(report)),
        ("study_summary.txt", study_summary(report, threshold, config_hash)),
        ("study.csv", study_csv(report)),
    ];
    let mut written = Vec::new();
    for (name, text) in files {
        let path = dir.join(name);
        fs::write(&path, text)?;
        written.push(path);
    }
    Ok(written)
}
