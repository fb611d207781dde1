//! CSV rendering and atomic file writes.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use mspr_core::metrics::MethodSummary;
use mspr_core::{BeamPattern, CampaignResult};

pub const SUMMARY_FILE: &str = "sinr_summary.csv";
pub const PER_TRIAL_FILE: &str = "per_trial.csv";
pub const PATTERN_FILE: &str = "pattern.csv";
pub const GAMMA_SWEEP_FILE: &str = "gamma_sweep.csv";

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.9}")
    }
}

/// `method,mean_sinr_db,std_sinr_db,trials,failed_trials,converged_fraction,mean_iterations`
pub fn summary_csv(result: &CampaignResult) -> String {
    let mut out = String::from(
        "method,mean_sinr_db,std_sinr_db,trials,failed_trials,converged_fraction,mean_iterations\n",
    );
    let ok = result.successful_trials();
    let row = |out: &mut String, name: &str, m: &MethodSummary, conv: String, iters: String| {
        writeln!(
            out,
            "{name},{},{},{ok},{},{conv},{iters}",
            fmt_f64(m.mean_sinr_db),
            fmt_f64(m.std_sinr_db),
            result.failed_trials
        )
        .unwrap();
    };
    row(&mut out, "capon", &result.capon, String::new(), String::new());
    row(
        &mut out,
        "mspr",
        &result.mspr,
        fmt_f64(result.converged_fraction),
        fmt_f64(result.mean_iterations),
    );
    out
}

/// `trial,seed,capon_sinr_db,mspr_sinr_db,mspr_iterations,mspr_converged,error`
pub fn per_trial_csv(result: &CampaignResult) -> String {
    let mut out =
        String::from("trial,seed,capon_sinr_db,mspr_sinr_db,mspr_iterations,mspr_converged,error\n");
    for t in &result.trials {
        match &t.result {
            Ok(r) => writeln!(
                out,
                "{},{},{},{},{},{},",
                t.trial,
                t.seed,
                fmt_f64(r.capon_sinr.db),
                fmt_f64(r.mspr_sinr.db),
                r.mspr_iterations,
                r.mspr_converged
            ),
            Err(e) => writeln!(
                out,
                "{},{},,,,,\"{}\"",
                t.trial,
                t.seed,
                e.to_string().replace('"', "'")
            ),
        }
        .unwrap();
    }
    out
}

/// `angle_deg,capon_db,mspr_db`, one row per grid angle.
pub fn pattern_csv(capon: &BeamPattern, mspr: &BeamPattern) -> String {
    let mut out = String::from("angle_deg,capon_db,mspr_db\n");
    for ((angle, c), m) in capon
        .angles_deg()
        .iter()
        .zip(capon.gains_db())
        .zip(mspr.gains_db())
    {
        writeln!(out, "{angle},{c:.9},{m:.9}").unwrap();
    }
    out
}

/// `gamma,mean_sinr_db_mspr`
pub fn gamma_sweep_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("gamma,mean_sinr_db_mspr\n");
    for (gamma, mean) in rows {
        writeln!(out, "{gamma},{}", fmt_f64(*mean)).unwrap();
    }
    out
}

pub fn human_summary(result: &CampaignResult) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "trials: {} ok, {} failed",
        result.successful_trials(),
        result.failed_trials
    )
    .unwrap();
    for (name, m) in [("Capon", &result.capon), ("MSPR-Capon", &result.mspr)] {
        writeln!(
            out,
            "{name:<11} mean SINR {:>9.4} dB  (std {:.4} dB)",
            m.mean_sinr_db, m.std_sinr_db
        )
        .unwrap();
    }
    writeln!(
        out,
        "MSPR iteration: {:.1}% converged, {:.2} iterations on average",
        100.0 * result.converged_fraction,
        result.mean_iterations
    )
    .unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use mspr_core::AngleGrid;

    #[test]
    fn pattern_rows_and_precision() {
        let grid = AngleGrid::from_angles(vec![-1.0, 0.0, 1.0], 1.0).unwrap();
        let capon = BeamPattern::from_raw_gains(grid.clone(), vec![0.5, 1.0, 0.25]).unwrap();
        let mspr = BeamPattern::from_raw_gains(grid, vec![0.1, 1.0, 0.1]).unwrap();
        let csv = pattern_csv(&capon, &mspr);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "angle_deg,capon_db,mspr_db");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[2], "0,0.000000000,0.000000000");
        assert!(lines[1].starts_with("-1,-3.010299957,-10.000000000"));
    }

    #[test]
    fn sweep_rows() {
        let csv = gamma_sweep_csv(&[(0.1, 6.5), (10.0, f64::NAN)]);
        assert_eq!(csv, "gamma,mean_sinr_db_mspr\n0.1,6.500000000\n10,\n");
    }

    #[test]
    fn atomic_write_leaves_no_temp_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        write_atomic(&path, b"a\n").unwrap();
        write_atomic(&path, b"b\n").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"b\n");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
