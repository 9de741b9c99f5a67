//! Result files: CCDF CSVs, table documents, and run-metadata records.
//!
//! CSV payloads are pure functions of their inputs with fixed float
//! formatting, so identical configs produce byte-identical files regardless
//! of thread count. Wall-clock timings never go into CSVs; they live in the
//! metadata record and the human-readable tables.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use trpapr::error::{Error, Result};
use trpapr::ofdm::CcdfCurve;

use crate::experiments::{EngineOutcome, PrtTableRow};

/// `<experiment>-<engine>-<seed>.<ext>` inside the output directory.
pub fn artifact_path(dir: &Path, experiment: &str, engine: &str, seed: u64, ext: &str) -> PathBuf {
    dir.join(format!("{experiment}-{engine}-{seed}.{ext}"))
}

/// Fails early (before any computation) if the output directory cannot be
/// created or written.
pub fn ensure_writable(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let probe = dir.join(".write-probe");
    std::fs::write(&probe, b"ok").map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", dir.display()),
        ))
    })?;
    std::fs::remove_file(&probe)?;
    Ok(())
}

/// CCDF curve as CSV text: `threshold_db,probability` rows.
pub fn ccdf_csv(curve: &CcdfCurve<f64>) -> String {
    let mut text = String::from("threshold_db,probability\n");
    let n = curve.n_samples() as f64;
    for (t, c) in curve.thresholds_db().iter().zip(curve.counts()) {
        let _ = writeln!(text, "{t:.4},{:.8}", *c as f64 / n);
    }
    text
}

/// Best-merit-per-generation history as CSV.
pub fn merit_history_csv(history: &[f64]) -> String {
    let mut text = String::from("generation,best_merit\n");
    for (g, m) in history.iter().enumerate() {
        let _ = writeln!(text, "{g},{m:.10}");
    }
    text
}

/// PRT comparison table as CSV.
pub fn prt_table_csv(rows: &[PrtTableRow]) -> String {
    let mut text = String::from("method,search_cost,secondary_peak,difference\n");
    for r in rows {
        let _ = writeln!(
            text,
            "{},{},{:.4},{:.4}",
            r.method, r.search_cost, r.merit, r.difference
        );
    }
    text
}

/// PRT comparison table as aligned text.
pub fn prt_table_text(rows: &[PrtTableRow]) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<16} {:<20} {:>9} {:>11}",
        "method", "search cost", "SP", "difference"
    );
    for r in rows {
        let _ = writeln!(
            text,
            "{:<16} {:<20} {:>9.4} {:>11.4}",
            r.method, r.search_cost, r.merit, r.difference
        );
    }
    text
}

/// Convergence curves (mean PAPR per iteration) as CSV, one column per engine.
pub fn convergence_csv(curves: &[(String, Vec<f64>)]) -> String {
    let mut text = String::from("iteration");
    for (label, _) in curves {
        let _ = write!(text, ",{label}");
    }
    text.push('\n');
    let k = curves.first().map(|(_, v)| v.len()).unwrap_or(0);
    for i in 0..k {
        let _ = write!(text, "{}", i + 1);
        for (_, values) in curves {
            let _ = write!(text, ",{:.6}", values[i]);
        }
        text.push('\n');
    }
    text
}

/// Power-metrics table as CSV (no wall times: those are not reproducible).
pub fn power_metrics_csv(rows: &[(String, f64, Option<f64>)]) -> String {
    let mut text = String::from("engine,api_db,papr_db\n");
    for (engine, api, papr) in rows {
        match papr {
            Some(p) => {
                let _ = writeln!(text, "{engine},{api:.6},{p:.4}");
            }
            None => {
                let _ = writeln!(text, "{engine},{api:.6},");
            }
        }
    }
    text
}

/// Human-readable power-metrics table including the wall-time column.
pub fn power_metrics_text(read_probability: f64, outcomes: &[EngineOutcome]) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:<8} {:>9} {:>12} {:>14}",
        "engine", "API (dB)", "AST (ms)", "PAPR (dB)"
    );
    for e in outcomes {
        let papr = e
            .curve
            .papr_at(read_probability)
            .map(|p| format!("{p:.2}"))
            .unwrap_or_else(|| "-".to_string());
        let _ = writeln!(
            text,
            "{:<8} {:>9.4} {:>12.4} {:>14}",
            e.engine.label(),
            e.api_db,
            e.mean_ms_per_symbol,
            papr
        );
    }
    text
}

/// Full provenance record for one run, rendered in the config-file format.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub experiment: String,
    pub seed: u64,
    pub settings: Vec<(String, String)>,
    pub outputs: Vec<String>,
    pub wall_seconds: f64,
}

impl RunRecord {
    pub fn new(experiment: &str, seed: u64) -> Self {
        RunRecord {
            experiment: experiment.to_string(),
            seed,
            settings: Vec::new(),
            outputs: Vec::new(),
            wall_seconds: 0.0,
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.settings.push((key.to_string(), value.to_string()));
    }

    /// Renders in the config-file format; provenance that is not re-runnable
    /// configuration (version, timing, file list) goes into comments, so the
    /// record itself can be passed back via `--config` to reproduce the run.
    pub fn render(&self) -> String {
        let mut text = String::new();
        let _ = writeln!(text, "# run record: {}", self.experiment);
        let _ = writeln!(text, "# toolkit-version: {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(text, "# wall-seconds: {:.3}", self.wall_seconds);
        for o in &self.outputs {
            let _ = writeln!(text, "# output: {o}");
        }
        let _ = writeln!(text, "seed = {}", self.seed);
        for (k, v) in &self.settings {
            let _ = writeln!(text, "{k} = {v}");
        }
        text
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = artifact_path(dir, &self.experiment, "meta", self.seed, "txt");
        std::fs::write(&path, self.render())?;
        Ok(path)
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}
