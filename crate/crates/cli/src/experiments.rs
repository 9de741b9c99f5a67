//! Experiment runners: Monte Carlo CCDF studies, PRT-set campaigns,
//! convergence and power-metric tables, and parameter sweeps.
//!
//! Every runner is deterministic given its config: each symbol index draws
//! from its own RNG sub-stream, and aggregation is order-insensitive, so
//! results do not depend on the worker-thread count.

use std::time::Instant;

use rayon::prelude::*;

use trpapr::clip::{clip_statistics, ClipConfig, PeakReducer};
use trpapr::error::{Error, Result};
use trpapr::kernel::{fixtures, MeritEvaluator, PrtSet};
use trpapr::ofdm::{ccdf, generate_data_symbol, mean_power, papr_db, CcdfCurve};
use trpapr::rng::{master_rng, symbol_rng};
use trpapr::search::{ga_search, random_search, GaConfig, SearchResult};
use trpapr::transform::idft_oversampled_with;

/// Peak-reduction engine selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Tellado's gradient algorithm (GD-TR).
    Gradient,
    /// Adaptive-scaling clip-and-filter (AS-TR).
    AdaptiveScaling,
    /// Adaptive amplitude clipping (AAC-TR).
    AdaptiveAmplitude,
    /// Clip-and-filter with a fixed step size (approximate baseline).
    ConstantScaling,
}

impl Engine {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "gd" => Ok(Engine::Gradient),
            "astr" => Ok(Engine::AdaptiveScaling),
            "aac" => Ok(Engine::AdaptiveAmplitude),
            "const" => Ok(Engine::ConstantScaling),
            other => Err(Error::invalid(format!(
                "unknown engine {other:?} (expected gd, astr, aac or const)"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Engine::Gradient => "gd",
            Engine::AdaptiveScaling => "astr",
            Engine::AdaptiveAmplitude => "aac",
            Engine::ConstantScaling => "const",
        }
    }
}

/// Shared Monte Carlo settings.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub prt: PrtSet,
    pub oversample: usize,
    pub n_symbols: usize,
    pub seed: u64,
    pub gamma_db: f64,
    pub iterations: usize,
    pub rho: f64,
    pub const_beta: f64,
    /// CCDF threshold grid in dB.
    pub thresholds_db: Vec<f64>,
}

impl StudyConfig {
    pub fn new(prt: PrtSet, oversample: usize, n_symbols: usize, seed: u64) -> Self {
        StudyConfig {
            prt,
            oversample,
            n_symbols,
            seed,
            gamma_db: 5.0,
            iterations: 10,
            rho: 1.0,
            const_beta: 1.0,
            thresholds_db: default_threshold_grid(),
        }
    }

    pub fn n_tones(&self) -> usize {
        self.prt.n_tones()
    }

    fn validate(&self) -> Result<()> {
        if self.n_symbols == 0 {
            return Err(Error::invalid("need at least one symbol"));
        }
        if self.thresholds_db.len() < 2 {
            return Err(Error::invalid("threshold grid too small"));
        }
        Ok(())
    }
}

/// 0.1 dB grid over 4..13 dB, covering every figure's x-range.
pub fn default_threshold_grid() -> Vec<f64> {
    (40..=130).map(|i| i as f64 / 10.0).collect()
}

/// Per-engine aggregate over an ensemble.
#[derive(Debug, Clone)]
pub struct EngineOutcome {
    pub engine: Engine,
    pub curve: CcdfCurve<f64>,
    /// Ensemble average-power increase in dB (energy ratio over all symbols).
    pub api_db: f64,
    /// Mean wall time per symbol in milliseconds (not reproducible).
    pub mean_ms_per_symbol: f64,
    pub mean_iterations: f64,
}

/// Outcome of a CCDF study: the original-signal curve plus one per engine.
#[derive(Debug, Clone)]
pub struct CcdfStudy {
    pub original: CcdfCurve<f64>,
    pub engines: Vec<EngineOutcome>,
    /// Mean |S_1| and |S_p| of the original signals at the study's gamma.
    pub mean_clipped: f64,
    pub mean_peaks: f64,
}

struct EngineRow {
    papr_db: f64,
    power: f64,
    nanos: u64,
    iterations: usize,
}

struct SymbolRow {
    papr_original_db: f64,
    power_original: f64,
    clipped: usize,
    peaks: usize,
    engines: Vec<EngineRow>,
}

fn run_symbol(
    cfg: &StudyConfig,
    reducer: &PeakReducer<f64>,
    engines: &[Engine],
    index: u64,
) -> Result<SymbolRow> {
    let mut rng = symbol_rng(cfg.seed, index);
    let symbol = generate_data_symbol::<f64, _>(&mut rng, &cfg.prt, cfg.n_tones())?;
    let mut scratch = Vec::new();
    let signal = idft_oversampled_with(&symbol, cfg.oversample, reducer.plan(), &mut scratch);
    let papr_original_db = papr_db(&signal)?;
    let (clipped, peaks) = clip_statistics(&signal, cfg.gamma_db);

    let mut rows = Vec::with_capacity(engines.len());
    for &engine in engines {
        let start = Instant::now();
        let report = match engine {
            Engine::Gradient => reducer.gradient(&signal)?,
            Engine::AdaptiveScaling => reducer.adaptive_scaling(&signal)?,
            Engine::AdaptiveAmplitude => reducer.aac(&signal)?,
            Engine::ConstantScaling => reducer.constant_scaling(&signal, cfg.const_beta)?,
        };
        let nanos = start.elapsed().as_nanos() as u64;
        rows.push(EngineRow {
            papr_db: report.papr_after_db,
            power: mean_power(report.reduced.samples()),
            nanos,
            iterations: report.iterations_run,
        });
    }
    Ok(SymbolRow {
        papr_original_db,
        power_original: mean_power(signal.samples()),
        clipped,
        peaks,
        engines: rows,
    })
}

/// Monte Carlo CCDF study over `engines` (possibly empty: original only).
pub fn run_ccdf(cfg: &StudyConfig, engines: &[Engine]) -> Result<CcdfStudy> {
    cfg.validate()?;
    let clip_cfg = ClipConfig::new(
        cfg.gamma_db,
        cfg.iterations,
        cfg.rho,
        cfg.prt.clone(),
        cfg.oversample,
    )?;
    let reducer = PeakReducer::new(clip_cfg)?;

    let rows: Vec<SymbolRow> = (0..cfg.n_symbols as u64)
        .into_par_iter()
        .map(|index| run_symbol(cfg, &reducer, engines, index))
        .collect::<Result<_>>()?;

    let original_papr: Vec<f64> = rows.iter().map(|r| r.papr_original_db).collect();
    let original = ccdf(&original_papr, &cfg.thresholds_db)?;
    let power_original_sum: f64 = rows.iter().map(|r| r.power_original).sum();
    let n = cfg.n_symbols as f64;

    let mut outcomes = Vec::with_capacity(engines.len());
    for (slot, &engine) in engines.iter().enumerate() {
        let papr: Vec<f64> = rows.iter().map(|r| r.engines[slot].papr_db).collect();
        let curve = ccdf(&papr, &cfg.thresholds_db)?;
        let power_sum: f64 = rows.iter().map(|r| r.engines[slot].power).sum();
        let nanos: u64 = rows.iter().map(|r| r.engines[slot].nanos).sum();
        let iters: usize = rows.iter().map(|r| r.engines[slot].iterations).sum();
        outcomes.push(EngineOutcome {
            engine,
            curve,
            api_db: 10.0 * (power_sum / power_original_sum).log10(),
            mean_ms_per_symbol: nanos as f64 / n / 1e6,
            mean_iterations: iters as f64 / n,
        });
    }

    Ok(CcdfStudy {
        original,
        engines: outcomes,
        mean_clipped: rows.iter().map(|r| r.clipped as f64).sum::<f64>() / n,
        mean_peaks: rows.iter().map(|r| r.peaks as f64).sum::<f64>() / n,
    })
}

/// Ensemble mean PAPR after each iteration 1..=K, per engine.
///
/// Symbols that stop early keep their final PAPR for the remaining
/// iterations, matching per-symbol termination.
pub fn run_convergence(cfg: &StudyConfig, engines: &[Engine]) -> Result<Vec<(Engine, Vec<f64>)>> {
    cfg.validate()?;
    let clip_cfg = ClipConfig::new(
        cfg.gamma_db,
        cfg.iterations,
        cfg.rho,
        cfg.prt.clone(),
        cfg.oversample,
    )?;
    let reducer = PeakReducer::new(clip_cfg)?;
    let k = cfg.iterations;

    let sums: Vec<Vec<f64>> = (0..cfg.n_symbols as u64)
        .into_par_iter()
        .map(|index| -> Result<Vec<f64>> {
            let mut rng = symbol_rng(cfg.seed, index);
            let symbol = generate_data_symbol::<f64, _>(&mut rng, &cfg.prt, cfg.n_tones())?;
            let mut scratch = Vec::new();
            let signal =
                idft_oversampled_with(&symbol, cfg.oversample, reducer.plan(), &mut scratch);
            let mut contributions = Vec::with_capacity(engines.len() * k);
            for &engine in engines {
                let report = match engine {
                    Engine::Gradient => reducer.gradient(&signal)?,
                    Engine::AdaptiveScaling => reducer.adaptive_scaling(&signal)?,
                    Engine::AdaptiveAmplitude => reducer.aac(&signal)?,
                    Engine::ConstantScaling => reducer.constant_scaling(&signal, cfg.const_beta)?,
                };
                let mut last = report.papr_before_db;
                for i in 0..k {
                    if let Some(&p) = report.papr_trajectory_db.get(i) {
                        last = p;
                    }
                    contributions.push(last);
                }
            }
            Ok(contributions)
        })
        .try_fold(
            || vec![vec![0.0; k]; engines.len()],
            |mut acc, contributions| -> Result<Vec<Vec<f64>>> {
                let contributions = contributions?;
                for (e, acc_engine) in acc.iter_mut().enumerate() {
                    for i in 0..k {
                        acc_engine[i] += contributions[e * k + i];
                    }
                }
                Ok(acc)
            },
        )
        .try_reduce(
            || vec![vec![0.0; k]; engines.len()],
            |mut a, b| {
                for (ae, be) in a.iter_mut().zip(b) {
                    for (av, bv) in ae.iter_mut().zip(be) {
                        *av += bv;
                    }
                }
                Ok(a)
            },
        )?;

    let n = cfg.n_symbols as f64;
    Ok(engines
        .iter()
        .zip(sums)
        .map(|(&engine, sum)| (engine, sum.into_iter().map(|s| s / n).collect()))
        .collect())
}

/// One row of the PRT-set comparison table.
#[derive(Debug, Clone)]
pub struct PrtTableRow {
    pub method: String,
    pub search_cost: String,
    pub merit: f64,
    /// Merit difference against the cross-entropy reference value.
    pub difference: f64,
    pub prt: PrtSet,
}

/// Secondary-peak reference the differences column is computed against.
pub const CE_REFERENCE_MERIT: f64 = 0.2805;

/// Merits of the five bundled sets plus fresh GA and random-search runs.
pub fn run_prt_table(seed: u64, rso_trials: u64, ga: &GaConfig) -> Result<Vec<PrtTableRow>> {
    let evaluator = MeritEvaluator::<f64>::new(fixtures::N_TONES);
    let mut rows = Vec::new();
    for (name, prt) in [
        ("CS-PRT", fixtures::cs_prt()),
        ("ES-PRT", fixtures::es_prt()),
        ("GA-PRT", fixtures::ga_prt()),
        ("CE-PRT", fixtures::ce_prt()),
        ("RS-PRT", fixtures::rs_prt()),
    ] {
        let merit = evaluator.merit(&prt);
        let search_cost = match name {
            "GA-PRT" => "SK=30*170=5100".to_string(),
            "CE-PRT" => "UK=120*170=20400".to_string(),
            "RS-PRT" => "10^5".to_string(),
            _ => "-".to_string(),
        };
        rows.push(PrtTableRow {
            method: name.to_string(),
            search_cost,
            merit,
            difference: merit - CE_REFERENCE_MERIT,
            prt,
        });
    }

    let ga_run: SearchResult<f64> = ga_search(ga)?;
    rows.push(PrtTableRow {
        method: "GA-PRT (fresh)".to_string(),
        search_cost: format!(
            "SK={}*{}={}",
            ga.population_size,
            ga.max_iterations,
            ga.population_size * ga.max_iterations
        ),
        merit: ga_run.best_merit,
        difference: ga_run.best_merit - CE_REFERENCE_MERIT,
        prt: ga_run.best_prt,
    });

    let mut rng = master_rng(seed);
    let rso: SearchResult<f64> = random_search(fixtures::N_TONES, 32, rso_trials, &mut rng)?;
    rows.push(PrtTableRow {
        method: "RS-PRT (fresh)".to_string(),
        search_cost: format!("{rso_trials}"),
        merit: rso.best_merit,
        difference: rso.best_merit - CE_REFERENCE_MERIT,
        prt: rso.best_prt,
    });

    Ok(rows)
}

/// Per-symbol before/after record from a `reduce` run.
#[derive(Debug, Clone)]
pub struct ReduceRow {
    pub papr_before_db: f64,
    pub papr_after_db: f64,
    pub iterations_run: usize,
    pub api_db: f64,
}

/// Applies one engine to each symbol and reports per-symbol outcomes.
pub fn run_reduce(cfg: &StudyConfig, engine: Engine) -> Result<Vec<ReduceRow>> {
    cfg.validate()?;
    let clip_cfg = ClipConfig::new(
        cfg.gamma_db,
        cfg.iterations,
        cfg.rho,
        cfg.prt.clone(),
        cfg.oversample,
    )?;
    let reducer = PeakReducer::new(clip_cfg)?;
    (0..cfg.n_symbols as u64)
        .into_par_iter()
        .map(|index| -> Result<ReduceRow> {
            let mut rng = symbol_rng(cfg.seed, index);
            let symbol = generate_data_symbol::<f64, _>(&mut rng, &cfg.prt, cfg.n_tones())?;
            let mut scratch = Vec::new();
            let signal =
                idft_oversampled_with(&symbol, cfg.oversample, reducer.plan(), &mut scratch);
            let report = match engine {
                Engine::Gradient => reducer.gradient(&signal)?,
                Engine::AdaptiveScaling => reducer.adaptive_scaling(&signal)?,
                Engine::AdaptiveAmplitude => reducer.aac(&signal)?,
                Engine::ConstantScaling => reducer.constant_scaling(&signal, cfg.const_beta)?,
            };
            let api_db = 10.0
                * (mean_power(report.reduced.samples()) / mean_power(signal.samples())).log10();
            Ok(ReduceRow {
                papr_before_db: report.papr_before_db,
                papr_after_db: report.papr_after_db,
                iterations_run: report.iterations_run,
                api_db,
            })
        })
        .collect()
}

/// Swept parameter for CCDF families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    GammaDb,
    Rho,
}

impl SweepParam {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "gamma" => Ok(SweepParam::GammaDb),
            "rho" => Ok(SweepParam::Rho),
            other => Err(Error::invalid(format!(
                "unknown sweep parameter {other:?} (expected gamma or rho)"
            ))),
        }
    }
}

/// One CCDF per swept value, all from the same seed so curves differ only by
/// the swept parameter.
pub fn run_sweep(
    cfg: &StudyConfig,
    engine: Engine,
    param: SweepParam,
    values: &[f64],
) -> Result<Vec<(f64, CcdfStudy)>> {
    if values.is_empty() {
        return Err(Error::invalid("sweep needs at least one value"));
    }
    values
        .iter()
        .map(|&value| {
            let mut swept = cfg.clone();
            match param {
                SweepParam::GammaDb => swept.gamma_db = value,
                SweepParam::Rho => swept.rho = value,
            }
            Ok((value, run_ccdf(&swept, &[engine])?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(n_symbols: usize, seed: u64) -> StudyConfig {
        let prt = PrtSet::new(vec![1, 6, 11, 20], 32).unwrap();
        let mut cfg = StudyConfig::new(prt, 4, n_symbols, seed);
        cfg.gamma_db = 4.0;
        cfg.iterations = 4;
        cfg
    }

    #[test]
    fn single_symbol_ccdf_is_a_step_function() {
        let cfg = small_cfg(1, 3);
        let study = run_ccdf(&cfg, &[]).unwrap();
        let probs = study.original.probabilities();
        assert!(probs.iter().all(|&p| p == 0.0 || p == 1.0));
        assert!(probs.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn original_curve_unaffected_by_engines() {
        let cfg = small_cfg(64, 9);
        let bare = run_ccdf(&cfg, &[]).unwrap();
        let loaded = run_ccdf(&cfg, &[Engine::AdaptiveAmplitude, Engine::Gradient]).unwrap();
        assert_eq!(bare.original.counts(), loaded.original.counts());
    }

    #[test]
    fn study_is_deterministic_per_seed() {
        let cfg = small_cfg(32, 4);
        let a = run_ccdf(&cfg, &[Engine::AdaptiveScaling]).unwrap();
        let b = run_ccdf(&cfg, &[Engine::AdaptiveScaling]).unwrap();
        assert_eq!(a.original.counts(), b.original.counts());
        assert_eq!(a.engines[0].curve.counts(), b.engines[0].curve.counts());
        assert_eq!(a.engines[0].api_db, b.engines[0].api_db);
    }

    #[test]
    fn engines_reduce_the_upper_tail() {
        let cfg = small_cfg(128, 7);
        let study = run_ccdf(&cfg, &[Engine::AdaptiveAmplitude]).unwrap();
        let orig = study.original.papr_at(0.05).unwrap();
        let reduced = study.engines[0].curve.papr_at(0.05).unwrap();
        assert!(reduced < orig, "{reduced} !< {orig}");
    }

    #[test]
    fn convergence_produces_k_points_per_engine() {
        let cfg = small_cfg(32, 5);
        let curves = run_convergence(&cfg, &[Engine::AdaptiveAmplitude, Engine::Gradient]).unwrap();
        assert_eq!(curves.len(), 2);
        for (_, means) in &curves {
            assert_eq!(means.len(), cfg.iterations);
            assert!(means.iter().all(|m| m.is_finite()));
        }
    }

    #[test]
    fn prt_table_reproduces_reference_differences() {
        let ga = GaConfig {
            max_iterations: 5,
            population_size: 8,
            ..GaConfig::default_for(512, 32, 1)
        };
        let rows = run_prt_table(1, 50, &ga).unwrap();
        let by_name = |n: &str| rows.iter().find(|r| r.method == n).unwrap();
        assert!((by_name("CS-PRT").difference - 0.7131).abs() < 1e-3);
        assert!((by_name("ES-PRT").difference - 0.7195).abs() < 1e-3);
        assert!((by_name("GA-PRT").difference - 0.0191).abs() < 1e-3);
        assert!((by_name("RS-PRT").difference - 0.0402).abs() < 1e-3);
        assert_eq!(by_name("GA-PRT").search_cost, "SK=30*170=5100");
        assert_eq!(rows.len(), 7);
    }

    #[test]
    fn sweep_produces_one_study_per_value() {
        let cfg = small_cfg(16, 2);
        let result = run_sweep(
            &cfg,
            Engine::AdaptiveAmplitude,
            SweepParam::GammaDb,
            &[2.0, 4.0],
        )
        .unwrap();
        assert_eq!(result.len(), 2);
        assert!(run_sweep(&cfg, Engine::AdaptiveAmplitude, SweepParam::Rho, &[]).is_err());
    }
}
