//! `trpapr`: experiment harness for tone-reservation PAPR reduction.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use trpapr::complexity::{total_aac_cost, CostModelParams};
use trpapr::error::{Error, Result};
use trpapr::kernel::{fixtures, merit, PrtSet};
use trpapr::rng::master_rng;
use trpapr::search::{
    consecutive_prt, equally_spaced_prt, exhaustive_search_with_budget, ga_search, random_search,
    GaConfig, SearchResult, DEFAULT_EXHAUSTIVE_BUDGET,
};

use trpapr_cli::config::FileConfig;
use trpapr_cli::experiments::{
    run_ccdf, run_convergence, run_prt_table, run_reduce, run_sweep, Engine, StudyConfig,
    SweepParam,
};
use trpapr_cli::output;

#[derive(Parser)]
#[command(
    name = "trpapr",
    version,
    about = "Tone-reservation PAPR reduction experiments",
    after_help = "Config file: plain-text `key = value` lines (see README); \
                  command-line flags override file values."
)]
struct Cli {
    /// Master seed; every random draw derives from it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (0 = all cores). Results are thread-count invariant.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Desk-scale profile: 10^4 symbols and CCDF read at 1e-3.
    #[arg(long, global = true)]
    quick: bool,

    /// Output directory for CSVs and run records.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Key-value config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a peak-reduction-tone set.
    PrtSearch {
        /// ga | random | consecutive | spaced | exhaustive
        #[arg(long)]
        method: Option<String>,
        /// Subcarrier count N (power of two).
        #[arg(long)]
        n: Option<usize>,
        /// Reserved-tone count M.
        #[arg(long)]
        m: Option<usize>,
        /// GA population size S.
        #[arg(long)]
        population: Option<usize>,
        /// GA generations K.
        #[arg(long)]
        iters: Option<usize>,
        /// GA crossover probability.
        #[arg(long)]
        pc: Option<f64>,
        /// GA per-bit mutation probability.
        #[arg(long)]
        pm: Option<f64>,
        /// GA elite count T.
        #[arg(long)]
        elites: Option<usize>,
        /// Optional GA early-stop merit threshold.
        #[arg(long)]
        threshold: Option<f64>,
        /// Start index for the consecutive set.
        #[arg(long)]
        start: Option<usize>,
        /// Offset for the equally spaced set.
        #[arg(long)]
        offset: Option<usize>,
        /// Random-search trial count.
        #[arg(long)]
        trials: Option<u64>,
        /// Exhaustive-search combination budget.
        #[arg(long)]
        budget: Option<u128>,
    },

    /// Print the merit (normalized secondary peak) of a PRT-set file.
    Merit {
        #[arg(long)]
        prt_file: PathBuf,
        /// Subcarrier count N (power of two).
        #[arg(long)]
        n: Option<usize>,
    },

    /// Monte Carlo CCDF curves for the original signal and selected engines.
    Ccdf {
        /// Monte Carlo symbol count.
        #[arg(long)]
        symbols: Option<usize>,
        /// Subcarrier count N (power of two).
        #[arg(long)]
        n: Option<usize>,
        /// Reserved-tone count M.
        #[arg(long)]
        m: Option<usize>,
        /// Oversampling factor L.
        #[arg(long)]
        l: Option<usize>,
        /// Engine to attach (repeatable): gd | astr | aac | const.
        #[arg(long)]
        engine: Vec<String>,
        /// Clipping ratio gamma in dB.
        #[arg(long)]
        gamma_db: Option<f64>,
        /// Engine iteration count K.
        #[arg(long)]
        iters: Option<usize>,
        /// Clipping-level step size in [0, 1].
        #[arg(long)]
        rho: Option<f64>,
        /// Fixed step size for the constant-scaling engine.
        #[arg(long)]
        beta_const: Option<f64>,
        /// PRT-set file (defaults to the bundled GA set for N=512, M=32).
        #[arg(long)]
        prt_file: Option<PathBuf>,
    },

    /// Apply one engine to symbols and report per-symbol PAPR before/after.
    Reduce {
        /// gd | astr | aac | const
        #[arg(long)]
        engine: Option<String>,
        /// Clipping ratio gamma in dB.
        #[arg(long)]
        gamma_db: Option<f64>,
        /// Engine iteration count K.
        #[arg(long)]
        iters: Option<usize>,
        /// Clipping-level step size in [0, 1].
        #[arg(long)]
        rho: Option<f64>,
        /// Fixed step size for the constant-scaling engine.
        #[arg(long)]
        beta_const: Option<f64>,
        /// PRT-set file (defaults to the bundled GA set for N=512, M=32).
        #[arg(long)]
        prt_file: Option<PathBuf>,
        /// Monte Carlo symbol count.
        #[arg(long)]
        symbols: Option<usize>,
        /// Subcarrier count N (power of two).
        #[arg(long)]
        n: Option<usize>,
        /// Reserved-tone count M.
        #[arg(long)]
        m: Option<usize>,
        /// Oversampling factor L.
        #[arg(long)]
        l: Option<usize>,
    },

    /// Ensemble mean PAPR after each iteration, per engine.
    Convergence {
        /// Comma-separated engines (default gd,astr,aac).
        #[arg(long)]
        engines: Option<String>,
        /// Clipping ratio gamma in dB.
        #[arg(long)]
        gamma_db: Option<f64>,
        /// Engine iteration count K.
        #[arg(long)]
        iters: Option<usize>,
        /// Clipping-level step size in [0, 1].
        #[arg(long)]
        rho: Option<f64>,
        /// Monte Carlo symbol count.
        #[arg(long)]
        symbols: Option<usize>,
        /// PRT-set file (defaults to the bundled GA set for N=512, M=32).
        #[arg(long)]
        prt_file: Option<PathBuf>,
        /// Subcarrier count N (power of two).
        #[arg(long)]
        n: Option<usize>,
        /// Reserved-tone count M.
        #[arg(long)]
        m: Option<usize>,
        /// Oversampling factor L.
        #[arg(long)]
        l: Option<usize>,
    },

    /// Average power increase, wall time and PAPR per engine.
    PowerMetrics {
        #[arg(long)]
        engines: Option<String>,
        /// Clipping ratio gamma in dB.
        #[arg(long)]
        gamma_db: Option<f64>,
        /// Engine iteration count K.
        #[arg(long)]
        iters: Option<usize>,
        /// Clipping-level step size in [0, 1].
        #[arg(long)]
        rho: Option<f64>,
        /// Monte Carlo symbol count.
        #[arg(long)]
        symbols: Option<usize>,
        /// PRT-set file (defaults to the bundled GA set for N=512, M=32).
        #[arg(long)]
        prt_file: Option<PathBuf>,
        /// Subcarrier count N (power of two).
        #[arg(long)]
        n: Option<usize>,
        /// Reserved-tone count M.
        #[arg(long)]
        m: Option<usize>,
        /// Oversampling factor L.
        #[arg(long)]
        l: Option<usize>,
    },

    /// Analytic operation-count model of the adaptive clipping engine.
    Complexity {
        /// Subcarrier count N (power of two).
        #[arg(long)]
        n: Option<usize>,
        /// Oversampling factor L.
        #[arg(long)]
        l: Option<usize>,
        /// Reserved-tone count M.
        #[arg(long)]
        m: Option<usize>,
        /// Clipping ratio gamma in dB.
        #[arg(long)]
        gamma_db: Option<f64>,
        /// Engine iteration count K.
        #[arg(long)]
        iters: Option<usize>,
    },

    /// CCDF family over a swept clipping ratio or level step.
    Sweep {
        /// gamma | rho
        #[arg(long)]
        param: Option<String>,
        /// Comma-separated values, e.g. 0,2,4.
        #[arg(long)]
        values: Option<String>,
        #[arg(long)]
        engine: Option<String>,
        /// Monte Carlo symbol count.
        #[arg(long)]
        symbols: Option<usize>,
        /// Clipping ratio gamma in dB.
        #[arg(long)]
        gamma_db: Option<f64>,
        /// Engine iteration count K.
        #[arg(long)]
        iters: Option<usize>,
        /// Clipping-level step size in [0, 1].
        #[arg(long)]
        rho: Option<f64>,
        /// PRT-set file (defaults to the bundled GA set for N=512, M=32).
        #[arg(long)]
        prt_file: Option<PathBuf>,
        /// Subcarrier count N (power of two).
        #[arg(long)]
        n: Option<usize>,
        /// Reserved-tone count M.
        #[arg(long)]
        m: Option<usize>,
        /// Oversampling factor L.
        #[arg(long)]
        l: Option<usize>,
    },

    /// Secondary-peak table for the bundled PRT sets plus fresh searches.
    PrtTable {
        /// Random-search trials for the fresh RSO row.
        #[arg(long)]
        trials: Option<u64>,
        /// GA population size for the fresh GA row.
        #[arg(long)]
        population: Option<usize>,
        /// GA generations for the fresh GA row.
        #[arg(long)]
        iters: Option<usize>,
    },
}

struct Context {
    seed: u64,
    quick: bool,
    out: PathBuf,
    cfg: FileConfig,
}

impl Context {
    fn default_symbols(&self) -> usize {
        if self.quick {
            10_000
        } else {
            100_000
        }
    }

    fn read_probability(&self) -> f64 {
        if self.quick {
            1e-3
        } else {
            1e-4
        }
    }

    /// PRT set from --prt-file / config, else the bundled GA set (N=512, M=32).
    fn resolve_prt(&self, flag: Option<PathBuf>, n: usize, m: usize) -> Result<PrtSet> {
        let path = match flag {
            Some(p) => Some(p),
            None => self.cfg.raw("prt-file").map(PathBuf::from),
        };
        match path {
            Some(p) => {
                let prt = PrtSet::from_file(&p, n)?;
                if prt.size() != m {
                    return Err(Error::invalid(format!(
                        "PRT file {} has {} tones, expected M={m}",
                        p.display(),
                        prt.size()
                    )));
                }
                Ok(prt)
            }
            None if n == fixtures::N_TONES && m == 32 => Ok(fixtures::ga_prt()),
            None => Err(Error::invalid(
                "no bundled PRT set for this N/M; pass --prt-file",
            )),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn study_config(
        &self,
        prt: PrtSet,
        oversample: usize,
        symbols: usize,
        gamma_db: f64,
        iterations: usize,
        rho: f64,
        beta_const: f64,
    ) -> Result<StudyConfig> {
        let mut study = StudyConfig::new(prt, oversample, symbols, self.seed);
        study.gamma_db = gamma_db;
        study.iterations = iterations;
        study.rho = rho;
        study.const_beta = beta_const;
        let grid_min: f64 = self.cfg.resolve("grid-min", None, 4.0)?;
        let grid_max: f64 = self.cfg.resolve("grid-max", None, 13.0)?;
        let grid_step: f64 = self.cfg.resolve("grid-step", None, 0.1)?;
        if grid_step <= 0.0 || grid_max <= grid_min {
            return Err(Error::invalid("bad threshold grid"));
        }
        let steps = ((grid_max - grid_min) / grid_step).round() as usize;
        study.thresholds_db = (0..=steps)
            .map(|i| grid_min + grid_step * i as f64)
            .collect();
        Ok(study)
    }
}

fn parse_engines(ctx: &Context, flags: &[String], key: &str, default: &str) -> Result<Vec<Engine>> {
    let joined = if flags.is_empty() {
        ctx.cfg
            .raw(key)
            .or_else(|| ctx.cfg.raw("engine"))
            .unwrap_or(default)
            .to_string()
    } else {
        flags.join(",")
    };
    joined
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Engine::parse)
        .collect()
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::empty(),
    };
    let seed = cfg.resolve("seed", cli.seed, 42)?;
    let quick = cfg.resolve_flag("quick", cli.quick)?;
    let threads = cfg.resolve("threads", cli.threads, 0)?;
    let out = match cli.out {
        Some(p) => p,
        None => PathBuf::from(cfg.raw("out").unwrap_or(".")),
    };
    let ctx = Context {
        seed,
        quick,
        out,
        cfg,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(&ctx, cli.command))
}

fn dispatch(ctx: &Context, command: Command) -> Result<()> {
    match command {
        Command::PrtSearch {
            method,
            n,
            m,
            population,
            iters,
            pc,
            pm,
            elites,
            threshold,
            start,
            offset,
            trials,
            budget,
        } => {
            let method = ctx.cfg.resolve("method", method, "ga".to_string())?;
            let n = ctx.cfg.resolve("n", n, 512)?;
            let m = ctx.cfg.resolve("m", m, 32)?;
            output::ensure_writable(&ctx.out)?;
            let started = std::time::Instant::now();

            let (result, cost_note): (SearchResult<f64>, String) = match method.as_str() {
                "ga" => {
                    let ga = GaConfig {
                        population_size: ctx.cfg.resolve("population", population, 30)?,
                        prt_size: m,
                        n_tones: n,
                        elites: ctx.cfg.resolve("elites", elites, 2)?,
                        p_crossover: ctx.cfg.resolve("pc", pc, 0.9)?,
                        p_mutation: ctx.cfg.resolve("pm", pm, 0.05)?,
                        max_iterations: ctx.cfg.resolve("iters", iters, 170)?,
                        seed: ctx.seed,
                        merit_threshold: ctx.cfg.resolve_opt("threshold", threshold)?,
                    };
                    let note = format!(
                        "SK={}*{}={}",
                        ga.population_size,
                        ga.max_iterations,
                        ga.population_size * ga.max_iterations
                    );
                    (ga_search(&ga)?, note)
                }
                "random" => {
                    let trials = ctx.cfg.resolve("trials", trials, 100_000)?;
                    let mut rng = master_rng(ctx.seed);
                    (
                        random_search(n, m, trials, &mut rng)?,
                        format!("trials={trials}"),
                    )
                }
                "consecutive" => {
                    let start = ctx.cfg.resolve("start", start, 0)?;
                    let prt = consecutive_prt(n, m, start)?;
                    let best_merit = merit(&prt);
                    (
                        SearchResult {
                            best_prt: prt,
                            best_merit,
                            merit_history: vec![best_merit],
                            evaluations: 1,
                        },
                        format!("start={start}"),
                    )
                }
                "spaced" => {
                    let offset = ctx.cfg.resolve("offset", offset, 0)?;
                    let prt = equally_spaced_prt(n, m, offset)?;
                    let best_merit = merit(&prt);
                    (
                        SearchResult {
                            best_prt: prt,
                            best_merit,
                            merit_history: vec![best_merit],
                            evaluations: 1,
                        },
                        format!("offset={offset}"),
                    )
                }
                "exhaustive" => {
                    let budget = ctx
                        .cfg
                        .resolve("budget", budget, DEFAULT_EXHAUSTIVE_BUDGET)?;
                    (
                        exhaustive_search_with_budget(n, m, budget)?,
                        format!("budget={budget}"),
                    )
                }
                other => {
                    return Err(Error::invalid(format!(
                        "unknown method {other:?} (expected ga, random, consecutive, spaced or exhaustive)"
                    )))
                }
            };

            let prt_path = output::artifact_path(&ctx.out, "prt-search", &method, ctx.seed, "txt");
            output::write_text(&prt_path, &(result.best_prt.to_line() + "\n"))?;
            let history_path =
                output::artifact_path(&ctx.out, "prt-search", &method, ctx.seed, "history.csv");
            output::write_text(
                &history_path,
                &output::merit_history_csv(&result.merit_history),
            )?;

            let mut record = output::RunRecord::new("prt-search", ctx.seed);
            record.set("method", &method);
            record.set("n", n);
            record.set("m", m);
            record.set("# best-merit", format!("{:.6}", result.best_merit));
            record.set("# evaluations", result.evaluations);
            record.set("# search-cost", &cost_note);
            record.outputs = vec![
                prt_path.display().to_string(),
                history_path.display().to_string(),
            ];
            record.wall_seconds = started.elapsed().as_secs_f64();
            let meta = record.write(&ctx.out)?;

            println!(
                "{method}: merit {:.6} after {} evaluations ({cost_note})",
                result.best_merit, result.evaluations
            );
            println!("prt set -> {}", prt_path.display());
            println!("metadata -> {}", meta.display());
            Ok(())
        }

        Command::Merit { prt_file, n } => {
            let n = ctx.cfg.resolve("n", n, 512)?;
            let prt = PrtSet::from_file(&prt_file, n)?;
            let value: f64 = merit(&prt);
            println!("{value:.6}");
            Ok(())
        }

        Command::Ccdf {
            symbols,
            n,
            m,
            l,
            engine,
            gamma_db,
            iters,
            rho,
            beta_const,
            prt_file,
        } => {
            let n = ctx.cfg.resolve("n", n, 512)?;
            let m = ctx.cfg.resolve("m", m, 32)?;
            let l = ctx.cfg.resolve("l", l, 4)?;
            let symbols = ctx.cfg.resolve("symbols", symbols, ctx.default_symbols())?;
            let engines = parse_engines(ctx, &engine, "engines", "")?;
            let prt = ctx.resolve_prt(prt_file, n, m)?;
            let study = ctx.study_config(
                prt,
                l,
                symbols,
                ctx.cfg.resolve("gamma-db", gamma_db, 5.0)?,
                ctx.cfg.resolve("iters", iters, 10)?,
                ctx.cfg.resolve("rho", rho, 1.0)?,
                ctx.cfg.resolve("beta-const", beta_const, 1.0)?,
            )?;
            output::ensure_writable(&ctx.out)?;
            let started = std::time::Instant::now();

            let result = run_ccdf(&study, &engines)?;

            let mut outputs = Vec::new();
            let orig_path = output::artifact_path(&ctx.out, "ccdf", "original", ctx.seed, "csv");
            output::write_text(&orig_path, &output::ccdf_csv(&result.original))?;
            outputs.push(orig_path.display().to_string());
            for e in &result.engines {
                let path =
                    output::artifact_path(&ctx.out, "ccdf", e.engine.label(), ctx.seed, "csv");
                output::write_text(&path, &output::ccdf_csv(&e.curve))?;
                outputs.push(path.display().to_string());
            }

            let read = ctx.read_probability();
            println!(
                "original: PAPR @ {read:.0e} = {}",
                fmt_point(result.original.papr_at(read))
            );
            for e in &result.engines {
                println!(
                    "{:<6}: PAPR @ {read:.0e} = {}  API {:.4} dB",
                    e.engine.label(),
                    fmt_point(e.curve.papr_at(read)),
                    e.api_db
                );
            }

            let mut record = study_record("ccdf", ctx, &study, &engines);
            record.outputs = outputs;
            record.wall_seconds = started.elapsed().as_secs_f64();
            let meta = record.write(&ctx.out)?;
            println!("metadata -> {}", meta.display());
            Ok(())
        }

        Command::Reduce {
            engine,
            gamma_db,
            iters,
            rho,
            beta_const,
            prt_file,
            symbols,
            n,
            m,
            l,
        } => {
            let engine_name = ctx
                .cfg
                .resolve_opt("engine", engine)?
                .ok_or_else(|| Error::invalid("reduce requires --engine"))?;
            let engine = Engine::parse(&engine_name)?;
            let n = ctx.cfg.resolve("n", n, 512)?;
            let m = ctx.cfg.resolve("m", m, 32)?;
            let l = ctx.cfg.resolve("l", l, 4)?;
            let symbols = ctx.cfg.resolve("symbols", symbols, 1)?;
            let prt = ctx.resolve_prt(prt_file, n, m)?;
            let study = ctx.study_config(
                prt,
                l,
                symbols,
                ctx.cfg.resolve("gamma-db", gamma_db, 5.0)?,
                ctx.cfg.resolve("iters", iters, 10)?,
                ctx.cfg.resolve("rho", rho, 1.0)?,
                ctx.cfg.resolve("beta-const", beta_const, 1.0)?,
            )?;
            output::ensure_writable(&ctx.out)?;
            let started = std::time::Instant::now();

            let rows = run_reduce(&study, engine)?;
            let mut csv = String::from("symbol,papr_before_db,papr_after_db,iterations,api_db\n");
            for (i, r) in rows.iter().enumerate() {
                use std::fmt::Write as _;
                let _ = writeln!(
                    csv,
                    "{i},{:.6},{:.6},{},{:.6}",
                    r.papr_before_db, r.papr_after_db, r.iterations_run, r.api_db
                );
            }
            let path = output::artifact_path(&ctx.out, "reduce", engine.label(), ctx.seed, "csv");
            output::write_text(&path, &csv)?;

            let mean_before =
                rows.iter().map(|r| r.papr_before_db).sum::<f64>() / rows.len() as f64;
            let mean_after = rows.iter().map(|r| r.papr_after_db).sum::<f64>() / rows.len() as f64;
            println!(
                "{}: mean PAPR {mean_before:.2} -> {mean_after:.2} dB over {} symbol(s)",
                engine.label(),
                rows.len()
            );

            let mut record = study_record("reduce", ctx, &study, &[engine]);
            record.outputs = vec![path.display().to_string()];
            record.wall_seconds = started.elapsed().as_secs_f64();
            let meta = record.write(&ctx.out)?;
            println!("rows -> {}", path.display());
            println!("metadata -> {}", meta.display());
            Ok(())
        }

        Command::Convergence {
            engines,
            gamma_db,
            iters,
            rho,
            symbols,
            prt_file,
            n,
            m,
            l,
        } => {
            let n = ctx.cfg.resolve("n", n, 512)?;
            let m = ctx.cfg.resolve("m", m, 32)?;
            let l = ctx.cfg.resolve("l", l, 4)?;
            let engine_flags: Vec<String> = engines.into_iter().collect();
            let engines = parse_engines(ctx, &engine_flags, "engines", "gd,astr,aac")?;
            let symbols =
                ctx.cfg
                    .resolve("symbols", symbols, if ctx.quick { 2_000 } else { 10_000 })?;
            let prt = ctx.resolve_prt(prt_file, n, m)?;
            let study = ctx.study_config(
                prt,
                l,
                symbols,
                ctx.cfg.resolve("gamma-db", gamma_db, 4.0)?,
                ctx.cfg.resolve("iters", iters, 20)?,
                ctx.cfg.resolve("rho", rho, 1.0)?,
                1.0,
            )?;
            output::ensure_writable(&ctx.out)?;
            let started = std::time::Instant::now();

            let curves = run_convergence(&study, &engines)?;
            let labeled: Vec<(String, Vec<f64>)> = curves
                .iter()
                .map(|(e, v)| (e.label().to_string(), v.clone()))
                .collect();
            let path = output::artifact_path(&ctx.out, "convergence", "all", ctx.seed, "csv");
            output::write_text(&path, &output::convergence_csv(&labeled))?;

            for (engine, means) in &curves {
                println!(
                    "{:<6}: mean PAPR after {} iterations = {:.3} dB",
                    engine.label(),
                    means.len(),
                    means.last().unwrap()
                );
            }

            let mut record = study_record("convergence", ctx, &study, &engines);
            record.outputs = vec![path.display().to_string()];
            record.wall_seconds = started.elapsed().as_secs_f64();
            let meta = record.write(&ctx.out)?;
            println!("curves -> {}", path.display());
            println!("metadata -> {}", meta.display());
            Ok(())
        }

        Command::PowerMetrics {
            engines,
            gamma_db,
            iters,
            rho,
            symbols,
            prt_file,
            n,
            m,
            l,
        } => {
            let n = ctx.cfg.resolve("n", n, 512)?;
            let m = ctx.cfg.resolve("m", m, 32)?;
            let l = ctx.cfg.resolve("l", l, 4)?;
            let engine_flags: Vec<String> = engines.into_iter().collect();
            let engines = parse_engines(ctx, &engine_flags, "engines", "gd,astr,aac")?;
            let symbols = ctx.cfg.resolve("symbols", symbols, ctx.default_symbols())?;
            let prt = ctx.resolve_prt(prt_file, n, m)?;
            let study = ctx.study_config(
                prt,
                l,
                symbols,
                ctx.cfg.resolve("gamma-db", gamma_db, 5.0)?,
                ctx.cfg.resolve("iters", iters, 10)?,
                ctx.cfg.resolve("rho", rho, 1.0)?,
                1.0,
            )?;
            output::ensure_writable(&ctx.out)?;
            let started = std::time::Instant::now();

            let result = run_ccdf(&study, &engines)?;
            let read = ctx.read_probability();
            print!("{}", output::power_metrics_text(read, &result.engines));

            let csv_rows: Vec<(String, f64, Option<f64>)> = result
                .engines
                .iter()
                .map(|e| {
                    (
                        e.engine.label().to_string(),
                        e.api_db,
                        e.curve.papr_at(read),
                    )
                })
                .collect();
            let path = output::artifact_path(&ctx.out, "power-metrics", "all", ctx.seed, "csv");
            output::write_text(&path, &output::power_metrics_csv(&csv_rows))?;

            let mut record = study_record("power-metrics", ctx, &study, &engines);
            for e in &result.engines {
                record.set(
                    &format!("# wall-ms-per-symbol-{}", e.engine.label()),
                    format!("{:.4}", e.mean_ms_per_symbol),
                );
            }
            record.outputs = vec![path.display().to_string()];
            record.wall_seconds = started.elapsed().as_secs_f64();
            let meta = record.write(&ctx.out)?;
            println!("table -> {}", path.display());
            println!("metadata -> {}", meta.display());
            Ok(())
        }

        Command::Complexity {
            n,
            l,
            m,
            gamma_db,
            iters,
        } => {
            let params = CostModelParams {
                n_tones: ctx.cfg.resolve("n", n, 512)?,
                oversample: ctx.cfg.resolve("l", l, 4)?,
                prt_size: ctx.cfg.resolve("m", m, 32)?,
                gamma_db: ctx.cfg.resolve("gamma-db", gamma_db, 5.0)?,
                iterations: ctx.cfg.resolve("iters", iters, 10)?,
            };
            let cost = total_aac_cost(&params)?;
            let table = format!(
                "{:<22} {:>16}\n{:<22} {:>16.4}\n{:<22} {:>16.4}\n{:<22} {:>16.4}\n{:<22} {:>16.4}\n{:<22} {:>16.4}\n{:<22} {:>16.4}\n",
                "quantity",
                "value",
                "mean clipped |S1|",
                cost.mean_clipped,
                "mean peaks |Sp|",
                cost.mean_peaks,
                "DFT real mults",
                cost.dft_mults,
                "IDFT real mults",
                cost.idft_mults,
                "total real mults",
                cost.total_real_mults,
                "total real divs",
                cost.total_real_divs,
            );
            print!("{table}");

            output::ensure_writable(&ctx.out)?;
            let text_path = output::artifact_path(&ctx.out, "complexity", "aac", ctx.seed, "txt");
            output::write_text(&text_path, &table)?;
            let mut record = output::RunRecord::new("complexity", ctx.seed);
            record.set("n", params.n_tones);
            record.set("l", params.oversample);
            record.set("m", params.prt_size);
            record.set("gamma-db", params.gamma_db);
            record.set("iters", params.iterations);
            record.set("# mean-clipped", format!("{:.6}", cost.mean_clipped));
            record.set("# mean-peaks", format!("{:.6}", cost.mean_peaks));
            record.set("# dft-mults", format!("{:.6}", cost.dft_mults));
            record.set("# idft-mults", format!("{:.6}", cost.idft_mults));
            record.set("# total-mults", format!("{:.6}", cost.total_real_mults));
            record.set("# total-divs", format!("{:.6}", cost.total_real_divs));
            record.outputs = vec![text_path.display().to_string()];
            let meta = record.write(&ctx.out)?;
            println!("table -> {}", text_path.display());
            println!("metadata -> {}", meta.display());
            Ok(())
        }

        Command::Sweep {
            param,
            values,
            engine,
            symbols,
            gamma_db,
            iters,
            rho,
            prt_file,
            n,
            m,
            l,
        } => {
            let param_name = ctx.cfg.resolve("param", param, "gamma".to_string())?;
            let param = SweepParam::parse(&param_name)?;
            let values_text = ctx
                .cfg
                .resolve_opt("values", values)?
                .ok_or_else(|| Error::invalid("sweep requires --values"))?;
            let values: Vec<f64> = values_text
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad sweep value {v:?}")))
                })
                .collect::<Result<_>>()?;
            let engine = Engine::parse(&ctx.cfg.resolve("engine", engine, "aac".to_string())?)?;
            let n = ctx.cfg.resolve("n", n, 512)?;
            let m = ctx.cfg.resolve("m", m, 32)?;
            let l = ctx.cfg.resolve("l", l, 4)?;
            let symbols = ctx.cfg.resolve("symbols", symbols, ctx.default_symbols())?;
            let prt = ctx.resolve_prt(prt_file, n, m)?;
            let study = ctx.study_config(
                prt,
                l,
                symbols,
                ctx.cfg.resolve("gamma-db", gamma_db, 5.0)?,
                ctx.cfg.resolve("iters", iters, 10)?,
                ctx.cfg.resolve("rho", rho, 1.0)?,
                1.0,
            )?;
            output::ensure_writable(&ctx.out)?;
            let started = std::time::Instant::now();

            let family = run_sweep(&study, engine, param, &values)?;
            let mut outputs = Vec::new();
            let read = ctx.read_probability();
            for (value, study_result) in &family {
                let experiment = format!("sweep-{param_name}{value}");
                let path =
                    output::artifact_path(&ctx.out, &experiment, engine.label(), ctx.seed, "csv");
                output::write_text(&path, &output::ccdf_csv(&study_result.engines[0].curve))?;
                println!(
                    "{param_name}={value}: PAPR @ {read:.0e} = {}",
                    fmt_point(study_result.engines[0].curve.papr_at(read))
                );
                outputs.push(path.display().to_string());
            }
            let orig_path =
                output::artifact_path(&ctx.out, "sweep-original", engine.label(), ctx.seed, "csv");
            output::write_text(&orig_path, &output::ccdf_csv(&family[0].1.original))?;
            outputs.push(orig_path.display().to_string());

            let mut record = study_record("sweep", ctx, &study, &[engine]);
            record.set("param", &param_name);
            record.set("values", &values_text);
            record.outputs = outputs;
            record.wall_seconds = started.elapsed().as_secs_f64();
            let meta = record.write(&ctx.out)?;
            println!("metadata -> {}", meta.display());
            Ok(())
        }

        Command::PrtTable {
            trials,
            population,
            iters,
        } => {
            let trials =
                ctx.cfg
                    .resolve("trials", trials, if ctx.quick { 10_000 } else { 100_000 })?;
            let ga = GaConfig {
                population_size: ctx.cfg.resolve("population", population, 30)?,
                max_iterations: ctx.cfg.resolve("iters", iters, 170)?,
                ..GaConfig::default_for(fixtures::N_TONES, 32, ctx.seed)
            };
            output::ensure_writable(&ctx.out)?;
            let started = std::time::Instant::now();

            let rows = run_prt_table(ctx.seed, trials, &ga)?;
            print!("{}", output::prt_table_text(&rows));
            let path = output::artifact_path(&ctx.out, "prt-table", "all", ctx.seed, "csv");
            output::write_text(&path, &output::prt_table_csv(&rows))?;

            let mut record = output::RunRecord::new("prt-table", ctx.seed);
            record.set("trials", trials);
            record.set("population", ga.population_size);
            record.set("iters", ga.max_iterations);
            record.outputs = vec![path.display().to_string()];
            record.wall_seconds = started.elapsed().as_secs_f64();
            let meta = record.write(&ctx.out)?;
            println!("table -> {}", path.display());
            println!("metadata -> {}", meta.display());
            Ok(())
        }
    }
}

fn fmt_point(p: Option<f64>) -> String {
    match p {
        Some(v) => format!("{v:.1} dB"),
        None => "beyond grid".to_string(),
    }
}

fn study_record(
    experiment: &str,
    ctx: &Context,
    study: &StudyConfig,
    engines: &[Engine],
) -> output::RunRecord {
    let mut record = output::RunRecord::new(experiment, ctx.seed);
    record.set("symbols", study.n_symbols);
    record.set("n", study.n_tones());
    record.set("m", study.prt.size());
    record.set("l", study.oversample);
    record.set("gamma-db", study.gamma_db);
    record.set("iters", study.iterations);
    record.set("rho", study.rho);
    record.set("beta-const", study.const_beta);
    record.set(
        "engines",
        engines
            .iter()
            .map(|e| e.label())
            .collect::<Vec<_>>()
            .join(","),
    );
    record.set("quick", ctx.quick);
    record.set(
        "grid-min",
        study.thresholds_db.first().copied().unwrap_or(0.0),
    );
    record.set(
        "grid-max",
        study.thresholds_db.last().copied().unwrap_or(0.0),
    );
    record
}
