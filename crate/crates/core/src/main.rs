use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sdsimat::harness::{self, ExperimentConfig};
use sdsimat::ofdm::PilotObservation;
use sdsimat::pilots::{
    cds_family, coherence, coherence_lower_bound, is_cds, random_search, recovery_guaranteed, PilotPattern,
};
use sdsimat::recovery::{recover, MeasurementSystem, Method, RecoveryConfig};
use sdsimat::Complex64;

#[derive(Parser)]
#[command(name = "sdsimat", version, about = "Sparse OFDM channel estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment and write CSV plus a metadata sidecar.
    Simulate {
        /// Experiment config (TOML).
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        /// Shipped config: baseline, placement-cds, placement-random-search, placement-random, large-cds, large-random.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Build or search a pilot pattern and report its coherence.
    Pilots {
        #[arg(long, default_value_t = 91)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        np: usize,
        #[arg(long, default_value_t = 32)]
        l: usize,
        #[arg(long, value_enum, default_value_t = PilotModeArg::Cds)]
        mode: PilotModeArg,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        shift: i64,
        #[arg(long, default_value_t = 1)]
        multiplier: i64,
        /// Base CDS file, required when no set ships for `n`.
        #[arg(long)]
        base_set: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        index_base: usize,
        /// Also report whether the coherence guarantees recovery of this sparsity.
        #[arg(long)]
        k: Option<usize>,
        /// Where to write the search trace CSV (stdout otherwise).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random-search coherence trace against the CDS value.
    Coherence {
        #[arg(long, default_value_t = 91)]
        n: usize,
        #[arg(long, default_value_t = 32)]
        l: usize,
        #[arg(long, default_value_t = 10000)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        base_set: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        index_base: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate a channel from pilot observations.
    Recover {
        /// CSV of `real,imag` pilot samples, one per pilot in pattern order.
        #[arg(long)]
        observation: PathBuf,
        /// Pilot index file.
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, default_value_t = 0)]
        index_base: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 32)]
        l: usize,
        #[arg(long, default_value = "sds_imat")]
        method: String,
        /// Recovery parameters (TOML); defaults otherwise.
        #[arg(long)]
        config: Option<PathBuf>,
        /// True support for the oracle, comma separated.
        #[arg(long, value_delimiter = ',')]
        support: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PilotModeArg {
    Cds,
    RandomSearch,
    Random,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate {
            config,
            preset,
            seed,
            trials,
            out,
            threads,
        } => simulate(config, preset, seed, trials, out, threads),
        Command::Pilots {
            n,
            np,
            l,
            mode,
            iterations,
            seed,
            shift,
            multiplier,
            base_set,
            index_base,
            k,
            out,
        } => {
            let mut trace = None;
            let pattern = match mode {
                PilotModeArg::Cds => {
                    let base = load_cds(n, base_set.as_deref(), index_base)?;
                    if base.n_pilots() != np {
                        bail!("base set has {} pilots, expected {np}", base.n_pilots());
                    }
                    cds_family(&base, shift, multiplier)?
                }
                PilotModeArg::RandomSearch => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let res = random_search(n, np, l, iterations, &mut rng)?;
                    trace = Some(res.trace);
                    res.best
                }
                PilotModeArg::Random => PilotPattern::random(n, np, &mut ChaCha8Rng::seed_from_u64(seed))?,
            };
            let mu = coherence(&pattern, l)?;
            println!("pattern: {pattern}");
            println!("coherence: {mu}");
            println!("lower_bound: {}", coherence_lower_bound(n, np));
            match is_cds(&pattern) {
                Some(p) => println!("cds: ({}, {}, {})", p.v, p.k, p.lambda_repeats),
                None => println!("cds: no"),
            }
            if let Some(k) = k {
                println!("guarantees_k{k}: {}", recovery_guaranteed(mu, k));
            }
            if let Some(trace) = trace {
                let mut text = String::from("iteration,best_coherence\n");
                for (i, v) in trace.iter().enumerate() {
                    text.push_str(&format!("{},{}\n", i + 1, v));
                }
                emit(&text, out.as_deref())?;
            }
            Ok(())
        }
        Command::Coherence {
            n,
            l,
            iterations,
            seed,
            base_set,
            index_base,
            out,
        } => {
            let cds = load_cds(n, base_set.as_deref(), index_base)?;
            let rows = harness::run_coherence_experiment(&cds, l, iterations, seed)?;
            emit(&harness::format_coherence_csv(&rows), out.as_deref())
        }
        Command::Recover {
            observation,
            pattern,
            index_base,
            n,
            l,
            method,
            config,
            support,
            out,
        } => {
            let pattern = PilotPattern::load(n, &pattern, index_base)?;
            let values = read_observation(&observation)?;
            let cfg = match config {
                Some(p) => {
                    let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
                    let cfg: RecoveryConfig = toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
                    cfg.validate()?;
                    cfg
                }
                None => RecoveryConfig::default(),
            };
            let method: Method = method.parse()?;
            let sys = MeasurementSystem::new(&pattern, l)?;
            let obs = PilotObservation {
                values,
                pattern,
                noise_variance: 0.0,
            };
            let res = recover(method, &obs, &sys, &cfg, support.as_deref())?;
            let mut text = String::from("index,real,imag\n");
            for (i, t) in res.estimate.taps().iter().enumerate() {
                text.push_str(&format!("{},{},{}\n", i, t.re, t.im));
            }
            emit(&text, out.as_deref())?;
            eprintln!(
                "{}: {} iterations, residual {}",
                res.method, res.iterations_used, res.residual_norm
            );
            Ok(())
        }
    }
}

fn simulate(
    config: Option<PathBuf>,
    preset: Option<String>,
    seed: Option<u64>,
    trials: Option<usize>,
    out: Option<PathBuf>,
    threads: Option<usize>,
) -> Result<()> {
    let mut cfg = match (&config, &preset) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(name)) => ExperimentConfig::preset(name)?,
        (None, None) => bail!("need --config or --preset"),
    };
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if let Some(t) = trials {
        cfg.trials_per_point = t;
    }
    if let Some(o) = out {
        cfg.output_path = Some(o);
    }
    cfg.validate()?;
    let out_path = cfg.output_path.clone().unwrap_or_else(|| PathBuf::from("results.csv"));
    let report = match threads {
        Some(t) => harness::run_experiment_with_threads(&cfg, t)?,
        None => harness::run_experiment(&cfg)?,
    };
    let meta = harness::write_report(&cfg, &report, &out_path)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    eprintln!(
        "wrote {} and {} in {:.1}s",
        out_path.display(),
        meta.display(),
        report.wall_time_seconds
    );
    Ok(())
}

fn load_cds(n: usize, base_set: Option<&Path>, index_base: usize) -> Result<PilotPattern> {
    let base = match base_set {
        Some(p) => PilotPattern::load(n, p, index_base)?,
        None => PilotPattern::known_cds(n).with_context(|| format!("no shipped CDS for N={n}; pass --base-set"))?,
    };
    if is_cds(&base).is_none() {
        bail!("base set is not a cyclic difference set");
    }
    Ok(base)
}

fn read_observation(path: &Path) -> Result<Vec<Complex64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with(|c: char| c.is_ascii_alphabetic())) {
            continue;
        }
        let (re, im) = line
            .split_once(',')
            .with_context(|| format!("{}:{}: expected real,imag", path.display(), i + 1))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("{}:{}: bad number {s:?}", path.display(), i + 1))
        };
        values.push(Complex64::new(parse(re)?, parse(im)?));
    }
    Ok(values)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout"),
    }
}
