use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, PilotMode};
use super::seed::{stream_rng, Stream};
use crate::channel::draw_channel;
use crate::ofdm::{
    count_bit_errors, equalize_and_demodulate, extract_pilot_observation, random_bits, transmit_receive, OfdmFrame,
    BITS_PER_SYMBOL,
};
use crate::pilots::{coherence, random_search, PilotPattern};
use crate::recovery::{recover, MeasurementSystem, Method};
use crate::Result;

/// Fraction of failed trials above which a method gets a warning.
pub const FAILURE_WARNING_FRACTION: f64 = 0.01;

pub const MSE_DEFINITION: &str = "mean(|h_hat - h|^2) / mean(|h|^2) over successful trials";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialMetrics {
    pub squared_error: f64,
    pub channel_energy: f64,
    pub bit_errors: usize,
    pub bits: usize,
    pub singular_events: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub snr_index: usize,
    pub trial: usize,
    /// One entry per configured method, in config order.
    pub outcomes: Vec<(Method, std::result::Result<TrialMetrics, String>)>,
}

impl TrialRecord {
    pub fn metrics(&self, method: Method) -> Option<&TrialMetrics> {
        self.outcomes
            .iter()
            .find(|(m, _)| *m == method)
            .and_then(|(_, r)| r.as_ref().ok())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub method: Method,
    pub pilot_mode: String,
    pub snr_db: f64,
    pub mse: f64,
    pub ber: f64,
    /// Successful trials.
    pub trials: usize,
    pub failures: usize,
    pub equalization_singular_events: usize,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub points: Vec<CurvePoint>,
    /// Per-trial records grouped by SNR index, in trial order.
    pub records: Vec<Vec<TrialRecord>>,
    pub warnings: Vec<String>,
    /// The pattern shared by all trials, absent in `random` mode.
    pub pattern: Option<PilotPattern>,
    pub wall_time_seconds: f64,
}

/// SNRs actually simulated: the grid, or +inf everywhere when noiseless.
pub fn effective_snrs(cfg: &ExperimentConfig) -> Vec<f64> {
    if cfg.noiseless {
        vec![f64::INFINITY; cfg.snr_grid_db.len()]
    } else {
        cfg.snr_grid_db.clone()
    }
}

/// Pattern used by every trial, or `None` in `random` mode.
pub fn shared_pattern(cfg: &ExperimentConfig) -> Result<Option<PilotPattern>> {
    let s = &cfg.system;
    match cfg.pilots.mode {
        PilotMode::Cds => cfg.cds_pattern().map(Some),
        PilotMode::RandomSearch => {
            let mut rng = stream_rng(cfg.master_seed, 0, 0, Stream::Search);
            let out = random_search(s.n_total, s.n_pilots, s.channel_length, cfg.pilots.iterations, &mut rng)?;
            Ok(Some(out.best))
        }
        PilotMode::Random => Ok(None),
    }
}

fn run_trial(
    cfg: &ExperimentConfig,
    shared: Option<&(PilotPattern, MeasurementSystem)>,
    snr_index: usize,
    snr_db: f64,
    trial: usize,
) -> Result<TrialRecord> {
    let s = &cfg.system;
    let seed = cfg.master_seed;
    let owned;
    let (pattern, sys) = match shared {
        Some((p, sys)) => (p, sys),
        None => {
            let mut rng = stream_rng(seed, snr_index, trial, Stream::Pattern);
            let p = PilotPattern::random(s.n_total, s.n_pilots, &mut rng)?;
            let sys = MeasurementSystem::new(&p, s.channel_length)?;
            owned = (p, sys);
            (&owned.0, &owned.1)
        }
    };

    let h = draw_channel(&s.channel(), &mut stream_rng(seed, snr_index, trial, Stream::Channel))?;
    let n_bits = BITS_PER_SYMBOL * (s.n_total - s.n_pilots);
    let bits = random_bits(n_bits, &mut stream_rng(seed, snr_index, trial, Stream::Bits));
    let frame = OfdmFrame::new(pattern, &bits)?;
    let (received, sigma2) = transmit_receive(&frame, &h, snr_db, &mut stream_rng(seed, snr_index, trial, Stream::Noise))?;
    let obs = extract_pilot_observation(&received, &frame, sigma2)?;

    let channel_energy = h.energy();
    let outcomes = cfg
        .methods
        .iter()
        .map(|&method| {
            let metrics = recover(method, &obs, sys, &cfg.recovery, Some(h.support())).and_then(|est| {
                let demod = equalize_and_demodulate(&received, &est.estimate, &frame)?;
                Ok(TrialMetrics {
                    squared_error: est.estimate.squared_error(&h),
                    channel_energy,
                    bit_errors: count_bit_errors(&demod.bits, &bits),
                    bits: n_bits,
                    singular_events: demod.singular_events,
                })
            });
            (method, metrics.map_err(|e| e.to_string()))
        })
        .collect();
    Ok(TrialRecord {
        snr_index,
        trial,
        outcomes,
    })
}

/// Runs every trial of every SNR point on the current rayon pool. Records
/// come back in trial order whatever the worker count.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<(Option<PilotPattern>, Vec<Vec<TrialRecord>>)> {
    cfg.validate()?;
    let pattern = shared_pattern(cfg)?;
    let shared = match &pattern {
        Some(p) => Some((p.clone(), MeasurementSystem::new(p, cfg.system.channel_length)?)),
        None => None,
    };
    let records = effective_snrs(cfg)
        .into_iter()
        .enumerate()
        .map(|(i, snr)| {
            (0..cfg.trials_per_point)
                .into_par_iter()
                .map(|t| run_trial(cfg, shared.as_ref(), i, snr, t))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((pattern, records))
}

/// One point per (method, SNR), methods in config order within each SNR.
pub fn aggregate(cfg: &ExperimentConfig, records: &[Vec<TrialRecord>]) -> Vec<CurvePoint> {
    let snrs = effective_snrs(cfg);
    let mut points = Vec::new();
    for (i, trials) in records.iter().enumerate() {
        for &method in &cfg.methods {
            let mut err = 0.0;
            let mut energy = 0.0;
            let mut bit_errors = 0usize;
            let mut bits = 0usize;
            let mut singular = 0usize;
            let mut ok = 0usize;
            let mut failures = 0usize;
            for rec in trials {
                match rec.outcomes.iter().find(|(m, _)| *m == method).map(|(_, r)| r) {
                    Some(Ok(m)) => {
                        ok += 1;
                        err += m.squared_error;
                        energy += m.channel_energy;
                        bit_errors += m.bit_errors;
                        bits += m.bits;
                        singular += m.singular_events;
                    }
                    _ => failures += 1,
                }
            }
            let (mse, ber) = if ok == 0 {
                (f64::NAN, f64::NAN)
            } else {
                let mse = if energy > 0.0 { err / energy } else { f64::NAN };
                (mse, bit_errors as f64 / bits as f64)
            };
            points.push(CurvePoint {
                method,
                pilot_mode: cfg.pilots.mode.name().to_string(),
                snr_db: snrs[i],
                mse,
                ber,
                trials: ok,
                failures,
                equalization_singular_events: singular,
            });
        }
    }
    points
}

fn failure_warnings(points: &[CurvePoint]) -> Vec<String> {
    points
        .iter()
        .filter(|p| {
            let total = p.trials + p.failures;
            total > 0 && p.failures as f64 > FAILURE_WARNING_FRACTION * total as f64
        })
        .map(|p| {
            format!(
                "{} at {} dB: {} of {} trials failed",
                p.method,
                p.snr_db,
                p.failures,
                p.trials + p.failures
            )
        })
        .collect()
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let (pattern, records) = run_trials(cfg)?;
    let points = aggregate(cfg, &records);
    let warnings = failure_warnings(&points);
    Ok(ExperimentReport {
        points,
        records,
        warnings,
        pattern,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Same as [`run_experiment`] on a dedicated pool of `threads` workers.
pub fn run_experiment_with_threads(cfg: &ExperimentConfig, threads: usize) -> Result<ExperimentReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::Error::InvalidConfig(format!("thread pool: {e}")))?;
    pool.install(|| run_experiment(cfg))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceRow {
    pub iteration: usize,
    pub random_search_best: f64,
    pub cds_value: f64,
}

/// Random-search trace next to the coherence of `cds`.
pub fn run_coherence_experiment(
    cds: &PilotPattern,
    n_cols: usize,
    iterations: usize,
    seed: u64,
) -> Result<Vec<CoherenceRow>> {
    let cds_value = coherence(cds, n_cols)?;
    let mut rng = stream_rng(seed, 0, 0, Stream::Search);
    let out = random_search(cds.n_total(), cds.n_pilots(), n_cols, iterations, &mut rng)?;
    Ok(out
        .trace
        .into_iter()
        .enumerate()
        .map(|(i, best)| CoherenceRow {
            iteration: i + 1,
            random_search_best: best,
            cds_value,
        })
        .collect())
}
