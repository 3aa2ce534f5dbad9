use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sdsimat::channel::{draw_channel, ChannelConfig, SparseChannel};
use sdsimat::harness::{run_experiment, ExperimentConfig, ExperimentReport};
use sdsimat::ofdm::PilotObservation;
use sdsimat::pilots::PilotPattern;
use sdsimat::recovery::{omp, sds_imat, MeasurementSystem, Method, RecoveryConfig, SmoothingConfig, WindowKind};
use sdsimat::Complex64;

fn noiseless(sys: &MeasurementSystem, h: &SparseChannel) -> PilotObservation {
    PilotObservation {
        values: sys.matrix().apply(h.taps()).unwrap(),
        pattern: sys.pattern().clone(),
        noise_variance: 0.0,
    }
}

fn baseline_system() -> MeasurementSystem {
    MeasurementSystem::new(&PilotPattern::known_cds(91).unwrap(), 32).unwrap()
}

/// Mean and standard error of the paired per-trial squared-error difference
/// `a - b`, both normalized by the mean channel energy.
fn paired_mse_difference(report: &ExperimentReport, snr_index: usize, a: Method, b: Method) -> (f64, f64) {
    let recs = &report.records[snr_index];
    let pairs: Vec<(f64, f64)> = recs
        .iter()
        .filter_map(|r| {
            let (ma, mb) = (r.metrics(a)?, r.metrics(b)?);
            Some((ma.squared_error - mb.squared_error, ma.channel_energy))
        })
        .collect();
    let n = pairs.len() as f64;
    let energy = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let diffs: Vec<f64> = pairs.iter().map(|p| p.0 / energy).collect();
    let mean = diffs.iter().sum::<f64>() / n;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn support_recovery_rate(seed: u64, trials: usize) -> f64 {
    let sys = baseline_system();
    let cfg = RecoveryConfig::default();
    let ch = ChannelConfig {
        length: 32,
        sparsity: 4,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..trials)
        .filter(|_| {
            let h = draw_channel(&ch, &mut rng).unwrap();
            let est = omp(&noiseless(&sys, &h), &sys, &cfg).unwrap();
            est.estimate.support() == h.support()
        })
        .count();
    hits as f64 / trials as f64
}

#[test]
fn omp_support_recovery_rate_is_reproducible() {
    let rates: Vec<f64> = [1u64, 2, 3].iter().map(|&s| support_recovery_rate(s, 1000)).collect();
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    for r in &rates {
        assert!((r - mean).abs() <= 0.03, "rates {rates:?}");
    }
    assert!(mean > 0.0 && mean < 1.0, "rates {rates:?}");
}

fn baseline(methods: Vec<Method>, snr: f64, trials: usize) -> ExperimentReport {
    let mut cfg = ExperimentConfig::preset("baseline").unwrap();
    cfg.methods = methods;
    cfg.snr_grid_db = vec![snr];
    cfg.trials_per_point = trials;
    cfg.master_seed = 4242;
    run_experiment(&cfg).unwrap()
}

#[test]
fn oracle_has_lowest_mse_at_20db() {
    let report = baseline(Method::ALL.to_vec(), 20.0, 500);
    for m in [Method::SdsImat, Method::Imat, Method::Omp, Method::Interpolate] {
        let (diff, se) = paired_mse_difference(&report, 0, Method::Oracle, m);
        assert!(diff <= 2.0 * se, "oracle vs {m}: diff {diff}, se {se}");
        assert!(diff < 0.0, "oracle vs {m}: diff {diff}");
    }
}

#[test]
fn interpolation_worse_than_sds_imat_at_30db() {
    let report = baseline(vec![Method::SdsImat, Method::Interpolate], 30.0, 500);
    let (diff, se) = paired_mse_difference(&report, 0, Method::Interpolate, Method::SdsImat);
    assert!(diff > 2.0 * se, "diff {diff}, se {se}");
}

#[test]
fn all_methods_bounded_at_high_snr() {
    let report = baseline(Method::ALL.to_vec(), 30.0, 200);
    for p in &report.points {
        assert_eq!(p.failures, 0, "{}", p.method);
        assert!(p.mse >= 0.0 && p.mse.is_finite());
        assert!((0.0..=0.5).contains(&p.ber));
    }
}

#[test]
fn slow_schedule_single_tap_residual() {
    // relaxation 1, beta 1, decay 0.3, 50 iterations: the threshold falls
    // faster than the unit-step iteration converges.
    let sys = baseline_system();
    let cfg = RecoveryConfig {
        relaxation: 1.0,
        threshold_scale: Some(1.0),
        threshold_decay: 0.3,
        max_iterations: 50,
        ..RecoveryConfig::default()
    };
    let worst = (0..32)
        .map(|tap| {
            let h = SparseChannel::new(32, vec![tap], vec![Complex64::new(1.0, 0.0)]).unwrap();
            sds_imat(&noiseless(&sys, &h), &sys, &cfg).unwrap().estimate.squared_error(&h).sqrt()
        })
        .fold(0.0, f64::max);
    assert!(worst > 1e-6, "worst {worst}");
}

#[test]
fn default_single_tap_exact() {
    let sys = baseline_system();
    for window in [WindowKind::Triangular, WindowKind::Identity] {
        let cfg = RecoveryConfig {
            smoothing: SmoothingConfig {
                window,
                ..SmoothingConfig::default()
            },
            ..RecoveryConfig::default()
        };
        for tap in 0..32 {
            let h = SparseChannel::new(32, vec![tap], vec![Complex64::new(1.0, 0.0)]).unwrap();
            let err = sds_imat(&noiseless(&sys, &h), &sys, &cfg).unwrap().estimate.squared_error(&h).sqrt();
            assert!(err < 1e-6, "{window:?} tap {tap}: {err}");
        }
    }
}
