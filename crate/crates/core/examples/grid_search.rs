//! Sweeps the iteration parameters of `sds_imat` on the 91-subcarrier system
//! at 20 dB and marks which settings also recover every single-tap channel
//! exactly in the noiseless case.
//!
//! cargo run --release --example grid_search -- [trials]

use sdsimat::channel::SparseChannel;
use sdsimat::harness::{run_experiment, ExperimentConfig};
use sdsimat::ofdm::PilotObservation;
use sdsimat::pilots::PilotPattern;
use sdsimat::recovery::{sds_imat, MeasurementSystem, Method, RecoveryConfig};
use sdsimat::Complex64;

fn single_tap_worst(sys: &MeasurementSystem, cfg: &RecoveryConfig) -> f64 {
    (0..sys.n_cols())
        .map(|tap| {
            let h = SparseChannel::new(sys.n_cols(), vec![tap], vec![Complex64::new(1.0, 0.0)]).unwrap();
            let obs = PilotObservation {
                values: sys.matrix().apply(h.taps()).unwrap(),
                pattern: sys.pattern().clone(),
                noise_variance: 0.0,
            };
            match sds_imat(&obs, sys, cfg) {
                Ok(r) => r.estimate.squared_error(&h).sqrt(),
                Err(_) => f64::INFINITY,
            }
        })
        .fold(0.0, f64::max)
}

fn main() {
    let trials: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(500);
    let mut base = ExperimentConfig::preset("baseline").unwrap();
    base.methods = vec![Method::SdsImat, Method::Imat, Method::Omp];
    base.snr_grid_db = vec![20.0];
    base.trials_per_point = trials;
    let sys = MeasurementSystem::new(&PilotPattern::known_cds(91).unwrap(), 32).unwrap();

    println!("relaxation,decay,iterations,mse_db_sds_imat,mse_db_imat,mse_db_omp,single_tap_worst,exact");
    for relaxation in [1.0, 2.0, 3.0, 5.0, 9.1] {
        for decay in [0.05, 0.1, 0.2, 0.3] {
            for iterations in [50, 100, 200] {
                let mut cfg = base.clone();
                cfg.recovery.relaxation = relaxation;
                cfg.recovery.threshold_decay = decay;
                cfg.recovery.max_iterations = iterations;
                let report = run_experiment(&cfg).unwrap();
                let db = |m: Method| {
                    let p = report.points.iter().find(|p| p.method == m).unwrap();
                    10.0 * p.mse.log10()
                };
                let worst = single_tap_worst(&sys, &cfg.recovery);
                println!(
                    "{relaxation},{decay},{iterations},{:.2},{:.2},{:.2},{worst:.1e},{}",
                    db(Method::SdsImat),
                    db(Method::Imat),
                    db(Method::Omp),
                    worst < 1e-6
                );
            }
        }
    }
}
