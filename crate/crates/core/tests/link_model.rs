use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::function::erf::erfc;

use sdsimat::channel::{draw_channel, frequency_response, ChannelConfig, SparseChannel};
use sdsimat::ofdm::{
    count_bit_errors, equalize_and_demodulate, extract_pilot_observation, random_bits, transmit_receive, OfdmFrame,
};
use sdsimat::pilots::PilotPattern;
use sdsimat::recovery::MeasurementSystem;

const BASELINE: ChannelConfig = ChannelConfig {
    length: 32,
    sparsity: 4,
};

/// Average QPSK bit error rate over a unit-mean exponential gain |H|^2,
/// integrated numerically with x = u^2 and composite Simpson.
fn rayleigh_qpsk_ber(snr_linear: f64) -> f64 {
    let (a, b, n) = (0.0, 8.0, 20_000);
    let h = (b - a) / n as f64;
    let f = |u: f64| (-u * u).exp() * 0.5 * erfc(u * (snr_linear / 2.0).sqrt()) * 2.0 * u;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn quadrature_matches_closed_form() {
    for snr_db in [0.0, 10.0, 20.0, 30.0] {
        let g: f64 = 10f64.powf(snr_db / 10.0);
        let closed = 0.5 * (1.0 - (g / (2.0 + g)).sqrt());
        let quad = rayleigh_qpsk_ber(g);
        assert!((quad - closed).abs() < 1e-6 * closed, "{snr_db} dB: {quad} vs {closed}");
    }
}

#[test]
fn perfect_csi_ber_matches_rayleigh_reference() {
    let pattern = PilotPattern::known_cds(91).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    let frames = 10_000;
    let (mut errors, mut bits_total) = (0usize, 0usize);
    for _ in 0..frames {
        let h = draw_channel(&BASELINE, &mut rng).unwrap();
        let bits = random_bits(2 * 81, &mut rng);
        let frame = OfdmFrame::new(&pattern, &bits).unwrap();
        let (rx, _) = transmit_receive(&frame, &h, 30.0, &mut rng).unwrap();
        let demod = equalize_and_demodulate(&rx, &h, &frame).unwrap();
        errors += count_bit_errors(&demod.bits, &bits);
        bits_total += bits.len();
    }
    let simulated = errors as f64 / bits_total as f64;
    let reference = rayleigh_qpsk_ber(1000.0);
    assert!(
        simulated < 3.0 * reference && simulated > reference / 3.0,
        "simulated {simulated}, reference {reference}"
    );
}

#[test]
fn empirical_noise_variance() {
    let pattern = PilotPattern::known_cds(91).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let zero = SparseChannel::zero(32);
    for snr_db in [0.0, 10.0, 20.0] {
        let mut acc = 0.0;
        let mut count = 0usize;
        while count < 10_000 {
            let frame = OfdmFrame::new(&pattern, &random_bits(162, &mut rng)).unwrap();
            let (rx, sigma2) = transmit_receive(&frame, &zero, snr_db, &mut rng).unwrap();
            assert_eq!(sigma2, 10f64.powf(-snr_db / 10.0));
            acc += rx.iter().map(|z| z.norm_sqr()).sum::<f64>();
            count += rx.len();
        }
        let empirical = acc / count as f64;
        let configured = 10f64.powf(-snr_db / 10.0);
        assert!((empirical / configured - 1.0).abs() < 0.05, "{snr_db} dB: {empirical} vs {configured}");
    }
}

#[test]
fn realized_snr_matches_configured() {
    let pattern = PilotPattern::known_cds(91).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let snr_db = 10.0;
    let (mut signal, mut noise) = (0.0, 0.0);
    for trial in 0..10_000 {
        let h = draw_channel(&BASELINE, &mut rng).unwrap();
        let frame = OfdmFrame::new(&pattern, &random_bits(162, &mut rng)).unwrap();
        let (clean, _) = transmit_receive(&frame, &h, f64::INFINITY, &mut rng).unwrap();
        let (noisy, _) = transmit_receive(&frame, &h, snr_db, &mut rng).unwrap();
        let k = trial % 91;
        signal += clean[k].norm_sqr();
        noise += (noisy[k] - clean[k]).norm_sqr();
    }
    let realized = 10.0 * (signal / noise).log10();
    assert!((realized - snr_db).abs() < 0.2, "realized {realized} dB");
}

#[test]
fn pilot_observation_matches_measurement_matrix() {
    let pattern = PilotPattern::known_cds(91).unwrap();
    let sys = MeasurementSystem::new(&pattern, 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let h = draw_channel(&BASELINE, &mut rng).unwrap();
        let frame = OfdmFrame::new(&pattern, &random_bits(162, &mut rng)).unwrap();
        let (rx, s2) = transmit_receive(&frame, &h, f64::INFINITY, &mut rng).unwrap();
        let obs = extract_pilot_observation(&rx, &frame, s2).unwrap();
        let direct = sys.matrix().apply(h.taps()).unwrap();
        let cfr = frequency_response(&h, 91).unwrap();
        for (p, &k) in pattern.indices().iter().enumerate() {
            assert!((obs.values[p] - direct[p]).norm() < 1e-9);
            assert!((cfr[k] - direct[p]).norm() < 1e-9);
        }
    }
}
