//! Randomized property suites over the public API: steering-vector
//! structure, covariance structure, compensation invariance and modem
//! round-trips.

use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fda_isac_core::array_model::{
    joint_steering, parse_offsets, tx_range_steering, validate_fodc, ArrayConfig,
};
use fda_isac_core::ccie::{decode_frame, encode_frame, ml_detect, CcieConfig};
use fda_isac_core::scene::{draw_rayleigh_channel, synth_snapshot, Scene, Target};
use fda_isac_core::sensing::sample_covariance;
use fda_isac_core::C64;

fn fodc_cfg() -> ArrayConfig<f64> {
    let eps = parse_offsets(&["0", "1", "2", "3.17", "4.2", "5.2"]).unwrap();
    ArrayConfig::new(6, 6, 1.0e10, 2.0e6, 0.03, 0.03, eps, 60.0e-6, 64, 20.0e-6).unwrap()
}

fn integer_cfg() -> ArrayConfig<f64> {
    let eps = parse_offsets(&["0", "1", "2", "3", "4", "5"]).unwrap();
    ArrayConfig::new(6, 6, 1.0e10, 2.0e6, 0.03, 0.03, eps, 60.0e-6, 64, 20.0e-6).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Every steering entry is a pure phase: |a_i| = 1.
    #[test]
    fn steering_entries_have_unit_modulus(
        range in 0.0f64..9000.0,
        angle_deg in -89.0f64..89.0,
    ) {
        let cfg = fodc_cfg();
        let a = joint_steering(range, angle_deg.to_radians(), &cfg);
        for e in &a.entries {
            prop_assert!((e.norm() - 1.0).abs() < 1e-12);
        }
        prop_assert_eq!(a.entries.len(), cfg.mn());
    }

    // The transmit range steering repeats exactly at the designed period
    // (75 m for integer offsets, 7500 m for the fractional design).
    #[test]
    fn range_steering_is_periodic(range in 0.0f64..2000.0) {
        for cfg in [integer_cfg(), fodc_cfg()] {
            let period = validate_fodc(&cfg, 1.0).period_m;
            let a = tx_range_steering(range, &cfg);
            let b = tx_range_steering(range + period, &cfg);
            for (x, y) in a.entries.iter().zip(&b.entries) {
                prop_assert!((x - y).norm() < 1e-9);
            }
        }
    }

    // Within the period, distinct ranges give distinct transmit phases.
    #[test]
    fn range_steering_separates_within_period(
        r1 in 1.0f64..7000.0,
        gap in 1.0f64..400.0,
    ) {
        let cfg = fodc_cfg();
        let r2 = r1 + gap;
        prop_assume!(r2 < 7400.0);
        let a = tx_range_steering(r1, &cfg);
        let b = tx_range_steering(r2, &cfg);
        let diff: f64 = a.entries.iter().zip(&b.entries).map(|(x, y)| (x - y).norm()).sum();
        prop_assert!(diff > 1e-6);
    }

    // The sample covariance is Hermitian and positive semidefinite.
    #[test]
    fn sample_covariance_is_hermitian_psd(seed in 0u64..500, noise in 0.01f64..2.0) {
        let cfg = fodc_cfg();
        let ccie = CcieConfig::<f64>::new(4, 4, 3).unwrap();
        let scene = Scene {
            targets: vec![Target { range_m: 40.9, angle_deg: 10.55, velocity_mps: 8.62, reflection: C64::new(1.0, 0.0) }],
            sensing_noise_power: noise,
            comm_noise_power: noise,
            comm_channel_power: 1.0,
            comm_user: None,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set = fda_isac_core::scene::synth_cpi(&scene, &cfg, &ccie, &mut rng).unwrap();
        let cov = sample_covariance(&set.data).unwrap();
        let q = &cov.matrix;
        let mn = q.rows();
        for r in 0..mn {
            for c in 0..mn {
                prop_assert!((q[(r, c)] - q[(c, r)].conj()).norm() < 1e-9);
            }
        }
        // PSD check along random directions.
        for probe_seed in 0..4u64 {
            let mut prng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(probe_seed));
            let v: Vec<C64> = (0..mn)
                .map(|_| fda_isac_core::scene::complex_gaussian(&mut prng, 1.0))
                .collect();
            let quad = q.herm_quad(&v);
            prop_assert!(quad.re >= -1e-9);
            prop_assert!(quad.im.abs() < 1e-9);
        }
    }

    // Compensated snapshots do not depend on which symbols were transmitted.
    #[test]
    fn compensation_removes_the_symbol_dependence(
        seed_a in 0u64..1000,
        seed_b in 0u64..1000,
    ) {
        prop_assume!(seed_a != seed_b);
        let cfg = fodc_cfg();
        let ccie = CcieConfig::<f64>::new(4, 4, 3).unwrap();
        let target = Target { range_m: 89.6, angle_deg: 10.55, velocity_mps: 20.42, reflection: C64::new(0.8, 0.3) };
        let scene = Scene {
            targets: vec![target],
            sensing_noise_power: 0.0,
            comm_noise_power: 0.0,
            comm_channel_power: 1.0,
            comm_user: None,
        };
        let mut frames = Vec::new();
        for seed in [seed_a, seed_b] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let bits: Vec<bool> = (0..ccie.bits_per_frame(cfg.n_tx)).map(|_| rand::Rng::random(&mut rng)).collect();
            frames.push(encode_frame(&bits, cfg.n_tx, &ccie).unwrap());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ya = synth_snapshot(&scene, &cfg, &frames[0], 1, &mut rng).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let yb = synth_snapshot(&scene, &cfg, &frames[1], 1, &mut rng).unwrap();
        let ca = fda_isac_core::scene::compensate(&ya, &frames[0]).unwrap();
        let cb = fda_isac_core::scene::compensate(&yb, &frames[1]).unwrap();
        for (x, y) in ca.iter().zip(&cb) {
            prop_assert!((x - y).norm() < 1e-9);
        }
    }

    // Encode followed by decode over a noiseless identity-like channel is
    // the identity on bits.
    #[test]
    fn modem_round_trips_noiselessly(
        bit_seed in 0u64..10_000,
        coeff_seed in 0u64..50,
        n_tx in 2usize..7,
        chan_seed in 0u64..1000,
    ) {
        let ccie = CcieConfig::<f64>::new(4, 4, coeff_seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(bit_seed);
        let bits: Vec<bool> = (0..ccie.bits_per_frame(n_tx)).map(|_| rand::Rng::random(&mut rng)).collect();
        let frame = encode_frame(&bits, n_tx, &ccie).unwrap();
        let mut crng = ChaCha8Rng::seed_from_u64(chan_seed);
        let channel = draw_rayleigh_channel(n_tx, 2, 1.0, &mut crng);
        let rx = fda_isac_core::scene::synth_comm_rx(&frame, &channel, 0.0, &mut crng).unwrap();
        let decoded = decode_frame(&rx, &channel, &ccie).unwrap();
        prop_assert_eq!(decoded, bits);
    }

    // The fast detector agrees with an exhaustive scan of all (index,
    // symbol) hypotheses.
    #[test]
    fn ml_detect_matches_exhaustive_search(
        seed in 0u64..2000,
        noise in 0.0f64..0.5,
    ) {
        let ccie = CcieConfig::<f64>::new(4, 4, 11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = 2usize;
        let channel: Vec<C64> = (0..u).map(|_| fda_isac_core::scene::complex_gaussian(&mut rng, 1.0)).collect();
        let j_true = 2usize; // 1-based
        let l_true = 3usize;
        let tx = ccie.coefficients()[j_true - 1] * ccie.alphabet()[l_true - 1];
        let received: Vec<C64> = channel
            .iter()
            .map(|h| h * tx + fda_isac_core::scene::complex_gaussian(&mut rng, noise))
            .collect();
        let det = ml_detect(&received, &channel, &ccie).unwrap();
        // Exhaustive oracle with the same (1,1)-first tie-break.
        let mut best = (1usize, 1usize);
        let mut best_cost = f64::INFINITY;
        for j in 1..=(1 << ccie.bits_index()).min(ccie.coeff_count()) {
            for l in 1..=ccie.qam_order() {
                let hyp = ccie.coefficients()[j - 1] * ccie.alphabet()[l - 1];
                let cost: f64 = received
                    .iter()
                    .zip(&channel)
                    .map(|(r, h)| (r - h * hyp).norm_sqr())
                    .sum();
                if cost < best_cost {
                    best_cost = cost;
                    best = (j, l);
                }
            }
        }
        prop_assert_eq!((det.index, det.symbol), best);
    }

    // Coefficient normalization holds for every draw: sum |c_j|^2 = J.
    #[test]
    fn coefficient_energy_is_normalized(seed in 0u64..5000, j_pow in 0u32..4) {
        let j = 1usize << (j_pow + 1); // 2, 4, 8, 16
        let ccie = CcieConfig::<f64>::new(j, 4, seed).unwrap();
        let energy: f64 = ccie.coefficients().iter().map(Complex::norm_sqr).sum();
        prop_assert!((energy - j as f64).abs() < 1e-9);
        // Pairwise products stay distinct, so index bits remain decodable.
        let prods: Vec<f64> = ccie.coefficients().iter().map(|c| c.norm_sqr()).collect();
        prop_assert!(prods.iter().all(|p| *p > 0.0));
    }
}
