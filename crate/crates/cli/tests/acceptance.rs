//! End-to-end acceptance gates. Each test prints a single PASS/FAIL line
//! (visible with `--nocapture`, and always on failure) and asserts the gate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::function::erf::erfc;

use fda_isac_core::array_model::{parse_offsets, tx_range_steering, ArrayConfig};
use fda_isac_core::ccie::{decode_frame, encode_frame, ml_detect, CcieConfig};
use fda_isac_core::scene::{
    compensate, complex_gaussian, draw_rayleigh_channel, synth_comm_rx, synth_cpi, synth_snapshot,
    Scene, Target,
};
use fda_isac_core::sensing::{
    coarse_bins, estimate_velocities, lcsse_complexity, lcsse_estimate, sample_covariance,
    ssmte_complexity, ssmte_estimate, SearchConfig,
};
use fda_isac_core::theory::{
    bits_per_pulse_ccie, bits_per_pulse_fopim, ccie_ber_bound, crb, fisher_matrix,
    fisher_matrix_assembled, pep,
};
use fda_isac_core::C64;

use fda_isac_cli::experiments::{sensing_trial, trial_rng, Estimator};

fn report(criterion: usize, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {criterion:2}: {verdict} - {detail}");
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn array_config(offsets: &[&str], k: usize) -> ArrayConfig<f64> {
    let eps = parse_offsets(offsets).unwrap();
    ArrayConfig::new(6, 6, 1.0e10, 2.0e6, 0.03, 0.03, eps, 60.0e-6, k, 20.0e-6).unwrap()
}

fn fodc_cfg(k: usize) -> ArrayConfig<f64> {
    array_config(&["0", "1", "2", "3.17", "4.2", "5.2"], k)
}

fn lfo_cfg(k: usize) -> ArrayConfig<f64> {
    array_config(&["0", "1", "2", "3", "4", "5"], k)
}

fn single_target_scene(range_m: f64, angle_deg: f64, velocity_mps: f64, noise: f64) -> Scene<f64> {
    Scene {
        targets: vec![Target { range_m, angle_deg, velocity_mps, reflection: C64::new(1.0, 0.0) }],
        sensing_noise_power: noise,
        comm_noise_power: noise,
        comm_channel_power: 1.0,
        comm_user: None,
    }
}

/// Brute-force period scan: the range (above 1 m) whose transmit steering
/// vector is closest to the zero-range steering vector.
fn scan_period(cfg: &ArrayConfig<f64>, hi_m: f64, step_m: f64) -> f64 {
    let reference = tx_range_steering(0.0, cfg);
    let mut best = (f64::INFINITY, 0.0);
    let mut r = 1.0;
    while r <= hi_m {
        let a = tx_range_steering(r, cfg);
        let mismatch: f64 = a
            .entries
            .iter()
            .zip(&reference.entries)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum();
        if mismatch < best.0 {
            best = (mismatch, r);
        }
        r += step_m;
    }
    best.1
}

#[test]
fn criterion_01_range_period_reproduction() {
    let start = std::time::Instant::now();
    let linear = scan_period(&lfo_cfg(4), 100.0, 0.01);
    let fodc = scan_period(&fodc_cfg(4), 7600.0, 0.01);
    let elapsed = start.elapsed().as_secs_f64();
    let pass = (linear - 75.0).abs() <= 0.0101 && (fodc - 7500.0).abs() <= 0.0101 && elapsed < 1.0;
    report(
        1,
        pass,
        &format!("measured periods {linear:.2} m (linear) / {fodc:.2} m (fractional) in {elapsed:.2} s"),
    );
}

fn hit_rate(cfg: &ArrayConfig<f64>, trials: usize, snr_db: f64, seed_salt: usize) -> f64 {
    // Coefficient draw with low `E[1/|c|^2]`, keeping the compensation
    // division from inflating the sensing noise floor.
    let ccie = CcieConfig::<f64>::new(4, 4, 1).unwrap();
    let noise = 10f64.powf(-snr_db / 10.0);
    let scene = Scene {
        targets: vec![
            Target { range_m: 40.9, angle_deg: 10.55, velocity_mps: 8.62, reflection: C64::new(1.0, 0.0) },
            Target { range_m: 89.6, angle_deg: 10.55, velocity_mps: 20.42, reflection: C64::new(1.0, 0.0) },
            Target { range_m: 115.9, angle_deg: 32.01, velocity_mps: 36.5, reflection: C64::new(1.0, 0.0) },
        ],
        sensing_noise_power: noise,
        comm_noise_power: noise,
        comm_channel_power: 1.0,
        comm_user: None,
    };
    let search = SearchConfig {
        angle_min_deg: 0.0,
        angle_max_deg: 45.0,
        angle_grid: 300,
        range_grid: 300,
        refine_iters: 3,
    };
    let hits: usize = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(1, seed_salt, trial);
            let out = sensing_trial(&scene, cfg, &ccie, &search, Estimator::Ssmte, &mut rng).unwrap();
            usize::from(out.hit)
        })
        .sum();
    hits as f64 / trials as f64
}

#[test]
fn criterion_02_ambiguity_reproduction() {
    let trials = 200;
    let fodc = hit_rate(&fodc_cfg(200), trials, 5.0, 0);
    let lfo = hit_rate(&lfo_cfg(200), trials, 5.0, 1);
    let pass = fodc >= 0.9 && lfo <= 0.05;
    report(
        2,
        pass,
        &format!("three-target hit rate at 5 dB over {trials} trials: fractional offsets {fodc:.3}, linear offsets {lfo:.3}"),
    );
}

#[test]
fn criterion_03_estimator_equivalence() {
    let cfg = fodc_cfg(200);
    let ccie = CcieConfig::<f64>::new(4, 4, 7).unwrap();
    let search = SearchConfig {
        angle_min_deg: 0.0,
        angle_max_deg: 45.0,
        angle_grid: 300,
        range_grid: 300,
        refine_iters: 0,
    };
    let range_step = cfg.range_bin_m() / search.range_grid as f64;
    let angle_step = (search.angle_max_deg - search.angle_min_deg) / search.angle_grid as f64;
    let cases: Vec<(u64, f64)> = (0..20u64)
        .flat_map(|scene_id| [0.0, 5.0, 10.0].map(|snr| (scene_id, snr)))
        .collect();
    let agreements: usize = cases
        .par_iter()
        .map(|&(scene_id, snr_db)| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + scene_id);
            let range = rng.random_range(5.0..145.0);
            let angle = rng.random_range(2.0..43.0);
            let vel = rng.random_range(-100.0..100.0);
            let noise = 10f64.powf(-snr_db / 10.0);
            let scene = single_target_scene(range, angle, vel, noise);
            let mut drng = ChaCha8Rng::seed_from_u64(5000 + scene_id * 17 + snr_db as u64);
            let set = synth_cpi(&scene, &cfg, &ccie, &mut drng).unwrap();
            let cov = sample_covariance(&set.data).unwrap();
            let bins = coarse_bins(&[range], &cfg);
            let a = ssmte_estimate(&cov, &cfg, &bins, &search).unwrap();
            let b = lcsse_estimate(&cov, &cfg, &bins, &search).unwrap();
            let (ea, eb) = (&a.estimates[0], &b.estimates[0]);
            let close = (ea.range_m - eb.range_m).abs() <= range_step + 1e-9
                && (ea.angle_deg - eb.angle_deg).abs() <= angle_step + 1e-9;
            usize::from(close)
        })
        .sum();
    let frac = agreements as f64 / cases.len() as f64;
    report(
        3,
        frac >= 0.95,
        &format!("SSMTE and LCSSE within one grid step in {agreements}/{} single-target cases ({frac:.3})", cases.len()),
    );
}

#[test]
fn criterion_04_velocity_accuracy() {
    let cfg = fodc_cfg(200);
    let ccie = CcieConfig::<f64>::new(4, 4, 7).unwrap();

    // Noiseless recovery from the true position.
    let scene = single_target_scene(40.9, 10.55, 8.62, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let set = synth_cpi(&scene, &cfg, &ccie, &mut rng).unwrap();
    let v = estimate_velocities(&set.data, &[(40.9, 10.55)], &cfg, true).unwrap()[0];
    let noiseless_err = (v - 8.62).abs();

    // Full pipeline at SNR 0 dB, 200 trials.
    let trials = 200;
    let noisy = single_target_scene(40.9, 10.55, 8.62, 1.0);
    let search = SearchConfig {
        angle_min_deg: 0.0,
        angle_max_deg: 45.0,
        angle_grid: 200,
        range_grid: 200,
        refine_iters: 4,
    };
    let sq_sum: f64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(4, 0, trial);
            let out = sensing_trial(&noisy, &cfg, &ccie, &search, Estimator::Ssmte, &mut rng).unwrap();
            let e = out.errors[0].2;
            e * e
        })
        .sum();
    let rmse_v = (sq_sum / trials as f64).sqrt();
    let pass = noiseless_err < 1e-6 && rmse_v <= 3.0 * 0.026 && rmse_v >= 0.026 / 3.0;
    report(
        4,
        pass,
        &format!("noiseless velocity error {noiseless_err:.2e} m/s; SNR 0 dB velocity RMSE {rmse_v:.4} m/s vs reference 0.026 m/s"),
    );
}

#[test]
fn criterion_05_crb_sanity() {
    let cfg = fodc_cfg(200);
    let ccie = CcieConfig::<f64>::new(4, 4, 7).unwrap();
    let target = Target { range_m: 40.9, angle_deg: 10.55, velocity_mps: 8.62, reflection: C64::new(1.0, 0.0) };
    let search = SearchConfig {
        angle_min_deg: 0.0,
        angle_max_deg: 45.0,
        angle_grid: 200,
        range_grid: 200,
        refine_iters: 6,
    };
    let trials = 150;
    let mut pass = true;
    let mut detail = String::new();
    for (pi, snr_db) in [0.0, 10.0, 20.0].into_iter().enumerate() {
        let noise = 10f64.powf(-snr_db / 10.0);
        let scene = single_target_scene(target.range_m, target.angle_deg, target.velocity_mps, noise);
        let sums: (f64, f64) = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = trial_rng(5, pi, trial);
                let out = sensing_trial(&scene, &cfg, &ccie, &search, Estimator::Ssmte, &mut rng).unwrap();
                (out.errors[0].0.powi(2), out.errors[0].1.powi(2))
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let rmse_angle = (sums.0 / trials as f64).sqrt();
        let rmse_range = (sums.1 / trials as f64).sqrt();
        let bound = crb(&target, &cfg, noise).unwrap();
        let root_angle = bound.crb_angle_rad2.sqrt().to_degrees();
        let root_range = bound.crb_range_m2.sqrt();
        // Above the bound at every sampled SNR (5% slack for trial noise).
        pass &= rmse_angle >= 0.95 * root_angle && rmse_range >= 0.95 * root_range;
        if snr_db == 20.0 {
            // Within 3 dB of the bound at the top of the sweep.
            let margin = 10f64.powf(3.0 / 20.0);
            pass &= rmse_angle <= margin * root_angle && rmse_range <= margin * root_range;
        }
        detail.push_str(&format!(
            "[{snr_db} dB: angle {rmse_angle:.2e}/{root_angle:.2e} deg, range {rmse_range:.2e}/{root_range:.2e} m] "
        ));
    }
    // Slope check: tenfold SNR must scale the bound by 1/10 within 2%.
    let low = crb(&target, &cfg, 1.0).unwrap();
    let high = crb(&target, &cfg, 0.1).unwrap();
    for (a, b) in [
        (low.crb_range_m2, high.crb_range_m2),
        (low.crb_angle_rad2, high.crb_angle_rad2),
        (low.crb_velocity_mps2, high.crb_velocity_mps2),
    ] {
        let slope = (a / b).log10();
        pass &= (slope - 1.0).abs() <= 0.02;
    }
    report(5, pass, &format!("RMSE vs root-CRB {detail}; slope -1 per decade verified"));
}

fn simulate_ber_point(ccie: &CcieConfig<f64>, n_tx: usize, u: usize, sigma2: f64, frames: usize, salt: usize) -> f64 {
    let errors: u64 = (0..frames)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(6, salt, trial);
            let bits: Vec<bool> = (0..ccie.bits_per_frame(n_tx)).map(|_| rng.random()).collect();
            let frame = encode_frame(&bits, n_tx, ccie).unwrap();
            let h = draw_rayleigh_channel(n_tx, u, 1.0, &mut rng);
            let rx = synth_comm_rx(&frame, &h, sigma2, &mut rng).unwrap();
            let decoded = decode_frame(&rx, &h, ccie).unwrap();
            bits.iter().zip(&decoded).filter(|(a, b)| a != b).count() as u64
        })
        .sum();
    errors as f64 / (frames * ccie.bits_per_frame(n_tx)) as f64
}

#[test]
fn criterion_06_ber_bound() {
    let ccie = CcieConfig::<f64>::new(4, 4, 7).unwrap();
    let (n_tx, u) = (4usize, 2usize);
    let bits_per_frame = ccie.bits_per_frame(n_tx);
    let mut pass = true;
    let mut detail = String::new();
    for (pi, snr_db) in (0..=30).step_by(5).enumerate() {
        let sigma2 = 10f64.powf(-(snr_db as f64) / 10.0);
        let bound = ccie_ber_bound(&ccie, n_tx, u, 1.0, sigma2).unwrap().p_total_mapped;
        // At least 1e5 bits per point, scaled up so ~200 errors are expected
        // even deep on the waterfall.
        let want_bits = (200.0 / bound.max(1e-9)).max(1e5).min(4e7);
        let frames = (want_bits / bits_per_frame as f64).ceil() as usize;
        let sim = simulate_ber_point(&ccie, n_tx, u, sigma2, frames, pi);
        let bits = (frames * bits_per_frame) as f64;
        let sigma_count = (bound * (1.0 - bound) / bits).sqrt();
        pass &= sim <= bound + 3.0 * sigma_count;
        if sim <= 1e-2 && sim > 0.0 {
            pass &= sim >= bound / 2.0 && sim <= 2.0 * bound;
        }
        detail.push_str(&format!("[{snr_db} dB: sim {sim:.3e} vs bound {bound:.3e}] "));
    }
    report(6, pass, &format!("(N,J,L,U)=(4,4,4,2) sweep {detail}"));
}

/// SNR (dB) at which the analytic total-BER bound crosses `target`,
/// log-interpolated on a fine grid.
fn snr_at_ber(ccie: &CcieConfig<f64>, target: f64) -> f64 {
    let mut prev: Option<(f64, f64)> = None;
    let mut snr = 0.0;
    while snr <= 100.0 {
        let p = ccie_ber_bound(ccie, 4, 2, 1.0, 10f64.powf(-snr / 10.0)).unwrap().p_total;
        if p <= target {
            if let Some((s0, p0)) = prev {
                let t = (p0.ln() - target.ln()) / (p0.ln() - p.ln());
                return s0 + t * (snr - s0);
            }
            return snr;
        }
        prev = Some((snr, p));
        snr += 0.05;
    }
    f64::NAN
}

#[test]
fn criterion_07_j_scaling() {
    // The shift is realization-dependent (it hinges on the random minimum
    // coefficient-product distance), so pin the ensemble median over seeds.
    let mut shifts: Vec<f64> = (0..24u64)
        .map(|seed| {
            let j4 = CcieConfig::<f64>::new(4, 4, seed).unwrap();
            let j8 = CcieConfig::<f64>::new(8, 4, seed).unwrap();
            snr_at_ber(&j8, 1e-3) - snr_at_ber(&j4, 1e-3)
        })
        .collect();
    shifts.sort_by(f64::total_cmp);
    let median = 0.5 * (shifts[11] + shifts[12]);
    let pass = (median - 4.0).abs() <= 1.0 && shifts.iter().all(|s| s.is_finite());
    report(
        7,
        pass,
        &format!("J 4->8 shift at BER 1e-3: ensemble median {median:.2} dB over 24 coefficient draws"),
    );
}

#[test]
fn criterion_08_complexity_formulas() {
    let ssmte = ssmte_complexity(6, 6, 200, 3, 3, 1000, 1000);
    let lcsse = lcsse_complexity(6, 6, 200, 3, 3, 1000, 1000);
    // Independent integer evaluation of both operation counts.
    let (n, m, k, g, gp, sr, st) = (6u64, 6u64, 200u64, 3u64, 3u64, 1000u64, 1000u64);
    let nm = n * m;
    let vel = 3 * g * g * g + 2 * g * g * (k + nm - 1) + g * nm * k + 4 * g;
    let ssmte_int = k * nm * nm + nm * nm * nm + sr * st * gp * (nm * nm + nm + 1) + vel;
    let n1 = n - 1;
    let lcsse_int =
        k * nm * nm + nm * nm * nm + st * (n1 * n1 * n1 + n1 * n1 + n) + sr * g * gp * (nm * nm + nm + 1) + vel;
    let ratio = ssmte / lcsse;
    let pass = ssmte == ssmte_int as f64
        && lcsse == lcsse_int as f64
        && ssmte == 3_999_331_779.0
        && lcsse == 12_484_779.0
        && (100.0..=1000.0).contains(&ratio);
    report(
        8,
        pass,
        &format!("SSMTE {ssmte} vs LCSSE {lcsse} multiplications, ratio {ratio:.1}"),
    );
}

#[test]
fn criterion_09_rate_table() {
    let mut pass = true;
    for n in 2..=16 {
        let ccie = bits_per_pulse_ccie(n, n, 4).unwrap();
        let fopim = bits_per_pulse_fopim(n, 4).unwrap();
        pass &= ccie > fopim;
    }
    report(9, pass, "CCIE bits per pulse exceed the index-permutation baseline for N in [2, 16]");
}

fn pep_quadrature(sigma_kappa_sq: f64, sigma2_sq: f64, u: usize) -> f64 {
    let q = |z: f64| 0.5 * erfc(z / 2f64.sqrt());
    let ln_gamma_u: f64 = (1..u).map(|i| (i as f64).ln()).sum();
    let density = |x: f64| {
        ((u as f64 - 1.0) * x.ln() - x / (2.0 * sigma_kappa_sq)
            - (u as f64) * (2.0 * sigma_kappa_sq).ln()
            - ln_gamma_u)
            .exp()
    };
    let hi = 2.0 * sigma_kappa_sq * (40.0 + 10.0 * u as f64);
    let n = 200_000;
    let h = hi / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let x = (i as f64) * h;
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let f = if x == 0.0 {
            if u == 1 {
                0.5 / (2.0 * sigma_kappa_sq)
            } else {
                0.0
            }
        } else {
            q((x / (2.0 * sigma2_sq)).sqrt()) * density(x)
        };
        acc += w * f;
    }
    acc * h / 3.0
}

#[test]
fn criterion_10_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cfg = fodc_cfg(64);
    let mut pass = true;

    // Steering unit modulus and periodicity.
    for _ in 0..50 {
        let r: f64 = rng.random_range(0.0..9000.0);
        let th: f64 = rng.random_range(-1.4..1.4);
        let a = fda_isac_core::array_model::joint_steering(r, th, &cfg);
        pass &= a.entries.iter().all(|e| (e.norm() - 1.0).abs() < 1e-12);
        let b = tx_range_steering(r, &cfg);
        let c = tx_range_steering(r + 7500.0, &cfg);
        pass &= b.entries.iter().zip(&c.entries).all(|(x, y)| (x - y).norm() < 1e-8);
    }

    // Covariance Hermitian PSD.
    let ccie = CcieConfig::<f64>::new(4, 4, 3).unwrap();
    for seed in 0..5u64 {
        let scene = single_target_scene(40.9, 10.55, 8.62, 0.7);
        let mut srng = ChaCha8Rng::seed_from_u64(seed);
        let set = synth_cpi(&scene, &cfg, &ccie, &mut srng).unwrap();
        let cov = sample_covariance(&set.data).unwrap();
        let q = &cov.matrix;
        for r in 0..q.rows() {
            for c in 0..q.cols() {
                pass &= (q[(r, c)] - q[(c, r)].conj()).norm() < 1e-9;
            }
        }
        let v: Vec<C64> = (0..q.rows()).map(|_| complex_gaussian(&mut srng, 1.0)).collect();
        pass &= q.herm_quad(&v).re >= -1e-9;
    }

    // Compensation symbol-independence.
    for seed in 0..5u64 {
        let scene = single_target_scene(89.6, 10.55, 20.42, 0.0);
        let mut frames = Vec::new();
        for s in [seed * 2, seed * 2 + 1] {
            let mut frng = ChaCha8Rng::seed_from_u64(77 + s);
            let bits: Vec<bool> = (0..ccie.bits_per_frame(cfg.n_tx)).map(|_| frng.random()).collect();
            frames.push(encode_frame(&bits, cfg.n_tx, &ccie).unwrap());
        }
        let mut r0 = ChaCha8Rng::seed_from_u64(0);
        let ya = synth_snapshot(&scene, &cfg, &frames[0], 1, &mut r0).unwrap();
        let mut r0 = ChaCha8Rng::seed_from_u64(0);
        let yb = synth_snapshot(&scene, &cfg, &frames[1], 1, &mut r0).unwrap();
        let ca = compensate(&ya, &frames[0]).unwrap();
        let cb = compensate(&yb, &frames[1]).unwrap();
        pass &= ca.iter().zip(&cb).all(|(x, y)| (x - y).norm() < 1e-9);
    }

    // Encode/decode round trip and ML-oracle equivalence.
    for seed in 0..50u64 {
        let mut r = ChaCha8Rng::seed_from_u64(200 + seed);
        let bits: Vec<bool> = (0..ccie.bits_per_frame(4)).map(|_| r.random()).collect();
        let frame = encode_frame(&bits, 4, &ccie).unwrap();
        let h = draw_rayleigh_channel(4, 2, 1.0, &mut r);
        let rx = synth_comm_rx(&frame, &h, 0.0, &mut r).unwrap();
        pass &= decode_frame(&rx, &h, &ccie).unwrap() == bits;

        let channel: Vec<C64> = (0..2).map(|_| complex_gaussian(&mut r, 1.0)).collect();
        let tx = ccie.coefficients()[1] * ccie.alphabet()[2];
        let received: Vec<C64> = channel
            .iter()
            .map(|h| h * tx + complex_gaussian(&mut r, 0.2))
            .collect();
        let det = ml_detect(&received, &channel, &ccie).unwrap();
        let mut best = (1usize, 1usize, f64::INFINITY);
        for j in 1..=ccie.coeff_count().min(1 << ccie.bits_index()) {
            for l in 1..=ccie.qam_order() {
                let hyp = ccie.coefficients()[j - 1] * ccie.alphabet()[l - 1];
                let cost: f64 = received.iter().zip(&channel).map(|(y, h)| (y - h * hyp).norm_sqr()).sum();
                if cost < best.2 {
                    best = (j, l, cost);
                }
            }
        }
        pass &= (det.index, det.symbol) == (best.0, best.1);
    }

    // Fisher dual-path agreement.
    for seed in 0..10u64 {
        let mut r = ChaCha8Rng::seed_from_u64(400 + seed);
        let target = Target {
            range_m: r.random_range(5.0..140.0),
            angle_deg: r.random_range(-60.0..60.0),
            velocity_mps: r.random_range(-100.0..100.0),
            reflection: C64::new(r.random_range(0.2..1.5), r.random_range(-1.0..1.0)),
        };
        let fa = fisher_matrix(&target, &cfg, 0.5).unwrap();
        let fb = fisher_matrix_assembled(&target, &cfg, 0.5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let scale = fa.f[i][j].abs().max(1.0);
                pass &= (fa.f[i][j] - fb.f[i][j]).abs() / scale < 1e-9;
            }
        }
    }

    // Pairwise error probability vs direct quadrature.
    let mut r = ChaCha8Rng::seed_from_u64(900);
    for _ in 0..5 {
        let sk = r.random_range(0.05..4.0);
        let s2 = r.random_range(0.2..2.0);
        let u = r.random_range(1..5usize);
        pass &= (pep(sk, s2, u) - pep_quadrature(sk, s2, u)).abs() < 1e-6;
    }

    report(10, pass, "steering/covariance/compensation/modem/Fisher/PEP property suites all green");
}
