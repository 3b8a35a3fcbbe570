//! Monte-Carlo experiment runners: sensing RMSE/hit-rate sweeps, the
//! communication BER sweep, and the analytic CRB/complexity/rate tables.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use fda_isac_core::array_model::ArrayConfig;
use fda_isac_core::ccie::{decode_frame, encode_frame, CcieConfig};
use fda_isac_core::scene::{draw_rayleigh_channel, synth_comm_rx, synth_cpi, Scene, Target};
use fda_isac_core::sensing::{
    coarse_bins, estimate_velocities_weighted, lcsse_complexity, lcsse_estimate,
    sample_covariance, ssmte_complexity, ssmte_estimate, SearchConfig, SensingOutput,
};
use fda_isac_core::theory::{bits_per_pulse_ccie, bits_per_pulse_fopim, ccie_ber_bound, crb};
use fda_isac_core::Error as CoreError;

use crate::scenario::Scenario;
use crate::CliError;

/// Deterministic per-trial random stream: the sweep point seeds the key and
/// the trial index selects the stream, so any partition of the trials
/// produces identical draws.
pub fn trial_rng(master_seed: u64, point_index: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(
        master_seed ^ (point_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    rng.set_stream(trial as u64 + 1);
    rng
}

pub fn snr_db_to_noise_power(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    Ssmte,
    Lcsse,
}

impl Estimator {
    pub fn label(self) -> &'static str {
        match self {
            Estimator::Ssmte => "ssmte",
            Estimator::Lcsse => "lcsse",
        }
    }
}

/// One row of `sense.csv`.
#[derive(Debug, Clone)]
pub struct SenseRow {
    pub snr_db: f64,
    pub estimator: &'static str,
    pub rmse_angle_deg: f64,
    pub rmse_range_m: f64,
    pub rmse_vel_mps: f64,
    pub hit_rate: f64,
    /// Root CRBs in display units (deg, m, m/s), averaged over targets.
    pub crb_angle: f64,
    pub crb_range: f64,
    pub crb_vel: f64,
}

/// Per-trial estimate triple after association, indexed like the truth.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    /// (angle error deg, range error m, velocity error m/s) per target.
    pub errors: Vec<(f64, f64, f64)>,
    pub hit: bool,
    pub shortfall: bool,
}

/// Minimum-total-cost one-to-one assignment between estimates and truth by
/// exhaustive permutation (scenes are tiny). Returns, per truth index, the
/// matched estimate index. Fewer estimates than truths leaves the most
/// expensive truths unmatched.
pub fn associate(estimates: &[(f64, f64, f64)], truth: &[(f64, f64, f64)]) -> Vec<Option<usize>> {
    let g = truth.len();
    let e = estimates.len();
    assert!(g <= 8, "permutation association is for small scenes");
    let cost = |t: &(f64, f64, f64), s: &(f64, f64, f64)| -> f64 {
        (t.0 - s.0).abs() + (t.1 - s.1).abs() + (t.2 - s.2).abs()
    };
    // Permute truth slots over estimate indices (with None padding when
    // estimates are scarce).
    let mut slots: Vec<Option<usize>> = (0..e.max(g)).map(|i| if i < e { Some(i) } else { None }).collect();
    let mut best: Option<(f64, Vec<Option<usize>>)> = None;
    permute(&mut slots, 0, g, &mut |assignment| {
        let total: f64 = assignment
            .iter()
            .take(g)
            .enumerate()
            .map(|(ti, s)| s.map_or(0.0, |si| cost(&truth[ti], &estimates[si])))
            .sum();
        if best.as_ref().map_or(true, |(b, _)| total < *b) {
            best = Some((total, assignment[..g].to_vec()));
        }
    });
    best.expect("at least one assignment").1
}

fn permute<F: FnMut(&[Option<usize>])>(slots: &mut Vec<Option<usize>>, at: usize, g: usize, visit: &mut F) {
    if at == g || at == slots.len() {
        visit(slots);
        return;
    }
    for i in at..slots.len() {
        slots.swap(at, i);
        permute(slots, at + 1, g, visit);
        slots.swap(at, i);
    }
}

fn search_config(scn: &Scenario) -> SearchConfig<f64> {
    SearchConfig {
        angle_min_deg: scn.experiment.angle_window_deg.0,
        angle_max_deg: scn.experiment.angle_window_deg.1,
        angle_grid: scn.experiment.grids.1,
        range_grid: scn.experiment.grids.0,
        refine_iters: scn.experiment.refine_iters,
    }
}

/// Runs one sensing trial end to end and scores it against the scene truth.
pub fn sensing_trial(
    scene: &Scene<f64>,
    cfg: &ArrayConfig<f64>,
    ccie: &CcieConfig<f64>,
    search: &SearchConfig<f64>,
    estimator: Estimator,
    rng: &mut ChaCha8Rng,
) -> Result<TrialOutcome, CoreError> {
    let set = synth_cpi(scene, cfg, ccie, rng)?;
    let truths: Vec<f64> = scene.targets.iter().map(|t| t.range_m).collect();
    let bins = coarse_bins(&truths, cfg);
    let cov = sample_covariance(&set.data)?;
    let out: SensingOutput<f64> = match estimator {
        Estimator::Ssmte => ssmte_estimate(&cov, cfg, &bins, search)?,
        Estimator::Lcsse => lcsse_estimate(&cov, cfg, &bins, search)?,
    };
    let positions: Vec<(f64, f64)> = out.estimates.iter().map(|e| (e.range_m, e.angle_deg)).collect();
    // Weight by the squared symbol moduli (whitening the compensation
    // division) and use the conjugate correlation, which stays coherent
    // over pulses where the plain variant self-cancels. A singular fit
    // (e.g. duplicate position estimates under range ambiguity) counts as
    // a miss, never an abort.
    let weights: Vec<Vec<f64>> = set
        .frames
        .iter()
        .map(|frame| {
            let symbols = frame.ccie_symbols();
            (0..cfg.mn()).map(|i| symbols[i % cfg.n_tx].norm_sqr()).collect()
        })
        .collect();
    let velocities = match estimate_velocities_weighted(&set.data, &weights, &positions, cfg, true) {
        Ok(v) => v,
        Err(_) => vec![f64::INFINITY; positions.len()],
    };
    let estimates: Vec<(f64, f64, f64)> = out
        .estimates
        .iter()
        .zip(&velocities)
        .map(|(e, v)| (e.angle_deg, e.range_m, *v))
        .collect();
    let truth: Vec<(f64, f64, f64)> = scene
        .targets
        .iter()
        .map(|t| (t.angle_deg, t.range_m, t.velocity_mps))
        .collect();
    let matching = associate(&estimates, &truth);
    let mut errors = Vec::with_capacity(truth.len());
    let mut hit = true;
    for (ti, slot) in matching.iter().enumerate() {
        match slot {
            Some(si) => {
                let e = (
                    (estimates[*si].0 - truth[ti].0).abs(),
                    (estimates[*si].1 - truth[ti].1).abs(),
                    (estimates[*si].2 - truth[ti].2).abs(),
                );
                // A target is hit when its summed mixed-unit error (degrees
                // + meters + meters/second) stays below 0.2; the trial is a
                // hit when every target is.
                hit &= e.0 + e.1 + e.2 < 0.2;
                errors.push(e);
            }
            None => {
                hit = false;
                errors.push((f64::INFINITY, f64::INFINITY, f64::INFINITY));
            }
        }
    }
    Ok(TrialOutcome { errors, hit, shortfall: out.shortfall })
}

/// Root CRBs per target in display units, averaged across targets.
fn crb_columns(scene: &Scene<f64>, cfg: &ArrayConfig<f64>, sigma1_sq: f64) -> (f64, f64, f64) {
    let mut acc = (0.0, 0.0, 0.0);
    let g = scene.targets.len().max(1);
    for t in &scene.targets {
        if let Ok(r) = crb(t, cfg, sigma1_sq) {
            acc.0 += r.crb_angle_rad2.sqrt().to_degrees();
            acc.1 += r.crb_range_m2.sqrt();
            acc.2 += r.crb_velocity_mps2.sqrt();
        }
    }
    (acc.0 / g as f64, acc.1 / g as f64, acc.2 / g as f64)
}

/// The paper's RMSE: per target, the root mean square over trials, averaged
/// across targets. Unmatched targets are excluded from the RMSE (they are
/// already punished through the hit rate); a parameter with no valid trial
/// yields NaN.
fn rmse(outcomes: &[TrialOutcome], pick: impl Fn(&(f64, f64, f64)) -> f64, g: usize) -> f64 {
    let mut acc = 0.0;
    for ti in 0..g {
        let mut sum = 0.0;
        let mut count = 0usize;
        for o in outcomes {
            let e = pick(&o.errors[ti]);
            if e.is_finite() {
                sum += e * e;
                count += 1;
            }
        }
        acc += if count > 0 { (sum / count as f64).sqrt() } else { f64::NAN };
    }
    acc / g as f64
}

pub fn run_sensing_experiment(scn: &Scenario) -> Result<Vec<SenseRow>, CliError> {
    let cfg = scn.array_config()?;
    let ccie = scn.ccie_config()?;
    let search = search_config(scn);
    let trials = scn.experiment.trials;
    let mut rows = Vec::new();
    for (pi, &snr_db) in scn.experiment.snr_grid_db.iter().enumerate() {
        let sigma1 = snr_db_to_noise_power(snr_db);
        let scene = scn.scene(sigma1, sigma1);
        for (ei, estimator) in [Estimator::Ssmte, Estimator::Lcsse].into_iter().enumerate() {
            let outcomes: Vec<TrialOutcome> = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = trial_rng(scn.experiment.master_seed, pi * 2 + ei, trial);
                    sensing_trial(&scene, &cfg, &ccie, &search, estimator, &mut rng)
                })
                .collect::<Result<_, _>>()
                .map_err(CliError::from_core_runtime)?;
            let g = scene.targets.len();
            let hits = outcomes.iter().filter(|o| o.hit).count();
            let (crb_angle, crb_range, crb_vel) = crb_columns(&scene, &cfg, sigma1);
            rows.push(SenseRow {
                snr_db,
                estimator: estimator.label(),
                rmse_angle_deg: rmse(&outcomes, |e| e.0, g),
                rmse_range_m: rmse(&outcomes, |e| e.1, g),
                rmse_vel_mps: rmse(&outcomes, |e| e.2, g),
                hit_rate: hits as f64 / trials as f64,
                crb_angle,
                crb_range,
                crb_vel,
            });
        }
    }
    Ok(rows)
}

/// One row of `ber.csv`.
#[derive(Debug, Clone)]
pub struct BerRow {
    pub snr_db: f64,
    pub ber_sim: f64,
    pub ber_bound: f64,
    pub p_im: f64,
    pub p_qam: f64,
    /// Simulated split kept alongside the totals.
    pub ber_index_sim: f64,
    pub ber_symbol_sim: f64,
    pub bits: u64,
}

/// Per-point Monte-Carlo BER with per-class (index vs constellation) error
/// counts, against the analytic bound.
pub fn run_comm_ber(scn: &Scenario) -> Result<Vec<BerRow>, CliError> {
    let cfg = scn.array_config()?;
    let ccie = scn.ccie_config()?;
    let u = scn.scene.comm_rx_antennas;
    let sigma_c = scn.scene.comm_channel_power;
    let n_tx = cfg.n_tx;
    let trials = scn.experiment.trials;
    let mut rows = Vec::new();
    for (pi, &snr_db) in scn.experiment.snr_grid_db.iter().enumerate() {
        let sigma2 = snr_db_to_noise_power(snr_db);
        let totals = (0..trials)
            .into_par_iter()
            .map(|trial| -> Result<(u64, u64, u64), CoreError> {
                let mut rng = trial_rng(scn.experiment.master_seed, pi, trial);
                let bits: Vec<bool> = (0..ccie.bits_per_frame(n_tx)).map(|_| rand::Rng::random(&mut rng)).collect();
                let frame = encode_frame(&bits, n_tx, &ccie)?;
                let h = draw_rayleigh_channel(n_tx, u, sigma_c, &mut rng);
                let rx = synth_comm_rx(&frame, &h, sigma2, &mut rng)?;
                let decoded = decode_frame(&rx, &h, &ccie)?;
                let mut idx_err = 0u64;
                let mut sym_err = 0u64;
                let per_antenna = ccie.bits_per_antenna();
                for (b, (s, g)) in bits.iter().zip(&decoded).enumerate() {
                    if s != g {
                        if b % per_antenna < ccie.bits_index() {
                            idx_err += 1;
                        } else {
                            sym_err += 1;
                        }
                    }
                }
                Ok((idx_err, sym_err, (per_antenna * n_tx) as u64))
            })
            .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))
            .map_err(CliError::from_core_runtime)?;
        let (idx_err, sym_err, bits) = totals;
        let bound = ccie_ber_bound(&ccie, n_tx, u, sigma_c, sigma2).map_err(CliError::from_core_runtime)?;
        let idx_bits = bits as f64 * ccie.bits_index() as f64 / ccie.bits_per_antenna() as f64;
        let sym_bits = bits as f64 * ccie.bits_symbol() as f64 / ccie.bits_per_antenna() as f64;
        rows.push(BerRow {
            snr_db,
            ber_sim: (idx_err + sym_err) as f64 / bits as f64,
            ber_bound: bound.p_total_mapped,
            p_im: bound.p_im,
            p_qam: bound.p_qam,
            ber_index_sim: if idx_bits > 0.0 { idx_err as f64 / idx_bits } else { 0.0 },
            ber_symbol_sim: sym_err as f64 / sym_bits,
            bits,
        });
    }
    Ok(rows)
}

/// One row of `crb.csv` (single-target bounds of the first scene target).
#[derive(Debug, Clone)]
pub struct CrbRow {
    pub snr_db: f64,
    pub crb_range_m2: f64,
    pub crb_angle_deg2: f64,
    pub crb_vel_mps2: f64,
    pub root_crb_range_m: f64,
    pub root_crb_angle_deg: f64,
    pub root_crb_vel_mps: f64,
}

pub fn run_crb_table(scn: &Scenario) -> Result<Vec<CrbRow>, CliError> {
    let cfg = scn.array_config()?;
    let target: Target<f64> = scn
        .scene(1.0, 1.0)
        .targets
        .first()
        .cloned()
        .ok_or_else(|| CliError::Config("crb table needs at least one target".into()))?;
    scn.experiment
        .snr_grid_db
        .iter()
        .map(|&snr_db| {
            let sigma1 = snr_db_to_noise_power(snr_db);
            let r = crb(&target, &cfg, sigma1).map_err(CliError::from_core_runtime)?;
            let deg2 = r.crb_angle_rad2 * (180.0 / std::f64::consts::PI).powi(2);
            Ok(CrbRow {
                snr_db,
                crb_range_m2: r.crb_range_m2,
                crb_angle_deg2: deg2,
                crb_vel_mps2: r.crb_velocity_mps2,
                root_crb_range_m: r.crb_range_m2.sqrt(),
                root_crb_angle_deg: deg2.sqrt(),
                root_crb_vel_mps: r.crb_velocity_mps2.sqrt(),
            })
        })
        .collect()
}

/// One row of `complexity.csv`.
#[derive(Debug, Clone)]
pub struct ComplexityRow {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub g: usize,
    pub s_r: usize,
    pub s_theta: usize,
    pub ssmte_mults: f64,
    pub lcsse_mults: f64,
    pub ratio: f64,
}

/// Complexity over an antenna sweep (N = M in {4, 6, 8, 10}) plus the
/// scenario's own configuration.
pub fn run_complexity_table(scn: &Scenario) -> Result<Vec<ComplexityRow>, CliError> {
    let cfg = scn.array_config()?;
    let k = cfg.pulses_per_cpi;
    let g = scn.scene.targets.len().max(1);
    let (s_r, s_theta) = scn.experiment.grids;
    let mut dims: Vec<(usize, usize)> = vec![(4, 4), (6, 6), (8, 8), (10, 10)];
    if !dims.contains(&(cfg.n_tx, cfg.n_rx)) {
        dims.push((cfg.n_tx, cfg.n_rx));
    }
    Ok(dims
        .into_iter()
        .map(|(n, m)| {
            let ssmte = ssmte_complexity(n, m, k, g, g, s_r, s_theta);
            let lcsse = lcsse_complexity(n, m, k, g, g, s_r, s_theta);
            ComplexityRow { n, m, k, g, s_r, s_theta, ssmte_mults: ssmte, lcsse_mults: lcsse, ratio: ssmte / lcsse }
        })
        .collect())
}

/// One row of `rate.csv`.
#[derive(Debug, Clone)]
pub struct RateRow {
    pub n_tx: usize,
    pub ccie_bits: u64,
    pub fopim_bits: u64,
}

pub fn run_rate_table(scn: &Scenario) -> Result<Vec<RateRow>, CliError> {
    let l = scn.ccie.qam_order;
    (2..=16usize)
        .map(|n| {
            Ok(RateRow {
                n_tx: n,
                ccie_bits: bits_per_pulse_ccie(n, n, l).map_err(CliError::from_core_config)?,
                fopim_bits: bits_per_pulse_fopim(n, l).map_err(CliError::from_core_config)?,
            })
        })
        .collect()
}

/// Offset-design check result for `fodc-check`.
#[derive(Debug, Clone)]
pub struct FodcRow {
    pub period_m: f64,
    pub ct_half_m: f64,
    pub max_range_m: f64,
    pub pass: bool,
}

pub fn run_fodc_check(scn: &Scenario) -> Result<FodcRow, CliError> {
    let cfg = scn.array_config()?;
    let report = fda_isac_core::array_model::validate_fodc(&cfg, scn.max_range_m());
    Ok(FodcRow {
        period_m: report.period_m,
        ct_half_m: report.ct_half_m,
        max_range_m: report.max_range_m,
        pass: report.pass,
    })
}
