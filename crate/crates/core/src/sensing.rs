//! Multi-target sensing: sample covariance, the joint range-angle spatial
//! spectrum (SSMTE), its Schur-complement low-complexity variant (LCSSE),
//! peak extraction with local refinement, LS velocity estimation and
//! multiplication-count complexity models.
//!
//! Both estimators share the reduction of the Capon quadratic form to an
//! `N x N` kernel per angle: with `B(theta) = a_R(theta) (x) diag(a_T(theta))`
//! (an `MN x N` matrix whose columns have disjoint support),
//! `a_TR^H Q^-1 a_TR = a_T(R)^H Z(theta) a_T(R)` where
//! `Z(theta) = B^H Q^-1 B`, so the range scan at a fixed angle costs `O(N^2)`
//! per point instead of `O(M^2 N^2)`.

use num_complex::Complex;
use num_traits::Zero;

use crate::array_model::{rx_angle_steering, tx_angle_steering, tx_range_steering, ArrayConfig};
use crate::linalg::CMat;
use crate::scalar::{speed_of_light, Scalar};
use crate::Error;

/// Pivot-ratio threshold above which the sample covariance gets diagonal
/// loading before inversion.
const CONDITION_LIMIT: f64 = 1e12;
/// Relative diagonal loading level (times the mean diagonal power).
const LOADING_LEVEL: f64 = 1e-10;

/// Sample covariance together with its (possibly loaded) inverse.
#[derive(Debug, Clone)]
pub struct CovarianceEstimate<T> {
    pub matrix: CMat<T>,
    pub inverse: CMat<T>,
    /// True when diagonal loading was needed to invert.
    pub loaded: bool,
}

impl<T: Scalar> CovarianceEstimate<T> {
    /// Wraps an externally supplied covariance, loading the diagonal only if
    /// the matrix is numerically singular.
    pub fn from_matrix(q: CMat<T>) -> Result<Self, Error> {
        let n = q.rows();
        if n != q.cols() {
            return Err(Error::Shape("covariance must be square".into()));
        }
        let well_conditioned = match q.lu() {
            Ok(lu) => {
                if lu.pivot_condition() <= T::of(CONDITION_LIMIT) {
                    Some(lu.inverse()?)
                } else {
                    None
                }
            }
            Err(_) => None,
        };
        if let Some(inverse) = well_conditioned {
            return Ok(Self { matrix: q, inverse, loaded: false });
        }
        let delta = T::of(LOADING_LEVEL) * q.trace_real() / T::of(n as f64);
        let mut loaded_q = q.clone();
        loaded_q.add_scaled_identity(delta);
        let inverse = loaded_q.inverse()?;
        Ok(Self { matrix: q, inverse, loaded: true })
    }
}

/// `Q = (1/K) sum_k y~^k (y~^k)^H` from the `MN x K` compensated data.
pub fn sample_covariance<T: Scalar>(data: &CMat<T>) -> Result<CovarianceEstimate<T>, Error> {
    let (mn, k) = (data.rows(), data.cols());
    if k == 0 {
        return Err(Error::Shape("covariance needs at least one snapshot".into()));
    }
    let mut q = CMat::zeros(mn, mn);
    let scale = T::one() / T::of(k as f64);
    for s in 0..k {
        for r in 0..mn {
            let yr = data[(r, s)];
            for c in 0..mn {
                q[(r, c)] = q[(r, c)] + yr * data[(c, s)].conj() * scale;
            }
        }
    }
    CovarianceEstimate::from_matrix(q)
}

/// The `N x N` angle kernel `Z(theta) = B(theta)^H Q^-1 B(theta)`.
pub fn z_matrix<T: Scalar>(cov: &CovarianceEstimate<T>, cfg: &ArrayConfig<T>, theta_rad: T) -> CMat<T> {
    let n = cfg.n_tx;
    let m = cfg.n_rx;
    let rx = rx_angle_steering(theta_rad, cfg).entries;
    let txa = tx_angle_steering(theta_rad, cfg).entries;
    let mut z = CMat::zeros(n, n);
    for p in 0..n {
        for q in 0..n {
            let mut acc = Complex::zero();
            for mi in 0..m {
                let left = (rx[mi] * txa[p]).conj();
                for mj in 0..m {
                    acc += left * cov.inverse[(mi * n + p, mj * n + q)] * (rx[mj] * txa[q]);
                }
            }
            z[(p, q)] = acc;
        }
    }
    z
}

/// Capon value `1 / |a_T(R)^H Z a_T(R)|` for one range at a fixed-angle
/// kernel.
pub fn capon_range_value<T: Scalar>(z: &CMat<T>, cfg: &ArrayConfig<T>, range_m: T) -> T {
    let a = tx_range_steering(range_m, cfg);
    let denom = z.herm_quad(&a.entries).norm();
    if denom.is_zero() {
        T::infinity()
    } else {
        T::one() / denom
    }
}

/// A rectangular range-angle spectrum, row-major over `ranges x angles`.
#[derive(Debug, Clone)]
pub struct SpectrumGrid<T> {
    pub ranges_m: Vec<T>,
    pub angles_deg: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Scalar> SpectrumGrid<T> {
    pub fn value(&self, ri: usize, ai: usize) -> T {
        self.values[ri * self.angles_deg.len() + ai]
    }
}

/// Midpoint grid: `n` points centred in the `n` equal subintervals of
/// `[lo, hi]`, so no two adjacent search windows share a point.
pub fn grid_centers<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    let step = (hi - lo) / T::of(n as f64);
    (0..n).map(|i| lo + step * (T::of(i as f64) + T::of(0.5))).collect()
}

/// Full 2-D Capon spectrum `P(R, theta) = 1 / |a_TR^H Q^-1 a_TR|`.
pub fn ssmte_spectrum<T: Scalar>(
    cov: &CovarianceEstimate<T>,
    cfg: &ArrayConfig<T>,
    ranges_m: &[T],
    angles_deg: &[T],
) -> SpectrumGrid<T> {
    let mut values = vec![T::zero(); ranges_m.len() * angles_deg.len()];
    for (ai, th) in angles_deg.iter().enumerate() {
        let z = z_matrix(cov, cfg, th.to_radians());
        for (ri, r) in ranges_m.iter().enumerate() {
            values[ri * angles_deg.len() + ai] = capon_range_value(&z, cfg, *r);
        }
    }
    SpectrumGrid { ranges_m: ranges_m.to_vec(), angles_deg: angles_deg.to_vec(), values }
}

/// Angle-only LCSSE spectrum `1 / |z1 - z2 z4^-1 z2^H|` per angle, where
/// `[z1 z2; z2^H z4]` partitions `Z(theta)` after its first row/column.
/// The Schur complement equals `min a^H Z a` over vectors with first entry 1;
/// because the first frequency offset is zero, every `a_T(R)` qualifies, so
/// this spectrum upper-bounds the range scan at the same angle.
pub fn lcsse_angle_spectrum<T: Scalar>(
    cov: &CovarianceEstimate<T>,
    cfg: &ArrayConfig<T>,
    angles_deg: &[T],
) -> Result<Vec<T>, Error> {
    let n = cfg.n_tx;
    if n < 2 {
        return Err(Error::Config("the Schur-complement spectrum needs at least two transmit antennas".into()));
    }
    angles_deg
        .iter()
        .map(|th| {
            let z = z_matrix(cov, cfg, th.to_radians());
            let schur = schur_complement(&z)?;
            Ok(if schur.is_zero() { T::infinity() } else { T::one() / schur })
        })
        .collect()
}

/// `|z1 - z2 z4^-1 z2^H|` of an `N x N` kernel, with relative diagonal
/// loading on `z4` for numerical safety.
fn schur_complement<T: Scalar>(z: &CMat<T>) -> Result<T, Error> {
    let n = z.rows();
    let mut z4 = CMat::zeros(n - 1, n - 1);
    for r in 1..n {
        for c in 1..n {
            z4[(r - 1, c - 1)] = z[(r, c)];
        }
    }
    let delta = T::of(LOADING_LEVEL) * z4.trace_real() / T::of((n - 1) as f64);
    z4.add_scaled_identity(delta);
    let z2h: Vec<Complex<T>> = (1..n).map(|c| z[(0, c)].conj()).collect();
    let w = z4.lu()?.solve(&z2h);
    let mut s = z[(0, 0)];
    for c in 1..n {
        s -= z[(0, c)] * w[c - 1];
    }
    Ok(s.norm())
}

/// One extracted spectral peak.
#[derive(Debug, Clone, Copy)]
pub struct Peak<T> {
    pub range_m: T,
    pub angle_deg: T,
    pub value: T,
    pub range_idx: usize,
    pub angle_idx: usize,
}

/// Strict local maxima of the grid over the 8-neighbourhood, sorted by
/// descending value (ties: smaller range, then smaller angle). When fewer
/// than `count` maxima exist, the deficit is filled with the largest cells
/// not adjacent to an already selected one and the shortfall flag is set.
pub fn pick_peaks<T: Scalar>(grid: &SpectrumGrid<T>, count: usize) -> (Vec<Peak<T>>, bool) {
    let (nr, na) = (grid.ranges_m.len(), grid.angles_deg.len());
    let mut peaks: Vec<Peak<T>> = Vec::new();
    for ri in 0..nr {
        for ai in 0..na {
            let v = grid.value(ri, ai);
            let mut is_peak = true;
            'nb: for dr in -1i64..=1 {
                for da in -1i64..=1 {
                    if dr == 0 && da == 0 {
                        continue;
                    }
                    let (r2, a2) = (ri as i64 + dr, ai as i64 + da);
                    if r2 < 0 || a2 < 0 || r2 >= nr as i64 || a2 >= na as i64 {
                        continue;
                    }
                    if grid.value(r2 as usize, a2 as usize) >= v {
                        is_peak = false;
                        break 'nb;
                    }
                }
            }
            if is_peak {
                peaks.push(Peak {
                    range_m: grid.ranges_m[ri],
                    angle_deg: grid.angles_deg[ai],
                    value: v,
                    range_idx: ri,
                    angle_idx: ai,
                });
            }
        }
    }
    sort_peaks(&mut peaks);
    let shortfall = peaks.len() < count;
    peaks.truncate(count);
    if shortfall {
        let mut cells: Vec<Peak<T>> = (0..nr)
            .flat_map(|ri| {
                (0..na).map(move |ai| (ri, ai))
            })
            .map(|(ri, ai)| Peak {
                range_m: grid.ranges_m[ri],
                angle_deg: grid.angles_deg[ai],
                value: grid.value(ri, ai),
                range_idx: ri,
                angle_idx: ai,
            })
            .collect();
        sort_peaks(&mut cells);
        for cell in cells {
            if peaks.len() >= count {
                break;
            }
            let clashes = peaks.iter().any(|p| {
                (p.range_idx as i64 - cell.range_idx as i64).abs() <= 1
                    && (p.angle_idx as i64 - cell.angle_idx as i64).abs() <= 1
            });
            if !clashes {
                peaks.push(cell);
            }
        }
    }
    (peaks, shortfall)
}

fn sort_peaks<T: Scalar>(peaks: &mut [Peak<T>]) {
    peaks.sort_by(|a, b| {
        b.value
            .partial_cmp(&a.value)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.range_m.partial_cmp(&b.range_m).unwrap_or(std::cmp::Ordering::Equal))
            .then(a.angle_deg.partial_cmp(&b.angle_deg).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Iterative zoom refinement of one peak: each pass evaluates an 11 x 11
/// local Capon grid around the current estimate and shrinks the window to
/// one old grid step, cutting the quantization error fivefold per pass.
pub fn refine_peak<T: Scalar>(
    cov: &CovarianceEstimate<T>,
    cfg: &ArrayConfig<T>,
    start: (T, T),
    half_widths: (T, T),
    iters: usize,
    range_bounds: (T, T),
    angle_bounds_deg: (T, T),
) -> (T, T, T) {
    const PTS: usize = 11;
    let (mut r, mut th) = start;
    let (mut hr, mut hth) = half_widths;
    let mut best_value = T::zero();
    for _ in 0..iters {
        let r_lo = (r - hr).max(range_bounds.0);
        let r_hi = (r + hr).min(range_bounds.1);
        let th_lo = (th - hth).max(angle_bounds_deg.0);
        let th_hi = (th + hth).min(angle_bounds_deg.1);
        let ranges: Vec<T> = (0..PTS)
            .map(|i| r_lo + (r_hi - r_lo) * T::of(i as f64) / T::of((PTS - 1) as f64))
            .collect();
        let angles: Vec<T> = (0..PTS)
            .map(|i| th_lo + (th_hi - th_lo) * T::of(i as f64) / T::of((PTS - 1) as f64))
            .collect();
        let mut best = (r, th, T::zero());
        for a in &angles {
            let z = z_matrix(cov, cfg, a.to_radians());
            for rr in &ranges {
                let v = capon_range_value(&z, cfg, *rr);
                if v > best.2 {
                    best = (*rr, *a, v);
                }
            }
        }
        r = best.0;
        th = best.1;
        best_value = best.2;
        let shrink = T::of(((PTS - 1) / 2) as f64);
        hr = hr / shrink;
        hth = hth / shrink;
    }
    (r, th, best_value)
}

/// A coarse range bin with its target count (from matched-filter ranging).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeBin {
    pub index: i64,
    pub count: usize,
}

/// Bin index `floor(R / dr)` of each true range, aggregated into sorted
/// (bin, count) pairs.
pub fn coarse_bins<T: Scalar>(ranges_m: &[T], cfg: &ArrayConfig<T>) -> Vec<RangeBin> {
    let dr = cfg.range_bin_m();
    let mut bins: Vec<RangeBin> = Vec::new();
    for r in ranges_m {
        let idx = (*r / dr).floor().to_i64().unwrap_or(0);
        match bins.iter_mut().find(|b| b.index == idx) {
            Some(b) => b.count += 1,
            None => bins.push(RangeBin { index: idx, count: 1 }),
        }
    }
    bins.sort_by_key(|b| b.index);
    bins
}

/// Centre of a coarse bin: `P dr + dr/2`.
pub fn bin_center_m<T: Scalar>(bin: i64, cfg: &ArrayConfig<T>) -> T {
    let dr = cfg.range_bin_m();
    dr * T::of(bin as f64) + dr / T::of(2.0)
}

/// Grid sizes and refinement depth of a spectral search.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig<T> {
    pub angle_min_deg: T,
    pub angle_max_deg: T,
    /// Angle grid points (s_theta).
    pub angle_grid: usize,
    /// Range grid points per coarse bin window (s_r).
    pub range_grid: usize,
    /// Zoom refinement passes; 0 keeps the raw grid maxima.
    pub refine_iters: usize,
}

impl SearchConfig<f64> {
    pub fn with_grids(angle_grid: usize, range_grid: usize) -> Self {
        Self { angle_min_deg: -90.0, angle_max_deg: 90.0, angle_grid, range_grid, refine_iters: 3 }
    }
}

/// One estimated target position.
#[derive(Debug, Clone, Copy)]
pub struct TargetEstimate<T> {
    pub range_m: T,
    pub angle_deg: T,
    pub value: T,
    pub bin: i64,
}

/// Estimates plus a flag marking that some peak had to be filled in from
/// non-maximum grid cells.
#[derive(Debug, Clone)]
pub struct SensingOutput<T> {
    pub estimates: Vec<TargetEstimate<T>>,
    pub shortfall: bool,
}

/// Full 2-D spectrum search: per coarse bin, scan the bin's range window
/// against the whole angle window and keep as many peaks as the bin holds.
pub fn ssmte_estimate<T: Scalar>(
    cov: &CovarianceEstimate<T>,
    cfg: &ArrayConfig<T>,
    bins: &[RangeBin],
    search: &SearchConfig<T>,
) -> Result<SensingOutput<T>, Error> {
    validate_search(search)?;
    let dr = cfg.range_bin_m();
    let angles = grid_centers(search.angle_min_deg, search.angle_max_deg, search.angle_grid);
    let angle_step = (search.angle_max_deg - search.angle_min_deg) / T::of(search.angle_grid as f64);
    let mut out = SensingOutput { estimates: Vec::new(), shortfall: false };
    for bin in bins {
        let lo = dr * T::of(bin.index as f64);
        let hi = lo + dr;
        let ranges = grid_centers(lo, hi, search.range_grid);
        let range_step = dr / T::of(search.range_grid as f64);
        let grid = ssmte_spectrum(cov, cfg, &ranges, &angles);
        let (peaks, shortfall) = pick_peaks(&grid, bin.count);
        out.shortfall |= shortfall;
        for p in peaks {
            let (r, th, v) = if search.refine_iters > 0 {
                refine_peak(
                    cov,
                    cfg,
                    (p.range_m, p.angle_deg),
                    (range_step, angle_step),
                    search.refine_iters,
                    (lo, hi),
                    (search.angle_min_deg, search.angle_max_deg),
                )
            } else {
                (p.range_m, p.angle_deg, p.value)
            };
            out.estimates.push(TargetEstimate { range_m: r, angle_deg: th, value: v, bin: bin.index });
        }
    }
    Ok(out)
}

/// Low-complexity search: a 1-D Schur-complement angle scan first, then 1-D
/// range scans of each candidate angle over every bin window. Candidates are
/// taken greedily by Capon value under the per-bin target counts.
pub fn lcsse_estimate<T: Scalar>(
    cov: &CovarianceEstimate<T>,
    cfg: &ArrayConfig<T>,
    bins: &[RangeBin],
    search: &SearchConfig<T>,
) -> Result<SensingOutput<T>, Error> {
    validate_search(search)?;
    let total: usize = bins.iter().map(|b| b.count).sum();
    let dr = cfg.range_bin_m();
    let angles = grid_centers(search.angle_min_deg, search.angle_max_deg, search.angle_grid);
    let angle_step = (search.angle_max_deg - search.angle_min_deg) / T::of(search.angle_grid as f64);
    let range_step = dr / T::of(search.range_grid as f64);
    let spectrum = lcsse_angle_spectrum(cov, cfg, &angles)?;
    let (angle_peaks, mut shortfall) = pick_peaks_1d(&angles, &spectrum, total);

    // Score every (angle candidate, bin) pair by a 1-D range scan at the
    // already computed angle kernel.
    struct Candidate<T> {
        range_m: T,
        angle_deg: T,
        value: T,
        bin: usize,
    }
    let mut candidates: Vec<Candidate<T>> = Vec::new();
    for (th, _) in &angle_peaks {
        let z = z_matrix(cov, cfg, th.to_radians());
        for (bi, bin) in bins.iter().enumerate() {
            let lo = dr * T::of(bin.index as f64);
            let ranges = grid_centers(lo, lo + dr, search.range_grid);
            let values: Vec<T> = ranges.iter().map(|r| capon_range_value(&z, cfg, *r)).collect();
            for (r, v) in range_maxima(&ranges, &values, bin.count) {
                candidates.push(Candidate { range_m: r, angle_deg: *th, value: v, bin: bi });
            }
        }
    }
    candidates.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap_or(std::cmp::Ordering::Equal));

    let mut quota: Vec<usize> = bins.iter().map(|b| b.count).collect();
    let mut picked: Vec<Candidate<T>> = Vec::new();
    for c in candidates {
        if picked.len() >= total {
            break;
        }
        if quota[c.bin] == 0 {
            continue;
        }
        let clash = picked.iter().any(|p| {
            p.bin == c.bin
                && (p.range_m - c.range_m).abs() < range_step
                && (p.angle_deg - c.angle_deg).abs() < angle_step
        });
        if clash {
            continue;
        }
        quota[c.bin] -= 1;
        picked.push(c);
    }
    shortfall |= picked.len() < total;

    let mut out = SensingOutput { estimates: Vec::new(), shortfall };
    for c in picked {
        let bin = bins[c.bin];
        let lo = dr * T::of(bin.index as f64);
        let (r, th, v) = if search.refine_iters > 0 {
            refine_peak(
                cov,
                cfg,
                (c.range_m, c.angle_deg),
                (range_step, angle_step),
                search.refine_iters,
                (lo, lo + dr),
                (search.angle_min_deg, search.angle_max_deg),
            )
        } else {
            (c.range_m, c.angle_deg, c.value)
        };
        out.estimates.push(TargetEstimate { range_m: r, angle_deg: th, value: v, bin: bin.index });
    }
    Ok(out)
}

fn validate_search<T: Scalar>(search: &SearchConfig<T>) -> Result<(), Error> {
    if search.angle_grid < 2 || search.range_grid < 2 {
        return Err(Error::Config("spectrum grids need at least two points per axis".into()));
    }
    if !(search.angle_min_deg < search.angle_max_deg) {
        return Err(Error::Config("empty angle window".into()));
    }
    Ok(())
}

/// Strict 1-D local maxima sorted by descending value, padded with the
/// largest non-adjacent remaining samples when fewer than `count` exist.
fn pick_peaks_1d<T: Scalar>(xs: &[T], values: &[T], count: usize) -> (Vec<(T, T)>, bool) {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n)
        .filter(|&i| {
            (i == 0 || values[i] > values[i - 1]) && (i + 1 == n || values[i] > values[i + 1])
        })
        .collect();
    idx.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(std::cmp::Ordering::Equal));
    let shortfall = idx.len() < count;
    idx.truncate(count);
    if shortfall {
        let mut rest: Vec<usize> = (0..n).collect();
        rest.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(std::cmp::Ordering::Equal));
        for i in rest {
            if idx.len() >= count {
                break;
            }
            if idx.iter().all(|&j| (j as i64 - i as i64).abs() > 1) {
                idx.push(i);
            }
        }
    }
    (idx.into_iter().map(|i| (xs[i], values[i])).collect(), shortfall)
}

/// Up to `count` 1-D range maxima of one bin window (argmax fallback when the
/// window has no strict interior peak).
fn range_maxima<T: Scalar>(ranges: &[T], values: &[T], count: usize) -> Vec<(T, T)> {
    let (peaks, _) = pick_peaks_1d(ranges, values, count);
    peaks
}

/// LS velocity estimation from the compensated CPI and the estimated target
/// positions: project the data onto the estimated manifold, then relate
/// consecutive slow-time samples per target.
///
/// `conjugate_backward` switches the inner products from plain transposes to
/// conjugated ones; the default (false) matches the shift-invariance
/// formulation, the conjugate form is more robust when a Doppler lands near
/// a self-cancelling phase of the unconjugated sum.
pub fn estimate_velocities<T: Scalar>(
    data: &CMat<T>,
    positions: &[(T, T)],
    cfg: &ArrayConfig<T>,
    conjugate_backward: bool,
) -> Result<Vec<T>, Error> {
    let g = positions.len();
    let k = data.cols();
    if g == 0 {
        return Ok(Vec::new());
    }
    if data.rows() != cfg.mn() {
        return Err(Error::Shape("data rows must equal M*N".into()));
    }
    if k < 2 {
        return Err(Error::Shape("velocity estimation needs at least two pulses".into()));
    }
    let cols: Vec<Vec<Complex<T>>> = positions
        .iter()
        .map(|(r, th)| crate::array_model::joint_steering(*r, th.to_radians(), cfg).entries)
        .collect();
    let a = CMat::from_columns(&cols);
    let ah = a.conj_transpose();
    let d_hat = ah.mul(&a).inverse()?.mul(&ah.mul(data));
    velocities_from_doppler(&d_hat, cfg, conjugate_backward)
}

/// As [`estimate_velocities`], but with a per-entry weighted LS projection.
/// `weights[(i, k)]` is the relative inverse noise variance of data entry
/// `(i, k)`; after symbol compensation this is the squared modulus of the
/// transmitted symbol, which whitens the division-inflated noise.
pub fn estimate_velocities_weighted<T: Scalar>(
    data: &CMat<T>,
    weights: &[Vec<T>],
    positions: &[(T, T)],
    cfg: &ArrayConfig<T>,
    conjugate_backward: bool,
) -> Result<Vec<T>, Error> {
    let g = positions.len();
    let k = data.cols();
    if g == 0 {
        return Ok(Vec::new());
    }
    if data.rows() != cfg.mn() {
        return Err(Error::Shape("data rows must equal M*N".into()));
    }
    if k < 2 {
        return Err(Error::Shape("velocity estimation needs at least two pulses".into()));
    }
    if weights.len() != k || weights.iter().any(|w| w.len() != data.rows()) {
        return Err(Error::Shape("weights must be one vector of length M*N per pulse".into()));
    }
    let cols: Vec<Vec<Complex<T>>> = positions
        .iter()
        .map(|(r, th)| crate::array_model::joint_steering(*r, th.to_radians(), cfg).entries)
        .collect();
    let a = CMat::from_columns(&cols);
    let mut d_hat = CMat::zeros(g, k);
    for pulse in 0..k {
        let w = &weights[pulse];
        let normal = CMat::from_fn(g, g, |p, q| {
            (0..data.rows())
                .map(|i| a[(i, p)].conj() * a[(i, q)].scale(w[i]))
                .fold(Complex::new(T::zero(), T::zero()), |acc, x| acc + x)
        });
        let rhs: Vec<Complex<T>> = (0..g)
            .map(|p| {
                (0..data.rows())
                    .map(|i| a[(i, p)].conj() * data[(i, pulse)].scale(w[i]))
                    .fold(Complex::new(T::zero(), T::zero()), |acc, x| acc + x)
            })
            .collect();
        let solved = crate::linalg::Lu::decompose(&normal)?.solve(&rhs);
        for (p, v) in solved.into_iter().enumerate() {
            d_hat[(p, pulse)] = v;
        }
    }
    velocities_from_doppler(&d_hat, cfg, conjugate_backward)
}

/// Shared tail of the velocity estimators: relate consecutive slow-time
/// samples of the recovered Doppler rows and convert phase rate to speed.
fn velocities_from_doppler<T: Scalar>(
    d_hat: &CMat<T>,
    cfg: &ArrayConfig<T>,
    conjugate_backward: bool,
) -> Result<Vec<T>, Error> {
    let (g, k) = (d_hat.rows(), d_hat.cols());
    let d_f = CMat::from_fn(g, k - 1, |r, c| d_hat[(r, c)]);
    let d_b = CMat::from_fn(g, k - 1, |r, c| d_hat[(r, c + 1)]);
    let left = if conjugate_backward {
        CMat::from_fn(g, k - 1, |r, c| d_hat[(r, c)].conj())
    } else {
        d_f.clone()
    };
    let e = left.mul(&d_f.transpose()).inverse()?.mul(&left.mul(&d_b.transpose()));
    let c = speed_of_light::<T>();
    let scale = c / (T::of(4.0) * T::PI() * cfg.carrier_hz * cfg.pri_s);
    Ok((0..g).map(|gi| e[(gi, gi)].arg() * scale).collect())
}

/// Complex multiplications of the full 2-D search (covariance, inverse,
/// spectrum over `s_r x s_theta` points with `g_prime` refinement sweeps per
/// detected target, and the velocity stage).
pub fn ssmte_complexity(n: usize, m: usize, k: usize, g: usize, g_prime: usize, s_r: usize, s_theta: usize) -> f64 {
    let (n, m, k, g, gp, sr, st) =
        (n as f64, m as f64, k as f64, g as f64, g_prime as f64, s_r as f64, s_theta as f64);
    let nm = n * m;
    k * nm * nm + nm * nm * nm
        + sr * st * gp * (nm * nm + nm + 1.0)
        + velocity_complexity(nm, k, g)
}

/// Complex multiplications of the low-complexity search: the Schur angle
/// scan replaces the 2-D sweep, leaving only per-angle 1-D range scans.
pub fn lcsse_complexity(n: usize, m: usize, k: usize, g: usize, g_prime: usize, s_r: usize, s_theta: usize) -> f64 {
    let (n, m, k, g, gp, sr, st) =
        (n as f64, m as f64, k as f64, g as f64, g_prime as f64, s_r as f64, s_theta as f64);
    let nm = n * m;
    let n1 = n - 1.0;
    k * nm * nm + nm * nm * nm
        + st * (n1 * n1 * n1 + n1 * n1 + n)
        + sr * g * gp * (nm * nm + nm + 1.0)
        + velocity_complexity(nm, k, g)
}

fn velocity_complexity(nm: f64, k: f64, g: f64) -> f64 {
    3.0 * g * g * g + 2.0 * g * g * (k + nm - 1.0) + g * nm * k + 4.0 * g
}
