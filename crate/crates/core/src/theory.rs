//! Closed-form analytics: single-target Fisher information and Cramér-Rao
//! bounds, the CCIE bit-error-rate upper bound over Rayleigh fading with
//! U-branch MRC, and bits-per-pulse rate comparisons.

use num_complex::Complex;

use crate::array_model::{joint_steering, ArrayConfig};
use crate::ccie::CcieConfig;
use crate::linalg::{det2, det3, CMat};
use crate::scalar::{speed_of_light, Scalar};
use crate::scene::Target;
use crate::Error;

/// Real symmetric 5x5 Fisher information over the parameter order
/// `[Re xi, Im xi, R, theta, F]` (angle in radians, Doppler in Hz).
#[derive(Debug, Clone, PartialEq)]
pub struct FisherMatrix<T> {
    pub f: [[T; 5]; 5],
}

impl<T: Scalar> FisherMatrix<T> {
    pub fn max_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for r in 0..5 {
            for c in 0..5 {
                worst = worst.max((self.f[r][c] - self.f[c][r]).abs());
            }
        }
        worst
    }

    pub fn quad_form(&self, v: &[T; 5]) -> T {
        let mut acc = T::zero();
        for r in 0..5 {
            for c in 0..5 {
                acc += v[r] * self.f[r][c] * v[c];
            }
        }
        acc
    }
}

/// The four diagonal phase-derivative generators, evaluated on the joint
/// steering vector: entry scalings for d/dR, d/dtheta and the slow-time
/// d/dF. The range generator uses the configured frequency-offset
/// multipliers, which reduces to `diag{0..N-1}` for linear offsets.
fn derivative_vectors<T: Scalar>(
    cfg: &ArrayConfig<T>,
    target: &Target<T>,
) -> (Vec<Complex<T>>, Vec<Complex<T>>, Vec<Complex<T>>) {
    let theta = target.angle_rad();
    let a = joint_steering(target.range_m, theta, cfg).entries;
    let c = speed_of_light::<T>();
    let four_pi = T::of(4.0) * T::PI();
    let two_pi = T::of(2.0) * T::PI();
    let cos_t = theta.cos();
    let n = cfg.n_tx;
    let mut da_dr = Vec::with_capacity(a.len());
    let mut da_dth = Vec::with_capacity(a.len());
    for (i, ai) in a.iter().enumerate() {
        let (m_idx, n_idx) = (i / n, i % n);
        let r_rate = -four_pi * cfg.delta_f_hz * cfg.offset_value(n_idx) / c;
        da_dr.push(ai * Complex::new(T::zero(), r_rate));
        let th_rate = two_pi * cfg.carrier_hz * cos_t
            * (cfg.d2_m * T::of(m_idx as f64) + cfg.d1_m * T::of(n_idx as f64))
            / c;
        da_dth.push(ai * Complex::new(T::zero(), th_rate));
    }
    (a, da_dr, da_dth)
}

fn doppler_vectors<T: Scalar>(cfg: &ArrayConfig<T>, target: &Target<T>) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
    let k = cfg.pulses_per_cpi;
    let f = target.doppler_hz(cfg);
    let two_pi = T::of(2.0) * T::PI();
    let mut psi = Vec::with_capacity(k);
    let mut dpsi = Vec::with_capacity(k);
    for ki in 0..k {
        let phase = two_pi * f * T::of(ki as f64) * cfg.pri_s;
        let p = Complex::new(phase.cos(), phase.sin());
        psi.push(p);
        dpsi.push(p * Complex::new(T::zero(), two_pi * cfg.pri_s * T::of(ki as f64)));
    }
    (psi, dpsi)
}

/// Generic-path Fisher matrix: builds each derivative of the noiseless data
/// matrix explicitly and evaluates `F_xy = 2 Re Tr[dPi_x^H dPi_y] / sigma_1^2`.
pub fn fisher_matrix<T: Scalar>(
    target: &Target<T>,
    cfg: &ArrayConfig<T>,
    sigma1_sq: T,
) -> Result<FisherMatrix<T>, Error> {
    if cfg.pulses_per_cpi < 2 {
        return Err(Error::Config("Fisher information needs at least two pulses".into()));
    }
    if !(sigma1_sq > T::zero()) {
        return Err(Error::Config("noise power must be positive".into()));
    }
    let (a, da_dr, da_dth) = derivative_vectors(cfg, target);
    let (psi, dpsi) = doppler_vectors(cfg, target);
    let xi = target.reflection;
    let jj = Complex::new(T::zero(), T::one());

    let outer = |u: &[Complex<T>], v: &[Complex<T>], scale: Complex<T>| -> CMat<T> {
        CMat::from_fn(u.len(), v.len(), |r, c| scale * u[r] * v[c])
    };
    let one = Complex::new(T::one(), T::zero());
    let deriv: [CMat<T>; 5] = [
        outer(&a, &psi, one),
        outer(&a, &psi, jj),
        outer(&da_dr, &psi, xi),
        outer(&da_dth, &psi, xi),
        outer(&a, &dpsi, xi),
    ];
    let scale = T::of(2.0) / sigma1_sq;
    let mut f = [[T::zero(); 5]; 5];
    for x in 0..5 {
        for y in 0..5 {
            f[x][y] = scale * deriv[x].frob_inner(&deriv[y]).re;
        }
    }
    Ok(FisherMatrix { f })
}

/// Assembled-path Fisher matrix: the same 5x5 matrix written out through the
/// whitened inner products `Tr(zeta_x^H zeta_y) = (a_x^H a_y)(psi_x^H psi_y)`
/// of the rank-one derivative factors. Serves as an independent oracle for
/// [`fisher_matrix`].
pub fn fisher_matrix_assembled<T: Scalar>(
    target: &Target<T>,
    cfg: &ArrayConfig<T>,
    sigma1_sq: T,
) -> Result<FisherMatrix<T>, Error> {
    if cfg.pulses_per_cpi < 2 {
        return Err(Error::Config("Fisher information needs at least two pulses".into()));
    }
    let (a, da_dr, da_dth) = derivative_vectors(cfg, target);
    let (psi, dpsi) = doppler_vectors(cfg, target);
    let xi = target.reflection;
    let xi2 = Complex::new(xi.norm_sqr(), T::zero());
    let jj = Complex::new(T::zero(), T::one());

    let dot = |u: &[Complex<T>], v: &[Complex<T>]| -> Complex<T> {
        u.iter().zip(v).map(|(x, y)| x.conj() * y).fold(Complex::new(T::zero(), T::zero()), |s, t| s + t)
    };
    let paa = dot(&a, &a);
    let psps = dot(&psi, &psi);
    // Tr(zeta^H zeta_R) etc: whitening contributes 1/sigma_1^2.
    let t_w_r = dot(&a, &da_dr) * psps;
    let t_w_th = dot(&a, &da_dth) * psps;
    let t_w_f = paa * dot(&psi, &dpsi);
    let t_ww = paa * psps;
    let t_rr = dot(&da_dr, &da_dr) * psps;
    let t_rth = dot(&da_dr, &da_dth) * psps;
    let t_rf = dot(&da_dr, &a) * dot(&psi, &dpsi);
    let t_thth = dot(&da_dth, &da_dth) * psps;
    let t_thf = dot(&da_dth, &a) * dot(&psi, &dpsi);
    let t_ff = paa * dot(&dpsi, &dpsi);

    let scale = T::of(2.0) / sigma1_sq;
    let mut f = [[T::zero(); 5]; 5];
    f[0][0] = t_ww.re;
    f[1][1] = t_ww.re;
    f[0][2] = (xi * t_w_r).re;
    f[0][3] = (xi * t_w_th).re;
    f[0][4] = (xi * t_w_f).re;
    f[1][2] = (-jj * xi * t_w_r).re;
    f[1][3] = (-jj * xi * t_w_th).re;
    f[1][4] = (-jj * xi * t_w_f).re;
    f[2][2] = (xi2 * t_rr).re;
    f[2][3] = (xi2 * t_rth).re;
    f[2][4] = (xi2 * t_rf).re;
    f[3][3] = (xi2 * t_thth).re;
    f[3][4] = (xi2 * t_thf).re;
    f[4][4] = (xi2 * t_ff).re;
    for r in 0..5 {
        for c in 0..5 {
            if c < r {
                f[r][c] = f[c][r];
            } else {
                f[r][c] *= scale;
            }
        }
    }
    Ok(FisherMatrix { f })
}

/// Cramér-Rao bounds of range, angle and Doppler after profiling out the
/// complex amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrbReport<T> {
    pub crb_range_m2: T,
    pub crb_angle_rad2: T,
    pub crb_doppler_hz2: T,
    pub crb_velocity_mps2: T,
}

impl<T: Scalar> CrbReport<T> {
    /// The Doppler bound mapped to velocity via `F = 2 v f_c / c`.
    fn with_velocity(crb_range_m2: T, crb_angle_rad2: T, crb_doppler_hz2: T, cfg: &ArrayConfig<T>) -> Self {
        let s = speed_of_light::<T>() / (T::of(2.0) * cfg.carrier_hz);
        Self { crb_range_m2, crb_angle_rad2, crb_doppler_hz2, crb_velocity_mps2: s * s * crb_doppler_hz2 }
    }
}

/// The profiled 3x3 information matrix `D = F22 - F21 F11^-1 F12` over
/// `(R, theta, F)`, in the half-scaled convention whose inverse over 2 is
/// the CRB.
pub fn profiled_information<T: Scalar>(fisher: &FisherMatrix<T>) -> Result<[[T; 3]; 3], Error> {
    let half = T::of(0.5);
    let f11 = [[fisher.f[0][0] * half, fisher.f[0][1] * half], [fisher.f[1][0] * half, fisher.f[1][1] * half]];
    let det11 = det2(f11[0][0], f11[0][1], f11[1][0], f11[1][1]);
    if det11.abs() < T::of(1e-300) {
        return Err(Error::Singular("amplitude block of the Fisher matrix is singular".into()));
    }
    let inv11 = [
        [f11[1][1] / det11, -f11[0][1] / det11],
        [-f11[1][0] / det11, f11[0][0] / det11],
    ];
    let mut d = [[T::zero(); 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            let f21r = [fisher.f[2 + r][0] * half, fisher.f[2 + r][1] * half];
            let f12c = [fisher.f[0][2 + c] * half, fisher.f[1][2 + c] * half];
            let mut corr = T::zero();
            for i in 0..2 {
                for j in 0..2 {
                    corr += f21r[i] * inv11[i][j] * f12c[j];
                }
            }
            d[r][c] = fisher.f[2 + r][2 + c] * half - corr;
        }
    }
    Ok(d)
}

/// Closed-form CRBs via the cofactor expressions over the profiled matrix.
pub fn crb<T: Scalar>(target: &Target<T>, cfg: &ArrayConfig<T>, sigma1_sq: T) -> Result<CrbReport<T>, Error> {
    if target.reflection.norm_sqr().is_zero() {
        return Err(Error::Config("zero reflection coefficient makes the amplitude block singular".into()));
    }
    let fisher = fisher_matrix(target, cfg, sigma1_sq)?;
    let d = profiled_information(&fisher)?;
    let det_d = det3(&d);
    if det_d.abs() < T::of(1e-300) {
        return Err(Error::Singular("profiled information matrix is singular".into()));
    }
    let two = T::of(2.0);
    let crb_r = det2(d[1][1], d[1][2], d[2][1], d[2][2]) / (two * det_d);
    let crb_th = det2(d[0][0], d[0][2], d[2][0], d[2][2]) / (two * det_d);
    let crb_f = det2(d[0][0], d[0][1], d[1][0], d[1][1]) / (two * det_d);
    Ok(CrbReport::with_velocity(crb_r, crb_th, crb_f, cfg))
}

/// `P(alpha) = (1 - sqrt(alpha / (1 + alpha))) / 2`.
fn p_alpha<T: Scalar>(alpha: T) -> T {
    (T::one() - (alpha / (T::one() + alpha)).sqrt()) / T::of(2.0)
}

fn ln_binomial<T: Scalar>(top_offset: usize, u: usize) -> T {
    // ln C(top_offset + u, u) accumulated in log space for large-U safety.
    let mut acc = T::zero();
    for i in 1..=u {
        acc += (T::of((top_offset + i) as f64) / T::of(i as f64)).ln();
    }
    acc
}

/// Average PEP over the chi-square fading statistic with `2U` degrees of
/// freedom: `[P(alpha)]^U sum_u C(U-1+u, u) [1 - P(alpha)]^u`.
fn mrc_average<T: Scalar>(alpha: T, u_rx: usize) -> T {
    let p = p_alpha(alpha);
    if p.is_zero() {
        return T::zero();
    }
    let (ln_p, ln_q) = (p.ln(), (T::one() - p).ln());
    let mut acc = T::zero();
    for u in 0..u_rx {
        acc += (ln_binomial::<T>(u_rx - 1, u) + T::of(u_rx as f64) * ln_p + T::of(u as f64) * ln_q).exp();
    }
    acc
}

/// Per-hypothesis equivalent noise variance of the pairwise error event.
pub fn pep_scale<T: Scalar>(
    c_j: Complex<T>,
    x_l: Complex<T>,
    c_jp: Complex<T>,
    x_lp: Complex<T>,
    sigma_c_sq: T,
    same_index: bool,
) -> T {
    let half = T::of(0.5);
    if same_index {
        (x_lp - x_l).norm_sqr() * c_j.norm_sqr() * sigma_c_sq * half
    } else {
        (c_jp * x_lp - c_j * x_l).norm_sqr() * sigma_c_sq * half
    }
}

/// Fading-averaged pairwise error probability for `U` receive antennas.
pub fn pep<T: Scalar>(sigma_kappa_sq: T, sigma2_sq: T, u_rx: usize) -> T {
    let alpha = sigma_kappa_sq / (T::of(2.0) * sigma2_sq);
    mrc_average(alpha, u_rx)
}

/// Union bound on the coefficient (index) detection error, before clipping.
pub fn p_im_bound<T: Scalar>(ccie: &CcieConfig<T>, u_rx: usize, sigma_c_sq: T, sigma2_sq: T) -> T {
    let coeffs = ccie.coefficients();
    let alphabet = ccie.alphabet();
    let (j_count, l_count) = (coeffs.len(), alphabet.len());
    let mut acc = T::zero();
    for j in 0..j_count {
        for jp in 0..j_count {
            if j == jp {
                continue;
            }
            for xl in alphabet {
                for xlp in alphabet {
                    let s = pep_scale(coeffs[j], *xl, coeffs[jp], *xlp, sigma_c_sq, false);
                    acc += pep(s, sigma2_sq, u_rx);
                }
            }
        }
    }
    acc / T::of((j_count * l_count) as f64)
}

/// Fading-averaged ABEP of the rectangular QAM constellation bits.
pub fn p_qam_bound<T: Scalar>(ccie: &CcieConfig<T>, u_rx: usize, sigma_c_sq: T, sigma2_sq: T) -> Result<T, Error> {
    let l = ccie.qam_order();
    let (ups, omg) = crate::ccie::pam_split(l)?;
    let eps_sq = T::of(3.0) / T::of((ups * ups + omg * omg - 2) as f64);
    let coeffs = ccie.coefficients();
    let alphabet = ccie.alphabet();
    let bits_l = ccie.bits_symbol();
    let mut total = T::zero();
    for c in coeffs {
        for x in alphabet {
            let gain = c.norm_sqr() * x.norm_sqr() * sigma_c_sq / sigma2_sq;
            let mut per_symbol = T::zero();
            for (side, q_bits) in [(ups, log2_usize(ups)), (omg, log2_usize(omg))] {
                for q in 1..=q_bits {
                    per_symbol += pam_bit_error(side, q, eps_sq, gain, u_rx);
                }
            }
            total += per_symbol / T::of(bits_l as f64);
        }
    }
    Ok(total / T::of((coeffs.len() * alphabet.len()) as f64))
}

/// Fading-averaged error probability of the `q`th bit of a `side`-ary PAM
/// rail at per-symbol SNR gain `gain = |c x|^2 sigma_C^2 / sigma_2^2`.
fn pam_bit_error<T: Scalar>(side: usize, q: usize, eps_sq: T, gain: T, u_rx: usize) -> T {
    let upper_count = side - (side >> q);
    let mut acc = T::zero();
    let pow_q1 = 1usize << (q - 1);
    for i in 0..upper_count {
        let sign = if (i * pow_q1 / side) % 2 == 0 { T::one() } else { -T::one() };
        let weight = T::of(pow_q1 as f64) - T::of(((i * pow_q1 * 2 + side) / (2 * side)) as f64);
        let amp = T::of((2 * i + 1) as f64);
        let alpha = amp * amp * eps_sq * gain;
        acc += sign * weight * mrc_average(alpha, u_rx);
    }
    acc * T::of(2.0) / T::of(side as f64)
}

fn log2_usize(x: usize) -> usize {
    (usize::BITS - 1 - x.leading_zeros()) as usize
}

/// All pieces of the analytic BER bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerBound<T> {
    /// Clipped union bound on coefficient misdetection.
    pub p_im: T,
    /// Unclipped union bound.
    pub p_im_raw: T,
    /// Index-bit ABEP `P_I,n` under the average-mapping factor.
    pub p_index: T,
    /// Index-bit ABEP from the Hamming-weighted union bound over the
    /// actual big-endian index labels; unlike `p_index`, this is a true
    /// upper bound for the deployed mapping.
    pub p_index_mapped: T,
    /// Constellation-bit ABEP of QAM alone.
    pub p_qam: T,
    /// Constellation-bit ABEP `P_C,n` with the `(J-1)/J` leakage weight.
    pub p_const: T,
    /// `P_C,n` variant with the alternative 1/2 leakage weight.
    pub p_const_alt: T,
    /// Total ABER (default composition).
    pub p_total: T,
    /// Total ABER with the alternative constellation term.
    pub p_total_alt: T,
    /// Total ABER using the mapping-exact index term; the bound reported
    /// by the experiment harness.
    pub p_total_mapped: T,
}

/// Hamming-weighted union bound on the index-bit error probability for the
/// big-endian coefficient labels actually used by the encoder. Only the
/// `2^mu_I` addressable coefficients can be transmitted or detected.
pub fn p_index_mapped_bound<T: Scalar>(
    ccie: &CcieConfig<T>,
    u_rx: usize,
    sigma_c_sq: T,
    sigma2_sq: T,
) -> T {
    let mu_i = ccie.bits_index();
    if mu_i == 0 {
        return T::zero();
    }
    let addressable = 1usize << mu_i;
    let coeffs = ccie.coefficients();
    let alphabet = ccie.alphabet();
    let mut acc = T::zero();
    for j in 0..addressable {
        for jp in 0..addressable {
            if j == jp {
                continue;
            }
            let hamming = T::of((j ^ jp).count_ones() as f64);
            for xl in alphabet {
                for xlp in alphabet {
                    let s = pep_scale(coeffs[j], *xl, coeffs[jp], *xlp, sigma_c_sq, false);
                    acc += hamming * pep(s, sigma2_sq, u_rx);
                }
            }
        }
    }
    acc / T::of((addressable * alphabet.len() * mu_i) as f64)
}

/// Assembles the system ABER bound for an `n_tx`-antenna frame; every
/// antenna contributes identically, so the per-antenna sum collapses.
pub fn ccie_ber_bound<T: Scalar>(
    ccie: &CcieConfig<T>,
    n_tx: usize,
    u_rx: usize,
    sigma_c_sq: T,
    sigma2_sq: T,
) -> Result<BerBound<T>, Error> {
    if n_tx == 0 || u_rx == 0 {
        return Err(Error::Config("antenna counts must be positive".into()));
    }
    let mu_i = ccie.bits_index();
    let mu_c = ccie.bits_symbol();
    let p_im_raw = p_im_bound(ccie, u_rx, sigma_c_sq, sigma2_sq);
    let p_im = p_im_raw.min(T::one()).max(T::zero());
    let p_index = if mu_i == 0 {
        T::zero()
    } else {
        let two_mu = T::of((1usize << mu_i) as f64);
        two_mu * p_im / (T::of(2.0) * (two_mu - T::one()))
    };
    let p_index_mapped = p_index_mapped_bound(ccie, u_rx, sigma_c_sq, sigma2_sq).min(T::one());
    let p_qam = p_qam_bound(ccie, u_rx, sigma_c_sq, sigma2_sq)?;
    let j = ccie.coeff_count();
    let leak = T::of((j - 1) as f64) / T::of(j as f64);
    let p_const = leak * p_im + (T::one() - p_im) * p_qam;
    let p_const_alt = T::of(0.5) * p_im + (T::one() - p_im) * p_qam;
    let n = T::of(n_tx as f64);
    let denom = n * T::of((mu_i + mu_c) as f64);
    let p_total = n * (p_index * T::of(mu_i as f64) + p_const * T::of(mu_c as f64)) / denom;
    let p_total_alt = n * (p_index * T::of(mu_i as f64) + p_const_alt * T::of(mu_c as f64)) / denom;
    let p_total_mapped =
        n * (p_index_mapped * T::of(mu_i as f64) + p_const * T::of(mu_c as f64)) / denom;
    Ok(BerBound {
        p_im,
        p_im_raw,
        p_index,
        p_index_mapped,
        p_qam,
        p_const,
        p_const_alt,
        p_total,
        p_total_alt,
        p_total_mapped,
    })
}

/// Bits carried per pulse by the CCIE scheme: `N(floor(log2 J) + log2 L)`.
pub fn bits_per_pulse_ccie(n_tx: usize, j: usize, l: usize) -> Result<u64, Error> {
    if !l.is_power_of_two() || l < 2 {
        return Err(Error::Config("QAM order must be a power of two".into()));
    }
    if j == 0 || n_tx == 0 {
        return Err(Error::Config("counts must be positive".into()));
    }
    Ok(n_tx as u64 * (log2_usize(j) as u64 + log2_usize(l) as u64))
}

/// Bits carried per pulse by frequency-offset permutation index modulation
/// with an offset pool equal to the antenna count:
/// `N log2 L + floor(log2 N!) + floor(log2 C(N, N))`.
pub fn bits_per_pulse_fopim(n_tx: usize, l: usize) -> Result<u64, Error> {
    if !l.is_power_of_two() || l < 2 {
        return Err(Error::Config("QAM order must be a power of two".into()));
    }
    if n_tx == 0 || n_tx > 20 {
        return Err(Error::Config("antenna count out of the exact-factorial span".into()));
    }
    let mut fact: u128 = 1;
    for i in 2..=n_tx as u128 {
        fact *= i;
    }
    let log_fact = (127 - fact.leading_zeros()) as u64;
    // C(N, N) = 1 contributes floor(log2 1) = 0 bits.
    Ok(n_tx as u64 * log2_usize(l) as u64 + log_fact)
}
