//! Complex coefficients information embedding (CCIE) modem.
//!
//! Each transmit antenna carries `floor(log2 J)` index bits by selecting a
//! coefficient from a shared normalized vector `c`, plus `log2 L` Gray-coded
//! QAM bits. The receiver runs a per-antenna exhaustive maximum likelihood
//! search over the `J x L` product alphabet.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::scalar::Scalar;
use crate::Error;

const COEFF_RETRY_LIMIT: usize = 1000;
/// Minimum pairwise distance between distinct `c_j * x_l` products for the
/// ML search to be well-posed.
const MIN_PRODUCT_DISTANCE: f64 = 1e-6;

/// Supported QAM orders and their I/Q PAM split.
pub(crate) fn pam_split(qam_order: usize) -> Result<(usize, usize), Error> {
    match qam_order {
        4 => Ok((2, 2)),
        16 => Ok((4, 4)),
        64 => Ok((8, 8)),
        _ => Err(Error::Config(format!(
            "unsupported QAM order {qam_order}; expected 4, 16 or 64"
        ))),
    }
}

/// Gray label of PAM level index `i` (level 0 is the most positive amplitude).
/// The encoder only needs [`gray_inverse`]; this is kept for the test oracle.
#[cfg_attr(not(test), allow(dead_code))]
fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

fn gray_inverse(mut g: usize) -> usize {
    let mut i = g;
    while g > 0 {
        g >>= 1;
        i ^= g;
    }
    i
}

/// Shared transmitter/receiver configuration: the coefficient vector and the
/// QAM alphabet.
#[derive(Debug, Clone)]
pub struct CcieConfig<T> {
    coeffs: Vec<Complex<T>>,
    alphabet: Vec<Complex<T>>,
    qam_order: usize,
    bits_index: usize,
    bits_symbol: usize,
    seed: u64,
}

impl<T: Scalar> CcieConfig<T> {
    /// Builds a config with a seeded random coefficient vector of length `J`.
    pub fn new(j: usize, qam_order: usize, seed: u64) -> Result<Self, Error> {
        let alphabet = qam_alphabet::<T>(qam_order)?;
        let coeffs = generate_coeff_vector(j, seed, &alphabet)?;
        Ok(Self::from_parts(coeffs, alphabet, qam_order, seed))
    }

    /// Rebuilds a config from an explicit coefficient vector (e.g. imported
    /// from JSON so transmitter and receiver share `c` bit-exactly).
    pub fn with_coefficients(coeffs: Vec<Complex<T>>, qam_order: usize) -> Result<Self, Error> {
        let alphabet = qam_alphabet::<T>(qam_order)?;
        let j = coeffs.len();
        if j == 0 {
            return Err(Error::Config("empty coefficient vector".into()));
        }
        let norm: T = coeffs.iter().map(|c| c.norm_sqr()).sum::<T>() / T::of(j as f64);
        if (norm - T::one()).abs() > T::of(1e-9) {
            return Err(Error::Config("coefficient vector is not normalized (c'c/J != 1)".into()));
        }
        if min_product_distance(&coeffs, &alphabet) <= T::of(MIN_PRODUCT_DISTANCE) {
            return Err(Error::Config("coefficient/QAM products are not pairwise distinct".into()));
        }
        Ok(Self::from_parts(coeffs, alphabet, qam_order, 0))
    }

    fn from_parts(coeffs: Vec<Complex<T>>, alphabet: Vec<Complex<T>>, qam_order: usize, seed: u64) -> Self {
        let j = coeffs.len();
        Self {
            coeffs,
            alphabet,
            qam_order,
            bits_index: if j > 1 { j.ilog2() as usize } else { 0 },
            bits_symbol: qam_order.ilog2() as usize,
            seed,
        }
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn alphabet(&self) -> &[Complex<T>] {
        &self.alphabet
    }

    pub fn coeff_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn qam_order(&self) -> usize {
        self.qam_order
    }

    /// Index bits per antenna, `floor(log2 J)`.
    pub fn bits_index(&self) -> usize {
        self.bits_index
    }

    /// Constellation bits per antenna, `log2 L`.
    pub fn bits_symbol(&self) -> usize {
        self.bits_symbol
    }

    pub fn bits_per_antenna(&self) -> usize {
        self.bits_index + self.bits_symbol
    }

    /// Bits carried in one transmission by `n_tx` antennas.
    pub fn bits_per_frame(&self, n_tx: usize) -> usize {
        n_tx * self.bits_per_antenna()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Gray-mapped rectangular QAM alphabet with unit average energy, indexed by
/// the bit label (I bits first, then Q bits).
pub fn qam_alphabet<T: Scalar>(qam_order: usize) -> Result<Vec<Complex<T>>, Error> {
    let (upsilon, omega) = pam_split(qam_order)?;
    let bits_i = upsilon.ilog2() as usize;
    let scale = T::of((3.0 / ((upsilon * upsilon + omega * omega) as f64 - 2.0)).sqrt());
    let level = |split: usize, label: usize| {
        let idx = gray_inverse(label);
        T::of((split as f64 - 1.0) - 2.0 * idx as f64)
    };
    Ok((0..qam_order)
        .map(|label| {
            let (li, lq) = (label >> (qam_order.ilog2() as usize - bits_i), label & (omega - 1));
            Complex::new(level(upsilon, li) * scale, level(omega, lq) * scale)
        })
        .collect())
}

/// Maps `log2 L` bits to a unit-average-energy Gray QAM symbol.
pub fn qam_modulate<T: Scalar>(bits: &[bool], qam_order: usize) -> Result<Complex<T>, Error> {
    let alphabet = qam_alphabet::<T>(qam_order)?;
    let mu = qam_order.ilog2() as usize;
    if bits.len() != mu {
        return Err(Error::Shape(format!("expected {mu} bits, got {}", bits.len())));
    }
    Ok(alphabet[bits_to_index(bits)])
}

fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

fn index_to_bits(mut idx: usize, width: usize) -> Vec<bool> {
    let mut bits = vec![false; width];
    for b in bits.iter_mut().rev() {
        *b = idx & 1 == 1;
        idx >>= 1;
    }
    bits
}

fn min_product_distance<T: Scalar>(coeffs: &[Complex<T>], alphabet: &[Complex<T>]) -> T {
    let mut products = Vec::with_capacity(coeffs.len() * alphabet.len());
    for c in coeffs {
        for x in alphabet {
            products.push(c * x);
        }
    }
    let mut min = T::infinity();
    for (i, a) in products.iter().enumerate() {
        for b in &products[i + 1..] {
            min = min.min((a - b).norm());
        }
    }
    min
}

/// Draws a normalized coefficient vector, deterministically from `seed`,
/// rejecting draws whose products with the QAM alphabet collide.
pub fn generate_coeff_vector<T: Scalar>(
    j: usize,
    seed: u64,
    alphabet: &[Complex<T>],
) -> Result<Vec<Complex<T>>, Error> {
    if j == 0 {
        return Err(Error::Config("J must be at least 1".into()));
    }
    if j == 1 {
        // Normalization forces |c_1| = 1; phase fixed to zero by convention.
        return Ok(vec![Complex::new(T::one(), T::zero())]);
    }
    for retry in 0..COEFF_RETRY_LIMIT {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(retry as u64));
        let mut coeffs: Vec<Complex<T>> = (0..j)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                Complex::new(T::of(re), T::of(im))
            })
            .collect();
        let energy: T = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let scale = (T::of(j as f64) / energy).sqrt();
        for c in &mut coeffs {
            *c = c.scale(scale);
        }
        if min_product_distance(&coeffs, alphabet) > T::of(MIN_PRODUCT_DISTANCE) {
            return Ok(coeffs);
        }
    }
    Err(Error::CoefficientRetries {
        j,
        l: alphabet.len(),
        retries: COEFF_RETRY_LIMIT,
    })
}

/// Per-antenna transmit record of one PRI.
#[derive(Debug, Clone)]
pub struct AntennaSymbol<T> {
    /// Selected coefficient index, 1-based as in the selection vector.
    pub index: usize,
    /// The unit-energy QAM symbol.
    pub qam: Complex<T>,
    /// The emitted CCIE symbol `c_i * x`.
    pub ccie: Complex<T>,
}

/// One CCIE transmission across all `N` antennas.
#[derive(Debug, Clone)]
pub struct PduFrame<T> {
    pub antennas: Vec<AntennaSymbol<T>>,
    pub bits: Vec<bool>,
}

impl<T: Scalar> PduFrame<T> {
    /// The emitted CCIE symbol vector, one entry per transmit antenna.
    pub fn ccie_symbols(&self) -> Vec<Complex<T>> {
        self.antennas.iter().map(|a| a.ccie).collect()
    }
}

/// Packs `N (mu_I + mu_C)` bits into a frame: per antenna, the first `mu_I`
/// bits select the coefficient (big-endian, 1-based), the rest map through
/// the Gray QAM table.
pub fn encode_frame<T: Scalar>(bits: &[bool], n_tx: usize, cfg: &CcieConfig<T>) -> Result<PduFrame<T>, Error> {
    let expected = cfg.bits_per_frame(n_tx);
    if bits.len() != expected {
        return Err(Error::Shape(format!(
            "frame needs {expected} bits for {n_tx} antennas, got {}",
            bits.len()
        )));
    }
    let per = cfg.bits_per_antenna();
    let antennas = bits
        .chunks(per)
        .map(|chunk| {
            let (index_bits, symbol_bits) = chunk.split_at(cfg.bits_index());
            let index = bits_to_index(index_bits) + 1;
            let qam = cfg.alphabet[bits_to_index(symbol_bits)];
            AntennaSymbol {
                index,
                qam,
                ccie: cfg.coeffs[index - 1] * qam,
            }
        })
        .collect();
    Ok(PduFrame {
        antennas,
        bits: bits.to_vec(),
    })
}

/// Result of the per-antenna ML search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Detection {
    /// Estimated coefficient index, 1-based.
    pub index: usize,
    /// Estimated symbol position in the bit-labelled alphabet, 1-based.
    pub symbol: usize,
    /// All hypotheses tied (zero channel); the (1,1) tie-break was used.
    pub degenerate: bool,
}

/// Exhaustive ML detection: argmin over `(j, l)` of `||y - c_j x_l h||^2`,
/// ties broken by the smaller `(j, l)` pair.
pub fn ml_detect<T: Scalar>(
    received: &[Complex<T>],
    channel: &[Complex<T>],
    cfg: &CcieConfig<T>,
) -> Result<Detection, Error> {
    if received.len() != channel.len() || received.is_empty() {
        return Err(Error::Shape("received/channel length mismatch".into()));
    }
    let mut best = (0usize, 0usize);
    let mut best_cost = T::infinity();
    for (j, c) in cfg.coeffs.iter().enumerate() {
        // Only the first 2^mu_I coefficients are addressable by index bits.
        if j >= 1 << cfg.bits_index() {
            break;
        }
        for (l, x) in cfg.alphabet.iter().enumerate() {
            let hyp = c * x;
            let cost: T = received
                .iter()
                .zip(channel)
                .map(|(y, h)| (y - hyp * h).norm_sqr())
                .sum();
            if cost < best_cost {
                best_cost = cost;
                best = (j, l);
            }
        }
    }
    let degenerate = channel.iter().all(|h| h.norm_sqr().is_zero());
    Ok(Detection {
        index: best.0 + 1,
        symbol: best.1 + 1,
        degenerate,
    })
}

/// Decodes one frame: antennas are independent, so the bit blocks simply
/// concatenate in antenna order.
pub fn decode_frame<T: Scalar>(
    received: &[Vec<Complex<T>>],
    channel: &[Vec<Complex<T>>],
    cfg: &CcieConfig<T>,
) -> Result<Vec<bool>, Error> {
    if received.len() != channel.len() {
        return Err(Error::Shape("per-antenna vector count mismatch".into()));
    }
    let mut bits = Vec::with_capacity(cfg.bits_per_frame(received.len()));
    for (y, h) in received.iter().zip(channel) {
        let det = ml_detect(y, h, cfg)?;
        bits.extend(index_to_bits(det.index - 1, cfg.bits_index()));
        bits.extend(index_to_bits(det.symbol - 1, cfg.bits_symbol()));
    }
    Ok(bits)
}
