//! FDA-MIMO array geometry, steering vectors and frequency-offset design.
//!
//! Each transmit element radiates at `f_c + eps_n * delta_f`. The offset
//! multipliers `eps_n` are kept as exact rationals so the range period of
//! the transmit steering vector (an LCM over the fractional parts) is
//! computed exactly instead of through floating-point guesswork.

use num_complex::Complex;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::scalar::{speed_of_light, Scalar};
use crate::Error;

/// Maximum number of decimal digits accepted when parsing a fractional
/// offset written in decimal notation.
const MAX_DECIMAL_DIGITS: usize = 12;

/// Parses an offset multiplier written as `"5"`, `"5.2"`, `"17/100"` or
/// `"3+17/100"` into an exact rational.
pub fn parse_offset(s: &str) -> Result<Rational64, Error> {
    let s = s.trim();
    let bad = |msg: &str| Error::Config(format!("offset '{s}': {msg}"));
    if s.is_empty() {
        return Err(bad("empty"));
    }
    if let Some((int_part, frac_part)) = s.split_once('+') {
        let i: i64 = int_part
            .trim()
            .parse()
            .map_err(|_| bad("integer part is not an integer"))?;
        let q = parse_offset(frac_part)?;
        return Ok(Rational64::from_integer(i) + q);
    }
    if let Some((num, den)) = s.split_once('/') {
        let p: i64 = num.trim().parse().map_err(|_| bad("bad numerator"))?;
        let q: i64 = den.trim().parse().map_err(|_| bad("bad denominator"))?;
        if q == 0 {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational64::new(p, q));
    }
    if let Some((int_part, dec_part)) = s.split_once('.') {
        if dec_part.is_empty() || !dec_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("bad decimal digits"));
        }
        if dec_part.len() > MAX_DECIMAL_DIGITS {
            return Err(bad("more than 12 decimal digits; use p/q notation"));
        }
        let i: i64 = int_part.parse().map_err(|_| bad("bad integer part"))?;
        let digits: i64 = dec_part.parse().map_err(|_| bad("bad decimal digits"))?;
        let scale = 10i64.pow(dec_part.len() as u32);
        return Ok(Rational64::from_integer(i) + Rational64::new(digits, scale));
    }
    let i: i64 = s.parse().map_err(|_| bad("not a number"))?;
    Ok(Rational64::from_integer(i))
}

/// Formats an offset the way scenario files write it (`"3+17/100"` for
/// non-integers, plain integer otherwise).
pub fn format_offset(eps: Rational64) -> String {
    if eps.is_integer() {
        return eps.to_integer().to_string();
    }
    let int = eps.floor().to_integer();
    let frac = eps - Rational64::from_integer(int);
    if int == 0 {
        format!("{}/{}", frac.numer(), frac.denom())
    } else {
        format!("{}+{}/{}", int, frac.numer(), frac.denom())
    }
}

/// Antenna counts, carrier, spacings, offset multipliers and CPI timing.
#[derive(Debug, Clone)]
pub struct ArrayConfig<T> {
    pub n_tx: usize,
    pub n_rx: usize,
    pub carrier_hz: T,
    pub delta_f_hz: T,
    pub d1_m: T,
    pub d2_m: T,
    /// Per-antenna frequency-offset multipliers, exact rationals.
    pub offsets: Vec<Rational64>,
    pub pri_s: T,
    pub pulses_per_cpi: usize,
    pub pulse_width_s: T,
}

impl<T: Scalar> ArrayConfig<T> {
    /// Validated constructor.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n_tx: usize,
        n_rx: usize,
        carrier_hz: T,
        delta_f_hz: T,
        d1_m: T,
        d2_m: T,
        offsets: Vec<Rational64>,
        pri_s: T,
        pulses_per_cpi: usize,
        pulse_width_s: T,
    ) -> Result<Self, Error> {
        let cfg = Self {
            n_tx,
            n_rx,
            carrier_hz,
            delta_f_hz,
            d1_m,
            d2_m,
            offsets,
            pri_s,
            pulses_per_cpi,
            pulse_width_s,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The simulation defaults: X-band carrier, 2 MHz offset increment,
    /// wavelength element spacing, 60 us PRI with a 20 us pulse.
    pub fn x_band(n_tx: usize, n_rx: usize, offsets: Vec<Rational64>, pulses_per_cpi: usize) -> Result<Self, Error> {
        let carrier = T::of(1.0e10);
        let wavelength = speed_of_light::<T>() / carrier;
        Self::new(
            n_tx,
            n_rx,
            carrier,
            T::of(2.0e6),
            wavelength,
            wavelength,
            offsets,
            T::of(60.0e-6),
            pulses_per_cpi,
            T::of(20.0e-6),
        )
    }

    pub fn validate(&self) -> Result<(), Error> {
        let err = |msg: String| Err(Error::Config(msg));
        if self.n_tx < 1 || self.n_rx < 1 {
            return err("need at least one transmit and one receive antenna".into());
        }
        if self.pulses_per_cpi < 2 {
            return err("a CPI needs at least two pulses".into());
        }
        if !(self.carrier_hz > T::zero()) || !(self.delta_f_hz > T::zero()) {
            return err("carrier and offset increment must be positive".into());
        }
        if !(self.pulse_width_s > T::zero()) || self.pulse_width_s > self.pri_s {
            return err("pulse width must satisfy 0 < T_W <= PRI".into());
        }
        if self.offsets.len() != self.n_tx {
            return err(format!(
                "expected {} offset multipliers, got {}",
                self.n_tx,
                self.offsets.len()
            ));
        }
        if self.offsets[0] != Rational64::zero() {
            return err("first offset multiplier must be 0 (antenna 1 sits on the carrier)".into());
        }
        for w in self.offsets.windows(2) {
            if w[1] - w[0] < Rational64::from_integer(1) {
                return err(format!(
                    "offset multipliers must increase by at least 1 for waveform orthogonality ({} then {})",
                    format_offset(w[0]),
                    format_offset(w[1])
                ));
            }
        }
        if self.offsets.iter().any(|e| e.is_negative()) {
            return err("offset multipliers must be non-negative".into());
        }
        Ok(())
    }

    /// Offset multiplier of antenna `n` (0-based) as a float.
    pub fn offset_value(&self, n: usize) -> T {
        T::of(self.offsets[n].to_f64().expect("rational offset fits f64"))
    }

    /// Range-bin size `c / (2 delta_f)` in meters.
    pub fn range_bin_m(&self) -> T {
        speed_of_light::<T>() / (T::of(2.0) * self.delta_f_hz)
    }

    /// Upper bound `c T / 2` on the unambiguous system sensing range.
    pub fn max_system_range_m(&self) -> T {
        speed_of_light::<T>() * self.pri_s / T::of(2.0)
    }

    pub fn mn(&self) -> usize {
        self.n_tx * self.n_rx
    }
}

/// Which physical response a steering vector describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteeringKind {
    TxRange,
    TxAngle,
    RxAngle,
    TxRxJoint,
}

/// Per-element unit-modulus array response.
#[derive(Debug, Clone)]
pub struct SteeringVector<T> {
    pub entries: Vec<Complex<T>>,
    pub kind: SteeringKind,
}

impl<T: Scalar> SteeringVector<T> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn unit_phasor<T: Scalar>(phase: T) -> Complex<T> {
    Complex::new(phase.cos(), phase.sin())
}

/// Transmit range steering vector: entry `n` is
/// `exp(-j 2 pi eps_n delta_f 2R / c)`.
pub fn tx_range_steering<T: Scalar>(range_m: T, cfg: &ArrayConfig<T>) -> SteeringVector<T> {
    let two_pi = T::of(2.0) * T::PI();
    let scale = -two_pi * cfg.delta_f_hz * (T::of(2.0) * range_m) / speed_of_light::<T>();
    SteeringVector {
        entries: (0..cfg.n_tx)
            .map(|n| unit_phasor(scale * cfg.offset_value(n)))
            .collect(),
        kind: SteeringKind::TxRange,
    }
}

/// Transmit angle steering vector: entry `n` is
/// `exp(j 2 pi f_c (n-1) d1 sin(theta) / c)`.
pub fn tx_angle_steering<T: Scalar>(theta_rad: T, cfg: &ArrayConfig<T>) -> SteeringVector<T> {
    let two_pi = T::of(2.0) * T::PI();
    let scale = two_pi * cfg.carrier_hz * cfg.d1_m * theta_rad.sin() / speed_of_light::<T>();
    SteeringVector {
        entries: (0..cfg.n_tx)
            .map(|n| unit_phasor(scale * T::of(n as f64)))
            .collect(),
        kind: SteeringKind::TxAngle,
    }
}

/// Receive angle steering vector over the `M` receive elements.
pub fn rx_angle_steering<T: Scalar>(theta_rad: T, cfg: &ArrayConfig<T>) -> SteeringVector<T> {
    let two_pi = T::of(2.0) * T::PI();
    let scale = two_pi * cfg.carrier_hz * cfg.d2_m * theta_rad.sin() / speed_of_light::<T>();
    SteeringVector {
        entries: (0..cfg.n_rx)
            .map(|m| unit_phasor(scale * T::of(m as f64)))
            .collect(),
        kind: SteeringKind::RxAngle,
    }
}

/// Joint transmit-receive steering vector
/// `a_R(theta) kron [a_T(R) had a_T(theta)]`, length `M N`.
pub fn joint_steering<T: Scalar>(range_m: T, theta_rad: T, cfg: &ArrayConfig<T>) -> SteeringVector<T> {
    let rx = rx_angle_steering(theta_rad, cfg);
    let txr = tx_range_steering(range_m, cfg);
    let txa = tx_angle_steering(theta_rad, cfg);
    let mut entries = Vec::with_capacity(cfg.mn());
    for m in 0..cfg.n_rx {
        for n in 0..cfg.n_tx {
            entries.push(rx.entries[m] * txr.entries[n] * txa.entries[n]);
        }
    }
    SteeringVector {
        entries,
        kind: SteeringKind::TxRxJoint,
    }
}

/// Range period of the transmit range steering vector:
/// `(c / 2 delta_f) * LCM(denominators of the fractional offset parts)`.
///
/// Returns `+inf` for the degenerate all-zero-offset array, whose range
/// steering vector is constant.
pub fn steering_range_period<T: Scalar>(cfg: &ArrayConfig<T>) -> T {
    if cfg.offsets.iter().all(Rational64::is_zero) {
        return T::infinity();
    }
    T::of(period_lcm(cfg) as f64) * cfg.range_bin_m()
}

/// LCM of the per-antenna period multipliers (the denominators of the
/// fractional offset parts in lowest terms).
fn period_lcm<T: Scalar>(cfg: &ArrayConfig<T>) -> i64 {
    offset_denominators(cfg).into_iter().fold(1i64, |acc, d| acc.lcm(&d))
}

/// Per-antenna period multiplier: the denominator of the fractional part of
/// `eps_n` in lowest terms (1 for integer multipliers).
pub fn offset_denominators<T: Scalar>(cfg: &ArrayConfig<T>) -> Vec<i64> {
    cfg.offsets
        .iter()
        .map(|eps| {
            let frac = eps.fract();
            *frac.denom()
        })
        .collect()
}

/// Outcome of the frequency-offset design check.
#[derive(Debug, Clone)]
pub struct FodcReport<T> {
    /// Range period of the transmit steering vector (may be `+inf`).
    pub period_m: T,
    /// Per-antenna period multipliers entering the LCM.
    pub denominators: Vec<i64>,
    /// The nominal system bound `c T / 2`.
    pub ct_half_m: T,
    /// The range the check was run against.
    pub max_range_m: T,
    pub pass: bool,
}

/// Checks that the steering-vector range period covers `max_range_m`, so no
/// range ambiguity occurs inside the range of interest.
pub fn validate_fodc<T: Scalar>(cfg: &ArrayConfig<T>, max_range_m: T) -> FodcReport<T> {
    let period_m = steering_range_period(cfg);
    FodcReport {
        period_m,
        denominators: offset_denominators(cfg),
        ct_half_m: cfg.max_system_range_m(),
        max_range_m,
        pass: period_m >= max_range_m,
    }
}

/// Parses a list of offset strings into exact rationals.
pub fn parse_offsets(strings: &[&str]) -> Result<Vec<Rational64>, Error> {
    strings.iter().map(|s| parse_offset(s)).collect()
}
