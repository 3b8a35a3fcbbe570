//! Scene definition and snapshot synthesis.
//!
//! Builds the slow-time receive data for a CPI: per pulse, the target
//! returns phase-rotate with Doppler, get multiplied by the CCIE symbol of
//! the emitting antenna, and are buried in circular complex Gaussian noise.
//! The sensing side then divides the symbols back out (compensation), which
//! cancels them exactly in the noiseless case.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::array_model::{joint_steering, ArrayConfig};
use crate::ccie::{encode_frame, CcieConfig, PduFrame};
use crate::linalg::CMat;
use crate::scalar::{speed_of_light, Scalar};
use crate::Error;

/// A point target in the scene.
#[derive(Debug, Clone)]
pub struct Target<T> {
    pub range_m: T,
    pub angle_deg: T,
    pub velocity_mps: T,
    pub reflection: Complex<T>,
}

impl<T: Scalar> Target<T> {
    pub fn angle_rad(&self) -> T {
        self.angle_deg.to_radians()
    }

    /// Doppler shift `F = 2 v f_c / c` in Hz.
    pub fn doppler_hz(&self, cfg: &ArrayConfig<T>) -> T {
        T::of(2.0) * self.velocity_mps * cfg.carrier_hz / speed_of_light::<T>()
    }

    pub fn validate(&self, cfg: &ArrayConfig<T>) -> Result<(), Error> {
        if self.range_m < T::zero() {
            return Err(Error::Config("target range must be non-negative".into()));
        }
        if self.angle_deg.abs() > T::of(90.0) {
            return Err(Error::Config("target angle must lie in [-90, 90] degrees".into()));
        }
        let v_max = speed_of_light::<T>() / (T::of(4.0) * cfg.carrier_hz * cfg.pri_s);
        if self.velocity_mps.abs() >= v_max {
            return Err(Error::Config(format!(
                "target velocity {} m/s exceeds the unambiguous limit {} m/s",
                self.velocity_mps, v_max
            )));
        }
        Ok(())
    }
}

/// Point targets plus the noise/channel powers of both receivers.
#[derive(Debug, Clone)]
pub struct Scene<T> {
    pub targets: Vec<Target<T>>,
    /// Sensing receiver noise power (sigma_1^2).
    pub sensing_noise_power: T,
    /// Communication receiver noise power (sigma_2^2).
    pub comm_noise_power: T,
    /// Rayleigh channel power (sigma_C^2).
    pub comm_channel_power: T,
    /// Informational user location (range m, angle deg).
    pub comm_user: Option<(T, T)>,
}

impl<T: Scalar> Scene<T> {
    pub fn validate(&self, cfg: &ArrayConfig<T>) -> Result<(), Error> {
        if !(self.sensing_noise_power >= T::zero())
            || !(self.comm_noise_power >= T::zero())
            || !(self.comm_channel_power > T::zero())
        {
            return Err(Error::Config("noise/channel powers must be positive".into()));
        }
        for t in &self.targets {
            t.validate(cfg)?;
        }
        Ok(())
    }
}

/// One circularly-symmetric complex Gaussian draw of the given variance.
pub fn complex_gaussian<T: Scalar, R: Rng + ?Sized>(rng: &mut R, variance: T) -> Complex<T> {
    let sigma = (variance / T::of(2.0)).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(sigma * T::of(re), sigma * T::of(im))
}

/// Doppler phase progression `psi_g^k = F_g (k-1) T` in cycles; `k` is
/// 1-based.
pub fn doppler_phase<T: Scalar>(target: &Target<T>, k: usize, cfg: &ArrayConfig<T>) -> T {
    debug_assert!(k >= 1);
    target.doppler_hz(cfg) * T::of((k - 1) as f64) * cfg.pri_s
}

/// Raw (uncompensated) receive snapshot `y^k` of length `M N`.
pub fn synth_snapshot<T: Scalar, R: Rng + ?Sized>(
    scene: &Scene<T>,
    cfg: &ArrayConfig<T>,
    frame: &PduFrame<T>,
    k: usize,
    rng: &mut R,
) -> Result<Vec<Complex<T>>, Error> {
    if frame.antennas.len() != cfg.n_tx {
        return Err(Error::Shape(format!(
            "frame has {} antennas, array has {}",
            frame.antennas.len(),
            cfg.n_tx
        )));
    }
    let symbols = frame.ccie_symbols();
    let mut y = vec![Complex::new(T::zero(), T::zero()); cfg.mn()];
    for target in &scene.targets {
        let steering = joint_steering(target.range_m, target.angle_rad(), cfg);
        let cycles = doppler_phase(target, k, cfg);
        let phase = T::of(2.0) * T::PI() * cycles;
        let rot = target.reflection * Complex::new(phase.cos(), phase.sin());
        for (i, (acc, a)) in y.iter_mut().zip(&steering.entries).enumerate() {
            *acc = *acc + rot * a * symbols[i % cfg.n_tx];
        }
    }
    if scene.sensing_noise_power > T::zero() {
        for acc in &mut y {
            *acc = *acc + complex_gaussian(rng, scene.sensing_noise_power);
        }
    }
    Ok(y)
}

/// Divides the CCIE symbols back out of a raw snapshot, yielding the
/// symbol-free model. Division (conjugate over squared modulus) cancels the
/// symbol exactly even when it is not unit-modulus.
pub fn compensate<T: Scalar>(y_raw: &[Complex<T>], frame: &PduFrame<T>) -> Result<Vec<Complex<T>>, Error> {
    let n = frame.antennas.len();
    if y_raw.len() % n != 0 {
        return Err(Error::Shape("snapshot length is not a multiple of the antenna count".into()));
    }
    let symbols = frame.ccie_symbols();
    if symbols.iter().any(|x| x.norm_sqr().is_zero()) {
        return Err(Error::Config("zero CCIE symbol cannot be compensated".into()));
    }
    Ok(y_raw
        .iter()
        .enumerate()
        .map(|(i, y)| y / symbols[i % n])
        .collect())
}

/// All slow-time data of one CPI plus the ground-truth factors used by test
/// oracles.
#[derive(Debug, Clone)]
pub struct SnapshotSet<T> {
    /// Compensated snapshots, `MN x K`, column `k` is `y~^k`.
    pub data: CMat<T>,
    /// Raw snapshots before compensation.
    pub raw: CMat<T>,
    /// The `K` transmitted frames.
    pub frames: Vec<PduFrame<T>>,
    /// Ground-truth manifold matrix `A`, `MN x G`.
    pub manifold: CMat<T>,
    /// Ground-truth Doppler matrix `D`, `G x K` (reflection absorbed).
    pub doppler: CMat<T>,
}

impl<T: Scalar> SnapshotSet<T> {
    pub fn snapshots(&self) -> usize {
        self.data.cols()
    }
}

/// Synthesizes a full CPI: `K` random frames, compensated columns, plus the
/// `A` and `D` factors of the noiseless model.
pub fn synth_cpi<T: Scalar, R: Rng + ?Sized>(
    scene: &Scene<T>,
    cfg: &ArrayConfig<T>,
    ccie: &CcieConfig<T>,
    rng: &mut R,
) -> Result<SnapshotSet<T>, Error> {
    scene.validate(cfg)?;
    let k_total = cfg.pulses_per_cpi;
    let g = scene.targets.len();
    let mut raw = CMat::zeros(cfg.mn(), k_total);
    let mut data = CMat::zeros(cfg.mn(), k_total);
    let mut frames = Vec::with_capacity(k_total);
    for k in 1..=k_total {
        let bits: Vec<bool> = (0..ccie.bits_per_frame(cfg.n_tx)).map(|_| rng.random()).collect();
        let frame = encode_frame(&bits, cfg.n_tx, ccie)?;
        let y = synth_snapshot(scene, cfg, &frame, k, rng)?;
        raw.set_column(k - 1, &y);
        data.set_column(k - 1, &compensate(&y, &frame)?);
        frames.push(frame);
    }
    let mut manifold = CMat::zeros(cfg.mn(), g);
    let mut doppler = CMat::zeros(g, k_total);
    for (gi, target) in scene.targets.iter().enumerate() {
        let steering = joint_steering(target.range_m, target.angle_rad(), cfg);
        manifold.set_column(gi, &steering.entries);
        for k in 1..=k_total {
            let phase = T::of(2.0) * T::PI() * doppler_phase(target, k, cfg);
            doppler[(gi, k - 1)] = target.reflection * Complex::new(phase.cos(), phase.sin());
        }
    }
    Ok(SnapshotSet {
        data,
        raw,
        frames,
        manifold,
        doppler,
    })
}

/// Draws the `U x N` Rayleigh channel: column `n` is the channel vector of
/// transmit antenna `n`, entries i.i.d. `CN(0, sigma_C^2)`.
pub fn draw_rayleigh_channel<T: Scalar, R: Rng + ?Sized>(
    n_tx: usize,
    u_rx: usize,
    channel_power: T,
    rng: &mut R,
) -> Vec<Vec<Complex<T>>> {
    (0..n_tx)
        .map(|_| (0..u_rx).map(|_| complex_gaussian(rng, channel_power)).collect())
        .collect()
}

/// Communication receive vectors: per transmit antenna `n`, the stacked
/// outputs of the `U` receive antennas, `y_n = x~_n h_n + noise`.
pub fn synth_comm_rx<T: Scalar, R: Rng + ?Sized>(
    frame: &PduFrame<T>,
    channel: &[Vec<Complex<T>>],
    noise_power: T,
    rng: &mut R,
) -> Result<Vec<Vec<Complex<T>>>, Error> {
    if channel.len() != frame.antennas.len() {
        return Err(Error::Shape("channel column count must match antenna count".into()));
    }
    Ok(frame
        .antennas
        .iter()
        .zip(channel)
        .map(|(ant, h)| {
            h.iter()
                .map(|hv| {
                    let mut v = ant.ccie * hv;
                    if noise_power > T::zero() {
                        v = v + complex_gaussian(rng, noise_power);
                    }
                    v
                })
                .collect()
        })
        .collect())
}
