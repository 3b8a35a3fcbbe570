//! Scenario JSON schema and conversion into core configuration types.
//!
//! Angles are degrees, ranges meters, frequencies Hz and times seconds.
//! Frequency-offset multipliers are strings accepted by the core parser
//! ("2", "3.17", "3+17/100"), keeping them exact.

use serde::{Deserialize, Serialize};

use fda_isac_core::array_model::{parse_offsets, ArrayConfig};
use fda_isac_core::ccie::CcieConfig;
use fda_isac_core::scene::{Scene, Target};
use fda_isac_core::C64;

use crate::CliError;

pub const SPEED_OF_LIGHT: f64 = 3.0e8;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub array: ArrayDto,
    pub ccie: CcieDto,
    pub scene: SceneDto,
    pub experiment: ExperimentDto,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayDto {
    pub n_tx: usize,
    pub n_rx: usize,
    #[serde(default = "default_carrier")]
    pub carrier_hz: f64,
    #[serde(default = "default_delta_f")]
    pub delta_f_hz: f64,
    /// Defaults to the carrier wavelength.
    #[serde(default)]
    pub d1_m: Option<f64>,
    #[serde(default)]
    pub d2_m: Option<f64>,
    pub offsets: Vec<String>,
    #[serde(default = "default_pri")]
    pub pri_s: f64,
    pub pulses_per_cpi: usize,
    #[serde(default = "default_pulse_width")]
    pub pulse_width_s: f64,
}

fn default_carrier() -> f64 {
    1.0e10
}
fn default_delta_f() -> f64 {
    2.0e6
}
fn default_pri() -> f64 {
    60.0e-6
}
fn default_pulse_width() -> f64 {
    20.0e-6
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CcieDto {
    /// Size J of the complex coefficient set.
    pub coeff_count: usize,
    pub qam_order: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDto {
    pub targets: Vec<TargetDto>,
    #[serde(default = "default_one")]
    pub comm_channel_power: f64,
    /// Receive antennas U at the communication user.
    #[serde(default = "default_two")]
    pub comm_rx_antennas: usize,
    /// Informational user location (range m, angle deg).
    #[serde(default)]
    pub comm_user: Option<(f64, f64)>,
}

fn default_one() -> f64 {
    1.0
}
fn default_two() -> usize {
    2
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetDto {
    pub range_m: f64,
    pub angle_deg: f64,
    pub velocity_mps: f64,
    #[serde(default = "default_one")]
    pub reflection_re: f64,
    #[serde(default)]
    pub reflection_im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentDto {
    pub kind: ExperimentKind,
    pub snr_grid_db: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// (s_r, s_theta) grid sizes for the spectral searches.
    #[serde(default = "default_grids")]
    pub grids: (usize, usize),
    #[serde(default = "default_angle_window")]
    pub angle_window_deg: (f64, f64),
    #[serde(default = "default_refine")]
    pub refine_iters: usize,
    /// Maximum operating range for the offset-design check; defaults to the
    /// farthest scene target.
    #[serde(default)]
    pub max_range_m: Option<f64>,
}

fn default_trials() -> usize {
    200
}
fn default_grids() -> (usize, usize) {
    (300, 300)
}
fn default_angle_window() -> (f64, f64) {
    (-90.0, 90.0)
}
fn default_refine() -> usize {
    3
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Sense,
    CommBer,
    Crb,
    Complexity,
    FodcCheck,
    Rate,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let scn: Scenario =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("scenario schema violation: {e}")))?;
        scn.validate()?;
        Ok(scn)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.experiment.trials == 0 {
            return Err(CliError::Config("experiment.trials must be at least 1".into()));
        }
        if self.experiment.snr_grid_db.is_empty() {
            return Err(CliError::Config("experiment.snr_grid_db must be non-empty".into()));
        }
        self.array_config().map(|_| ())?;
        self.ccie_config().map(|_| ())?;
        let cfg = self.array_config()?;
        self.scene(1.0, 1.0).validate(&cfg).map_err(CliError::from_core_config)?;
        Ok(())
    }

    pub fn array_config(&self) -> Result<ArrayConfig<f64>, CliError> {
        let a = &self.array;
        let refs: Vec<&str> = a.offsets.iter().map(String::as_str).collect();
        let offsets = parse_offsets(&refs).map_err(CliError::from_core_config)?;
        let wavelength = SPEED_OF_LIGHT / a.carrier_hz;
        ArrayConfig::new(
            a.n_tx,
            a.n_rx,
            a.carrier_hz,
            a.delta_f_hz,
            a.d1_m.unwrap_or(wavelength),
            a.d2_m.unwrap_or(wavelength),
            offsets,
            a.pri_s,
            a.pulses_per_cpi,
            a.pulse_width_s,
        )
        .map_err(CliError::from_core_config)
    }

    pub fn ccie_config(&self) -> Result<CcieConfig<f64>, CliError> {
        CcieConfig::new(self.ccie.coeff_count, self.ccie.qam_order, self.ccie.seed)
            .map_err(CliError::from_core_config)
    }

    /// Materializes the scene at the given receiver noise powers.
    pub fn scene(&self, sensing_noise_power: f64, comm_noise_power: f64) -> Scene<f64> {
        Scene {
            targets: self
                .scene
                .targets
                .iter()
                .map(|t| Target {
                    range_m: t.range_m,
                    angle_deg: t.angle_deg,
                    velocity_mps: t.velocity_mps,
                    reflection: C64::new(t.reflection_re, t.reflection_im),
                })
                .collect(),
            sensing_noise_power,
            comm_noise_power,
            comm_channel_power: self.scene.comm_channel_power,
            comm_user: self.scene.comm_user,
        }
    }

    pub fn max_range_m(&self) -> f64 {
        self.experiment.max_range_m.unwrap_or_else(|| {
            self.scene
                .targets
                .iter()
                .map(|t| t.range_m)
                .fold(0.0, f64::max)
        })
    }
}

/// The §-style default: three targets, six-element FODC array, 200 pulses.
pub fn three_target_fodc(kind: ExperimentKind) -> Scenario {
    Scenario {
        array: ArrayDto {
            n_tx: 6,
            n_rx: 6,
            carrier_hz: default_carrier(),
            delta_f_hz: default_delta_f(),
            d1_m: None,
            d2_m: None,
            offsets: ["0", "1", "2", "3.17", "4.2", "5.2"].map(String::from).to_vec(),
            pri_s: default_pri(),
            pulses_per_cpi: 200,
            pulse_width_s: default_pulse_width(),
        },
        ccie: CcieDto { coeff_count: 4, qam_order: 4, seed: 7 },
        scene: SceneDto {
            targets: vec![
                TargetDto { range_m: 40.9, angle_deg: 10.55, velocity_mps: 8.62, reflection_re: 1.0, reflection_im: 0.0 },
                TargetDto { range_m: 89.6, angle_deg: 10.55, velocity_mps: 20.42, reflection_re: 1.0, reflection_im: 0.0 },
                TargetDto { range_m: 115.9, angle_deg: 32.01, velocity_mps: 36.5, reflection_re: 1.0, reflection_im: 0.0 },
            ],
            comm_channel_power: 1.0,
            comm_rx_antennas: 2,
            comm_user: None,
        },
        experiment: ExperimentDto {
            kind,
            snr_grid_db: vec![5.0],
            trials: default_trials(),
            master_seed: 1,
            grids: default_grids(),
            angle_window_deg: (0.0, 45.0),
            refine_iters: default_refine(),
            max_range_m: None,
        },
    }
}
