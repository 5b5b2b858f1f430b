//! Run configuration: a TOML document with a physical-constants block, the
//! spin-system block, and simulation settings. Unknown keys are rejected;
//! every numeric key carries its unit in its name.

use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{NvError, Result};
use crate::spin::{c3v_tensor, CarbonSite, SpinSystem};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub constants: PhysicalConstants,
    pub system: SystemConfig,
    #[serde(default)]
    pub simulation: SimulationConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub d_hz: f64,
    pub field_gauss: [f64; 3],
    #[serde(default)]
    pub nitrogen: Option<NitrogenConfig>,
    #[serde(default)]
    pub carbons: Vec<CarbonConfig>,
}

/// 14N block: quadrupole plus the two independent C3v tensor parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NitrogenConfig {
    pub p_hz: f64,
    pub a_axial_hz: f64,
    pub a_transverse_hz: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarbonConfig {
    pub name: String,
    /// Row-major 3x3 symmetric tensor, Hz.
    pub tensor_hz: [[f64; 3]; 3],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    pub seed: u64,
    pub ramsey: RamseyConfig,
    pub odmr: OdmrConfig,
    pub extract: ExtractConfig,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            ramsey: RamseyConfig::default(),
            odmr: OdmrConfig::default(),
            extract: ExtractConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RamseyConfig {
    /// Carbon site to drive; default: the first carbon in the system.
    pub nucleus: Option<String>,
    /// +1 or -1 electron manifold.
    pub manifold: i8,
    /// Drive detuning from the true transition, Hz (RF = transition - detuning).
    pub detuning_hz: f64,
    pub duration_s: f64,
    pub samples: usize,
    pub t2_star_s: f64,
    pub stretch: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub baseline: f64,
    pub polarization_efficiency: f64,
    pub noise_sigma: f64,
}

impl Default for RamseyConfig {
    fn default() -> Self {
        Self {
            nucleus: None,
            manifold: 1,
            detuning_hz: 1203.5,
            duration_s: 3e-3,
            samples: 600,
            t2_star_s: 2.5e-3,
            stretch: 1.4,
            amplitude: 0.3,
            offset: 0.0,
            baseline: 0.5,
            polarization_efficiency: 1.0,
            noise_sigma: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OdmrConfig {
    /// Grid center; default: D.
    pub center_hz: Option<f64>,
    pub span_hz: f64,
    pub points: usize,
    pub linewidth_hz: f64,
    pub contrast_depth: f64,
}

impl Default for OdmrConfig {
    fn default() -> Self {
        Self {
            center_hz: None,
            // wide enough to cover D +- gamma_e * Bz at tens of Gauss
            span_hz: 150e6,
            points: 2001,
            linewidth_hz: 1e6,
            contrast_depth: 0.15,
        }
    }
}

/// Temperature-parameterized tensor series for the `extract` command: the
/// chosen carbon's A_zz drifts linearly about the reference temperature.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExtractConfig {
    pub nucleus: Option<String>,
    pub temps_k: Vec<f64>,
    pub reference_temp_k: f64,
    pub azz_slope_hz_per_k: f64,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        Self {
            nucleus: None,
            temps_k: vec![295.0, 300.0, 305.0, 310.0, 315.0, 320.0],
            reference_temp_k: 300.0,
            azz_slope_hz_per_k: 110.9,
        }
    }
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| {
            NvError::Validation(format!("{}: {e}", path.display()))
        })
    }

    pub fn build_system(&self) -> Result<SpinSystem> {
        let s = &self.system;
        let mut sys = SpinSystem::electron_only(
            s.d_hz,
            Vector3::new(s.field_gauss[0], s.field_gauss[1], s.field_gauss[2]),
        )
        .with_constants(&self.constants);
        if let Some(n) = &s.nitrogen {
            sys = sys.with_nitrogen(n.p_hz, c3v_tensor(n.a_axial_hz, n.a_transverse_hz));
        }
        for c in &s.carbons {
            let t = Matrix3::from_fn(|i, j| c.tensor_hz[i][j]);
            sys = sys.with_carbon(CarbonSite::new(c.name.clone(), t));
        }
        sys.validate()?;
        Ok(sys)
    }
}
