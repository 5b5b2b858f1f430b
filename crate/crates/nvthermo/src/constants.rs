//! Physical constants as configuration values.
//!
//! Every frequency-per-field ratio and thermodynamic constant used by the
//! toolkit flows through [`PhysicalConstants`] so a run can override them
//! from its config file. The defaults are CODATA 2018 values plus the
//! commonly used gyromagnetic ratios for the NV electron spin, the host
//! nitrogen, and lattice carbon:
//!
//! * `gamma_e`: 28.02495164 GHz/T -> 2.802495164e6 Hz/G
//! * `gamma_n14`: 3.0777 MHz/T -> 307.77 Hz/G
//! * `gamma_c13`: 10.7084 MHz/T -> 1070.84 Hz/G
//!
//! Internally all couplings are in Hz, fields in Gauss, and phonon energies
//! in meV.

use serde::{Deserialize, Serialize};

/// Planck constant, J s (exact, SI 2019).
pub const PLANCK_J_S: f64 = 6.62607015e-34;
/// Boltzmann constant, J/K (exact, SI 2019).
pub const BOLTZMANN_J_PER_K: f64 = 1.380649e-23;
/// Elementary charge, C (exact, SI 2019).
pub const ELEMENTARY_CHARGE_C: f64 = 1.602176634e-19;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicalConstants {
    /// Electron gyromagnetic ratio, Hz/G.
    pub gamma_e_hz_per_g: f64,
    /// 14N nuclear gyromagnetic ratio, Hz/G.
    pub gamma_n14_hz_per_g: f64,
    /// 13C nuclear gyromagnetic ratio, Hz/G.
    pub gamma_c13_hz_per_g: f64,
    /// Planck constant, J s.
    pub planck_j_s: f64,
    /// Boltzmann constant, J/K.
    pub boltzmann_j_per_k: f64,
    /// Elementary charge, C (meV <-> Hz conversion).
    pub elementary_charge_c: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            gamma_e_hz_per_g: 2.802495164e6,
            gamma_n14_hz_per_g: 307.77,
            gamma_c13_hz_per_g: 1070.84,
            planck_j_s: PLANCK_J_S,
            boltzmann_j_per_k: BOLTZMANN_J_PER_K,
            elementary_charge_c: ELEMENTARY_CHARGE_C,
        }
    }
}

impl PhysicalConstants {
    /// Reduced Planck constant, J s.
    pub fn hbar_j_s(&self) -> f64 {
        self.planck_j_s / (2.0 * std::f64::consts::PI)
    }

    /// Boltzmann constant expressed in meV/K.
    pub fn boltzmann_mev_per_k(&self) -> f64 {
        self.boltzmann_j_per_k / (self.elementary_charge_c * 1e-3)
    }

    /// Convert a phonon energy in meV to an equivalent frequency in Hz.
    pub fn mev_to_hz(&self, energy_mev: f64) -> f64 {
        energy_mev * 1e-3 * self.elementary_charge_c / self.planck_j_s
    }

    /// Inverse of [`mev_to_hz`](Self::mev_to_hz).
    pub fn hz_to_mev(&self, freq_hz: f64) -> f64 {
        freq_hz * self.planck_j_s / (self.elementary_charge_c * 1e-3)
    }
}
