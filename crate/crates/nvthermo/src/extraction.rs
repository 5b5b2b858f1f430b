//! Hyperfine-coupling extraction from nuclear transition frequencies.
//!
//! The coupling readout averages the two nuclear transition frequencies
//! measured inside the mS = +1 and mS = -1 manifolds:
//!
//!   A = (omega_plus + omega_minus) / 2 = sqrt(Azx^2 + Azy^2 + Azz^2) + R
//!
//! R is evaluated numerically as mean minus norm; its stability against
//! kHz-scale tensor drift at fixed bias field is a tested property, not an
//! assumption.

use nalgebra::{Matrix3, Vector3};

use crate::error::{NvError, Result};
use crate::spin::{
    build_hamiltonian, eigendecompose, label_eigenstates, transition_frequency, LabelKey,
    SpinSystem, DEFAULT_LABEL_THRESHOLD,
};

/// Nuclear transition frequencies inside the two electron manifolds, Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldFrequencies {
    pub omega_plus_hz: f64,
    pub omega_minus_hz: f64,
    pub nucleus: String,
}

/// The two-frequency mean, the tensor z-row norm, and their difference.
/// `mean = coupling_norm + remainder` holds exactly by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionResult {
    pub mean_hz: f64,
    pub coupling_norm_hz: f64,
    pub remainder_hz: f64,
}

/// A series of hyperfine tensors taken at one fixed bias field, emulating
/// temperature drift of the coupling.
#[derive(Debug, Clone)]
pub struct TensorSeries {
    pub field_gauss: Vector3<f64>,
    pub tensors: Vec<Matrix3<f64>>,
}

/// sqrt(Azx^2 + Azy^2 + Azz^2) of a hyperfine tensor, Hz.
pub fn coupling_norm(tensor_hz: &Matrix3<f64>) -> f64 {
    (tensor_hz[(2, 0)].powi(2) + tensor_hz[(2, 1)].powi(2) + tensor_hz[(2, 2)].powi(2)).sqrt()
}

/// Nuclear transition frequencies of `nucleus` within the mS = +1 and
/// mS = -1 manifolds.
///
/// Spectator nuclei are pinned at a fixed reference label (14N at mI = +1,
/// other carbons at mI = +1/2) so the lookup is deterministic.
pub fn manifold_frequencies(system: &SpinSystem, nucleus: &str) -> Result<ManifoldFrequencies> {
    let ci = system.carbon_index(nucleus)?;
    let h = build_hamiltonian(system)?;
    let decomp = eigendecompose(&h)?;
    let labeled = label_eigenstates(&decomp, system, DEFAULT_LABEL_THRESHOLD)?;

    let key = |m_s: i8, m_c: i8| -> LabelKey {
        let mut m_i_c = vec![1i8; system.carbons.len()];
        m_i_c[ci] = m_c;
        LabelKey {
            m_s,
            m_i_n: if system.include_n { Some(1) } else { None },
            m_i_c,
        }
    };

    let omega_plus_hz = transition_frequency(&labeled, &key(1, 1), &key(1, -1))?;
    let omega_minus_hz = transition_frequency(&labeled, &key(-1, 1), &key(-1, -1))?;
    Ok(ManifoldFrequencies {
        omega_plus_hz,
        omega_minus_hz,
        nucleus: nucleus.to_string(),
    })
}

/// Two-frequency mean and numeric remainder for the source tensor.
pub fn mean_coupling(freqs: &ManifoldFrequencies, tensor_hz: &Matrix3<f64>) -> ExtractionResult {
    let mean_hz = 0.5 * (freqs.omega_plus_hz + freqs.omega_minus_hz);
    let coupling_norm_hz = coupling_norm(tensor_hz);
    ExtractionResult {
        mean_hz,
        coupling_norm_hz,
        remainder_hz: mean_hz - coupling_norm_hz,
    }
}

/// Convenience: full extraction for one nucleus of the system.
pub fn extract(system: &SpinSystem, nucleus: &str) -> Result<(ManifoldFrequencies, ExtractionResult)> {
    let ci = system.carbon_index(nucleus)?;
    let freqs = manifold_frequencies(system, nucleus)?;
    let result = mean_coupling(&freqs, &system.carbons[ci].tensor_hz);
    Ok((freqs, result))
}

/// Remainder R for each tensor of a fixed-field series.
///
/// The spread max(R) - min(R) quantifies how temperature-independent the
/// remainder is; see [`remainder_spread`].
pub fn remainder_stability(
    system: &SpinSystem,
    nucleus: &str,
    series: &TensorSeries,
) -> Result<Vec<f64>> {
    if series.field_gauss != system.field_gauss {
        return Err(NvError::Contract(format!(
            "bias field changed within series: system at {:?} G, series at {:?} G",
            system.field_gauss.as_slice(),
            series.field_gauss.as_slice()
        )));
    }
    let ci = system.carbon_index(nucleus)?;
    let mut remainders = Vec::with_capacity(series.tensors.len());
    for tensor in &series.tensors {
        let mut sys = system.clone();
        sys.carbons[ci].tensor_hz = *tensor;
        let freqs = manifold_frequencies(&sys, nucleus)?;
        remainders.push(mean_coupling(&freqs, tensor).remainder_hz);
    }
    Ok(remainders)
}

pub fn remainder_spread(remainders: &[f64]) -> f64 {
    let max = remainders.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = remainders.iter().copied().fold(f64::INFINITY, f64::min);
    if remainders.is_empty() {
        0.0
    } else {
        max - min
    }
}

/// Absolute transition frequency from the RF drive frequency and the fitted
/// detuning.
pub fn rf_to_absolute(rf_frequency_hz: f64, detuning_hz: f64) -> f64 {
    rf_frequency_hz + detuning_hz
}
