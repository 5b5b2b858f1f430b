//! Synthesis of measurable signals: Ramsey fringes for a nuclear transition
//! within one electron-spin manifold, and pulsed-ODMR spectra.
//!
//! The fringe follows the two-level rotating-frame model: the transition
//! frequency comes from the full Hamiltonian, the dynamics reduce to the
//! driven pair, and the polarization block is modeled as ideal
//! initialization into mI = +1/2 with an optional efficiency scaling the
//! fringe amplitude.

use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

use crate::error::{NvError, Result};
use crate::extraction::manifold_frequencies;
use crate::spin::{
    build_hamiltonian, eigendecompose, label_eigenstates, SpinSystem, DEFAULT_LABEL_THRESHOLD,
};

/// Two-level validity window for the rotating-frame fringe model.
pub const RF_VALIDITY_WINDOW_HZ: f64 = 50e3;

/// Parameters of the fringe model
/// {a sin(2 pi df t + phi0) + b} exp[-(t/T2*)^p] + c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeParams {
    /// Contrast amplitude a, >= 0.
    pub amplitude: f64,
    /// Detuning df, Hz.
    pub detuning_hz: f64,
    /// Initial phase phi0, rad.
    pub phase_rad: f64,
    /// Decaying offset b, contrast units.
    pub offset: f64,
    /// Dephasing time T2*, s, > 0.
    pub t2_star_s: f64,
    /// Stretch exponent p, > 0.
    pub stretch: f64,
    /// Non-decaying baseline c, contrast units.
    pub baseline: f64,
}

impl FringeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.t2_star_s > 0.0) {
            return Err(NvError::Validation("T2* must be positive".into()));
        }
        if !(self.stretch > 0.0) {
            return Err(NvError::Validation("stretch exponent must be positive".into()));
        }
        if self.amplitude < 0.0 {
            return Err(NvError::Validation("amplitude must be non-negative".into()));
        }
        Ok(())
    }
}

/// Simulated readout-contrast time series.
#[derive(Debug, Clone, PartialEq)]
pub struct RamseyTrace {
    pub times_s: Vec<f64>,
    pub signal: Vec<f64>,
    pub noise_sigma: f64,
}

impl RamseyTrace {
    pub fn validate(&self) -> Result<()> {
        if self.times_s.is_empty() {
            return Err(NvError::Validation("trace has no samples".into()));
        }
        if self.times_s.len() != self.signal.len() {
            return Err(NvError::Validation("times and signal lengths differ".into()));
        }
        if self.times_s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(NvError::Validation("times must be strictly increasing".into()));
        }
        Ok(())
    }
}

/// Evaluate the fringe model at time `t`.
pub fn fringe_model(t: f64, params: &FringeParams) -> f64 {
    let osc = params.amplitude
        * (2.0 * std::f64::consts::PI * params.detuning_hz * t + params.phase_rad).sin()
        + params.offset;
    let envelope = (-(t / params.t2_star_s).powf(params.stretch)).exp();
    osc * envelope + params.baseline
}

/// Which electron manifold hosts the driven nuclear transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Manifold {
    Plus,
    Minus,
}

/// Synthesize a Ramsey trace for `nucleus` driven at `rf_frequency_hz`.
///
/// The oscillation appears at the detuning between the true transition
/// frequency (from the full Hamiltonian) and the drive. Gaussian noise is
/// seeded and reproducible.
#[allow(clippy::too_many_arguments)]
pub fn simulate_ramsey(
    system: &SpinSystem,
    nucleus: &str,
    manifold: Manifold,
    rf_frequency_hz: f64,
    times_s: &[f64],
    envelope: (f64, f64),
    contrast: (f64, f64, f64),
    polarization_efficiency: f64,
    noise_sigma: f64,
    seed: u64,
) -> Result<RamseyTrace> {
    let freqs = manifold_frequencies(system, nucleus)?;
    let transition = match manifold {
        Manifold::Plus => freqs.omega_plus_hz,
        Manifold::Minus => freqs.omega_minus_hz,
    };
    let detuning = transition - rf_frequency_hz;
    if detuning.abs() > RF_VALIDITY_WINDOW_HZ {
        return Err(NvError::Contract(format!(
            "RF detuning {detuning:.1} Hz exceeds the {RF_VALIDITY_WINDOW_HZ:.0} Hz two-level validity window"
        )));
    }
    if !(0.0..=1.0).contains(&polarization_efficiency) {
        return Err(NvError::Validation(
            "polarization efficiency must be in [0, 1]".into(),
        ));
    }
    let (t2, p) = envelope;
    let (a, b, c) = contrast;
    let params = FringeParams {
        amplitude: a * polarization_efficiency,
        detuning_hz: detuning,
        phase_rad: 0.0,
        offset: b,
        t2_star_s: t2,
        stretch: p,
        baseline: c,
    };
    params.validate()?;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).map_err(|e| NvError::Validation(e.to_string()))?;
    let signal: Vec<f64> = times_s
        .iter()
        .map(|&t| fringe_model(t, &params) + noise_sigma * normal.sample(&mut rng))
        .collect();

    let trace = RamseyTrace {
        times_s: times_s.to_vec(),
        signal,
        noise_sigma,
    };
    trace.validate()?;
    Ok(trace)
}

/// Pulsed-ODMR spectrum: unit baseline with a Lorentzian dip at every
/// allowed electron transition (|dmS| = 1, nuclear labels unchanged).
///
/// `linewidth_hz` is the FWHM of each dip; `contrast_depth` its depth.
pub fn simulate_odmr(
    system: &SpinSystem,
    mw_frequencies_hz: &[f64],
    linewidth_hz: f64,
    contrast_depth: f64,
) -> Result<Vec<f64>> {
    if mw_frequencies_hz.is_empty() {
        return Err(NvError::Validation("empty microwave frequency grid".into()));
    }
    if !(linewidth_hz > 0.0) {
        return Err(NvError::Validation("linewidth must be positive".into()));
    }
    let centers = odmr_transition_frequencies(system)?;
    let hwhm = 0.5 * linewidth_hz;
    Ok(mw_frequencies_hz
        .iter()
        .map(|&f| {
            let dip: f64 = centers
                .iter()
                .map(|&f0| hwhm * hwhm / ((f - f0).powi(2) + hwhm * hwhm))
                .sum();
            1.0 - contrast_depth * dip
        })
        .collect())
}

/// Centers of all allowed electron transitions (|dmS| = 1 with the nuclear
/// configuration unchanged), Hz.
pub fn odmr_transition_frequencies(system: &SpinSystem) -> Result<Vec<f64>> {
    let h = build_hamiltonian(system)?;
    let decomp = eigendecompose(&h)?;
    let labeled = label_eigenstates(&decomp, system, DEFAULT_LABEL_THRESHOLD)?;
    let labels = labeled.labels.as_ref().expect("labeled");
    let mut centers = Vec::new();
    for i in 0..labels.len() {
        for j in (i + 1)..labels.len() {
            let (a, b) = (&labels[i], &labels[j]);
            let dms = (a.m_s - b.m_s).abs();
            if dms == 1 && a.m_i_n == b.m_i_n && a.m_i_c == b.m_i_c {
                centers.push((labeled.eigenvalues[i] - labeled.eigenvalues[j]).abs());
            }
        }
    }
    centers.sort_by(f64::total_cmp);
    Ok(centers)
}

#[cfg(test)]
mod tests {
    use nalgebra::{Matrix3, Vector3};

    use super::*;
    use crate::spin::CarbonSite;

    fn test_system() -> SpinSystem {
        let mut t = Matrix3::zeros();
        t[(2, 2)] = 13.7e6;
        SpinSystem::electron_only(2.87e9, Vector3::new(0.0, 0.0, 20.0))
            .with_carbon(CarbonSite::new("c", t))
    }

    #[test]
    fn fringe_at_zero_time() {
        let p = FringeParams {
            amplitude: 0.3,
            detuning_hz: 1203.5,
            phase_rad: 0.4,
            offset: 0.05,
            t2_star_s: 2e-3,
            stretch: 1.5,
            baseline: 0.5,
        };
        let expect = 0.3 * 0.4f64.sin() + 0.05 + 0.5;
        assert!((fringe_model(0.0, &p) - expect).abs() < 1e-15);
    }

    #[test]
    fn fringe_decays_to_baseline() {
        let p = FringeParams {
            amplitude: 0.3,
            detuning_hz: 1203.5,
            phase_rad: 0.0,
            offset: 0.05,
            t2_star_s: 1e-3,
            stretch: 1.0,
            baseline: 0.5,
        };
        assert!((fringe_model(1.0, &p) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_detuning_gives_pure_envelope() {
        let sys = test_system();
        let freqs = manifold_frequencies(&sys, "c").unwrap();
        let times: Vec<f64> = (0..200).map(|k| 1e-5 * (k + 1) as f64).collect();
        let trace = simulate_ramsey(
            &sys,
            "c",
            Manifold::Plus,
            freqs.omega_plus_hz,
            &times,
            (2e-3, 1.0),
            (0.3, 0.0, 0.5),
            1.0,
            0.0,
            1,
        )
        .unwrap();
        for (&t, &s) in times.iter().zip(&trace.signal) {
            let envelope = 0.5; // a*sin(0)+b = 0, so the signal is just c
            let _ = t;
            assert!((s - envelope).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_envelope_is_pure_sinusoid() {
        let sys = test_system();
        let freqs = manifold_frequencies(&sys, "c").unwrap();
        let rf = freqs.omega_plus_hz - 1203.5;
        let times: Vec<f64> = (0..500).map(|k| 5e-6 * (k + 1) as f64).collect();
        let trace = simulate_ramsey(
            &sys,
            "c",
            Manifold::Plus,
            rf,
            &times,
            (1e9, 1.0),
            (0.3, 0.1, 0.5),
            1.0,
            0.0,
            1,
        )
        .unwrap();
        for (&t, &s) in times.iter().zip(&trace.signal) {
            let expect =
                0.3 * (2.0 * std::f64::consts::PI * 1203.5 * t).sin() + 0.1 + 0.5;
            assert!((s - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_seeds_identical_traces() {
        let sys = test_system();
        let freqs = manifold_frequencies(&sys, "c").unwrap();
        let rf = freqs.omega_plus_hz - 1000.0;
        let times: Vec<f64> = (0..100).map(|k| 1e-5 * (k + 1) as f64).collect();
        let run = || {
            simulate_ramsey(
                &sys,
                "c",
                Manifold::Plus,
                rf,
                &times,
                (2e-3, 1.5),
                (0.3, 0.0, 0.5),
                1.0,
                0.02,
                42,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn rf_outside_window_rejected() {
        let sys = test_system();
        let freqs = manifold_frequencies(&sys, "c").unwrap();
        let times = vec![1e-5, 2e-5];
        let err = simulate_ramsey(
            &sys,
            "c",
            Manifold::Plus,
            freqs.omega_plus_hz - 100e3,
            &times,
            (2e-3, 1.0),
            (0.3, 0.0, 0.5),
            1.0,
            0.0,
            1,
        );
        assert!(matches!(err, Err(NvError::Contract(_))));
    }

    #[test]
    fn odmr_electron_only_zero_field_single_dip() {
        let sys = SpinSystem::electron_only(2.87e9, Vector3::zeros());
        let centers = odmr_transition_frequencies(&sys).unwrap();
        // both mS=0 -> +-1 transitions sit at D
        assert_eq!(centers.len(), 2);
        for c in centers {
            assert!((c - 2.87e9).abs() < 1e-3);
        }
        let grid: Vec<f64> = (0..200)
            .map(|k| 2.86e9 + 1e5 * k as f64)
            .collect();
        let spec = simulate_odmr(&sys, &grid, 1e6, 0.15).unwrap();
        let (kmin, _) = spec
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert!((grid[kmin] - 2.87e9).abs() <= 1e5);
    }

    #[test]
    fn odmr_axial_field_two_dips() {
        let bz = 20.0;
        let sys = SpinSystem::electron_only(2.87e9, Vector3::new(0.0, 0.0, bz));
        let ge = sys.gamma_e_hz_per_g;
        let centers = odmr_transition_frequencies(&sys).unwrap();
        assert_eq!(centers.len(), 2);
        assert!((centers[0] - (2.87e9 - ge * bz)).abs() < 1e-3);
        assert!((centers[1] - (2.87e9 + ge * bz)).abs() < 1e-3);
    }

    #[test]
    fn odmr_empty_grid_rejected() {
        let sys = SpinSystem::electron_only(2.87e9, Vector3::zeros());
        assert!(matches!(
            simulate_odmr(&sys, &[], 1e6, 0.1),
            Err(NvError::Validation(_))
        ));
    }
}
