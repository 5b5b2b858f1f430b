//! Temperature dependence of a hyperfine coupling:
//!
//!   A(T)   = A(0) + dA_stc(T) + dA_dyn(T)
//!   A(0)   = A_stc(0) + sum_i c_i / 2          (zero-point correction)
//!   dA_stc = c_stc * [a(T)/a(0) - 1]           (thermal expansion)
//!   dA_dyn = sum_i c_i nbar_i(T)               (lattice vibrations)
//!
//! Mode tables carry (energy meV, b_i, c_i); the first-order b_i are stored
//! but contribute nothing to the dynamic sum (their effect is part of the
//! static term). The expansion table is interpolated with a monotone
//! piecewise-cubic so dA/dT is smooth and overshoot-free.

use crate::constants::PhysicalConstants;
use crate::error::{NvError, Result};

/// Bose-Einstein occupation nbar = 1 / (exp(E / kB T) - 1); 0 at T = 0.
pub fn bose_einstein(energy_mev: f64, temperature_k: f64) -> Result<f64> {
    bose_einstein_with(energy_mev, temperature_k, &PhysicalConstants::default())
}

pub fn bose_einstein_with(
    energy_mev: f64,
    temperature_k: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(energy_mev > 0.0) {
        return Err(NvError::Domain(format!(
            "phonon energy must be positive, got {energy_mev} meV"
        )));
    }
    if temperature_k < 0.0 {
        return Err(NvError::Domain("temperature must be non-negative".into()));
    }
    if temperature_k == 0.0 {
        return Ok(0.0);
    }
    let x = energy_mev / (constants.boltzmann_mev_per_k() * temperature_k);
    Ok(1.0 / x.exp_m1())
}

/// Analytic d nbar / dT = x / (4 T sinh^2(x/2)) with x = E / kB T.
pub fn bose_einstein_dt(
    energy_mev: f64,
    temperature_k: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(energy_mev > 0.0) {
        return Err(NvError::Domain(format!(
            "phonon energy must be positive, got {energy_mev} meV"
        )));
    }
    if !(temperature_k > 0.0) {
        return Err(NvError::Domain(
            "occupation derivative needs T > 0".into(),
        ));
    }
    let x = energy_mev / (constants.boltzmann_mev_per_k() * temperature_k);
    let sh = (0.5 * x).sinh();
    Ok(x / (4.0 * temperature_k * sh * sh))
}

/// One supercell vibration mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononMode {
    pub index: u32,
    pub energy_mev: f64,
    /// First-order coefficient, Hz per coordinate unit. Stored, not summed.
    pub b_hz: f64,
    /// Per-phonon contribution to the dynamic term, Hz.
    pub c_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhononModeTable {
    pub modes: Vec<PhononMode>,
}

impl PhononModeTable {
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for m in &self.modes {
            if !(m.energy_mev > 0.0) {
                return Err(NvError::Validation(format!(
                    "mode {} has non-positive energy {} meV (translational zero modes must be excluded)",
                    m.index, m.energy_mev
                )));
            }
            if !seen.insert(m.index) {
                return Err(NvError::Validation(format!("duplicate mode index {}", m.index)));
            }
        }
        Ok(())
    }

    /// Kahan-compensated sum of c_i.
    pub fn sum_c_hz(&self) -> f64 {
        kahan_sum(self.modes.iter().map(|m| m.c_hz))
    }
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Relative lattice expansion [a(T)/a(0) - 1] versus temperature.
///
/// The table must start at T = 0 with zero expansion, with temperatures
/// strictly increasing and expansion non-decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTable {
    pub temperatures_k: Vec<f64>,
    pub relative_expansion: Vec<f64>,
}

impl ExpansionTable {
    pub fn validate(&self) -> Result<()> {
        if self.temperatures_k.len() != self.relative_expansion.len() {
            return Err(NvError::Validation("expansion table column lengths differ".into()));
        }
        if self.temperatures_k.len() < 2 {
            return Err(NvError::Validation("expansion table needs >= 2 rows".into()));
        }
        if self.temperatures_k[0] != 0.0 || self.relative_expansion[0] != 0.0 {
            return Err(NvError::Validation(
                "expansion table must start at T = 0 with zero expansion".into(),
            ));
        }
        if self.temperatures_k.windows(2).any(|w| w[1] <= w[0]) {
            return Err(NvError::Validation(
                "expansion table temperatures must be strictly increasing".into(),
            ));
        }
        if self.relative_expansion.windows(2).any(|w| w[1] < w[0]) {
            return Err(NvError::Validation(
                "relative expansion must be non-decreasing".into(),
            ));
        }
        Ok(())
    }

    pub fn t_min(&self) -> f64 {
        self.temperatures_k[0]
    }

    pub fn t_max(&self) -> f64 {
        *self.temperatures_k.last().unwrap()
    }

    /// Monotone piecewise-cubic (Fritsch-Carlson) interpolation.
    pub fn interpolate(&self, t: f64) -> Result<f64> {
        self.hermite(t).map(|(y, _)| y)
    }

    /// Derivative of the interpolant, 1/K.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        self.hermite(t).map(|(_, dy)| dy)
    }

    fn hermite(&self, t: f64) -> Result<(f64, f64)> {
        let ts = &self.temperatures_k;
        let ys = &self.relative_expansion;
        let n = ts.len();
        if t < ts[0] || t > ts[n - 1] {
            return Err(NvError::OutOfRange(format!(
                "T = {t} K outside the expansion table range [{}, {}] K",
                ts[0],
                ts[n - 1]
            )));
        }
        let slopes = fritsch_carlson_slopes(ts, ys);
        // locate interval; exact node hit returns the node value
        let k = match ts.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(i) => return Ok((ys[i], slopes[i])),
            Err(i) => i - 1,
        };
        let h = ts[k + 1] - ts[k];
        let s = (t - ts[k]) / h;
        let (y0, y1, m0, m1) = (ys[k], ys[k + 1], slopes[k], slopes[k + 1]);
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let y = h00 * y0 + h * h10 * m0 + h01 * y1 + h * h11 * m1;
        let dh00 = 6.0 * s * (s - 1.0);
        let dh10 = (1.0 - s) * (1.0 - 3.0 * s);
        let dh01 = -dh00;
        let dh11 = s * (3.0 * s - 2.0);
        let dy = (dh00 * y0 + dh01 * y1) / h + dh10 * m0 + dh11 * m1;
        Ok((y, dy))
    }
}

fn fritsch_carlson_slopes(ts: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = ts.len();
    let h: Vec<f64> = (0..n - 1).map(|k| ts[k + 1] - ts[k]).collect();
    let d: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
    let mut m = vec![0.0; n];
    if n == 2 {
        m[0] = d[0];
        m[1] = d[0];
        return m;
    }
    for k in 1..n - 1 {
        if d[k - 1] * d[k] <= 0.0 {
            m[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    // one-sided endpoint slopes with the standard monotonicity clamp
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| -> f64 {
        let mut s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= 0.0 {
            s = 0.0;
        } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
            s = 3.0 * d0;
        }
        s
    };
    m[0] = end(h[0], h[1], d[0], d[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    m
}

/// Full temperature-dependence model for one coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoModel {
    /// Static-lattice coupling A_stc(0), Hz.
    pub a_stc0_hz: f64,
    /// Static coefficient c_stc, Hz per unit relative expansion.
    pub c_stc_hz: f64,
    pub modes: PhononModeTable,
    pub expansion: ExpansionTable,
    pub constants: PhysicalConstants,
}

/// dA/dT split into its two physical contributions, Hz/K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TempDerivative {
    pub total_hz_per_k: f64,
    pub stc_hz_per_k: f64,
    pub dyn_hz_per_k: f64,
}

impl ThermoModel {
    pub fn validate(&self) -> Result<()> {
        self.modes.validate()?;
        self.expansion.validate()?;
        for (name, v) in [("A_stc(0)", self.a_stc0_hz), ("c_stc", self.c_stc_hz)] {
            if !v.is_finite() {
                return Err(NvError::Validation(format!("{name} is not finite")));
            }
        }
        Ok(())
    }

    /// Dynamic correction sum_i c_i nbar_i(T), Hz. Compensated summation.
    pub fn delta_a_dyn(&self, temperature_k: f64) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.modes.modes.len());
        for m in &self.modes.modes {
            terms.push(m.c_hz * bose_einstein_with(m.energy_mev, temperature_k, &self.constants)?);
        }
        Ok(kahan_sum(terms.into_iter()))
    }

    /// Static correction c_stc * [a(T)/a(0) - 1], Hz. No silent extrapolation.
    pub fn delta_a_stc(&self, temperature_k: f64) -> Result<f64> {
        Ok(self.c_stc_hz * self.expansion.interpolate(temperature_k)?)
    }

    /// A(0) = A_stc(0) + sum_i c_i / 2 (zero-point correction), Hz.
    pub fn a_zero(&self) -> f64 {
        self.a_stc0_hz + 0.5 * self.modes.sum_c_hz()
    }

    /// A(T) = A(0) + dA_stc(T) + dA_dyn(T), Hz.
    pub fn a_of_t(&self, temperature_k: f64) -> Result<f64> {
        Ok(self.a_zero() + self.delta_a_stc(temperature_k)? + self.delta_a_dyn(temperature_k)?)
    }

    /// Analytic dA/dT with its static/dynamic split. T must be interior to
    /// the expansion table.
    pub fn da_dt(&self, temperature_k: f64) -> Result<TempDerivative> {
        if temperature_k <= self.expansion.t_min() || temperature_k >= self.expansion.t_max() {
            return Err(NvError::Boundary(format!(
                "T = {temperature_k} K is not interior to the expansion table ({}, {})",
                self.expansion.t_min(),
                self.expansion.t_max()
            )));
        }
        let stc = self.c_stc_hz * self.expansion.derivative(temperature_k)?;
        let mut terms = Vec::with_capacity(self.modes.modes.len());
        for m in &self.modes.modes {
            terms.push(m.c_hz * bose_einstein_dt(m.energy_mev, temperature_k, &self.constants)?);
        }
        let dynamic = kahan_sum(terms.into_iter());
        Ok(TempDerivative {
            total_hz_per_k: stc + dynamic,
            stc_hz_per_k: stc,
            dyn_hz_per_k: dynamic,
        })
    }
}

/// Greedy left-to-right clustering of modes within an energy window.
///
/// Merged c is the in-cluster sum, merged energy the |c|-weighted mean
/// (plain mean if the cluster's |c| sum vanishes); the total sum of c over
/// the table is preserved.
pub fn merge_degenerate_modes(table: &PhononModeTable, window_mev: f64) -> PhononModeTable {
    let mut modes = table.modes.clone();
    modes.sort_by(|a, b| a.energy_mev.total_cmp(&b.energy_mev));
    let mut merged = Vec::new();
    let mut k = 0;
    while k < modes.len() {
        let start = modes[k].energy_mev;
        let mut j = k;
        while j + 1 < modes.len() && modes[j + 1].energy_mev - start <= window_mev {
            j += 1;
        }
        let cluster = &modes[k..=j];
        let c_sum = kahan_sum(cluster.iter().map(|m| m.c_hz));
        let b_sum = kahan_sum(cluster.iter().map(|m| m.b_hz));
        let abs_c: f64 = cluster.iter().map(|m| m.c_hz.abs()).sum();
        let energy = if abs_c > 0.0 {
            cluster
                .iter()
                .map(|m| m.c_hz.abs() * m.energy_mev)
                .sum::<f64>()
                / abs_c
        } else {
            cluster.iter().map(|m| m.energy_mev).sum::<f64>() / cluster.len() as f64
        };
        merged.push(PhononMode {
            index: cluster[0].index,
            energy_mev: energy,
            b_hz: b_sum,
            c_hz: c_sum,
        });
        k = j + 1;
    }
    PhononModeTable { modes: merged }
}
