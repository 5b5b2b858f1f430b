use nalgebra::{Matrix3, Vector3};

use crate::constants::PhysicalConstants;
use crate::error::{NvError, Result};

/// Dense diagonalization stays trivially fast up to dim 3*3*2^4 = 144,
/// which covers every configuration of interest (one 13C at a time).
pub const MAX_CARBONS: usize = 4;

/// One 13C lattice site: a full symmetric hyperfine tensor in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct CarbonSite {
    pub name: String,
    pub tensor_hz: Matrix3<f64>,
}

impl CarbonSite {
    pub fn new(name: impl Into<String>, tensor_hz: Matrix3<f64>) -> Self {
        Self {
            name: name.into(),
            tensor_hz,
        }
    }
}

/// Hyperfine tensor with C3v symmetry about the NV axis:
/// diag(transverse, transverse, axial).
pub fn c3v_tensor(axial_hz: f64, transverse_hz: f64) -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(transverse_hz, transverse_hz, axial_hz))
}

/// Full parameter set of the ground-state Hamiltonian.
///
/// All couplings in Hz, field in Gauss, NV axis = z.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    /// Zero-field splitting D, Hz.
    pub d_hz: f64,
    /// 14N quadrupole coupling P, Hz.
    pub p_hz: f64,
    pub gamma_e_hz_per_g: f64,
    pub gamma_n14_hz_per_g: f64,
    pub gamma_c13_hz_per_g: f64,
    /// Bias field, Gauss, z along the NV axis.
    pub field_gauss: Vector3<f64>,
    /// Include the host 14N (I=1) in the Hilbert space.
    pub include_n: bool,
    /// 14N hyperfine tensor, Hz.
    pub a_n_hz: Matrix3<f64>,
    /// 13C sites, each with a full 3x3 symmetric tensor, Hz.
    pub carbons: Vec<CarbonSite>,
}

impl SpinSystem {
    /// Electron-only system (no nuclei) with default constants.
    pub fn electron_only(d_hz: f64, field_gauss: Vector3<f64>) -> Self {
        let c = PhysicalConstants::default();
        Self {
            d_hz,
            p_hz: 0.0,
            gamma_e_hz_per_g: c.gamma_e_hz_per_g,
            gamma_n14_hz_per_g: c.gamma_n14_hz_per_g,
            gamma_c13_hz_per_g: c.gamma_c13_hz_per_g,
            field_gauss,
            include_n: false,
            a_n_hz: Matrix3::zeros(),
            carbons: Vec::new(),
        }
    }

    pub fn with_constants(mut self, c: &PhysicalConstants) -> Self {
        self.gamma_e_hz_per_g = c.gamma_e_hz_per_g;
        self.gamma_n14_hz_per_g = c.gamma_n14_hz_per_g;
        self.gamma_c13_hz_per_g = c.gamma_c13_hz_per_g;
        self
    }

    pub fn with_nitrogen(mut self, p_hz: f64, a_n_hz: Matrix3<f64>) -> Self {
        self.include_n = true;
        self.p_hz = p_hz;
        self.a_n_hz = a_n_hz;
        self
    }

    pub fn with_carbon(mut self, site: CarbonSite) -> Self {
        self.carbons.push(site);
        self
    }

    /// Hilbert dimension: 3 * (3 if 14N included) * 2^(#carbons).
    pub fn dim(&self) -> usize {
        3 * if self.include_n { 3 } else { 1 } * (1usize << self.carbons.len())
    }

    /// Multiplicities of the tensor factors in basis order.
    pub fn factor_multiplicities(&self) -> Vec<usize> {
        let mut f = vec![3usize];
        if self.include_n {
            f.push(3);
        }
        f.extend(std::iter::repeat(2).take(self.carbons.len()));
        f
    }

    pub fn carbon_index(&self, name: &str) -> Result<usize> {
        self.carbons
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| NvError::Lookup(format!("nucleus {name:?} not in system")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.carbons.len() > MAX_CARBONS {
            return Err(NvError::Capacity(format!(
                "{} carbon sites exceed the supported maximum of {MAX_CARBONS} (dim <= 144)",
                self.carbons.len()
            )));
        }
        if self.include_n {
            check_symmetric("A(14N)", &self.a_n_hz)?;
        }
        for site in &self.carbons {
            check_symmetric(&format!("A({})", site.name), &site.tensor_hz)?;
        }
        for (name, v) in [
            ("D", self.d_hz),
            ("P", self.p_hz),
            ("gamma_e", self.gamma_e_hz_per_g),
            ("gamma_n14", self.gamma_n14_hz_per_g),
            ("gamma_c13", self.gamma_c13_hz_per_g),
        ] {
            if !v.is_finite() {
                return Err(NvError::Validation(format!("{name} is not finite")));
            }
        }
        if self.field_gauss.iter().any(|b| !b.is_finite()) {
            return Err(NvError::Validation("field components must be finite".into()));
        }
        Ok(())
    }
}

fn check_symmetric(name: &str, t: &Matrix3<f64>) -> Result<()> {
    let scale = t.iter().map(|x| x.abs()).fold(1.0, f64::max);
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (t[(i, j)] - t[(j, i)]).abs() > 1e-9 * scale {
                return Err(NvError::Validation(format!(
                    "hyperfine tensor {name} is not symmetric at ({i},{j})"
                )));
            }
        }
    }
    if t.iter().any(|x| !x.is_finite()) {
        return Err(NvError::Validation(format!("tensor {name} has non-finite entries")));
    }
    Ok(())
}
