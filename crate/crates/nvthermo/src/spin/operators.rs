use num_complex::Complex;

use super::CMatrix;
use crate::error::{NvError, Result};

/// Angular-momentum matrices for one spin, in the |m> basis with m descending.
/// Dimensionless (hbar = 1); couplings carry the frequency units.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub multiplicity: usize,
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
}

/// Standard spin matrices for multiplicity 2S+1 in {2, 3}.
///
/// Built from the ladder operators: <m'|S+|m> = sqrt(S(S+1) - m(m+1)) for
/// m' = m + 1, with Sx = (S+ + S-)/2 and Sy = (S+ - S-)/(2i).
pub fn build_spin_operators(multiplicity: usize) -> Result<SpinOperators> {
    if multiplicity != 2 && multiplicity != 3 {
        return Err(NvError::Domain(format!(
            "unsupported multiplicity {multiplicity} (expected 2 or 3)"
        )));
    }
    let n = multiplicity;
    let s = (n as f64 - 1.0) / 2.0;
    // m values descending: row/col k holds m = s - k
    let m = |k: usize| s - k as f64;

    let zero = Complex::new(0.0, 0.0);
    let mut sp = CMatrix::from_element(n, n, zero);
    for k in 1..n {
        // raises |m(k)> to |m(k-1)> = |m(k)+1>
        let mk = m(k);
        let amp = (s * (s + 1.0) - mk * (mk + 1.0)).sqrt();
        sp[(k - 1, k)] = Complex::new(amp, 0.0);
    }
    let sm = sp.adjoint();
    let sx = (&sp + &sm).scale(0.5);
    let sy = (&sp - &sm) * Complex::new(0.0, -0.5);
    let mut sz = CMatrix::from_element(n, n, zero);
    for k in 0..n {
        sz[(k, k)] = Complex::new(m(k), 0.0);
    }

    Ok(SpinOperators {
        multiplicity: n,
        sx,
        sy,
        sz,
    })
}
