use num_complex::Complex;

use super::operators::build_spin_operators;
use super::system::SpinSystem;
use super::CMatrix;
use crate::error::Result;

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Lift a single-factor operator onto the full tensor-product space:
/// identity on every factor except `slot`.
fn lift(op: &CMatrix, mults: &[usize], slot: usize) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for (k, &m) in mults.iter().enumerate() {
        let factor = if k == slot {
            op.clone()
        } else {
            CMatrix::identity(m, m)
        };
        out = kron(&out, &factor);
    }
    out
}

/// Assemble the full ground-state Hamiltonian in Hz.
///
/// H = D Sz^2 + gamma_e B.S
///   + P Iz(N)^2 - gamma_N B.I(N) + S.A(N).I(N)           (if 14N included)
///   + sum_i [ -gamma_C B.I(C_i) + S.A_i.I(C_i) ]
///
/// Hermitian by construction; nuclear Zeeman terms carry the -gamma_n B.I
/// sign convention.
pub fn build_hamiltonian(system: &SpinSystem) -> Result<CMatrix> {
    system.validate()?;
    let mults = system.factor_multiplicities();
    let dim = system.dim();
    let b = system.field_gauss;

    let e_ops = build_spin_operators(3)?;
    let s: [CMatrix; 3] = [
        lift(&e_ops.sx, &mults, 0),
        lift(&e_ops.sy, &mults, 0),
        lift(&e_ops.sz, &mults, 0),
    ];

    let mut h = CMatrix::from_element(dim, dim, Complex::new(0.0, 0.0));
    h += (&s[2] * &s[2]).scale(system.d_hz);
    for a in 0..3 {
        h += s[a].scale(system.gamma_e_hz_per_g * b[a]);
    }

    let mut slot = 1;
    if system.include_n {
        let n_ops = build_spin_operators(3)?;
        let i_n: [CMatrix; 3] = [
            lift(&n_ops.sx, &mults, slot),
            lift(&n_ops.sy, &mults, slot),
            lift(&n_ops.sz, &mults, slot),
        ];
        h += (&i_n[2] * &i_n[2]).scale(system.p_hz);
        for a in 0..3 {
            h -= i_n[a].scale(system.gamma_n14_hz_per_g * b[a]);
        }
        for a in 0..3 {
            for bidx in 0..3 {
                let coeff = system.a_n_hz[(a, bidx)];
                if coeff != 0.0 {
                    h += (&s[a] * &i_n[bidx]).scale(coeff);
                }
            }
        }
        slot += 1;
    }

    for site in &system.carbons {
        let c_ops = build_spin_operators(2)?;
        let i_c: [CMatrix; 3] = [
            lift(&c_ops.sx, &mults, slot),
            lift(&c_ops.sy, &mults, slot),
            lift(&c_ops.sz, &mults, slot),
        ];
        for a in 0..3 {
            h -= i_c[a].scale(system.gamma_c13_hz_per_g * b[a]);
        }
        for a in 0..3 {
            for bidx in 0..3 {
                let coeff = site.tensor_hz[(a, bidx)];
                if coeff != 0.0 {
                    h += (&s[a] * &i_c[bidx]).scale(coeff);
                }
            }
        }
        slot += 1;
    }

    Ok(h)
}

#[cfg(test)]
mod tests {
    use nalgebra::Vector3;

    use super::*;
    use crate::spin::eigendecompose;
    use crate::spin::system::{c3v_tensor, CarbonSite, SpinSystem};

    #[test]
    fn electron_only_zero_field_is_diagonal() {
        let sys = SpinSystem::electron_only(2.87e9, Vector3::zeros());
        let h = build_hamiltonian(&sys).unwrap();
        let eig = eigendecompose(&h).unwrap();
        let ev = &eig.eigenvalues;
        assert!((ev[0] - 0.0).abs() < 1e-6);
        assert!((ev[1] - 2.87e9).abs() < 1e-3);
        assert!((ev[2] - 2.87e9).abs() < 1e-3);
    }

    #[test]
    fn electron_only_axial_field_splits_pm1() {
        let bz = 100.0;
        let sys = SpinSystem::electron_only(2.87e9, Vector3::new(0.0, 0.0, bz));
        let ge = sys.gamma_e_hz_per_g;
        let h = build_hamiltonian(&sys).unwrap();
        let eig = eigendecompose(&h).unwrap();
        let ev = &eig.eigenvalues;
        assert!((ev[0] - 0.0).abs() < 1e-3);
        assert!((ev[1] - (2.87e9 - ge * bz)).abs() < 1e-3);
        assert!((ev[2] - (2.87e9 + ge * bz)).abs() < 1e-3);
    }

    #[test]
    fn hermitian_by_construction() {
        let sys = SpinSystem::electron_only(2.87e9, Vector3::new(3.0, 5.0, 510.0))
            .with_nitrogen(-4.945e6, c3v_tensor(-2.162e6, -2.62e6))
            .with_carbon(CarbonSite::new(
                "C13-2",
                nalgebra::Matrix3::new(
                    2.0e6, 0.3e6, 1.26e6, 0.3e6, 1.5e6, 0.2e6, 1.26e6, 0.2e6, 13.6e6,
                ),
            ));
        let h = build_hamiltonian(&sys).unwrap();
        let asym = (&h - h.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        let scale = h.iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(asym < 1e-10 * scale);
    }

    #[test]
    fn axial_case_is_diagonal_in_product_basis() {
        // Purely axial field and axial tensors: H diagonal, eigenvalues equal
        // the analytic diagonal entries exactly.
        let bz = 20.0;
        let azz = 13.7e6;
        let sys = SpinSystem::electron_only(2.87e9, Vector3::new(0.0, 0.0, bz)).with_carbon(
            CarbonSite::new("c", nalgebra::Matrix3::from_diagonal(&Vector3::new(0.0, 0.0, azz))),
        );
        let h = build_hamiltonian(&sys).unwrap();
        let off = h
            .iter()
            .enumerate()
            .filter(|(k, _)| k / h.nrows() != k % h.nrows())
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        assert_eq!(off, 0.0);
        // m descending: electron {+1,0,-1} x carbon {+1/2,-1/2}
        let gc = sys.gamma_c13_hz_per_g;
        let ge = sys.gamma_e_hz_per_g;
        let d = 2.87e9;
        let diag: Vec<f64> = (0..6).map(|k| h[(k, k)].re).collect();
        let expect = [
            d + ge * bz + azz * 0.5 - gc * bz * 0.5,
            d + ge * bz - azz * 0.5 + gc * bz * 0.5,
            -gc * bz * 0.5,
            gc * bz * 0.5,
            d - ge * bz - azz * 0.5 - gc * bz * 0.5,
            d - ge * bz + azz * 0.5 + gc * bz * 0.5,
        ];
        for (got, want) in diag.iter().zip(expect.iter()) {
            assert!((got - want).abs() < 1e-9 * 2.87e9_f64.max(1.0));
        }
    }
}
