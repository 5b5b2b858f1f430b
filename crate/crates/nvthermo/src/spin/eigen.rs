use nalgebra::DVector;

use super::label::StateLabel;
use super::CMatrix;
use crate::error::{NvError, Result};

const HERMITICITY_RTOL: f64 = 1e-10;

/// Eigenvalues (Hz, ascending), orthonormal eigenvector columns, and
/// optional product-basis labels.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
    pub labels: Option<Vec<StateLabel>>,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Diagonalize a Hermitian matrix; eigenvalues sorted ascending with the
/// eigenvector columns permuted to match.
pub fn eigendecompose(h: &CMatrix) -> Result<EigenDecomposition> {
    if h.nrows() != h.ncols() {
        return Err(NvError::Validation(format!(
            "matrix is {}x{}, expected square",
            h.nrows(),
            h.ncols()
        )));
    }
    let scale = h.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let asym = (h - h.adjoint())
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if scale > 0.0 && asym > HERMITICITY_RTOL * scale {
        return Err(NvError::Validation(format!(
            "matrix is not Hermitian: max|H - H^| = {asym:.3e} vs {HERMITICITY_RTOL:.0e} * max|H| = {:.3e}",
            HERMITICITY_RTOL * scale
        )));
    }

    // Symmetrize before solving so the Hermiticity tolerance does not leak
    // into the eigenvalue accuracy.
    let sym = (h + h.adjoint()).scale(0.5);
    let n = sym.nrows();
    let max_iter = 30 * n.max(4);
    let eig = sym
        .clone()
        .try_symmetric_eigen(f64::EPSILON, max_iter)
        .ok_or_else(|| {
            NvError::Numeric(format!(
                "Hermitian eigensolver failed to converge within {max_iter} iterations (dim {n})"
            ))
        })?;

    // The QR iteration leaves residuals well above machine precision on
    // some matrices. Its output basis is orthonormal, so V^ H V is almost
    // diagonal; a few quadratically convergent Jacobi sweeps polish the
    // eigenpairs down to ~n*eps at negligible cost.
    let mut vectors = eig.eigenvectors;
    let mut m = vectors.adjoint() * &sym * &vectors;
    jacobi_polish(&mut m, &mut vectors);
    let raw: Vec<f64> = (0..n).map(|k| m[(k, k)].re).collect();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));

    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&k| raw[k]));
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        eigenvectors.set_column(col, &vectors.column(k));
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        labels: None,
    })
}

/// Cyclic Jacobi sweeps on a Hermitian, nearly diagonal `m`, accumulating
/// the rotations into the columns of `v` (so `v` stays an eigenbasis of the
/// original matrix).
fn jacobi_polish(m: &mut CMatrix, v: &mut CMatrix) {
    let n = m.nrows();
    let scale = m.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return;
    }
    let target = n as f64 * f64::EPSILON * scale;
    for _ in 0..8 {
        let off = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)].norm())
            .fold(0.0, f64::max);
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = m[(p, q)];
                let babs = b.norm();
                if babs <= f64::EPSILON * scale {
                    continue;
                }
                // Hermitian 2x2 block [[a, b], [b^, c]] with real a, c:
                // factor out the phase of b, then the real Jacobi angle
                let a = m[(p, p)].re;
                let c = m[(q, q)].re;
                let phase = b / babs;
                let tau = (c - a) / (2.0 * babs);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = phase * (t * cs); // s1 = sigma * e^{i beta}
                // M <- G^ M G with G = [[cs, sn], [-sn^, cs]]
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = cs * mkp - sn.conj() * mkq;
                    m[(k, q)] = sn * mkp + cs * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = cs * mpk - sn * mqk;
                    m[(q, k)] = sn.conj() * mpk + cs * mqk;
                }
                m[(p, q)] = num_complex::Complex::new(0.0, 0.0);
                m[(q, p)] = num_complex::Complex::new(0.0, 0.0);
                m[(p, p)] = num_complex::Complex::new(m[(p, p)].re, 0.0);
                m[(q, q)] = num_complex::Complex::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = cs * vkp - sn.conj() * vkq;
                    v[(k, q)] = sn * vkp + cs * vkq;
                }
            }
        }
    }
}
