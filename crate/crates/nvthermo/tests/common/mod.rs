//! Shared test oracles. Everything here is built independently of the
//! library's production code paths: a second Hamiltonian assembly working
//! element by element, a real-symmetric Jacobi eigensolver reached through
//! the 2n x 2n embedding of a complex Hermitian matrix, a second-order
//! perturbation route to the manifold frequencies, and naive numeric
//! helpers.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex;
use nvthermo::spin::{CMatrix, SpinSystem};

// ---------------------------------------------------------------------------
// single-factor spin matrices from the ladder formula (not the library's)

/// Spin matrices for multiplicity `n` (spin s = (n-1)/2), basis m descending.
/// Returns (sx, sy, sz) as dense complex matrices.
pub fn spin_matrices(n: usize) -> (CMatrix, CMatrix, CMatrix) {
    let s = (n as f64 - 1.0) / 2.0;
    let m_of = |idx: usize| s - idx as f64;
    let mut sp = CMatrix::zeros(n, n);
    for idx in 1..n {
        let m = m_of(idx);
        sp[(idx - 1, idx)] = Complex::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let sm = sp.adjoint();
    let sx = (&sp + &sm).scale(0.5);
    let sy = (&sp - &sm) * Complex::new(0.0, -0.5);
    let mut sz = CMatrix::zeros(n, n);
    for idx in 0..n {
        sz[(idx, idx)] = Complex::new(m_of(idx), 0.0);
    }
    (sx, sy, sz)
}

// ---------------------------------------------------------------------------
// reference Hamiltonian assembly: element-wise over the product basis

/// Decompose a composite index into per-factor indices (first factor most
/// significant, matching Kronecker order).
fn split_index(mut k: usize, mults: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; mults.len()];
    for slot in (0..mults.len()).rev() {
        out[slot] = k % mults[slot];
        k /= mults[slot];
    }
    out
}

/// One operator factor acting on one slot; identity elsewhere.
struct Term {
    coeff: f64,
    /// (slot, operator) pairs; at most two.
    factors: Vec<(usize, CMatrix)>,
}

fn term_element(term: &Term, row: &[usize], col: &[usize], mults: &[usize]) -> Complex<f64> {
    let mut val = Complex::new(term.coeff, 0.0);
    for slot in 0..mults.len() {
        let factor = term.factors.iter().find(|(s, _)| *s == slot);
        match factor {
            Some((_, op)) => val *= op[(row[slot], col[slot])],
            None => {
                if row[slot] != col[slot] {
                    return Complex::new(0.0, 0.0);
                }
            }
        }
    }
    val
}

/// Independent Hamiltonian assembly: builds the operator term list and
/// evaluates every matrix element as a product of single-factor elements.
pub fn assemble_reference(system: &SpinSystem) -> CMatrix {
    let mults = system.factor_multiplicities();
    let dim: usize = mults.iter().product();
    let b = system.field_gauss;

    let (ex, ey, ez) = spin_matrices(3);
    let e_ops = [ex, ey, ez];
    let mut terms: Vec<Term> = Vec::new();

    terms.push(Term {
        coeff: system.d_hz,
        factors: vec![(0, &e_ops[2] * &e_ops[2])],
    });
    for a in 0..3 {
        if b[a] != 0.0 {
            terms.push(Term {
                coeff: system.gamma_e_hz_per_g * b[a],
                factors: vec![(0, e_ops[a].clone())],
            });
        }
    }

    let mut slot = 1;
    if system.include_n {
        let (nx, ny, nz) = spin_matrices(3);
        let n_ops = [nx, ny, nz];
        terms.push(Term {
            coeff: system.p_hz,
            factors: vec![(slot, &n_ops[2] * &n_ops[2])],
        });
        for a in 0..3 {
            if b[a] != 0.0 {
                terms.push(Term {
                    coeff: -system.gamma_n14_hz_per_g * b[a],
                    factors: vec![(slot, n_ops[a].clone())],
                });
            }
        }
        for a in 0..3 {
            for bb in 0..3 {
                let coeff = system.a_n_hz[(a, bb)];
                if coeff != 0.0 {
                    terms.push(Term {
                        coeff,
                        factors: vec![(0, e_ops[a].clone()), (slot, n_ops[bb].clone())],
                    });
                }
            }
        }
        slot += 1;
    }
    for site in &system.carbons {
        let (cx, cy, cz) = spin_matrices(2);
        let c_ops = [cx, cy, cz];
        for a in 0..3 {
            if b[a] != 0.0 {
                terms.push(Term {
                    coeff: -system.gamma_c13_hz_per_g * b[a],
                    factors: vec![(slot, c_ops[a].clone())],
                });
            }
        }
        for a in 0..3 {
            for bb in 0..3 {
                let coeff = site.tensor_hz[(a, bb)];
                if coeff != 0.0 {
                    terms.push(Term {
                        coeff,
                        factors: vec![(0, e_ops[a].clone()), (slot, c_ops[bb].clone())],
                    });
                }
            }
        }
        slot += 1;
    }

    let mut h = CMatrix::zeros(dim, dim);
    for r in 0..dim {
        let ri = split_index(r, &mults);
        for c in 0..dim {
            let ci = split_index(c, &mults);
            let mut val = Complex::new(0.0, 0.0);
            for term in &terms {
                val += term_element(term, &ri, &ci, &mults);
            }
            h[(r, c)] = val;
        }
    }
    h
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver via the real-symmetric embedding

/// Eigenvalues of a complex Hermitian matrix, ascending, computed with a
/// cyclic Jacobi sweep on the 2n x 2n real symmetric embedding
/// [[X, -Y], [Y, X]] of H = X + iY (each eigenvalue of H appears twice).
pub fn jacobi_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let n = h.nrows();
    let mut a = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let v = h[(r, c)];
            a[(r, c)] = v.re;
            a[(r + n, c + n)] = v.re;
            a[(r, c + n)] = -v.im;
            a[(r + n, c)] = v.im;
        }
    }
    let mut vals = jacobi_symmetric(&mut a);
    vals.sort_by(f64::total_cmp);
    // degenerate pairs: average each adjacent pair
    (0..n).map(|k| 0.5 * (vals[2 * k] + vals[2 * k + 1])).collect()
}

fn jacobi_symmetric(a: &mut DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let scale = a.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].abs());
            }
        }
        if off <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|k| a[(k, k)]).collect()
}

// ---------------------------------------------------------------------------
// second-order perturbation theory for the manifold frequencies
// (electron-only system with a single carbon site)

/// Nuclear transition frequency inside electron manifold mS = `m` from
/// second-order perturbation theory. Valid for electron + one 13C with an
/// axial bias field, couplings small against D.
pub fn pt2_manifold_frequency(system: &SpinSystem, m: i8) -> f64 {
    assert!(!system.include_n && system.carbons.len() == 1);
    let a_t = system.carbons[0].tensor_hz;
    let bz = system.field_gauss.z;
    assert_eq!(system.field_gauss.x, 0.0);
    assert_eq!(system.field_gauss.y, 0.0);

    let (sx, sy, sz) = spin_matrices(3);
    let s_ops = [sx, sy, sz];
    let (ix, iy, iz) = spin_matrices(2);
    let i_ops = [ix, iy, iz];

    // electron level energies (bare, nuclear-independent part)
    let e_of = |ms: f64| system.d_hz * ms * ms + system.gamma_e_hz_per_g * bz * ms;
    let idx_of = |ms: i8| (1 - ms) as usize; // m descending: +1 -> 0, 0 -> 1, -1 -> 2

    // K_a = sum_b A_ab I_b, the nuclear operator attached to S_a
    let k_op = |a: usize| -> CMatrix {
        let mut k = CMatrix::zeros(2, 2);
        for bb in 0..3 {
            k += i_ops[bb].scale(a_t[(a, bb)]);
        }
        k
    };
    let ks = [k_op(0), k_op(1), k_op(2)];

    // first order: m * A_z-row . I - gamma_C B I_z
    let mi = idx_of(m);
    let mf = m as f64;
    let mut heff = ks[2].scale(mf);
    heff -= i_ops[2].scale(system.gamma_c13_hz_per_g * bz);

    // second order: couplings through the other two manifolds
    for other in [-1i8, 0, 1] {
        if other == m {
            continue;
        }
        let oi = idx_of(other);
        let denom = e_of(mf) - e_of(other as f64);
        let mut v_mo = CMatrix::zeros(2, 2);
        for a in 0..3 {
            v_mo += ks[a].clone() * s_ops[a][(mi, oi)];
        }
        let v_om = v_mo.adjoint();
        heff += (v_mo * v_om).scale(1.0 / denom);
    }

    // splitting of the effective 2x2 Hermitian nuclear Hamiltonian
    let d = (heff[(0, 0)] - heff[(1, 1)]).re;
    let od = heff[(0, 1)].norm();
    (d * d + 4.0 * od * od).sqrt()
}

// ---------------------------------------------------------------------------
// naive numeric helpers

pub fn naive_sum(xs: &[f64]) -> f64 {
    xs.iter().sum()
}

/// Central finite difference with step h.
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Max-norm relative difference of two matrices.
pub fn rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = a.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    (a - b).iter().map(|v| v.norm()).fold(0.0, f64::max) / scale
}
