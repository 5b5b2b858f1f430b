use std::fmt;

use super::eigen::EigenDecomposition;
use super::system::SpinSystem;
use crate::error::{NvError, Result};

/// Overlap below this and a state is considered unlabelable.
pub const DEFAULT_LABEL_THRESHOLD: f64 = 0.6;

/// Product-basis identity of an eigenstate. Carbon projections are stored as
/// twice the m value (+1 for +1/2, -1 for -1/2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelKey {
    pub m_s: i8,
    pub m_i_n: Option<i8>,
    pub m_i_c: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateLabel {
    pub m_s: i8,
    pub m_i_n: Option<i8>,
    /// Twice the carbon m values, +1 or -1, one per site in basis order.
    pub m_i_c: Vec<i8>,
    /// Squared projection on the named product basis state, in [0, 1].
    pub overlap: f64,
}

impl StateLabel {
    pub fn key(&self) -> LabelKey {
        LabelKey {
            m_s: self.m_s,
            m_i_n: self.m_i_n,
            m_i_c: self.m_i_c.clone(),
        }
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|mS={:+}", self.m_s)?;
        if let Some(n) = self.m_i_n {
            write!(f, ",mN={n:+}")?;
        }
        for c in &self.m_i_c {
            write!(f, ",mC={}1/2", if *c > 0 { '+' } else { '-' })?;
        }
        write!(f, ">")
    }
}

/// Product basis keys in index order: electron (x) 14N (x) carbons, m
/// descending within each factor.
pub fn basis_keys(system: &SpinSystem) -> Vec<LabelKey> {
    let electron = [1i8, 0, -1];
    let nitrogen = [1i8, 0, -1];
    let carbon = [1i8, -1];

    let mut acc: Vec<LabelKey> = electron
        .iter()
        .map(|&m| LabelKey {
            m_s: m,
            m_i_n: None,
            m_i_c: Vec::new(),
        })
        .collect();
    if system.include_n {
        let mut next = Vec::with_capacity(acc.len() * 3);
        for k in &acc {
            for &m in &nitrogen {
                let mut k2 = k.clone();
                k2.m_i_n = Some(m);
                next.push(k2);
            }
        }
        acc = next;
    }
    for _ in 0..system.carbons.len() {
        let mut next = Vec::with_capacity(acc.len() * 2);
        for k in &acc {
            for &m in &carbon {
                let mut k2 = k.clone();
                k2.m_i_c.push(m);
                next.push(k2);
            }
        }
        acc = next;
    }
    acc
}

/// Assign each eigenstate the product-basis label of maximum squared overlap.
///
/// Greedy over descending overlaps first (ties broken by basis then state
/// index, which makes degenerate cases deterministic); if the greedy matching
/// leaves any state below `threshold`, a total-overlap-maximizing assignment
/// is tried before reporting ambiguity.
pub fn label_eigenstates(
    decomp: &EigenDecomposition,
    system: &SpinSystem,
    threshold: f64,
) -> Result<EigenDecomposition> {
    let n = decomp.dim();
    if system.dim() != n {
        return Err(NvError::Validation(format!(
            "system dim {} does not match decomposition dim {n}",
            system.dim()
        )));
    }
    let keys = basis_keys(system);

    // overlap[basis][state] = |<basis|state>|^2
    let mut overlap = vec![vec![0.0f64; n]; n];
    for b in 0..n {
        for s in 0..n {
            overlap[b][s] = decomp.eigenvectors[(b, s)].norm_sqr();
        }
    }

    let assignment = greedy_assignment(&overlap);
    let assignment = if below_threshold(&overlap, &assignment, threshold).is_empty() {
        assignment
    } else {
        hungarian_max(&overlap)
    };

    let offending = below_threshold(&overlap, &assignment, threshold);
    if !offending.is_empty() {
        return Err(NvError::Ambiguity {
            threshold,
            states: offending,
        });
    }

    let mut labels = Vec::with_capacity(n);
    for s in 0..n {
        let b = assignment[s];
        labels.push(StateLabel {
            m_s: keys[b].m_s,
            m_i_n: keys[b].m_i_n,
            m_i_c: keys[b].m_i_c.clone(),
            overlap: overlap[b][s],
        });
    }

    Ok(EigenDecomposition {
        eigenvalues: decomp.eigenvalues.clone(),
        eigenvectors: decomp.eigenvectors.clone(),
        labels: Some(labels),
    })
}

/// |E(a) - E(b)| between two labeled states, Hz.
pub fn transition_frequency(
    decomp: &EigenDecomposition,
    a: &LabelKey,
    b: &LabelKey,
) -> Result<f64> {
    let labels = decomp
        .labels
        .as_ref()
        .ok_or_else(|| NvError::Lookup("decomposition is unlabeled".into()))?;
    let find = |key: &LabelKey| -> Result<usize> {
        labels
            .iter()
            .position(|l| &l.key() == key)
            .ok_or_else(|| NvError::Lookup(format!("label {key:?} not present")))
    };
    let ia = find(a)?;
    let ib = find(b)?;
    Ok((decomp.eigenvalues[ia] - decomp.eigenvalues[ib]).abs())
}

/// assignment[state] = basis index
fn greedy_assignment(overlap: &[Vec<f64>]) -> Vec<usize> {
    let n = overlap.len();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|b| (0..n).map(move |s| (b, s)))
        .collect();
    pairs.sort_by(|&(b1, s1), &(b2, s2)| {
        overlap[b2][s2]
            .total_cmp(&overlap[b1][s1])
            .then(b1.cmp(&b2))
            .then(s1.cmp(&s2))
    });
    let mut basis_used = vec![false; n];
    let mut state_assigned = vec![usize::MAX; n];
    let mut remaining = n;
    for (b, s) in pairs {
        if remaining == 0 {
            break;
        }
        if !basis_used[b] && state_assigned[s] == usize::MAX {
            basis_used[b] = true;
            state_assigned[s] = b;
            remaining -= 1;
        }
    }
    state_assigned
}

fn below_threshold(overlap: &[Vec<f64>], assignment: &[usize], threshold: f64) -> Vec<usize> {
    assignment
        .iter()
        .enumerate()
        .filter(|(s, &b)| overlap[b][*s] < threshold)
        .map(|(s, _)| s)
        .collect()
}

/// Maximum-total-weight perfect matching (Kuhn-Munkres with potentials),
/// returning assignment[state] = basis index.
fn hungarian_max(weight: &[Vec<f64>]) -> Vec<usize> {
    let n = weight.len();
    // minimize cost = -weight; rows = states, cols = basis
    let cost = |i: usize, j: usize| -weight[j][i];

    let inf = f64::INFINITY;
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1]; // p[j]: 1-based row matched to column j
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

#[cfg(test)]
mod tests {
    use nalgebra::Vector3;

    use super::*;
    use crate::spin::{build_hamiltonian, eigendecompose};
    use crate::spin::system::SpinSystem;

    #[test]
    fn electron_only_axial_field_labels_exact() {
        let sys = SpinSystem::electron_only(2.87e9, Vector3::new(0.0, 0.0, 100.0));
        let h = build_hamiltonian(&sys).unwrap();
        let decomp = eigendecompose(&h).unwrap();
        let labeled = label_eigenstates(&decomp, &sys, DEFAULT_LABEL_THRESHOLD).unwrap();
        let labels = labeled.labels.as_ref().unwrap();
        let mut ms: Vec<i8> = labels.iter().map(|l| l.m_s).collect();
        // ascending energy: 0, -1, +1 at 100 G
        assert_eq!(ms.remove(0), 0);
        assert_eq!(ms, vec![-1, 1]);
        for l in labels {
            assert!((l.overlap - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_field_degenerate_labels_deterministic() {
        let sys = SpinSystem::electron_only(2.87e9, Vector3::zeros());
        let h = build_hamiltonian(&sys).unwrap();
        let decomp = eigendecompose(&h).unwrap();
        let l1 = label_eigenstates(&decomp, &sys, DEFAULT_LABEL_THRESHOLD).unwrap();
        let l2 = label_eigenstates(&decomp, &sys, DEFAULT_LABEL_THRESHOLD).unwrap();
        assert_eq!(l1.labels, l2.labels);
        // labels remain a bijection
        let keys: std::collections::HashSet<_> = l1
            .labels
            .unwrap()
            .iter()
            .map(|l| l.key())
            .collect();
        assert_eq!(keys.len(), 3);
    }

    #[test]
    fn transition_frequency_zero_field_is_d() {
        let sys = SpinSystem::electron_only(2.87e9, Vector3::zeros());
        let h = build_hamiltonian(&sys).unwrap();
        let decomp = eigendecompose(&h).unwrap();
        let labeled = label_eigenstates(&decomp, &sys, DEFAULT_LABEL_THRESHOLD).unwrap();
        for target in [-1i8, 1] {
            let f = transition_frequency(
                &labeled,
                &LabelKey {
                    m_s: 0,
                    m_i_n: None,
                    m_i_c: vec![],
                },
                &LabelKey {
                    m_s: target,
                    m_i_n: None,
                    m_i_c: vec![],
                },
            )
            .unwrap();
            assert!((f - 2.87e9).abs() < 1e-3);
        }
    }

    #[test]
    fn missing_label_is_lookup_error() {
        let sys = SpinSystem::electron_only(2.87e9, Vector3::zeros());
        let h = build_hamiltonian(&sys).unwrap();
        let decomp = eigendecompose(&h).unwrap();
        let labeled = label_eigenstates(&decomp, &sys, DEFAULT_LABEL_THRESHOLD).unwrap();
        let bad = LabelKey {
            m_s: 0,
            m_i_n: Some(1),
            m_i_c: vec![],
        };
        let ok = LabelKey {
            m_s: 0,
            m_i_n: None,
            m_i_c: vec![],
        };
        assert!(matches!(
            transition_frequency(&labeled, &bad, &ok),
            Err(NvError::Lookup(_))
        ));
    }

    #[test]
    fn hungarian_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(2..=5);
            let w: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen::<f64>()).collect())
                .collect();
            let assign = hungarian_max(&w);
            let total: f64 = assign.iter().enumerate().map(|(s, &b)| w[b][s]).sum();

            // brute force over permutations
            let mut perm: Vec<usize> = (0..n).collect();
            let mut best = f64::NEG_INFINITY;
            permute(&mut perm, 0, &mut |p| {
                let t: f64 = p.iter().enumerate().map(|(s, &b)| w[b][s]).sum();
                if t > best {
                    best = t;
                }
            });
            assert!((total - best).abs() < 1e-12, "hungarian {total} vs brute {best}");
        }
    }

    fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }
}
