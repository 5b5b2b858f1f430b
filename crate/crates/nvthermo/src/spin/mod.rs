//! Ground-state spin Hamiltonian: operators, assembly, diagonalization,
//! and product-basis labeling of eigenstates.
//!
//! The Hamiltonian acts on electron (S=1) x 14N (I=1, optional) x 13C (I=1/2,
//! up to four sites) and carries every coupling in Hz, fields in Gauss.
//! Basis ordering is fixed as electron (x) 14N (x) 13C(1) (x) ... with m
//! descending within each factor, so labels are stable across runs.

mod eigen;
mod hamiltonian;
mod label;
mod operators;
mod system;

pub use eigen::{eigendecompose, EigenDecomposition};
pub use hamiltonian::build_hamiltonian;
pub use label::{label_eigenstates, transition_frequency, LabelKey, StateLabel, DEFAULT_LABEL_THRESHOLD};
pub use operators::{build_spin_operators, SpinOperators};
pub use system::{c3v_tensor, CarbonSite, SpinSystem, MAX_CARBONS};

/// Complex matrix type used for all Hamiltonians and eigenvectors.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex<f64>>;
