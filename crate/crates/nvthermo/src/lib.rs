//! NV-center spin toolkit: ground-state Hamiltonian construction and
//! diagonalization, hyperfine-coupling extraction from nuclear transition
//! frequencies, Ramsey/ODMR signal synthesis, least-squares parameter
//! estimation, and a phonon/thermal-expansion model of the temperature
//! dependence of the couplings.
//!
//! Units: couplings and frequencies in Hz, magnetic field in Gauss, phonon
//! energies in meV, temperatures in K.
//!
//! See the `examples/` directory for one runnable example per capability,
//! and the `nvthermo` binary for the command-line interface.

pub mod cli;
pub mod constants;
pub mod error;
pub mod extraction;
pub mod fit;
pub mod io;
pub mod ramsey;
pub mod spin;
pub mod thermo;

pub use error::{NvError, Result};
