//! Density-matrix estimation from balanced homodyne data with kernel functions.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command-line
//! driver and parallel sweeps live in the `homodyne` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod kernels;
pub mod matrix;
pub mod observables;
pub mod quadrature;
pub mod reconstruction;
pub mod special;
pub mod states;

pub use error::{Error, Result};
pub use kernels::{KernelMethod, KernelSpec, KernelTable};
pub use matrix::{ComplexMatrix, RealMatrix, SquareMatrix};
pub use num_complex::Complex64;
pub use reconstruction::{DensityMatrixEstimate, ErrorMatrix, ScanConfig, ScanMode, XQuadrature};
pub use special::EigenfunctionTable;
pub use states::{QuadratureDistribution, StateKind, StateSpec, TheoreticalDensityMatrix};
