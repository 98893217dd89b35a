//! Finite-lattice quantum harmonic analysis: phase-space grids,
//! time-frequency shifts, the Fourier-Wigner transform, operator
//! convolutions, Schatten and Lorentz norms, and Fourier-Wigner multipliers.
//!
//! All transforms act on an `n`-point grid with spacing `h` and its
//! reciprocal `1/(n h)`, where time-frequency shifts by lattice points form
//! an exact finite Heisenberg group. Identities that hold on `R^2` therefore
//! hold here to roundoff.

pub mod convolution;
pub(crate) mod dft;
pub mod error;
pub mod fourier_wigner;
pub mod grid;
pub mod io;
pub(crate) mod linalg;
pub mod multiplier;
pub mod operator;
pub mod report;
pub mod tf;

pub use convolution::{fun_op_convolve, localisation, op_op_convolve, young_exponent};
pub use error::{QhaError, Result};
pub use fourier_wigner::{fw_inverse, fw_transform};
pub use grid::{function_norm, hermite, lorentz_norm, GridFunction, LineGrid, PhaseFunction, PhaseGrid};
pub use multiplier::{classical_multiplier, fw_multiplier, MultiplierSymbol};
pub use operator::{schatten_norm, singular_values, OperatorMatrix, SingularSpectrum};
pub use report::ExperimentReport;
pub use tf::{ambiguity, symplectic_ft, tf_shift, wigner, LatticePoint};
