//! Complex spectra of the Laplacian on an equilateral star graph with
//! standard conditions at the centre and complex Robin conditions
//! `u_j'(0) = h_j u_j(0)` at the `N` outer ends.
//!
//! The crate evaluates the secular function in several equivalent forms,
//! locates its zeros by the argument principle, compares the `n pi` root
//! series with its large-`n` expansion, and decides whether the spectrum is
//! symmetric under complex conjugation.

pub mod asymptotics;
pub mod dd;
pub mod error;
mod linalg;
pub mod quadrature;
pub mod secular;
pub mod spectral;
pub mod symmetric_poly;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use secular::{RobinTuple, SecularEvaluator};
pub use spectral::{SearchRegion, SolverOptions, SpectralPoint};
pub use symmetric_poly::{ComplexTuple, SymmetricPolyVector};
