//! Gamma white-noise calculus on a finite atomic base measure.
//!
//! The crate realizes the extended Fock space with its loop-partition inner
//! product, the Gamma field operators and their Jacobi structure, Gamma-Wick
//! kernels and basis changes, the S-transform and Wick product, a Gamma noise
//! sampler, and the difference-operator calculus on polynomial functionals.

pub mod error;
pub mod extfock;
pub mod fieldops;
pub mod funcalc;
pub mod gammasample;
pub mod measure;
pub mod quadrature;
pub mod suites;
pub mod symtensor;
pub mod wickcalc;

pub use error::{GwnError, Result};
pub use measure::{AtomicMeasure, TestFunction};
pub use symtensor::{FockVector, SymTensor};
