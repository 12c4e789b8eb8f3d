//! Computational toolkit for finite-dimensional von Neumann algebras, i.e.
//! finite direct sums of full complex matrix algebras.

pub mod algebra;
pub mod cli;
pub mod division;
pub mod error;
pub mod json;
pub mod linalg;
pub mod maps;
pub mod measurement;
pub mod projections;
pub mod random;
pub mod spectral;
pub mod structure;
pub mod tensor;
pub mod tolerance;
pub mod verify;

pub use algebra::{make_algebra, Element, FdAlgebra};
pub use error::{Error, Result};
pub use maps::{LinMap, PositivityVerdict};
pub use tolerance::ToleranceConfig;
