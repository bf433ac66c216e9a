//! Combinatorial Hodge theory on clique complexes of graphs.
//!
//! Vertices are 0-indexed in the Rust API; text formats and reports use
//! 1-indexed vertex labels.

pub mod cochain;
pub mod complex;
pub mod decompose;
pub mod error;
pub mod format;
pub mod games;
pub mod hodgerank;
pub mod lsq;
pub mod nonlinear;
pub mod operators;
pub mod sparse;
pub mod spectral;
pub mod subspace;

pub use cochain::{Cochain, WeightScheme};
pub use complex::{enumerate_cliques, full_complex, CliqueComplex, Graph};
pub use decompose::{harmonic_project, hodge_decompose, verify_operator_pair, HodgeSplit, Method};
pub use error::{Error, Result};
pub use operators::{
    adjoint, coboundary, curl, divergence, gradient, hodge_laplacian, CochainMap, HodgeLaplacian,
};
pub use sparse::SparseMatrix;
pub use spectral::{betti, harmonic_basis, isospectral_fingerprint, spectrum, Spectrum};
