//! Indecomposable decompositions of finitely presented multiparameter
//! persistence modules over prime fields.

pub mod bench;
pub mod block_reduce;
pub mod decompose;
pub mod degree;
pub mod field;
pub mod fixtures;
pub mod generate;
pub mod graded;
pub mod hom;
pub mod interval;
pub mod linalg;
pub mod report;
pub mod scc;
pub mod signature;
pub mod sparse;
pub mod subspace;

pub use field::{Field, Scalar};
