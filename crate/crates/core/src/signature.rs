//! Isomorphism invariants of summands used to compare decompositions.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::degree::Degree;
use crate::graded::GradedMatrix;
use crate::interval::grid_dimensions;

/// Grid points beyond which pointwise dimensions are left out of a signature.
pub const DIMENSION_GRID_LIMIT: usize = 1024;

/// Sorted generator and relation degrees of a minimal presentation together with
/// the pointwise dimensions on the grid spanned by those degrees.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub generators: Vec<Degree>,
    pub relations: Vec<Degree>,
    pub dimensions: Option<Vec<usize>>,
}

impl Signature {
    pub fn of(m: &GradedMatrix) -> Self {
        let mut generators = m.row_degrees();
        let mut relations = m.col_degrees();
        generators.sort();
        relations.sort();
        let dimensions = grid_dimensions(m, DIMENSION_GRID_LIMIT).map(|(_, d)| d);
        Signature { generators, relations, dimensions }
    }

    /// Hex SHA-256 of the JSON encoding.
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("signature serializes");
        Sha256::digest(&json).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Sorted signatures of a list of summands.
pub fn multiset<'a>(summands: impl IntoIterator<Item = &'a GradedMatrix>) -> Vec<Signature> {
    let mut v: Vec<Signature> = summands.into_iter().map(Signature::of).collect();
    v.sort();
    v
}
