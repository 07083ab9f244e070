//! Independent check of a decomposition: `Q M P` must equal the block diagonal
//! matrix of the summands, with `Q` and `P` graded and invertible.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::degree::{self, Degree};
use crate::field::{Field, Scalar};
use crate::linalg::{rank, DenseMatrix};
use crate::sparse::{self, SparseVec};

use super::Decomposition;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("{which} has the wrong size")]
    Size { which: &'static str },
    #[error("{which} is not graded at entry ({row}, {col})")]
    NotGraded { which: &'static str, row: usize, col: usize },
    #[error("{which} is singular on the degree {degree:?}")]
    Singular { which: &'static str, degree: Degree },
    #[error("summands do not partition the {what}: index {index}")]
    Partition { what: &'static str, index: usize },
    #[error("summand {summand} has a wrong degree at local {what} {index}")]
    Degree { summand: usize, what: &'static str, index: usize },
    #[error("entry ({row}, {col}) of Q M P is {got}, expected {expected}")]
    Mismatch { row: usize, col: usize, got: Scalar, expected: Scalar },
}

/// Checks that `t` (given by columns) is graded by `deg` on both sides and
/// invertible. Invertibility reduces to the blocks of equal degree, since the
/// matrix is triangular with respect to any linear extension of the degree order.
fn check_transform(
    f: Field,
    which: &'static str,
    t: &[SparseVec],
    deg: impl Fn(usize) -> Degree,
) -> Result<(), CertificateError> {
    let n = t.len();
    let mut classes: BTreeMap<Degree, Vec<usize>> = BTreeMap::new();
    for (j, col) in t.iter().enumerate() {
        let dj = deg(j);
        for &(i, _) in col {
            let i = i as usize;
            if i >= n {
                return Err(CertificateError::Size { which });
            }
            if !degree::leq(&deg(i), &dj) {
                return Err(CertificateError::NotGraded { which, row: i, col: j });
            }
        }
        classes.entry(dj).or_default().push(j);
    }
    for (dg, idx) in classes {
        let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let mut m = DenseMatrix::zeros(f, idx.len(), idx.len());
        for (a, &j) in idx.iter().enumerate() {
            for &(i, x) in &t[j] {
                if let Some(&r) = pos.get(&(i as usize)) {
                    m.set(r, a, x);
                }
            }
        }
        if rank(&m) < idx.len() {
            return Err(CertificateError::Singular { which, degree: dg });
        }
    }
    Ok(())
}

fn partition(what: &'static str, n: usize, parts: impl Iterator<Item = usize>) -> Result<(), CertificateError> {
    let mut seen = vec![false; n];
    for i in parts {
        if i >= n || seen[i] {
            return Err(CertificateError::Partition { what, index: i });
        }
        seen[i] = true;
    }
    match seen.iter().position(|s| !s) {
        Some(i) => Err(CertificateError::Partition { what, index: i }),
        None => Ok(()),
    }
}

pub fn verify(d: &Decomposition) -> Result<(), CertificateError> {
    let m = &d.input;
    let f = m.field();
    if d.q.len() != m.num_rows() {
        return Err(CertificateError::Size { which: "Q" });
    }
    if d.p.len() != m.num_cols() {
        return Err(CertificateError::Size { which: "P" });
    }
    check_transform(f, "Q", &d.q, |i| m.row_degree(i).to_vec())?;
    check_transform(f, "P", &d.p, |j| m.col_degree(j).to_vec())?;
    partition("rows", m.num_rows(), d.summands.iter().flat_map(|s| s.rows.iter().copied()))?;
    partition("columns", m.num_cols(), d.summands.iter().flat_map(|s| s.cols.iter().copied()))?;

    let mut expected: Vec<SparseVec> = vec![Vec::new(); m.num_cols()];
    for (si, s) in d.summands.iter().enumerate() {
        for (a, &r) in s.rows.iter().enumerate() {
            if s.matrix.row_degree(a) != m.row_degree(r) {
                return Err(CertificateError::Degree { summand: si, what: "row", index: a });
            }
        }
        for (b, &c) in s.cols.iter().enumerate() {
            if s.matrix.col_degree(b) != m.col_degree(c) {
                return Err(CertificateError::Degree { summand: si, what: "column", index: b });
            }
            let mut v: SparseVec = s.matrix.column(b).iter().map(|&(i, x)| (s.rows[i as usize] as u32, x)).collect();
            v.sort_unstable_by_key(|e| e.0);
            expected[c] = v;
        }
    }
    for (j, pj) in d.p.iter().enumerate() {
        let mut mp = SparseVec::new();
        for &(s, x) in pj {
            mp = sparse::axpy(f, &mp, x, m.column(s as usize));
        }
        let mut qmp = SparseVec::new();
        for &(i, x) in &mp {
            qmp = sparse::axpy(f, &qmp, x, &d.q[i as usize]);
        }
        if qmp != expected[j] {
            let diff = sparse::axpy(f, &qmp, f.neg(1), &expected[j]);
            let row = diff[0].0;
            return Err(CertificateError::Mismatch {
                row: row as usize,
                col: j,
                got: sparse::get(&qmp, row),
                expected: sparse::get(&expected[j], row),
            });
        }
    }
    Ok(())
}
