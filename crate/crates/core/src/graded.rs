//! Graded presentation matrices, admissible operations, restriction to lower
//! sets, batching and minimization.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::degree::{self, Degree};
use crate::field::{Field, Scalar};
use crate::linalg::DenseMatrix;
use crate::sparse::{self, Reducer, SparseVec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GradedError {
    #[error("degree of {what} {index} has {got} coordinates, expected {expected}")]
    DegreeLength { what: &'static str, index: usize, got: usize, expected: usize },
    #[error("column {col} references row {row} but there are only {rows} rows")]
    RowOutOfRange { col: usize, row: usize, rows: usize },
    #[error("column {col} is not strictly sorted or stores an explicit zero")]
    MalformedColumn { col: usize },
    #[error("entry ({row}, {col}) is nonzero but the column degree does not dominate the row degree")]
    NotGraded { row: usize, col: usize },
    #[error("{kind} operation {from} -> {to} is not admissible")]
    Inadmissible { kind: &'static str, from: usize, to: usize },
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("zero coefficient")]
    ZeroCoefficient,
}

/// A sparse column-major matrix over F_q with a degree for every row (generator)
/// and every column (relation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    field: Field,
    d: usize,
    row_deg: Vec<i64>,
    col_deg: Vec<i64>,
    cols: Vec<SparseVec>,
}

impl GradedMatrix {
    pub fn empty(field: Field, d: usize) -> Self {
        GradedMatrix { field, d, row_deg: Vec::new(), col_deg: Vec::new(), cols: Vec::new() }
    }

    /// Validating constructor.
    pub fn new(
        field: Field,
        d: usize,
        row_degrees: Vec<Degree>,
        columns: Vec<(Degree, SparseVec)>,
    ) -> Result<Self, GradedError> {
        let mut row_deg = Vec::with_capacity(row_degrees.len() * d);
        for (i, g) in row_degrees.iter().enumerate() {
            if g.len() != d {
                return Err(GradedError::DegreeLength { what: "row", index: i, got: g.len(), expected: d });
            }
            row_deg.extend_from_slice(g);
        }
        let mut col_deg = Vec::with_capacity(columns.len() * d);
        let mut cols = Vec::with_capacity(columns.len());
        for (j, (r, c)) in columns.into_iter().enumerate() {
            if r.len() != d {
                return Err(GradedError::DegreeLength { what: "column", index: j, got: r.len(), expected: d });
            }
            col_deg.extend_from_slice(&r);
            cols.push(c);
        }
        let m = GradedMatrix { field, d, row_deg, col_deg, cols };
        m.check()?;
        Ok(m)
    }

    /// Builds from dense integer entries `entries[i][j]`, reduced mod q.
    pub fn from_dense(
        field: Field,
        row_degrees: &[Degree],
        col_degrees: &[Degree],
        entries: &[Vec<i64>],
    ) -> Result<Self, GradedError> {
        let d = row_degrees.first().or(col_degrees.first()).map_or(0, |g| g.len());
        let columns = col_degrees
            .iter()
            .enumerate()
            .map(|(j, r)| {
                let col =
                    sparse::collect(field, (0..row_degrees.len()).map(|i| (i as u32, field.from_i64(entries[i][j]))));
                (r.clone(), col)
            })
            .collect();
        Self::new(field, d, row_degrees.to_vec(), columns)
    }

    /// Unchecked constructor from flat degree arrays.
    pub(crate) fn from_raw(field: Field, d: usize, row_deg: Vec<i64>, col_deg: Vec<i64>, cols: Vec<SparseVec>) -> Self {
        debug_assert_eq!(col_deg.len(), cols.len() * d);
        GradedMatrix { field, d, row_deg, col_deg, cols }
    }

    /// Verifies index bounds, sortedness and the graded invariant.
    pub fn check(&self) -> Result<(), GradedError> {
        let m = self.num_rows();
        for (j, c) in self.cols.iter().enumerate() {
            for (k, &(i, v)) in c.iter().enumerate() {
                if v == 0 || v as u32 >= self.field.q() || (k > 0 && c[k - 1].0 >= i) {
                    return Err(GradedError::MalformedColumn { col: j });
                }
                if i as usize >= m {
                    return Err(GradedError::RowOutOfRange { col: j, row: i as usize, rows: m });
                }
                if !degree::leq(self.row_degree(i as usize), self.col_degree(j)) {
                    return Err(GradedError::NotGraded { row: i as usize, col: j });
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn num_rows(&self) -> usize {
        self.row_deg.len().checked_div(self.d).unwrap_or(0)
    }

    #[inline]
    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    #[inline]
    pub fn row_degree(&self, i: usize) -> &[i64] {
        &self.row_deg[i * self.d..(i + 1) * self.d]
    }

    #[inline]
    pub fn col_degree(&self, j: usize) -> &[i64] {
        &self.col_deg[j * self.d..(j + 1) * self.d]
    }

    pub fn row_degrees(&self) -> Vec<Degree> {
        (0..self.num_rows()).map(|i| self.row_degree(i).to_vec()).collect()
    }

    pub fn col_degrees(&self) -> Vec<Degree> {
        (0..self.num_cols()).map(|j| self.col_degree(j).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        sparse::get(&self.cols[j], i as u32)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.field, self.num_rows(), self.num_cols());
        for (j, c) in self.cols.iter().enumerate() {
            for &(i, v) in c {
                out.set(i as usize, j, v);
            }
        }
        out
    }

    /// Submatrix on the given rows and columns (in the given order). Entries in
    /// rows outside `rows` are dropped.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> GradedMatrix {
        let mut local = HashMap::with_capacity(rows.len());
        let mut row_deg = Vec::with_capacity(rows.len() * self.d);
        for (k, &i) in rows.iter().enumerate() {
            local.insert(i as u32, k as u32);
            row_deg.extend_from_slice(self.row_degree(i));
        }
        let mut col_deg = Vec::with_capacity(cols.len() * self.d);
        let mut out_cols = Vec::with_capacity(cols.len());
        for &j in cols {
            col_deg.extend_from_slice(self.col_degree(j));
            let mut c: SparseVec = self.cols[j].iter().filter_map(|&(i, v)| local.get(&i).map(|&k| (k, v))).collect();
            c.sort_unstable_by_key(|e| e.0);
            out_cols.push(c);
        }
        GradedMatrix { field: self.field, d: self.d, row_deg, col_deg, cols: out_cols }
    }

    /// The submatrix of rows and columns whose degree is `<= alpha`.
    pub fn restrict_leq(&self, alpha: &[i64]) -> Restriction {
        let rows: Vec<usize> = (0..self.num_rows()).filter(|&i| degree::leq(self.row_degree(i), alpha)).collect();
        let cols: Vec<usize> = (0..self.num_cols()).filter(|&j| degree::leq(self.col_degree(j), alpha)).collect();
        Restriction { matrix: self.submatrix(&rows, &cols), rows, cols }
    }

    /// Block-diagonal sum of presentations with the same field and dimension.
    pub fn direct_sum(field: Field, d: usize, parts: &[GradedMatrix]) -> GradedMatrix {
        let mut out = GradedMatrix::empty(field, d);
        for p in parts {
            let off = out.num_rows() as u32;
            out.row_deg.extend_from_slice(&p.row_deg);
            out.col_deg.extend_from_slice(&p.col_deg);
            out.cols.extend(p.cols.iter().map(|c| c.iter().map(|&(i, v)| (i + off, v)).collect()));
        }
        out
    }

    /// True if some entry sits at a generator and relation of equal degree.
    pub fn has_equal_degree_entry(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .any(|(j, c)| c.iter().any(|&(i, _)| self.row_degree(i as usize) == self.col_degree(j)))
    }
}

/// A restricted submatrix plus maps from its indices to the parent.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub matrix: GradedMatrix,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Maximal groups of equal-degree columns in a linear extension of the product order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Batch {
    pub degree: Degree,
    pub cols: Vec<usize>,
}

/// Column order (colexicographic on degrees, ties by index) and its batches.
pub fn sort_and_batch(m: &GradedMatrix) -> Vec<Batch> {
    let mut order: Vec<usize> = (0..m.num_cols()).collect();
    order.sort_by(|&a, &b| degree::colex_cmp(m.col_degree(a), m.col_degree(b)).then(a.cmp(&b)));
    let mut out: Vec<Batch> = Vec::new();
    for j in order {
        match out.last_mut() {
            Some(b) if b.degree == m.col_degree(j) => b.cols.push(j),
            _ => out.push(Batch { degree: m.col_degree(j).to_vec(), cols: vec![j] }),
        }
    }
    out
}

/// Reduces each column of `n` against `lower` (a span of columns of degree at most
/// that of `n`). Returns for every column the combination of spanning columns
/// that was added.
pub fn column_sweep(lower: &Reducer, n: &mut [SparseVec]) -> Vec<SparseVec> {
    n.iter_mut()
        .map(|c| {
            let red = lower.reduce(c);
            *c = red.remainder;
            red.combo
        })
        .collect()
}

/// An invertible pair `(Q, P)` with `current = Q * original * P`. `Q` is graded by
/// the row degrees on both sides and `P` by the column degrees on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformPair {
    pub q: GradedMatrix,
    pub p: GradedMatrix,
}

impl TransformPair {
    pub fn identity(m: &GradedMatrix) -> Self {
        let f = m.field;
        let id = |deg: &[i64], n: usize| {
            GradedMatrix::from_raw(f, m.d, deg.to_vec(), deg.to_vec(), (0..n).map(|i| vec![(i as u32, 1)]).collect())
        };
        TransformPair { q: id(&m.row_deg, m.num_rows()), p: id(&m.col_deg, m.num_cols()) }
    }
}

/// A graded matrix under admissible row and column additions, with the
/// accumulated transformation. Dense storage; meant for small and medium sizes.
#[derive(Clone, Debug)]
pub struct TrackedMatrix {
    original: GradedMatrix,
    current: DenseMatrix,
    q: DenseMatrix,
    p: DenseMatrix,
}

impl TrackedMatrix {
    pub fn new(m: &GradedMatrix) -> Self {
        let f = m.field;
        TrackedMatrix {
            original: m.clone(),
            current: m.to_dense(),
            q: DenseMatrix::identity(f, m.num_rows()),
            p: DenseMatrix::identity(f, m.num_cols()),
        }
    }

    pub fn num_rows(&self) -> usize {
        self.original.num_rows()
    }

    pub fn num_cols(&self) -> usize {
        self.original.num_cols()
    }

    pub fn row_add_admissible(&self, from: usize, to: usize) -> bool {
        from != to
            && from < self.num_rows()
            && to < self.num_rows()
            && degree::leq(self.original.row_degree(to), self.original.row_degree(from))
    }

    pub fn col_add_admissible(&self, from: usize, to: usize) -> bool {
        from != to
            && from < self.num_cols()
            && to < self.num_cols()
            && degree::leq(self.original.col_degree(from), self.original.col_degree(to))
    }

    /// `row[to] += c * row[from]`, allowed when `G(from) >= G(to)`.
    pub fn admissible_row_add(&mut self, from: usize, to: usize, c: Scalar) -> Result<(), GradedError> {
        if c == 0 {
            return Err(GradedError::ZeroCoefficient);
        }
        if !self.row_add_admissible(from, to) {
            return Err(GradedError::Inadmissible { kind: "row", from, to });
        }
        add_row(&mut self.current, from, to, c);
        add_row(&mut self.q, from, to, c);
        Ok(())
    }

    /// `col[to] += c * col[from]`, allowed when `R(from) <= R(to)`.
    pub fn admissible_col_add(&mut self, from: usize, to: usize, c: Scalar) -> Result<(), GradedError> {
        if c == 0 {
            return Err(GradedError::ZeroCoefficient);
        }
        if !self.col_add_admissible(from, to) {
            return Err(GradedError::Inadmissible { kind: "column", from, to });
        }
        add_col(&mut self.current, from, to, c);
        add_col(&mut self.p, from, to, c);
        Ok(())
    }

    pub fn current(&self) -> GradedMatrix {
        dense_to_graded(&self.current, &self.original.row_deg, &self.original.col_deg, self.original.d)
    }

    pub fn transform(&self) -> TransformPair {
        let d = self.original.d;
        TransformPair {
            q: dense_to_graded(&self.q, &self.original.row_deg, &self.original.row_deg, d),
            p: dense_to_graded(&self.p, &self.original.col_deg, &self.original.col_deg, d),
        }
    }
}

fn add_row(m: &mut DenseMatrix, from: usize, to: usize, c: Scalar) {
    let f = m.field();
    for j in 0..m.cols() {
        let s = m.get(from, j);
        if s != 0 {
            let v = f.add(m.get(to, j), f.mul(c, s));
            m.set(to, j, v);
        }
    }
}

fn add_col(m: &mut DenseMatrix, from: usize, to: usize, c: Scalar) {
    let f = m.field();
    for i in 0..m.rows() {
        let s = m.get(i, from);
        if s != 0 {
            let v = f.add(m.get(i, to), f.mul(c, s));
            m.set(i, to, v);
        }
    }
}

pub(crate) fn dense_to_graded(m: &DenseMatrix, row_deg: &[i64], col_deg: &[i64], d: usize) -> GradedMatrix {
    let cols = (0..m.cols()).map(|j| sparse::from_dense(&m.column(j))).collect();
    GradedMatrix::from_raw(m.field(), d, row_deg.to_vec(), col_deg.to_vec(), cols)
}

/// Output of [`minimize`].
#[derive(Clone, Debug)]
pub struct Minimized {
    pub matrix: GradedMatrix,
    /// Input row index of every output row.
    pub kept_rows: Vec<usize>,
    /// Input column index of every output column.
    pub kept_cols: Vec<usize>,
    /// Cancelled (generator, relation) pairs of equal degree.
    pub cancelled: Vec<(usize, usize)>,
    /// Relations lying in the span of relations of smaller or equal degree.
    pub redundant: Vec<usize>,
}

impl Minimized {
    pub fn changed(&self) -> bool {
        !self.cancelled.is_empty() || !self.redundant.is_empty()
    }
}

/// Removes redundant relations and cancels generator/relation pairs of equal
/// degree. The presented module is unchanged.
///
/// Columns are visited in colexicographic order. A column is reduced against the
/// already accepted columns of smaller or equal degree that are connected to it
/// through such columns; columns outside that set share no rows with any
/// combination that could reach it.
pub fn minimize(input: &GradedMatrix) -> Minimized {
    let f = input.field;
    let m = input.num_rows();
    let n = input.num_cols();
    let mut cols: Vec<SparseVec> = input.cols.clone();
    let mut row_alive = vec![true; m];
    let mut col_alive = vec![true; n];
    let mut cancelled = Vec::new();
    let mut redundant = Vec::new();
    let order: Vec<usize> = sort_and_batch(input).into_iter().flat_map(|b| b.cols).collect();

    let mut row_stamp = vec![usize::MAX; m];
    let mut col_stamp = vec![usize::MAX; n];
    let mut stamp = 0usize;
    loop {
        let mut changed = false;
        let mut accepted = vec![false; n];
        let mut row_index: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (j, c) in cols.iter().enumerate() {
            if col_alive[j] {
                for &(i, _) in c {
                    row_index[i as usize].push(j);
                }
            }
        }
        for &j in &order {
            if !col_alive[j] {
                continue;
            }
            let alpha = input.col_degree(j);
            // accepted columns below alpha reachable from column j through such columns
            stamp += 1;
            let mut lower = Reducer::new(f);
            let mut queue: Vec<usize> = Vec::new();
            for &(i, _) in &cols[j] {
                if row_stamp[i as usize] != stamp {
                    row_stamp[i as usize] = stamp;
                    queue.push(i as usize);
                }
            }
            while let Some(i) = queue.pop() {
                for &k in &row_index[i] {
                    if col_stamp[k] == stamp || !accepted[k] || !col_alive[k] {
                        continue;
                    }
                    col_stamp[k] = stamp;
                    if !degree::leq(input.col_degree(k), alpha) {
                        continue;
                    }
                    lower.push(&cols[k]);
                    for &(r, _) in &cols[k] {
                        if row_stamp[r as usize] != stamp {
                            row_stamp[r as usize] = stamp;
                            queue.push(r as usize);
                        }
                    }
                }
            }
            let red = lower.reduce(&cols[j]);
            if red.remainder.is_empty() {
                col_alive[j] = false;
                redundant.push(j);
                continue;
            }
            let pair = red.remainder.iter().rev().find(|&&(i, _)| input.row_degree(i as usize) == alpha).copied();
            if let Some((g, gv)) = pair {
                let g = g as usize;
                let rem = red.remainder;
                cols[j] = rem.clone();
                let holders: HashSet<usize> = row_index[g].iter().copied().collect();
                for k in holders {
                    if k == j || !col_alive[k] {
                        continue;
                    }
                    let x = sparse::get(&cols[k], g as u32);
                    if x != 0 {
                        let c = f.neg(f.div(x, gv));
                        cols[k] = sparse::axpy(f, &cols[k], c, &rem);
                        for &(i, _) in &rem {
                            row_index[i as usize].push(k);
                        }
                        // an accepted column holding g has the degree of j; it must be revisited
                        changed |= accepted[k];
                    }
                }
                row_alive[g] = false;
                col_alive[j] = false;
                cancelled.push((g, j));
                continue;
            }
            accepted[j] = true;
        }
        if !changed {
            break;
        }
    }

    let kept_rows: Vec<usize> = (0..m).filter(|&i| row_alive[i]).collect();
    let kept_cols: Vec<usize> = (0..n).filter(|&j| col_alive[j]).collect();
    let mut row_map = vec![u32::MAX; m];
    for (k, &i) in kept_rows.iter().enumerate() {
        row_map[i] = k as u32;
    }
    let d = input.d;
    let mut row_deg = Vec::with_capacity(kept_rows.len() * d);
    for &i in &kept_rows {
        row_deg.extend_from_slice(input.row_degree(i));
    }
    let mut col_deg = Vec::with_capacity(kept_cols.len() * d);
    let mut out_cols = Vec::with_capacity(kept_cols.len());
    for &j in &kept_cols {
        col_deg.extend_from_slice(input.col_degree(j));
        out_cols.push(cols[j].iter().map(|&(i, v)| (row_map[i as usize], v)).collect());
    }
    Minimized {
        matrix: GradedMatrix::from_raw(f, d, row_deg, col_deg, out_cols),
        kept_rows,
        kept_cols,
        cancelled,
        redundant,
    }
}
