//! Dense linear algebra over a prime field: echelon forms, solving, kernels and
//! elimination constrained by a preorder on the rows.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch")]
    FieldMismatch,
}

/// Row-major dense matrix over F_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, field, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod q.
    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.from_i64(v));
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let v = f.add(out.get(i, j), f.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let f = self.field;
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(x).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))).collect())
    }

    /// Horizontal concatenation `[self other]`.
    pub fn hconcat(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch("hconcat row counts differ".into()));
        }
        let mut out = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(out)
    }

    /// Submatrix on the given column indices.
    pub fn select_columns(&self, cols: &[usize]) -> DenseMatrix {
        let mut out = Self::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out.set(r, k, self.get(r, c));
            }
        }
        out
    }

    fn add_row_multiple(&mut self, target: usize, coef: Scalar, source: usize) {
        if coef == 0 {
            return;
        }
        let f = self.field;
        for c in 0..self.cols {
            let s = self.get(source, c);
            if s != 0 {
                let v = f.add(self.get(target, c), f.mul(coef, s));
                self.set(target, c, v);
            }
        }
    }
}

/// One line per row, entries as signed representatives.
impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|&x| self.field.to_signed(x).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with the pivot column of every nonzero row.
pub fn rref(a: &DenseMatrix) -> (DenseMatrix, Vec<usize>) {
    if a.field.is_binary() {
        rref_binary(a)
    } else {
        rref_generic(a)
    }
}

fn rref_generic(a: &DenseMatrix) -> (DenseMatrix, Vec<usize>) {
    let f = a.field;
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                let tmp = m.get(p, j);
                m.set(p, j, m.get(r, j));
                m.set(r, j, tmp);
            }
        }
        let inv = f.inv(m.get(r, c));
        for j in 0..m.cols {
            let v = f.mul(m.get(r, j), inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i != r {
                let x = m.get(i, c);
                if x != 0 {
                    m.add_row_multiple(i, f.neg(x), r);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Bit-packed elimination for q = 2.
fn rref_binary(a: &DenseMatrix) -> (DenseMatrix, Vec<usize>) {
    let words = a.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..a.rows)
        .map(|i| {
            let mut w = vec![0u64; words];
            for (j, &v) in a.row(i).iter().enumerate() {
                if v != 0 {
                    w[j / 64] |= 1 << (j % 64);
                }
            }
            w
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == rows.len() {
            break;
        }
        let (wi, bit) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (r..rows.len()).find(|&i| rows[i][wi] & bit != 0) else {
            continue;
        };
        rows.swap(p, r);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[wi] & bit != 0 {
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(wi) {
                    *x ^= *y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut m = DenseMatrix::zeros(a.field, a.rows, a.cols);
    for (i, row) in rows.iter().enumerate() {
        for j in 0..a.cols {
            if row[j / 64] >> (j % 64) & 1 == 1 {
                m.set(i, j, 1);
            }
        }
    }
    (m, pivots)
}

pub fn rank(a: &DenseMatrix) -> usize {
    rref(a).1.len()
}

/// Solves `A x = b`. Free variables are set to zero, so the answer is the unique
/// solution supported on the pivot columns of the reduced echelon form.
pub fn solve(a: &DenseMatrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
    if b.len() != a.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "system has {} rows but right-hand side has length {}",
            a.rows,
            b.len()
        )));
    }
    let rhs = DenseMatrix::from_columns(a.field, a.rows, &[b.to_vec()]);
    let aug = a.hconcat(&rhs)?;
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut x = vec![0; a.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, a.cols);
    }
    Ok(Some(x))
}

/// Basis of the null space, one basis vector per column of the result.
pub fn kernel_basis(a: &DenseMatrix) -> DenseMatrix {
    let f = a.field;
    let (r, pivots) = rref(a);
    let mut is_pivot = vec![false; a.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..a.cols).filter(|&c| !is_pivot[c]).collect();
    let mut k = DenseMatrix::zeros(f, a.cols, free.len());
    for (j, &fc) in free.iter().enumerate() {
        k.set(fc, j, 1);
        for (i, &p) in pivots.iter().enumerate() {
            k.set(p, j, f.neg(r.get(i, fc)));
        }
    }
    k
}

/// Result of [`column_echelon`]: `echelon = input * transform`.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub echelon: DenseMatrix,
    /// Pivot row of each nonzero column, strictly increasing.
    pub pivot_rows: Vec<usize>,
    pub transform: DenseMatrix,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }
}

/// Reduced column echelon form. The pivot of a column is its lowest-index nonzero
/// row; nonzero columns come first, ordered by pivot.
pub fn column_echelon(a: &DenseMatrix) -> ColumnEchelon {
    let f = a.field;
    let mut e = a.clone();
    let mut t = DenseMatrix::identity(f, a.cols);
    let mut pivot_rows = Vec::new();
    let mut c = 0;
    for r in 0..e.rows {
        if c == e.cols {
            break;
        }
        let Some(p) = (c..e.cols).find(|&j| e.get(r, j) != 0) else {
            continue;
        };
        swap_columns(&mut e, p, c);
        swap_columns(&mut t, p, c);
        let inv = f.inv(e.get(r, c));
        scale_column(&mut e, c, inv);
        scale_column(&mut t, c, inv);
        for j in 0..e.cols {
            if j != c {
                let x = e.get(r, j);
                if x != 0 {
                    add_column_multiple(&mut e, j, f.neg(x), c);
                    add_column_multiple(&mut t, j, f.neg(x), c);
                }
            }
        }
        pivot_rows.push(r);
        c += 1;
    }
    ColumnEchelon { echelon: e, pivot_rows, transform: t }
}

fn swap_columns(m: &mut DenseMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in 0..m.rows {
        let tmp = m.get(r, a);
        m.set(r, a, m.get(r, b));
        m.set(r, b, tmp);
    }
}

fn scale_column(m: &mut DenseMatrix, c: usize, s: Scalar) {
    let f = m.field;
    for r in 0..m.rows {
        let v = f.mul(m.get(r, c), s);
        m.set(r, c, v);
    }
}

fn add_column_multiple(m: &mut DenseMatrix, target: usize, coef: Scalar, source: usize) {
    let f = m.field;
    for r in 0..m.rows {
        let s = m.get(r, source);
        if s != 0 {
            let v = f.add(m.get(r, target), f.mul(coef, s));
            m.set(r, target, v);
        }
    }
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(a: &DenseMatrix) -> Option<DenseMatrix> {
    if a.rows != a.cols {
        return None;
    }
    let n = a.rows;
    let aug = a.hconcat(&DenseMatrix::identity(a.field, n)).ok()?;
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    Some(r.select_columns(&cols))
}

/// A preorder on `0..size`, stored as a dense relation matrix.
#[derive(Clone, Debug)]
pub struct Preorder {
    size: usize,
    rel: Vec<bool>,
}

impl Preorder {
    pub fn new(size: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let mut rel = vec![false; size * size];
        for i in 0..size {
            for j in 0..size {
                rel[i * size + j] = i == j || leq(i, j);
            }
        }
        Preorder { size, rel }
    }

    /// Every pair incomparable.
    pub fn discrete(size: usize) -> Self {
        Self::new(size, |_, _| false)
    }

    /// The chain 0 < 1 < ... < size-1.
    pub fn chain(size: usize) -> Self {
        Self::new(size, |i, j| i <= j)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.size + j]
    }

    pub fn is_valid(&self) -> bool {
        let n = self.size;
        (0..n).all(|i| self.leq(i, i))
            && (0..n).all(|i| (0..n).all(|j| !self.leq(i, j) || (0..n).all(|k| !self.leq(j, k) || self.leq(i, k))))
    }

    /// A linear extension: elements sorted by the size of their down-set, ties by index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.size;
        let down: Vec<usize> = (0..n).map(|j| (0..n).filter(|&i| self.leq(i, j)).count()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (down[i], i));
        order
    }
}

/// One logged row operation: `row[to] += coef * row[from]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RowAddition {
    pub from: usize,
    pub to: usize,
    pub coef: Scalar,
}

/// Gaussian elimination using only row additions `i -> j` with `i <=_P j`, where `j`
/// comes after `i` in a fixed linear extension of `P`.
pub fn preorder_row_eliminate(m: &DenseMatrix, p: &Preorder) -> Result<(DenseMatrix, Vec<RowAddition>), LinalgError> {
    if p.size() != m.rows {
        return Err(LinalgError::DimensionMismatch(format!("preorder on {} elements for {} rows", p.size(), m.rows)));
    }
    let f = m.field;
    let mut out = m.clone();
    let mut log = Vec::new();
    let order = p.linear_extension();
    for (pos, &i) in order.iter().enumerate() {
        let Some(pc) = (0..out.cols).find(|&c| out.get(i, c) != 0) else {
            continue;
        };
        let pivot = out.get(i, pc);
        for &j in &order[pos + 1..] {
            if !p.leq(i, j) {
                continue;
            }
            let x = out.get(j, pc);
            if x != 0 {
                let coef = f.neg(f.div(x, pivot));
                out.add_row_multiple(j, coef, i);
                log.push(RowAddition { from: i, to: j, coef });
            }
        }
    }
    Ok((out, log))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::F2
    }

    #[test]
    fn solve_identity() {
        let a = DenseMatrix::identity(f2(), 2);
        assert_eq!(solve(&a, &[1, 0]).unwrap(), Some(vec![1, 0]));
    }

    #[test]
    fn solve_free_variable_zeroed() {
        let a = DenseMatrix::from_rows(f2(), &[vec![1, 1]]);
        assert_eq!(solve(&a, &[1]).unwrap(), Some(vec![1, 0]));
    }

    #[test]
    fn solve_over_f3_back_substitution() {
        let f3 = Field::new(3).unwrap();
        let a = DenseMatrix::from_rows(f3, &[vec![1, 1], vec![0, 1]]);
        assert_eq!(solve(&a, &[2, 1]).unwrap(), Some(vec![1, 1]));
    }

    #[test]
    fn solve_inconsistent_and_mismatch() {
        let a = DenseMatrix::from_rows(f2(), &[vec![1, 1], vec![1, 1]]);
        assert_eq!(solve(&a, &[1, 0]).unwrap(), None);
        assert!(solve(&a, &[1]).is_err());
    }

    #[test]
    fn kernel_examples() {
        let a = DenseMatrix::from_rows(f2(), &[vec![1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![1, 1]);
        assert_eq!(kernel_basis(&DenseMatrix::identity(f2(), 3)).cols(), 0);
        let z = DenseMatrix::zeros(f2(), 2, 3);
        assert_eq!(kernel_basis(&z), DenseMatrix::identity(f2(), 3));
    }

    #[test]
    fn column_echelon_examples() {
        let id = DenseMatrix::identity(f2(), 3);
        let ce = column_echelon(&id);
        assert_eq!(ce.echelon, id);
        assert_eq!(ce.transform, id);
        let ones = DenseMatrix::from_rows(f2(), &[vec![1, 1], vec![1, 1]]);
        let ce = column_echelon(&ones);
        assert_eq!(ce.rank(), 1);
        assert!(ce.echelon.column(1).iter().all(|&v| v == 0));
        assert_eq!(ones.mul(&ce.transform).unwrap(), ce.echelon);
    }

    #[test]
    fn preorder_examples() {
        let m = DenseMatrix::from_rows(f2(), &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        let (out, log) = preorder_row_eliminate(&m, &Preorder::discrete(3)).unwrap();
        assert_eq!(out, m);
        assert!(log.is_empty());

        let ones = DenseMatrix::from_rows(f2(), &[vec![1, 1], vec![1, 1]]);
        let (out, _) = preorder_row_eliminate(&ones, &Preorder::chain(2)).unwrap();
        assert_eq!(out.row(1), &[0, 0]);
    }

    #[test]
    fn inverse_roundtrip() {
        let f5 = Field::new(5).unwrap();
        let a = DenseMatrix::from_rows(f5, &[vec![2, 1], vec![1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), DenseMatrix::identity(f5, 2));
        let s = DenseMatrix::from_rows(f5, &[vec![1, 2], vec![2, 4]]);
        assert!(inverse(&s).is_none());
    }

    #[test]
    fn binary_and_generic_agree() {
        let a = DenseMatrix::from_rows(f2(), &[vec![1, 0, 1, 1], vec![0, 1, 1, 0], vec![1, 1, 0, 1], vec![0, 0, 1, 1]]);
        assert_eq!(rref_binary(&a), rref_generic(&a));
    }
}
