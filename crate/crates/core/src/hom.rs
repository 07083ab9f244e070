//! Morphisms between presented modules: bases of `Hom(coker M_c, coker M_b)`
//! realised as pairs `(Q, P)` with `Q M_c = M_b P`, and their classes modulo the
//! maps vanishing at a fixed degree.

use std::collections::HashMap;

use crate::degree::{self, Degree};
use crate::field::{Field, Scalar};
use crate::graded::GradedMatrix;
use crate::linalg::{kernel_basis, DenseMatrix};
use crate::sparse::{self, Reducer, SparseVec};

/// Column reduction of `M^{<=alpha}`: reduces vectors modulo the span of the
/// columns of degree at most `alpha`.
#[derive(Clone, Debug)]
pub struct LowerReduction {
    reducer: Reducer,
    cols: Vec<u32>,
    alpha: Degree,
}

impl LowerReduction {
    pub fn new(m: &GradedMatrix, alpha: &[i64]) -> Self {
        let mut reducer = Reducer::new(m.field());
        let mut cols = Vec::new();
        for j in 0..m.num_cols() {
            if degree::leq(m.col_degree(j), alpha) {
                reducer.push(m.column(j));
                cols.push(j as u32);
            }
        }
        LowerReduction { reducer, cols, alpha: alpha.to_vec() }
    }

    pub fn alpha(&self) -> &[i64] {
        &self.alpha
    }

    pub fn rank(&self) -> usize {
        self.reducer.rank()
    }

    pub fn remainder(&self, v: &[(u32, Scalar)]) -> SparseVec {
        self.reducer.remainder(v)
    }

    /// Returns the remainder and the combination of columns of the full matrix
    /// (by their index there) that was added to `v`.
    pub fn reduce(&self, v: &[(u32, Scalar)]) -> (SparseVec, SparseVec) {
        let red = self.reducer.reduce(v);
        let combo = red.combo.iter().map(|&(k, c)| (self.cols[k as usize], c)).collect();
        (red.remainder, combo)
    }

    pub fn is_pivot(&self, row: u32) -> bool {
        self.reducer.is_pivot(row)
    }

    /// Rows of degree at most `alpha` that are not pivots: a basis of the cokernel at `alpha`.
    pub fn free_rows(&self, m: &GradedMatrix) -> Vec<u32> {
        (0..m.num_rows() as u32)
            .filter(|&i| degree::leq(m.row_degree(i as usize), &self.alpha) && !self.is_pivot(i))
            .collect()
    }
}

/// A basis of the cokernel of `M` at a degree, given by standard vectors on
/// non-pivot rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelAtAlpha {
    pub dim: usize,
    pub basis_rows: Vec<u32>,
}

pub fn cokernel_at(m: &GradedMatrix, alpha: &[i64]) -> CokernelAtAlpha {
    let basis_rows = LowerReduction::new(m, alpha).free_rows(m);
    CokernelAtAlpha { dim: basis_rows.len(), basis_rows }
}

/// A morphism `coker M_c -> coker M_b`: column `i` of `q` is the image of
/// generator `i` of `c`; column `j` of `p` expresses `Q M_c[:, j]` in the columns of
/// `M_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomElement {
    pub q: Vec<SparseVec>,
    pub p: Vec<SparseVec>,
}

impl HomElement {
    pub fn q_dense(&self, f: Field, rows: usize) -> DenseMatrix {
        dense_of(f, &self.q, rows)
    }

    pub fn p_dense(&self, f: Field, rows: usize) -> DenseMatrix {
        dense_of(f, &self.p, rows)
    }

    /// `Q v` for a vector over the generators of the source.
    pub fn apply(&self, f: Field, v: &[(u32, Scalar)]) -> SparseVec {
        let mut out = SparseVec::new();
        for &(i, x) in v {
            out = sparse::axpy(f, &out, x, &self.q[i as usize]);
        }
        out
    }

    /// Checks `Q M_c = M_b P` and that both matrices are graded.
    pub fn is_valid(&self, mc: &GradedMatrix, mb: &GradedMatrix) -> bool {
        let f = mc.field();
        if self.q.len() != mc.num_rows() || self.p.len() != mc.num_cols() {
            return false;
        }
        for (i, col) in self.q.iter().enumerate() {
            if col
                .iter()
                .any(|&(r, _)| r as usize >= mb.num_rows() || !degree::leq(mb.row_degree(r as usize), mc.row_degree(i)))
            {
                return false;
            }
        }
        for (j, col) in self.p.iter().enumerate() {
            if col
                .iter()
                .any(|&(r, _)| r as usize >= mb.num_cols() || !degree::leq(mb.col_degree(r as usize), mc.col_degree(j)))
            {
                return false;
            }
            let lhs = self.apply(f, mc.column(j));
            let mut rhs = SparseVec::new();
            for &(k, x) in col {
                rhs = sparse::axpy(f, &rhs, x, mb.column(k as usize));
            }
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    pub fn scaled_add(&self, f: Field, a: Scalar, other: &HomElement) -> HomElement {
        HomElement {
            q: self.q.iter().zip(&other.q).map(|(x, y)| sparse::axpy(f, x, a, y)).collect(),
            p: self.p.iter().zip(&other.p).map(|(x, y)| sparse::axpy(f, x, a, y)).collect(),
        }
    }

    pub fn scale(&self, f: Field, a: Scalar) -> HomElement {
        HomElement {
            q: self.q.iter().map(|x| sparse::scale(f, a, x)).collect(),
            p: self.p.iter().map(|x| sparse::scale(f, a, x)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.q.iter().all(Vec::is_empty)
    }
}

fn dense_of(f: Field, cols: &[SparseVec], rows: usize) -> DenseMatrix {
    let dense: Vec<Vec<Scalar>> = cols.iter().map(|c| sparse::to_dense(c, rows)).collect();
    DenseMatrix::from_columns(f, rows, &dense)
}

/// A basis of the module homomorphisms from the source presentation to the target.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub elements: Vec<HomElement>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// Memoised lower reductions of one matrix.
pub struct ReductionCache<'a> {
    m: &'a GradedMatrix,
    cache: HashMap<Degree, LowerReduction>,
}

impl<'a> ReductionCache<'a> {
    pub fn new(m: &'a GradedMatrix) -> Self {
        ReductionCache { m, cache: HashMap::new() }
    }

    pub fn get(&mut self, alpha: &[i64]) -> &LowerReduction {
        let m = self.m;
        self.cache.entry(alpha.to_vec()).or_insert_with(|| LowerReduction::new(m, alpha))
    }
}

/// Basis of `Hom(coker mc, coker mb)`.
///
/// The image of generator `i` is an element of `coker mb` at degree `G_c(i)`, written
/// in the canonical basis of non-pivot rows; each relation of `mc` must map into the
/// span of the columns of `mb` below its degree. Maps are returned with a matching `P`.
pub fn hom_space(mc: &GradedMatrix, mb: &GradedMatrix) -> HomBasis {
    let f = mc.field();
    let mut red = ReductionCache::new(mb);
    // unknowns: (generator of c, row of b)
    let mut vars: Vec<(u32, u32)> = Vec::new();
    let mut var_start = Vec::with_capacity(mc.num_rows());
    for i in 0..mc.num_rows() {
        var_start.push(vars.len());
        let lr = red.get(mc.row_degree(i));
        for r in lr.free_rows(mb) {
            vars.push((i as u32, r));
        }
    }
    var_start.push(vars.len());
    if vars.is_empty() {
        return HomBasis { elements: Vec::new() };
    }

    let mut eq_index: HashMap<(u32, u32), usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, Scalar)> = Vec::new();
    let mut unit_rem: HashMap<(Degree, u32), SparseVec> = HashMap::new();
    for j in 0..mc.num_cols() {
        let rdeg = mc.col_degree(j).to_vec();
        for &(i, coef) in mc.column(j) {
            for (v, &(_, r)) in vars.iter().enumerate().take(var_start[i as usize + 1]).skip(var_start[i as usize]) {
                let key = (rdeg.clone(), r);
                if !unit_rem.contains_key(&key) {
                    let rem = red.get(&rdeg).remainder(&[(r, 1)]);
                    unit_rem.insert(key.clone(), rem);
                }
                for &(row, x) in &unit_rem[&key] {
                    let n = eq_index.len();
                    let e = *eq_index.entry((j as u32, row)).or_insert(n);
                    entries.push((e, v, f.mul(coef, x)));
                }
            }
        }
    }
    let mut a = DenseMatrix::zeros(f, eq_index.len(), vars.len());
    for (e, v, x) in entries {
        a.set(e, v, f.add(a.get(e, v), x));
    }
    let k = kernel_basis(&a);
    let mut elements = Vec::with_capacity(k.cols());
    for t in 0..k.cols() {
        let mut q: Vec<SparseVec> = vec![Vec::new(); mc.num_rows()];
        for (v, &(i, r)) in vars.iter().enumerate() {
            let x = k.get(v, t);
            if x != 0 {
                q[i as usize].push((r, x));
            }
        }
        for c in &mut q {
            c.sort_unstable_by_key(|e| e.0);
        }
        let mut h = HomElement { q, p: Vec::with_capacity(mc.num_cols()) };
        for j in 0..mc.num_cols() {
            let img = h.apply(f, mc.column(j));
            let (rem, combo) = red.get(mc.col_degree(j)).reduce(&img);
            debug_assert!(rem.is_empty());
            let mut p = sparse::scale(f, f.neg(1), &combo);
            p.sort_unstable_by_key(|e| e.0);
            h.p.push(p);
        }
        elements.push(h);
    }
    HomBasis { elements }
}

/// The induced map at `alpha`, flattened: for each cokernel basis row of the
/// source, the canonical remainder of its image in the target.
pub fn effect_at(h: &HomElement, source_rows: &[u32], target: &LowerReduction, target_rows: usize) -> SparseVec {
    let mut out = SparseVec::new();
    for (k, &r) in source_rows.iter().enumerate() {
        let rem = target.remainder(&h.q[r as usize]);
        let off = (k * target_rows) as u32;
        out.extend(rem.iter().map(|&(i, v)| (off + i, v)));
    }
    out
}

/// Splitting of a Hom basis into classes that act nontrivially at `alpha` and maps
/// that vanish there.
#[derive(Clone, Debug)]
pub struct AlphaHomBasis {
    pub representatives: Vec<HomElement>,
    pub vanishing: Vec<HomElement>,
}

impl AlphaHomBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

pub fn alpha_quotient(h: &HomBasis, mc: &GradedMatrix, mb: &GradedMatrix, alpha: &[i64]) -> AlphaHomBasis {
    let f = mc.field();
    let source_rows = LowerReduction::new(mc, alpha).free_rows(mc);
    let target = LowerReduction::new(mb, alpha);
    let mut span = Reducer::new(f);
    let mut representatives = Vec::new();
    let mut vanishing = Vec::new();
    for (idx, e) in h.elements.iter().enumerate() {
        let eff = effect_at(e, &source_rows, &target, mb.num_rows());
        let red = span.push(&eff);
        if red.remainder.is_empty() {
            let mut v = e.clone();
            for &(k, c) in &red.combo {
                v = v.scaled_add(f, c, &h.elements[k as usize]);
            }
            vanishing.push(v);
        } else {
            representatives.push(e.clone());
        }
        debug_assert_eq!(span.pushed(), idx + 1);
    }
    AlphaHomBasis { representatives, vanishing }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(deg: &[i64]) -> GradedMatrix {
        GradedMatrix::new(Field::F2, deg.len(), vec![deg.to_vec()], vec![]).unwrap()
    }

    #[test]
    fn free_modules() {
        assert_eq!(hom_space(&free(&[1, 1]), &free(&[1, 1])).dim(), 1);
        assert_eq!(hom_space(&free(&[0, 1]), &free(&[1, 0])).dim(), 0);
        assert_eq!(hom_space(&free(&[2, 2]), &free(&[1, 0])).dim(), 1);
        assert_eq!(hom_space(&free(&[1, 0]), &free(&[2, 2])).dim(), 0);
    }

    #[test]
    fn cokernel_dimensions() {
        let m =
            GradedMatrix::from_dense(Field::F2, &[vec![0, 1], vec![1, 0]], &[vec![2, 2]], &[vec![1], vec![1]]).unwrap();
        assert_eq!(cokernel_at(&m, &[2, 2]).dim, 1);
        assert_eq!(cokernel_at(&m, &[3, 3]).dim, 1);
        assert_eq!(cokernel_at(&m, &[1, 1]).dim, 2);
        assert_eq!(cokernel_at(&free(&[0, 0]), &[1, 1]).dim, 1);
    }

    #[test]
    fn identity_never_vanishes() {
        let m = free(&[0, 0]);
        let h = hom_space(&m, &m);
        let a = alpha_quotient(&h, &m, &m, &[1, 1]);
        assert_eq!(a.dim(), 1);
        let below = alpha_quotient(&h, &m, &m, &[-1, 0]);
        assert_eq!(below.dim(), 0);
        assert_eq!(below.vanishing.len(), 1);
    }
}
