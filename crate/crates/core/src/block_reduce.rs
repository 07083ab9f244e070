//! Clearing the rows of one block in a batch of relations, solved as one dense
//! linear system.
//!
//! The presentation is `[M_1 ⊕ ... ⊕ M_r | N]` with every column of `N` at degree
//! `alpha` and every relation of the blocks at or below it. The part `N_b` of `N`
//! in the rows of block `b` is zeroed by
//!
//! * adding `Q N_c` for a module map `(Q, P): coker M_c -> coker M_b`, where the
//!   row operation `Q` is paired with the column operation `-P` so that the blocks
//!   stay untouched, and
//! * adding `M_b U` for relations of `b` at or below `alpha`.
//!
//! The coefficients of the maps are shared by all columns of `N`, while `U` is
//! chosen per column. The decomposition engine solves the same problem sparsely
//! and incrementally; this module is the direct formulation.

use crate::degree::{self, Degree};
use crate::field::Field;
use crate::graded::GradedMatrix;
use crate::hom::{alpha_quotient, hom_space, HomElement};
use crate::linalg::{solve, DenseMatrix};
use crate::sparse::{self, SparseVec};

/// Which maps `c -> b` the system may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomChoice {
    /// A basis of all module maps.
    Full,
    /// Representatives of the maps that are nonzero at `alpha`.
    AtAlpha,
}

/// A block-diagonal presentation with a batch of columns at one degree.
/// `batch[b][t]` is column `t` of `N` restricted to the rows of block `b`, in the
/// block's local row indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchState {
    pub alpha: Degree,
    pub blocks: Vec<GradedMatrix>,
    pub batch: Vec<Vec<SparseVec>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCertificate {
    pub target: usize,
    /// Maps `source -> target` whose row operations are applied.
    pub maps: Vec<(usize, HomElement)>,
    /// Per batch column, the combination of target relations added to it.
    pub u: Vec<SparseVec>,
}

impl BatchState {
    pub fn k(&self) -> usize {
        self.batch.first().map_or(0, Vec::len)
    }

    pub fn field(&self) -> Field {
        self.blocks[0].field()
    }

    fn maps_into(&self, target: usize, choice: HomChoice) -> Vec<(usize, HomElement)> {
        let mb = &self.blocks[target];
        let mut out = Vec::new();
        for (c, mc) in self.blocks.iter().enumerate() {
            if c == target {
                continue;
            }
            let h = hom_space(mc, mb);
            let elems = match choice {
                HomChoice::Full => h.elements,
                HomChoice::AtAlpha => alpha_quotient(&h, mc, mb, &self.alpha).representatives,
            };
            out.extend(elems.into_iter().map(|e| (c, e)));
        }
        out
    }
}

/// Looks for operations that zero `N_target` without changing any block.
pub fn block_reduce(state: &BatchState, target: usize, choice: HomChoice) -> Option<ReductionCertificate> {
    let f = state.field();
    let k = state.k();
    let mb = &state.blocks[target];
    let g = mb.num_rows();
    let maps = state.maps_into(target, choice);
    let lower: Vec<usize> = (0..mb.num_cols()).filter(|&j| degree::leq(mb.col_degree(j), &state.alpha)).collect();

    let unknowns = maps.len() + lower.len() * k;
    let mut a = DenseMatrix::zeros(f, g * k, unknowns);
    for (x, (c, e)) in maps.iter().enumerate() {
        for t in 0..k {
            for (r, v) in e.apply(f, &state.batch[*c][t]) {
                a.set(t * g + r as usize, x, v);
            }
        }
    }
    for t in 0..k {
        for (y, &j) in lower.iter().enumerate() {
            for &(r, v) in mb.column(j) {
                a.set(t * g + r as usize, maps.len() + t * lower.len() + y, v);
            }
        }
    }
    let mut rhs = vec![0; g * k];
    for t in 0..k {
        for &(r, v) in &state.batch[target][t] {
            rhs[t * g + r as usize] = f.neg(v);
        }
    }
    let x = solve(&a, &rhs).expect("system dimensions agree")?;

    let mut combined: Vec<(usize, HomElement)> = Vec::new();
    for ((c, e), &coef) in maps.iter().zip(&x) {
        if coef == 0 {
            continue;
        }
        match combined.iter_mut().find(|(s, _)| s == c) {
            Some((_, acc)) => *acc = acc.scaled_add(f, coef, e),
            None => combined.push((*c, e.scale(f, coef))),
        }
    }
    combined.retain(|(_, e)| !e.is_zero());
    let u = (0..k)
        .map(|t| {
            let coefs = &x[maps.len() + t * lower.len()..maps.len() + (t + 1) * lower.len()];
            sparse::collect(f, lower.iter().zip(coefs).map(|(&j, &v)| (j as u32, v)))
        })
        .collect();
    Some(ReductionCertificate { target, maps: combined, u })
}

/// Applies a certificate as row and column operations on the assembled matrix
/// `[M | N]` and splits the result back into blocks and batch parts. Fails if the
/// result is no longer block diagonal.
pub fn apply_certificate(state: &BatchState, cert: &ReductionCertificate) -> Option<BatchState> {
    let f = state.field();
    let offsets: Vec<u32> = state
        .blocks
        .iter()
        .scan(0u32, |acc, m| {
            let o = *acc;
            *acc += m.num_rows() as u32;
            Some(o)
        })
        .collect();
    let lift = |b: usize, v: &SparseVec| -> SparseVec { v.iter().map(|&(r, x)| (r + offsets[b], x)).collect() };
    let mut m_cols: Vec<Vec<SparseVec>> =
        state.blocks.iter().enumerate().map(|(b, m)| m.columns().iter().map(|c| lift(b, c)).collect()).collect();
    let k = state.k();
    let mut n_cols: Vec<SparseVec> = (0..k)
        .map(|t| {
            let mut v: SparseVec = (0..state.blocks.len()).flat_map(|b| lift(b, &state.batch[b][t])).collect();
            v.sort_unstable_by_key(|e| e.0);
            v
        })
        .collect();

    let b = cert.target;
    let b_off = offsets[b];
    let row_op = |v: &SparseVec, c: usize, e: &HomElement| -> SparseVec {
        let lo = offsets[c];
        let hi = lo + state.blocks[c].num_rows() as u32;
        let part: SparseVec = v.iter().filter(|e| e.0 >= lo && e.0 < hi).map(|&(r, x)| (r - lo, x)).collect();
        let img: SparseVec = e.apply(f, &part).into_iter().map(|(r, x)| (r + b_off, x)).collect();
        sparse::axpy(f, v, 1, &img)
    };
    for (c, e) in &cert.maps {
        for blk in m_cols.iter_mut() {
            for col in blk.iter_mut() {
                *col = row_op(col, *c, e);
            }
        }
        for col in n_cols.iter_mut() {
            *col = row_op(col, *c, e);
        }
        for (j, pj) in e.p.iter().enumerate() {
            for &(s, v) in pj {
                let src = m_cols[b][s as usize].clone();
                m_cols[*c][j] = sparse::axpy(f, &m_cols[*c][j], f.neg(v), &src);
            }
        }
    }
    for (t, ut) in cert.u.iter().enumerate() {
        for &(j, v) in ut {
            let src = m_cols[b][j as usize].clone();
            n_cols[t] = sparse::axpy(f, &n_cols[t], v, &src);
        }
    }

    let local = |blk: usize, v: &SparseVec| -> Option<SparseVec> {
        let lo = offsets[blk];
        let hi = lo + state.blocks[blk].num_rows() as u32;
        v.iter().all(|e| e.0 >= lo && e.0 < hi).then(|| v.iter().map(|&(r, x)| (r - lo, x)).collect())
    };
    let mut blocks = Vec::with_capacity(state.blocks.len());
    for (blk, m) in state.blocks.iter().enumerate() {
        let cols = m_cols[blk]
            .iter()
            .enumerate()
            .map(|(j, v)| Some((m.col_degree(j).to_vec(), local(blk, v)?)))
            .collect::<Option<Vec<_>>>()?;
        blocks.push(GradedMatrix::new(f, m.dim(), m.row_degrees(), cols).ok()?);
    }
    let batch = (0..state.blocks.len())
        .map(|blk| {
            let lo = offsets[blk];
            let hi = lo + state.blocks[blk].num_rows() as u32;
            n_cols
                .iter()
                .map(|v| v.iter().filter(|e| e.0 >= lo && e.0 < hi).map(|&(r, x)| (r - lo, x)).collect())
                .collect()
        })
        .collect();
    Some(BatchState { alpha: state.alpha.clone(), blocks, batch })
}
