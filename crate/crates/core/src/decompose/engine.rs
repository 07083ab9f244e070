//! Global state of a decomposition run: the blocks found so far, the accumulated
//! base changes and the per-batch working copy with its operation log.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::degree::Degree;
use crate::field::{Field, Scalar};
use crate::graded::GradedMatrix;
use crate::hom::{alpha_quotient, hom_space, HomBasis, HomElement, LowerReduction};
use crate::interval::{check_interval, IntervalShape};
use crate::linalg::DenseMatrix;
use crate::sparse::{self, SparseVec};

use super::{DecomposeError, Options, Stats, Strategy};

#[derive(Clone, Debug)]
pub(crate) struct Block {
    /// Global rows, sorted.
    pub rows: Vec<u32>,
    /// Global columns in the order of the local matrix.
    pub cols: Vec<u32>,
    pub mat: GradedMatrix,
    pub shape: Option<IntervalShape>,
}

/// A set of blocks together with the batch columns (by batch position) they own.
#[derive(Clone, Debug, Default)]
pub(crate) struct Group {
    pub blocks: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug)]
pub(crate) enum Op {
    /// `N[:, pos] <- N[:, pos] * t`
    Mix { pos: Vec<usize>, t: DenseMatrix },
    /// Rows of `dst` receive `h` applied to the rows of `src`.
    RowHom { src: usize, dst: usize, h: HomElement },
    /// `N[:, t] += M_block * u`
    FromBlock { block: usize, t: usize, u: SparseVec },
    /// `N[:, t] += c * N[:, s]`
    FromBatch { s: usize, t: usize, c: Scalar },
}

/// Working copy of one batch.
pub(crate) struct Ctx {
    pub alpha: Degree,
    /// Global column of every batch position.
    pub gcols: Vec<u32>,
    /// Per touched block, one column per batch position over local rows.
    pub n: HashMap<usize, Vec<SparseVec>>,
    pub log: Vec<Op>,
    lower: HashMap<usize, Rc<LowerReduction>>,
    reps: HashMap<(usize, usize), Rc<Vec<HomElement>>>,
}

pub(crate) struct Snapshot {
    n: HashMap<usize, Vec<SparseVec>>,
    log: usize,
}

impl Ctx {
    pub fn k(&self) -> usize {
        self.gcols.len()
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot { n: self.n.clone(), log: self.log.len() }
    }

    pub fn rollback(&mut self, s: Snapshot) {
        self.n = s.n;
        self.log.truncate(s.log);
    }

    pub fn nz(&self, b: usize, cols: &[usize]) -> bool {
        self.n.get(&b).is_some_and(|n| cols.iter().any(|&t| !n[t].is_empty()))
    }

    pub fn touched(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.n.keys().copied().collect();
        v.sort_unstable();
        v
    }
}

fn set_entry(v: &mut SparseVec, i: u32, x: Scalar) {
    match v.binary_search_by_key(&i, |e| e.0) {
        Ok(p) if x == 0 => {
            v.remove(p);
        }
        Ok(p) => v[p].1 = x,
        Err(p) if x != 0 => v.insert(p, (i, x)),
        Err(_) => {}
    }
}

pub(crate) struct Engine<'a> {
    pub f: Field,
    pub input: &'a GradedMatrix,
    pub opts: &'a Options,
    pub blocks: Vec<Option<Block>>,
    block_of: Vec<usize>,
    local: Vec<u32>,
    q_rows: Vec<SparseVec>,
    q_cols: Vec<SparseVec>,
    pub p_cols: Vec<SparseVec>,
    /// Current columns of processed relations, over global rows.
    cur: Vec<SparseVec>,
    homs: HashMap<(usize, usize), Rc<HomBasis>>,
    pub stats: Stats,
}

impl<'a> Engine<'a> {
    pub fn new(input: &'a GradedMatrix, opts: &'a Options) -> Self {
        let f = input.field();
        let m = input.num_rows();
        let d = input.dim();
        let blocks = (0..m)
            .map(|i| {
                let mat =
                    GradedMatrix::new(f, d, vec![input.row_degree(i).to_vec()], vec![]).expect("single generator");
                let shape = Some(IntervalShape::free(input.row_degree(i).to_vec()));
                Some(Block { rows: vec![i as u32], cols: vec![], mat, shape })
            })
            .collect();
        let unit = |i: usize| vec![(i as u32, 1)];
        Engine {
            f,
            input,
            opts,
            blocks,
            block_of: (0..m).collect(),
            local: vec![0; m],
            q_rows: (0..m).map(unit).collect(),
            q_cols: (0..m).map(unit).collect(),
            p_cols: (0..input.num_cols()).map(unit).collect(),
            cur: vec![Vec::new(); input.num_cols()],
            homs: HashMap::new(),
            stats: Stats::default(),
        }
    }

    pub fn block(&self, b: usize) -> &Block {
        self.blocks[b].as_ref().expect("live block")
    }

    pub fn nrows(&self, b: usize) -> usize {
        self.block(b).rows.len()
    }

    /// Loads the batch columns in the current basis.
    pub fn load(&mut self, alpha: &[i64], cols: &[usize]) -> Ctx {
        if !self.opts.keep_homs {
            self.homs.clear();
        }
        let k = cols.len();
        let mut n: HashMap<usize, Vec<SparseVec>> = HashMap::new();
        for (t, &j) in cols.iter().enumerate() {
            let mut acc: HashMap<u32, Scalar> = HashMap::new();
            for &(i, x) in self.input.column(j) {
                for &(r, y) in &self.q_cols[i as usize] {
                    let e = acc.entry(r).or_insert(0);
                    *e = self.f.add(*e, self.f.mul(x, y));
                }
            }
            for (r, x) in acc {
                if x == 0 {
                    continue;
                }
                let b = self.block_of[r as usize];
                let slot = n.entry(b).or_insert_with(|| vec![Vec::new(); k]);
                slot[t].push((self.local[r as usize], x));
            }
        }
        for cols in n.values_mut() {
            for c in cols.iter_mut() {
                c.sort_unstable_by_key(|e| e.0);
            }
        }
        Ctx {
            alpha: alpha.to_vec(),
            gcols: cols.iter().map(|&j| j as u32).collect(),
            n,
            log: Vec::new(),
            lower: HashMap::new(),
            reps: HashMap::new(),
        }
    }

    /// Whether the batch columns are linearly independent modulo the relations of
    /// smaller degree, which holds for every batch of a minimal presentation.
    pub fn batch_independent(&self, ctx: &mut Ctx) -> bool {
        let mut span = crate::sparse::Reducer::new(self.f);
        let blocks = ctx.touched();
        let mut flat: Vec<SparseVec> = vec![Vec::new(); ctx.k()];
        for b in blocks {
            let lr = self.lower(ctx, b);
            let rows = &self.block(b).rows;
            for (t, v) in ctx.n[&b].iter().enumerate() {
                flat[t].extend(lr.remainder(v).into_iter().map(|(r, x)| (rows[r as usize], x)));
            }
        }
        flat.into_iter().all(|mut v| {
            v.sort_unstable_by_key(|e| e.0);
            !span.push(&v).remainder.is_empty()
        })
    }

    pub fn lower(&self, ctx: &mut Ctx, b: usize) -> Rc<LowerReduction> {
        if let Some(l) = ctx.lower.get(&b) {
            return l.clone();
        }
        let l = Rc::new(LowerReduction::new(&self.block(b).mat, &ctx.alpha));
        ctx.lower.insert(b, l.clone());
        l
    }

    pub fn hom(&mut self, c: usize, b: usize) -> Rc<HomBasis> {
        if let Some(h) = self.homs.get(&(c, b)) {
            return h.clone();
        }
        self.stats.hom_computations += 1;
        let h = Rc::new(hom_space(&self.block(c).mat, &self.block(b).mat));
        self.homs.insert((c, b), h.clone());
        h
    }

    /// Morphisms from `c` to `b` whose classes span `Hom^alpha`.
    pub fn reps(&mut self, ctx: &mut Ctx, c: usize, b: usize) -> Rc<Vec<HomElement>> {
        if let Some(r) = ctx.reps.get(&(c, b)) {
            return r.clone();
        }
        let h = self.hom(c, b);
        let r = if h.elements.is_empty() {
            Vec::new()
        } else {
            alpha_quotient(&h, &self.block(c).mat, &self.block(b).mat, &ctx.alpha).representatives
        };
        let r = Rc::new(r);
        ctx.reps.insert((c, b), r.clone());
        r
    }

    /// Reduces the given batch columns of block `b` modulo its relations below alpha.
    pub fn reduce_block(&self, ctx: &mut Ctx, b: usize, cols: &[usize]) {
        if !ctx.n.contains_key(&b) {
            return;
        }
        let lr = self.lower(ctx, b);
        for &t in cols {
            let v = &ctx.n[&b][t];
            if v.is_empty() {
                continue;
            }
            let (rem, combo) = lr.reduce(v);
            if !combo.is_empty() {
                ctx.log.push(Op::FromBlock { block: b, t, u: combo });
            }
            ctx.n.get_mut(&b).unwrap()[t] = rem;
        }
    }

    pub fn apply_row_hom(&self, ctx: &mut Ctx, c: usize, b: usize, h: HomElement) {
        let k = ctx.k();
        let Some(src) = ctx.n.get(&c).cloned() else {
            ctx.log.push(Op::RowHom { src: c, dst: b, h });
            return;
        };
        let dst = ctx.n.entry(b).or_insert_with(|| vec![Vec::new(); k]);
        for t in 0..k {
            if !src[t].is_empty() {
                let img = h.apply(self.f, &src[t]);
                dst[t] = sparse::axpy(self.f, &dst[t], 1, &img);
            }
        }
        ctx.log.push(Op::RowHom { src: c, dst: b, h });
    }

    pub fn apply_from_batch(&self, ctx: &mut Ctx, s: usize, t: usize, c: Scalar) {
        if c == 0 {
            return;
        }
        for cols in ctx.n.values_mut() {
            if !cols[s].is_empty() {
                cols[t] = sparse::axpy(self.f, &cols[t], c, &cols[s]);
            }
        }
        ctx.log.push(Op::FromBatch { s, t, c });
    }

    pub fn apply_from_block(&self, ctx: &mut Ctx, b: usize, t: usize, u: SparseVec) {
        let m = &self.block(b).mat;
        let k = ctx.k();
        let cols = ctx.n.entry(b).or_insert_with(|| vec![Vec::new(); k]);
        for &(j, x) in &u {
            cols[t] = sparse::axpy(self.f, &cols[t], x, m.column(j as usize));
        }
        ctx.log.push(Op::FromBlock { block: b, t, u });
    }

    pub fn mix(&self, ctx: &mut Ctx, pos: &[usize], t: &DenseMatrix) {
        for cols in ctx.n.values_mut() {
            let old: Vec<SparseVec> = pos.iter().map(|&p| cols[p].clone()).collect();
            for (jn, &p) in pos.iter().enumerate() {
                let mut acc = SparseVec::new();
                for (jo, v) in old.iter().enumerate() {
                    let x = t.get(jo, jn);
                    if x != 0 && !v.is_empty() {
                        acc = sparse::axpy(self.f, &acc, x, v);
                    }
                }
                cols[p] = acc;
            }
        }
        ctx.log.push(Op::Mix { pos: pos.to_vec(), t: t.clone() });
    }

    fn row_op(&mut self, global_t: u32, delta: &[(u32, Scalar)]) {
        let t = global_t as usize;
        let new = sparse::axpy(self.f, &self.q_rows[t], 1, delta);
        for &(i, _) in delta {
            set_entry(&mut self.q_cols[i as usize], global_t, sparse::get(&new, i));
        }
        self.q_rows[t] = new;
    }

    fn replay(&mut self, ctx: &Ctx) {
        let f = self.f;
        for op in &ctx.log {
            match op {
                Op::Mix { pos, t } => {
                    let old: Vec<SparseVec> = pos.iter().map(|&p| self.p_cols[ctx.gcols[p] as usize].clone()).collect();
                    for (jn, &p) in pos.iter().enumerate() {
                        let mut acc = SparseVec::new();
                        for (jo, v) in old.iter().enumerate() {
                            let x = t.get(jo, jn);
                            if x != 0 {
                                acc = sparse::axpy(f, &acc, x, v);
                            }
                        }
                        self.p_cols[ctx.gcols[p] as usize] = acc;
                    }
                }
                Op::RowHom { src, dst, h } => {
                    let (src_rows, src_cols) = {
                        let b = self.block(*src);
                        (b.rows.clone(), b.cols.clone())
                    };
                    let (dst_rows, dst_cols) = {
                        let b = self.block(*dst);
                        (b.rows.clone(), b.cols.clone())
                    };
                    let mut delta: Vec<SparseVec> = vec![Vec::new(); dst_rows.len()];
                    for (i, img) in h.q.iter().enumerate() {
                        let src_row = &self.q_rows[src_rows[i] as usize];
                        for &(r, x) in img {
                            delta[r as usize] = sparse::axpy(f, &delta[r as usize], x, src_row);
                        }
                    }
                    for (r, dl) in delta.into_iter().enumerate() {
                        if !dl.is_empty() {
                            self.row_op(dst_rows[r], &dl);
                        }
                    }
                    for (j, pj) in h.p.iter().enumerate() {
                        let target = src_cols[j] as usize;
                        let mut acc = self.p_cols[target].clone();
                        for &(jb, x) in pj {
                            acc = sparse::axpy(f, &acc, f.neg(x), &self.p_cols[dst_cols[jb as usize] as usize]);
                        }
                        self.p_cols[target] = acc;
                    }
                }
                Op::FromBlock { block, t, u } => {
                    let cols = self.block(*block).cols.clone();
                    let target = ctx.gcols[*t] as usize;
                    let mut acc = self.p_cols[target].clone();
                    for &(j, x) in u {
                        acc = sparse::axpy(f, &acc, x, &self.p_cols[cols[j as usize] as usize]);
                    }
                    self.p_cols[target] = acc;
                }
                Op::FromBatch { s, t, c } => {
                    let src = self.p_cols[ctx.gcols[*s] as usize].clone();
                    let target = ctx.gcols[*t] as usize;
                    self.p_cols[target] = sparse::axpy(f, &self.p_cols[target], *c, &src);
                }
            }
        }
    }

    /// Applies the logged operations to the global state and replaces the blocks of
    /// every group that owns columns by their union.
    pub fn commit(&mut self, ctx: Ctx, groups: &[Group]) -> Result<(), DecomposeError> {
        self.replay(&ctx);
        let d = self.input.dim();
        let mut owned = vec![false; ctx.k()];
        for g in groups.iter().filter(|g| !g.cols.is_empty()) {
            let mut rows: Vec<u32> = g.blocks.iter().flat_map(|&b| self.block(b).rows.iter().copied()).collect();
            rows.sort_unstable();
            let pos: HashMap<u32, u32> = rows.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect();
            let member: BTreeSet<usize> = g.blocks.iter().copied().collect();
            let mut gcols = Vec::new();
            let mut local_cols = Vec::new();
            for &b in &g.blocks {
                let blk = self.block(b);
                for &j in &blk.cols {
                    let mut v: SparseVec = self.cur[j as usize].iter().map(|&(r, x)| (pos[&r], x)).collect();
                    v.sort_unstable_by_key(|e| e.0);
                    gcols.push(j);
                    local_cols.push(v);
                }
            }
            for &t in &g.cols {
                owned[t] = true;
                let mut global = SparseVec::new();
                for (&b, cols) in &ctx.n {
                    if cols[t].is_empty() {
                        continue;
                    }
                    if !member.contains(&b) {
                        return Err(DecomposeError::Internal(format!(
                            "column {} leaks outside its summand",
                            ctx.gcols[t]
                        )));
                    }
                    let rows_b = &self.block(b).rows;
                    global.extend(cols[t].iter().map(|&(r, x)| (rows_b[r as usize], x)));
                }
                global.sort_unstable_by_key(|e| e.0);
                let j = ctx.gcols[t];
                let v: SparseVec = global.iter().map(|&(r, x)| (pos[&r], x)).collect();
                self.cur[j as usize] = global;
                gcols.push(j);
                local_cols.push(v);
            }
            let row_deg: Vec<i64> = rows.iter().flat_map(|&r| self.input.row_degree(r as usize).to_vec()).collect();
            let col_deg: Vec<i64> = gcols.iter().flat_map(|&j| self.input.col_degree(j as usize).to_vec()).collect();
            let mat = GradedMatrix::from_raw(self.f, d, row_deg, col_deg, local_cols);
            debug_assert!(mat.check().is_ok());
            let shape = if self.opts.strategy == Strategy::IntervalAuto { check_interval(&mat) } else { None };
            for &b in &g.blocks {
                self.blocks[b] = None;
            }
            let id = self.blocks.len();
            for (i, &r) in rows.iter().enumerate() {
                self.block_of[r as usize] = id;
                self.local[r as usize] = i as u32;
            }
            self.blocks.push(Some(Block { rows, cols: gcols, mat, shape }));
            self.stats.merges += g.blocks.len().saturating_sub(1);
        }
        if owned.iter().any(|o| !o) {
            return Err(DecomposeError::NotMinimal);
        }
        let blocks = &self.blocks;
        self.homs.retain(|&(c, b), _| blocks[c].is_some() && blocks[b].is_some());
        Ok(())
    }

    /// Live blocks in order of their smallest row.
    pub fn live_blocks(&self) -> Vec<&Block> {
        let mut v: Vec<&Block> = self.blocks.iter().flatten().collect();
        v.sort_by_key(|b| b.rows[0]);
        v
    }

    /// `Q` as columns over global rows.
    pub fn q_columns(&self) -> &[SparseVec] {
        &self.q_cols
    }
}
