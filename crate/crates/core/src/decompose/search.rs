//! Splitting a batch: per-block clearing, the exhaustive search over decompositions
//! of the batch space and the strategy guided by the Hom digraph.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::field::Scalar;
use crate::hom::HomElement;
use crate::linalg::{column_echelon, DenseMatrix};
use crate::sparse::{self, Reducer, SparseVec};
use crate::subspace::generate_dec;

use super::engine::{Ctx, Engine, Group};
use super::{DecomposeError, Strategy};

/// Where a candidate vector of a linear clearing system comes from.
enum Source {
    Hom { src: usize, dst: usize, h: usize },
    Block { block: usize, t: usize, j: u32 },
    Batch { s: usize, t: usize },
}

/// Accumulates candidate vectors and solves `target + sum x_i v_i = 0`.
struct System {
    sources: Vec<Source>,
    reducer: Reducer,
}

impl System {
    fn new(e: &Engine) -> Self {
        System { sources: Vec::new(), reducer: Reducer::new(e.f) }
    }

    fn push(&mut self, s: Source, v: &[(u32, Scalar)]) {
        if !v.is_empty() {
            self.reducer.push(v);
            self.sources.push(s);
        }
    }

    fn solve(&self, target: &[(u32, Scalar)]) -> Option<SparseVec> {
        let red = self.reducer.reduce(target);
        red.remainder.is_empty().then_some(red.combo)
    }
}

fn concat(parts: impl IntoIterator<Item = (u32, SparseVec)>) -> SparseVec {
    let mut out = SparseVec::new();
    for (off, v) in parts {
        out.extend(v.into_iter().map(|(i, x)| (off + i, x)));
    }
    out.sort_unstable_by_key(|e| e.0);
    out
}

impl Engine<'_> {
    /// Applies a solution of a [`System`].
    fn apply_solution(
        &mut self,
        ctx: &mut Ctx,
        sys: &System,
        x: &[(u32, Scalar)],
        reps: &HashMap<(usize, usize), std::rc::Rc<Vec<HomElement>>>,
    ) {
        let mut combined: BTreeMap<(usize, usize), HomElement> = BTreeMap::new();
        let mut block_ops: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for &(i, c) in x {
            match sys.sources[i as usize] {
                Source::Hom { src, dst, h } => {
                    let e = &reps[&(src, dst)][h];
                    match combined.get_mut(&(src, dst)) {
                        Some(acc) => *acc = acc.scaled_add(self.f, c, e),
                        None => {
                            combined.insert((src, dst), e.scale(self.f, c));
                        }
                    }
                }
                Source::Block { block, t, j } => {
                    let u = block_ops.entry((block, t)).or_default();
                    *u = sparse::axpy(self.f, u, c, &[(j, 1)]);
                }
                Source::Batch { s, t } => self.apply_from_batch(ctx, s, t, c),
            }
        }
        for ((src, dst), h) in combined {
            if !h.is_zero() {
                self.apply_row_hom(ctx, src, dst, h);
            }
        }
        for ((block, t), u) in block_ops {
            if !u.is_empty() {
                self.apply_from_block(ctx, block, t, u);
            }
        }
    }

    fn flat(&self, ctx: &Ctx, b: usize, cols: &[usize]) -> SparseVec {
        let nb = self.nrows(b) as u32;
        match ctx.n.get(&b) {
            None => Vec::new(),
            Some(n) => concat(cols.iter().enumerate().map(|(ti, &t)| (ti as u32 * nb, n[t].clone()))),
        }
    }

    /// Tries to make the given batch columns of `b` vanish using morphisms from
    /// `sources` and relations of `b`.
    pub(crate) fn try_clear(&mut self, ctx: &mut Ctx, b: usize, sources: &[usize], cols: &[usize]) -> bool {
        let sweep = self.opts.sweep;
        if sweep {
            self.reduce_block(ctx, b, cols);
        }
        if !ctx.nz(b, cols) {
            return true;
        }
        let nb = self.nrows(b) as u32;
        let lr = self.lower(ctx, b);
        let mut sys = System::new(self);
        let mut reps = HashMap::new();
        for &c in sources {
            if c == b || !ctx.nz(c, cols) {
                continue;
            }
            let r = self.reps(ctx, c, b);
            for (hi, h) in r.iter().enumerate() {
                let v = concat(cols.iter().enumerate().map(|(ti, &t)| {
                    let img = h.apply(self.f, &ctx.n[&c][t]);
                    (ti as u32 * nb, if sweep { lr.remainder(&img) } else { img })
                }));
                sys.push(Source::Hom { src: c, dst: b, h: hi }, &v);
            }
            reps.insert((c, b), r);
        }
        if !sweep {
            let m = &self.block(b).mat;
            let lower_cols: Vec<u32> = (0..m.num_cols() as u32)
                .filter(|&j| crate::degree::leq(m.col_degree(j as usize), &ctx.alpha))
                .collect();
            for (ti, &t) in cols.iter().enumerate() {
                for &j in &lower_cols {
                    let v: SparseVec = m.column(j as usize).iter().map(|&(i, x)| (ti as u32 * nb + i, x)).collect();
                    sys.push(Source::Block { block: b, t, j }, &v);
                }
            }
        }
        let target = self.flat(ctx, b, cols);
        let Some(x) = sys.solve(&target) else {
            return false;
        };
        self.apply_solution(ctx, &sys, &x, &reps);
        self.reduce_block(ctx, b, cols);
        debug_assert!(!ctx.nz(b, cols));
        true
    }

    /// Clears every block that can be cleared on its own; returns (released, remaining).
    fn gp_step(&mut self, ctx: &mut Ctx, blocks: &[usize], cols: &[usize]) -> (Vec<usize>, Vec<usize>) {
        if self.opts.sweep {
            for &b in blocks {
                self.reduce_block(ctx, b, cols);
            }
        }
        let mut released = Vec::new();
        let mut remaining = Vec::new();
        for &b in blocks {
            if !ctx.nz(b, cols) {
                released.push(b);
                continue;
            }
            let sources: Vec<usize> = blocks.iter().copied().filter(|&c| c != b && ctx.nz(c, cols)).collect();
            if self.try_clear(ctx, b, &sources, cols) {
                released.push(b);
            } else {
                remaining.push(b);
            }
        }
        (released, remaining)
    }

    fn singletons(blocks: &[usize]) -> Vec<Group> {
        blocks.iter().map(|&b| Group { blocks: vec![b], cols: vec![] }).collect()
    }

    /// Indecomposable splitting of the blocks and columns by search over all
    /// decompositions of the column space.
    pub(crate) fn exhaustive(
        &mut self,
        ctx: &mut Ctx,
        blocks: &[usize],
        cols: &[usize],
    ) -> Result<Vec<Group>, DecomposeError> {
        if cols.is_empty() {
            return Ok(Self::singletons(blocks));
        }
        let (released, remaining) = self.gp_step(ctx, blocks, cols);
        let mut out = Self::singletons(&released);
        if remaining.is_empty() {
            return Err(DecomposeError::NotMinimal);
        }
        if cols.len() == 1 || remaining.len() == 1 {
            out.push(Group { blocks: remaining, cols: cols.to_vec() });
            return Ok(out);
        }
        let k = cols.len();
        for pair in generate_dec(k, self.f) {
            self.stats.subspace_iterations += 1;
            let snap = ctx.snapshot();
            self.mix(ctx, cols, &pair.combined());
            let l = pair.l();
            let (c1, c2) = cols.split_at(l);
            for &b in &remaining {
                self.reduce_block(ctx, b, cols);
            }
            for &b in &remaining {
                if ctx.nz(b, c1) {
                    let sources: Vec<usize> = remaining.iter().copied().filter(|&c| c != b).collect();
                    self.try_clear(ctx, b, &sources, c1);
                }
            }
            let (b1, b2): (Vec<usize>, Vec<usize>) = remaining.iter().partition(|&&b| ctx.nz(b, c1));
            if b1.is_empty() || b2.is_empty() || !self.joint_clear(ctx, &b1, &b2, c1, c2) {
                ctx.rollback(snap);
                continue;
            }
            let (b2n, b2z): (Vec<usize>, Vec<usize>) = b2.iter().partition(|&&b| ctx.nz(b, c2));
            if b2n.is_empty() {
                return Err(DecomposeError::NotMinimal);
            }
            out.extend(Self::singletons(&b2z));
            out.extend(self.exhaustive(ctx, &b1, c1)?);
            out.extend(self.exhaustive(ctx, &b2n, c2)?);
            return Ok(out);
        }
        out.push(Group { blocks: remaining, cols: cols.to_vec() });
        Ok(out)
    }

    /// Clears `c2` on the blocks `b1` using morphisms from `b2`, additions of `c1`
    /// columns into `c2` columns and relations of `b1`.
    fn joint_clear(&mut self, ctx: &mut Ctx, b1: &[usize], b2: &[usize], c1: &[usize], c2: &[usize]) -> bool {
        for &b in b1.iter().chain(b2) {
            self.reduce_block(ctx, b, c2);
        }
        if b1.iter().all(|&b| !ctx.nz(b, c2)) {
            return true;
        }
        let mut off = HashMap::new();
        let mut total = 0u32;
        for &b in b1 {
            off.insert(b, total);
            total += (self.nrows(b) * c2.len()) as u32;
        }
        let mut sys = System::new(self);
        let mut reps = HashMap::new();
        for &c in b2 {
            if !ctx.nz(c, c2) {
                continue;
            }
            for &b in b1 {
                let r = self.reps(ctx, c, b);
                if r.is_empty() {
                    continue;
                }
                let lr = self.lower(ctx, b);
                let nb = self.nrows(b) as u32;
                for (hi, h) in r.iter().enumerate() {
                    let v = concat(
                        c2.iter()
                            .enumerate()
                            .map(|(ti, &t)| (off[&b] + ti as u32 * nb, lr.remainder(&h.apply(self.f, &ctx.n[&c][t])))),
                    );
                    sys.push(Source::Hom { src: c, dst: b, h: hi }, &v);
                }
                reps.insert((c, b), r);
            }
        }
        let lowers: HashMap<usize, _> = b1.iter().map(|&b| (b, self.lower(ctx, b))).collect();
        for &s in c1 {
            for (ti, &t) in c2.iter().enumerate() {
                let v = concat(b1.iter().filter_map(|&b| {
                    let nb = self.nrows(b) as u32;
                    ctx.n.get(&b).map(|n| (off[&b] + ti as u32 * nb, lowers[&b].remainder(&n[s])))
                }));
                sys.push(Source::Batch { s, t }, &v);
            }
        }
        let target = concat(b1.iter().map(|&b| (off[&b], self.flat(ctx, b, c2))));
        let Some(x) = sys.solve(&target) else {
            return false;
        };
        self.apply_solution(ctx, &sys, &x, &reps);
        for &b in b1 {
            self.reduce_block(ctx, b, c2);
        }
        debug_assert!(b1.iter().all(|&b| !ctx.nz(b, c2)));
        true
    }

    /// Splitting guided by the digraph of nonzero morphisms at the batch degree:
    /// strongly connected components are split one at a time in topological order,
    /// and links to earlier summands are removed by linear algebra when possible.
    pub(crate) fn guided(
        &mut self,
        ctx: &mut Ctx,
        blocks: &[usize],
        cols: &[usize],
    ) -> Result<Vec<Group>, DecomposeError> {
        let (released, remaining) = self.gp_step(ctx, blocks, cols);
        if remaining.is_empty() {
            return Err(DecomposeError::NotMinimal);
        }
        let mut out = Self::singletons(&released);
        if cols.len() == 1 || remaining.len() == 1 {
            out.push(Group { blocks: remaining, cols: cols.to_vec() });
            return Ok(out);
        }
        let order = self.component_order(ctx, &remaining);
        let mut processed: Vec<Group> = Vec::new();
        let mut unowned: Vec<usize> = cols.to_vec();
        for comp in order {
            for &b in &comp {
                self.reduce_block(ctx, b, &unowned);
            }
            let private = self.split_private(ctx, &comp, &mut unowned);
            let fresh = if self.opts.strategy == Strategy::IntervalAuto && comp.len() > 1 {
                match self.interval_component(ctx, &comp, &private) {
                    Some(g) => g,
                    None => self.exhaustive(ctx, &comp, &private)?,
                }
            } else {
                self.exhaustive(ctx, &comp, &private)?
            };
            processed = self.resolve_links(ctx, processed, fresh)?;
        }
        if !unowned.is_empty() {
            return Err(DecomposeError::NotMinimal);
        }
        out.extend(processed);
        Ok(out)
    }

    /// Strongly connected components of the morphism digraph on `blocks`, in a
    /// topological order with sources first.
    fn component_order(&mut self, ctx: &mut Ctx, blocks: &[usize]) -> Vec<Vec<usize>> {
        let mut g = DiGraph::<usize, ()>::new();
        let nodes: Vec<_> = blocks.iter().map(|&b| g.add_node(b)).collect();
        for (i, &c) in blocks.iter().enumerate() {
            for (j, &b) in blocks.iter().enumerate() {
                if i == j {
                    continue;
                }
                let edge =
                    if self.opts.full_hom_graph { self.hom(c, b).dim() > 0 } else { !self.reps(ctx, c, b).is_empty() };
                if edge {
                    g.add_edge(nodes[i], nodes[j], ());
                }
            }
        }
        let sccs = tarjan_scc(&g);
        let mut comp_of = vec![0usize; blocks.len()];
        let mut comps: Vec<Vec<usize>> = Vec::with_capacity(sccs.len());
        for (ci, scc) in sccs.iter().enumerate() {
            let mut v: Vec<usize> = scc.iter().map(|&n| g[n]).collect();
            v.sort_unstable();
            for &n in scc {
                comp_of[n.index()] = ci;
            }
            comps.push(v);
        }
        let mut indeg = vec![0usize; comps.len()];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
        for e in g.edge_indices() {
            let (a, b) = g.edge_endpoints(e).unwrap();
            let (ca, cb) = (comp_of[a.index()], comp_of[b.index()]);
            if ca != cb && !succ[ca].contains(&cb) {
                succ[ca].push(cb);
                indeg[cb] += 1;
            }
        }
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
            (0..comps.len()).filter(|&c| indeg[c] == 0).map(|c| Reverse((comps[c][0], c))).collect();
        let mut order = Vec::with_capacity(comps.len());
        while let Some(Reverse((_, c))) = heap.pop() {
            for &s in &succ[c] {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    heap.push(Reverse((comps[s][0], s)));
                }
            }
            order.push(std::mem::take(&mut comps[c]));
        }
        order
    }

    /// Changes basis among the unowned columns so that the first few are
    /// independent on `comp` and the rest vanish there. Returns the former.
    fn split_private(&mut self, ctx: &mut Ctx, comp: &[usize], unowned: &mut Vec<usize>) -> Vec<usize> {
        if unowned.is_empty() {
            return Vec::new();
        }
        let sizes: Vec<usize> = comp.iter().map(|&b| self.nrows(b)).collect();
        let total: usize = sizes.iter().sum();
        let mut a = DenseMatrix::zeros(self.f, total, unowned.len());
        let mut off = 0;
        for (&b, &nb) in comp.iter().zip(&sizes) {
            if let Some(n) = ctx.n.get(&b) {
                for (jj, &t) in unowned.iter().enumerate() {
                    for &(r, x) in &n[t] {
                        a.set(off + r as usize, jj, x);
                    }
                }
            }
            off += nb;
        }
        let ce = column_echelon(&a);
        let r = ce.rank();
        if r == 0 {
            return Vec::new();
        }
        let cols = unowned.clone();
        self.mix(ctx, &cols, &ce.transform);
        let private = unowned[..r].to_vec();
        unowned.drain(..r);
        private
    }

    /// Splits a component of isomorphic intervals by elimination on the one
    /// dimensional fibres at the batch degree.
    fn interval_component(&mut self, ctx: &mut Ctx, comp: &[usize], private: &[usize]) -> Option<Vec<Group>> {
        let mut free_row = HashMap::new();
        for &b in comp {
            let shape = self.block(b).shape.as_ref()?;
            if !shape.contains(&ctx.alpha) {
                return None;
            }
            let lr = self.lower(ctx, b);
            let free = lr.free_rows(&self.block(b).mat);
            if free.len() != 1 {
                return None;
            }
            free_row.insert(b, free[0]);
        }
        // scalar by which the chosen morphism c -> b acts on the fibres
        let mut iso: HashMap<(usize, usize), (HomElement, Scalar)> = HashMap::new();
        for &c in comp {
            for &b in comp {
                if c == b {
                    continue;
                }
                let r = self.reps(ctx, c, b);
                if r.len() != 1 {
                    return None;
                }
                let lr = self.lower(ctx, b);
                let img = lr.remainder(&r[0].q[free_row[&c] as usize]);
                let s = sparse::get(&img, free_row[&b]);
                if s == 0 {
                    return None;
                }
                iso.insert((c, b), (r[0].clone(), s));
            }
        }
        let f = self.f;
        let entry =
            |ctx: &Ctx, b: usize, t: usize| -> Scalar { ctx.n.get(&b).map_or(0, |n| sparse::get(&n[t], free_row[&b])) };
        let mut used: Vec<usize> = Vec::new();
        let mut groups = Vec::new();
        for &t in private {
            let &p = comp.iter().find(|&&b| !used.contains(&b) && entry(ctx, b, t) != 0)?;
            let apt = entry(ctx, p, t);
            for &b in comp {
                let x = entry(ctx, b, t);
                if b == p || x == 0 {
                    continue;
                }
                let (h, s) = &iso[&(p, b)];
                let y = f.neg(f.div(x, f.mul(apt, *s)));
                let e = h.scale(f, y);
                self.apply_row_hom(ctx, p, b, e);
                self.reduce_block(ctx, b, private);
            }
            for &t2 in private {
                let x = entry(ctx, p, t2);
                if t2 != t && x != 0 {
                    self.apply_from_batch(ctx, t, t2, f.neg(f.div(x, apt)));
                }
            }
            self.reduce_block(ctx, p, private);
            used.push(p);
            groups.push(Group { blocks: vec![p], cols: vec![t] });
        }
        for &b in comp {
            if !used.contains(&b) {
                if ctx.nz(b, private) {
                    return None;
                }
                groups.push(Group { blocks: vec![b], cols: vec![] });
            }
        }
        Some(groups)
    }

    /// Removes the entries of earlier groups' columns on the rows of newly found
    /// groups where possible; groups that stay linked are merged and split again.
    fn resolve_links(
        &mut self,
        ctx: &mut Ctx,
        processed: Vec<Group>,
        fresh: Vec<Group>,
    ) -> Result<Vec<Group>, DecomposeError> {
        let np = processed.len();
        let mut all = processed;
        all.extend(fresh);
        let mut parent: Vec<usize> = (0..all.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for hi in np..all.len() {
            for di in 0..np {
                if all[di].cols.is_empty() || !all[hi].blocks.iter().any(|&b| ctx.nz(b, &all[di].cols)) {
                    continue;
                }
                let (h, d) = (all[hi].clone(), all[di].clone());
                if !self.joint_clear(ctx, &h.blocks, &d.blocks, &h.cols, &d.cols) {
                    let (a, b) = (find(&mut parent, hi), find(&mut parent, di));
                    parent[a] = b;
                }
            }
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..all.len() {
            let r = find(&mut parent, i);
            classes.entry(r).or_default().push(i);
        }
        let mut out = Vec::new();
        for members in classes.into_values() {
            if members.len() == 1 {
                out.push(all[members[0]].clone());
                continue;
            }
            let kappa: usize = members.iter().filter(|&&i| i < np).map(|&i| all[i].cols.len()).sum();
            self.stats.max_cocycle = self.stats.max_cocycle.max(kappa);
            let mut blocks: Vec<usize> = members.iter().flat_map(|&i| all[i].blocks.clone()).collect();
            let mut cols: Vec<usize> = members.iter().flat_map(|&i| all[i].cols.clone()).collect();
            blocks.sort_unstable();
            cols.sort_unstable();
            out.extend(self.exhaustive(ctx, &blocks, &cols)?);
        }
        Ok(out)
    }
}
