//! Interval modules: detection, support shapes and the combinatorial test for a
//! morphism that is nonzero at a degree.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::degree::{self, Degree};
use crate::field::Field;
use crate::graded::GradedMatrix;
use crate::hom::LowerReduction;
use crate::sparse::SparseVec;

/// Grid points examined by [`check_interval`] before giving up.
pub const GRID_LIMIT: usize = 4096;

/// Support of an interval: the up-closure of `lower` minus the up-closure of `upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalShape {
    pub lower: Vec<Degree>,
    pub upper: Vec<Degree>,
}

impl IntervalShape {
    pub fn contains(&self, x: &[i64]) -> bool {
        self.lower.iter().any(|l| degree::leq(l, x)) && !self.upper.iter().any(|u| degree::leq(u, x))
    }

    pub fn free(g: Degree) -> Self {
        IntervalShape { lower: vec![g], upper: Vec::new() }
    }

    fn coordinates(&self, d: usize) -> Vec<BTreeSet<i64>> {
        let mut axes = vec![BTreeSet::new(); d];
        for p in self.lower.iter().chain(&self.upper) {
            for (a, &x) in axes.iter_mut().zip(p) {
                a.insert(x);
            }
        }
        axes
    }
}

/// All points of the product grid over the given axis values.
fn grid_points(axes: &[Vec<i64>]) -> Vec<Degree> {
    let mut pts: Vec<Degree> = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(pts.len() * axis.len());
        for p in &pts {
            for &x in axis {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        pts = next;
    }
    pts
}

fn axes_of(m: &GradedMatrix) -> Vec<Vec<i64>> {
    let d = m.dim();
    let mut axes = vec![BTreeSet::new(); d];
    for i in 0..m.num_rows() {
        for (a, &x) in axes.iter_mut().zip(m.row_degree(i)) {
            a.insert(x);
        }
    }
    for j in 0..m.num_cols() {
        for (a, &x) in axes.iter_mut().zip(m.col_degree(j)) {
            a.insert(x);
        }
    }
    axes.into_iter().map(|s| s.into_iter().collect()).collect()
}

fn grid_size(axes: &[Vec<i64>]) -> usize {
    axes.iter().map(Vec::len).product()
}

/// Pointwise dimensions of `coker m` on the grid spanned by its own degrees, in
/// the order of the product grid. `None` if the grid exceeds `limit` points.
pub fn grid_dimensions(m: &GradedMatrix, limit: usize) -> Option<(Vec<Vec<i64>>, Vec<usize>)> {
    let axes = axes_of(m);
    if grid_size(&axes) > limit {
        return None;
    }
    let dims = grid_points(&axes).iter().map(|p| LowerReduction::new(m, p).free_rows(m).len()).collect();
    Some((axes, dims))
}

/// Returns the support shape if `coker m` is an interval module.
///
/// Checks on the grid of degrees that every pointwise dimension is at most one, that
/// the structure map between any two comparable support points is nonzero and that
/// the support is connected. Blocks whose grid is larger than [`GRID_LIMIT`] fall back
/// to a structural test of the normal form (every column has one entry, or two
/// entries summing to zero sitting at the join of their generators).
pub fn check_interval(m: &GradedMatrix) -> Option<IntervalShape> {
    if m.num_rows() == 0 {
        return None;
    }
    let axes = axes_of(m);
    if grid_size(&axes) > GRID_LIMIT {
        return structural_shape(m);
    }
    let pts = grid_points(&axes);
    let mut support: Vec<(usize, SparseVec)> = Vec::new();
    let mut reductions = HashMap::new();
    for (k, p) in pts.iter().enumerate() {
        let lr = LowerReduction::new(m, p);
        let free = lr.free_rows(m);
        match free.len() {
            0 => {}
            1 => support.push((k, vec![(free[0], 1)])),
            _ => return None,
        }
        reductions.insert(k, lr);
    }
    if support.is_empty() {
        return None;
    }
    // nonzero maps between comparable support points
    for (a, va) in &support {
        for (b, _) in &support {
            if a != b && degree::leq(&pts[*a], &pts[*b]) && reductions[b].remainder(va).is_empty() {
                return None;
            }
        }
    }
    // connectivity through comparable pairs
    let mut seen = vec![false; support.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..support.len() {
            if !seen[j] && degree::comparable(&pts[support[i].0], &pts[support[j].0]) {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return None;
    }
    let in_support: Vec<bool> = {
        let mut v = vec![false; pts.len()];
        for (k, _) in &support {
            v[*k] = true;
        }
        v
    };
    let sup_pts: Vec<&Degree> = support.iter().map(|(k, _)| &pts[*k]).collect();
    let lower: Vec<Degree> =
        sup_pts.iter().filter(|p| !sup_pts.iter().any(|q| degree::lt(q, p))).map(|p| (*p).clone()).collect();
    let outside: Vec<&Degree> = pts
        .iter()
        .enumerate()
        .filter(|(k, p)| !in_support[*k] && lower.iter().any(|l| degree::leq(l, p)))
        .map(|(_, p)| p)
        .collect();
    let upper: Vec<Degree> =
        outside.iter().filter(|p| !outside.iter().any(|q| degree::lt(q, p))).map(|p| (*p).clone()).collect();
    Some(IntervalShape { lower, upper })
}

fn structural_shape(m: &GradedMatrix) -> Option<IntervalShape> {
    let f = m.field();
    for j in 0..m.num_cols() {
        let c = m.column(j);
        match c.len() {
            1 => {}
            2 => {
                if f.add(c[0].1, c[1].1) != 0 {
                    return None;
                }
                let join = degree::join(m.row_degree(c[0].0 as usize), m.row_degree(c[1].0 as usize));
                if join != m.col_degree(j) {
                    return None;
                }
            }
            _ => return None,
        }
    }
    let gens = m.row_degrees();
    let lower: Vec<Degree> = gens.iter().filter(|g| !gens.iter().any(|h| degree::lt(h, g))).cloned().collect();
    let upper: Vec<Degree> =
        (0..m.num_cols()).filter(|&j| m.column(j).len() == 1).map(|j| m.col_degree(j).to_vec()).collect();
    Some(IntervalShape { lower, upper })
}

/// Whether a morphism from the interval module on `i` to the one on `j` can be
/// nonzero at `alpha`: the connected component of `alpha` in the overlap must be
/// closed downwards inside `i` and upwards inside `j`.
pub fn interval_alpha_hom(i: &IntervalShape, j: &IntervalShape, alpha: &[i64]) -> bool {
    if !i.contains(alpha) || !j.contains(alpha) {
        return false;
    }
    let d = alpha.len();
    let mut axes = i.coordinates(d);
    for (a, s) in j.coordinates(d).into_iter().zip(axes.iter_mut()) {
        s.extend(a);
    }
    for (s, &x) in axes.iter_mut().zip(alpha) {
        s.insert(x);
    }
    let axes: Vec<Vec<i64>> = axes.into_iter().map(|s| s.into_iter().collect()).collect();
    let pts = grid_points(&axes);
    let in_i: Vec<bool> = pts.iter().map(|p| i.contains(p)).collect();
    let in_j: Vec<bool> = pts.iter().map(|p| j.contains(p)).collect();
    let both: Vec<usize> = (0..pts.len()).filter(|&k| in_i[k] && in_j[k]).collect();
    let start = both.iter().position(|&k| pts[k] == alpha).expect("alpha lies on the grid");
    let mut comp = vec![false; both.len()];
    comp[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        for b in 0..both.len() {
            if !comp[b] && degree::comparable(&pts[both[a]], &pts[both[b]]) {
                comp[b] = true;
                queue.push_back(b);
            }
        }
    }
    for (a, _) in comp.iter().enumerate().filter(|e| *e.1) {
        let g = &pts[both[a]];
        for k in 0..pts.len() {
            if in_i[k] && !in_j[k] && degree::leq(&pts[k], g) {
                return false;
            }
            if in_j[k] && !in_i[k] && degree::leq(g, &pts[k]) {
                return false;
            }
        }
    }
    true
}

/// A presentation of the interval with the given minimal lower and upper points in
/// two parameters: one generator per lower point, a relation at the join of each
/// pair of neighbouring generators and a relation at each upper point.
pub fn interval_presentation(field: Field, shape: &IntervalShape) -> GradedMatrix {
    let mut gens = shape.lower.clone();
    gens.sort_by(|a, b| a[0].cmp(&b[0]).then(b[1].cmp(&a[1])));
    let d = gens.first().map_or(2, Vec::len);
    let minus_one = field.neg(1);
    let mut cols = Vec::new();
    for w in 0..gens.len().saturating_sub(1) {
        let join = degree::join(&gens[w], &gens[w + 1]);
        cols.push((join, vec![(w as u32, 1), (w as u32 + 1, minus_one)]));
    }
    for u in &shape.upper {
        if let Some(g) = gens.iter().position(|g| degree::leq(g, u)) {
            cols.push((u.clone(), vec![(g as u32, 1)]));
        }
    }
    GradedMatrix::new(field, d, gens, cols).expect("interval presentation is graded")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(lower: &[[i64; 2]], upper: &[[i64; 2]]) -> IntervalShape {
        IntervalShape {
            lower: lower.iter().map(|p| p.to_vec()).collect(),
            upper: upper.iter().map(|p| p.to_vec()).collect(),
        }
    }

    #[test]
    fn free_generator_is_interval() {
        let m = GradedMatrix::new(Field::F2, 2, vec![vec![1, 1]], vec![]).unwrap();
        assert_eq!(check_interval(&m), Some(IntervalShape::free(vec![1, 1])));
    }

    #[test]
    fn relation_above_join_is_not_interval() {
        let m =
            GradedMatrix::from_dense(Field::F2, &[vec![0, 1], vec![1, 0]], &[vec![2, 2]], &[vec![1], vec![1]]).unwrap();
        assert_eq!(check_interval(&m), None);
    }

    #[test]
    fn staircase_round_trip() {
        let s = shape(&[[0, 3], [2, 1], [4, 0]], &[[1, 6], [5, 4], [7, 1]]);
        let m = interval_presentation(Field::new(3).unwrap(), &s);
        let got = check_interval(&m).unwrap();
        let mut a = got.lower.clone();
        a.sort();
        assert_eq!(a, vec![vec![0, 3], vec![2, 1], vec![4, 0]]);
        for p in grid_points(&[(0..9).collect(), (0..9).collect()]) {
            assert_eq!(got.contains(&p), s.contains(&p), "{p:?}");
        }
    }

    #[test]
    fn identity_and_free_homs() {
        let s = shape(&[[0, 0]], &[[2, 2]]);
        assert!(interval_alpha_hom(&s, &s, &[1, 1]));
        let a = IntervalShape::free(vec![1, 1]);
        let b = IntervalShape::free(vec![0, 0]);
        assert!(interval_alpha_hom(&a, &b, &[2, 2]));
        assert!(!interval_alpha_hom(&b, &a, &[2, 2]));
    }
}
