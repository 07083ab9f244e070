//! Brute force over all graded invertible `(Q, P)` over F_2 for tiny presentations.

use pmdecomp::degree::leq;
use pmdecomp::graded::GradedMatrix;

/// Matrices over F_2 as row bitmasks whose nonzero pattern is allowed by `allowed`.
fn invertible_graded(n: usize, allowed: impl Fn(usize, usize) -> bool) -> Vec<Vec<u8>> {
    let slots: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| allowed(i, j)).collect();
    let mut out = Vec::new();
    for bits in 0u32..(1 << slots.len()) {
        let mut rows = vec![0u8; n];
        for (k, &(i, j)) in slots.iter().enumerate() {
            if bits >> k & 1 == 1 {
                rows[i] |= 1 << j;
            }
        }
        if rank(&rows) == n {
            out.push(rows);
        }
    }
    out
}

fn rank(rows: &[u8]) -> usize {
    let mut basis: Vec<u8> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Sizes `(generators, relations)` of the finest block diagonal form reachable by
/// graded base changes, sorted. Only for F_2, at most 8 rows and 8 columns.
pub fn brute_force_sizes(m: &GradedMatrix) -> Vec<(usize, usize)> {
    assert_eq!(m.field().q(), 2);
    let (r, c) = (m.num_rows(), m.num_cols());
    let rows: Vec<u8> =
        (0..r).map(|i| (0..c).filter(|&j| m.entry(i, j) != 0).fold(0u8, |acc, j| acc | 1 << j)).collect();
    // Q[i][j] != 0 needs G(i) <= G(j); P[s][t] != 0 needs R(s) <= R(t)
    let qs = invertible_graded(r, |i, j| leq(m.row_degree(i), m.row_degree(j)));
    let ps = invertible_graded(c, |s, t| leq(m.col_degree(s), m.col_degree(t)));
    // row vector times P, tabulated
    let tables: Vec<Vec<u8>> = ps
        .iter()
        .map(|p| (0..1u32 << c).map(|v| (0..c).filter(|&s| v >> s & 1 == 1).fold(0u8, |acc, s| acc ^ p[s])).collect())
        .collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    for q in &qs {
        let qm: Vec<u8> =
            q.iter().map(|&qr| (0..r).filter(|&j| qr >> j & 1 == 1).fold(0u8, |acc, j| acc ^ rows[j])).collect();
        for t in &tables {
            let a: Vec<u8> = qm.iter().map(|&v| t[v as usize]).collect();
            let sizes = components(&a, c);
            if best.as_ref().is_none_or(|b| sizes.len() > b.len()) {
                best = Some(sizes);
            }
        }
    }
    best.unwrap_or_default()
}

fn components(a: &[u8], cols: usize) -> Vec<(usize, usize)> {
    let r = a.len();
    let mut parent: Vec<usize> = (0..r + cols).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for (i, &row) in a.iter().enumerate() {
        for j in 0..cols {
            if row >> j & 1 == 1 {
                let (x, y) = (find(&mut parent, i), find(&mut parent, r + j));
                parent[x] = y;
            }
        }
    }
    let mut sizes = std::collections::BTreeMap::new();
    for i in 0..r + cols {
        let root = find(&mut parent, i);
        let e = sizes.entry(root).or_insert((0usize, 0usize));
        if i < r {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    let mut v: Vec<(usize, usize)> = sizes.into_values().collect();
    v.sort_unstable();
    v
}
