//! Sparse vectors over F_q and an incremental span with canonical remainders.

use std::collections::{BTreeMap, HashMap};

use crate::field::{Field, Scalar};

/// Sorted `(index, nonzero value)` pairs.
pub type SparseVec = Vec<(u32, Scalar)>;

/// `y + a * x`.
pub fn axpy(f: Field, y: &[(u32, Scalar)], a: Scalar, x: &[(u32, Scalar)]) -> SparseVec {
    if a == 0 || x.is_empty() {
        return y.to_vec();
    }
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() && j < x.len() {
        let (yi, yv) = y[i];
        let (xi, xv) = x[j];
        if yi < xi {
            out.push((yi, yv));
            i += 1;
        } else if xi < yi {
            out.push((xi, f.mul(a, xv)));
            j += 1;
        } else {
            let v = f.add(yv, f.mul(a, xv));
            if v != 0 {
                out.push((yi, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&y[i..]);
    out.extend(x[j..].iter().map(|&(xi, xv)| (xi, f.mul(a, xv))));
    out
}

pub fn scale(f: Field, a: Scalar, x: &[(u32, Scalar)]) -> SparseVec {
    if a == 0 {
        return Vec::new();
    }
    x.iter().map(|&(i, v)| (i, f.mul(a, v))).collect()
}

pub fn get(x: &[(u32, Scalar)], i: u32) -> Scalar {
    x.binary_search_by_key(&i, |e| e.0).map_or(0, |p| x[p].1)
}

/// Builds a sparse vector from unsorted entries, summing duplicates.
pub fn collect(f: Field, entries: impl IntoIterator<Item = (u32, Scalar)>) -> SparseVec {
    let mut acc: BTreeMap<u32, Scalar> = BTreeMap::new();
    for (i, v) in entries {
        let e = acc.entry(i).or_insert(0);
        *e = f.add(*e, v);
    }
    acc.into_iter().filter(|e| e.1 != 0).collect()
}

pub fn from_dense(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|e| *e.1 != 0).map(|(i, &x)| (i as u32, x)).collect()
}

pub fn to_dense(x: &[(u32, Scalar)], len: usize) -> Vec<Scalar> {
    let mut out = vec![0; len];
    for &(i, v) in x {
        out[i as usize] = v;
    }
    out
}

/// Result of reducing a vector: `remainder = v + sum(combo[i] * original_i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Reduction {
    pub remainder: SparseVec,
    pub combo: SparseVec,
}

/// Span of a growing list of vectors. Each basis vector has a distinct pivot (its
/// largest index) and reduction clears every pivot index, so the remainder of `v`
/// depends only on the class of `v` modulo the span.
#[derive(Clone, Debug)]
pub struct Reducer {
    field: Field,
    pivot_of: HashMap<u32, usize>,
    basis: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    originals: usize,
}

impl Reducer {
    pub fn new(field: Field) -> Self {
        Reducer { field, pivot_of: HashMap::new(), basis: Vec::new(), combos: Vec::new(), originals: 0 }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Number of independent vectors pushed so far.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Number of vectors pushed so far, including dependent ones.
    pub fn pushed(&self) -> usize {
        self.originals
    }

    pub fn is_pivot(&self, i: u32) -> bool {
        self.pivot_of.contains_key(&i)
    }

    pub fn pivots(&self) -> impl Iterator<Item = u32> + '_ {
        self.pivot_of.keys().copied()
    }

    fn reduce_into(&self, acc: &mut BTreeMap<u32, Scalar>, combo: &mut BTreeMap<u32, Scalar>) {
        let f = self.field;
        let mut cursor = match acc.keys().next_back() {
            Some(&k) => k,
            None => return,
        };
        loop {
            let next = acc.range(..=cursor).next_back().map(|(&k, &v)| (k, v));
            let Some((idx, val)) = next else { break };
            if let Some(&b) = self.pivot_of.get(&idx) {
                let piv = *self.basis[b].last().unwrap();
                let c = f.neg(f.div(val, piv.1));
                for &(i, v) in &self.basis[b] {
                    let e = acc.entry(i).or_insert(0);
                    *e = f.add(*e, f.mul(c, v));
                    if *e == 0 {
                        acc.remove(&i);
                    }
                }
                for &(i, v) in &self.combos[b] {
                    let e = combo.entry(i).or_insert(0);
                    *e = f.add(*e, f.mul(c, v));
                    if *e == 0 {
                        combo.remove(&i);
                    }
                }
            }
            if idx == 0 {
                break;
            }
            cursor = idx - 1;
        }
    }

    /// Canonical remainder of `v` together with the combination of pushed vectors used.
    pub fn reduce(&self, v: &[(u32, Scalar)]) -> Reduction {
        let mut acc: BTreeMap<u32, Scalar> = v.iter().copied().collect();
        let mut combo = BTreeMap::new();
        self.reduce_into(&mut acc, &mut combo);
        Reduction { remainder: acc.into_iter().collect(), combo: combo.into_iter().collect() }
    }

    /// Canonical remainder only.
    pub fn remainder(&self, v: &[(u32, Scalar)]) -> SparseVec {
        if self.basis.is_empty() {
            return v.to_vec();
        }
        self.reduce(v).remainder
    }

    pub fn contains(&self, v: &[(u32, Scalar)]) -> bool {
        self.reduce(v).remainder.is_empty()
    }

    /// Adds `v` to the span. Returns the reduction of `v` against the previous span;
    /// `v` was independent iff the remainder is nonzero.
    pub fn push(&mut self, v: &[(u32, Scalar)]) -> Reduction {
        let id = self.originals as u32;
        self.originals += 1;
        let red = self.reduce(v);
        if let Some(&(p, _)) = red.remainder.last() {
            let mut combo = red.combo.clone();
            combo.push((id, 1));
            self.pivot_of.insert(p, self.basis.len());
            self.basis.push(red.remainder.clone());
            self.combos.push(combo);
        }
        red
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axpy_cancels() {
        let f = Field::new(3).unwrap();
        let y = vec![(0, 1), (2, 2)];
        let x = vec![(2, 1), (5, 1)];
        assert_eq!(axpy(f, &y, 1, &x), vec![(0, 1), (5, 1)]);
    }

    #[test]
    fn reduction_identity_holds() {
        let f = Field::new(5).unwrap();
        let vs = [vec![(0, 1), (3, 2)], vec![(1, 4), (3, 1)], vec![(0, 2), (1, 3), (3, 1)]];
        let mut r = Reducer::new(f);
        for v in &vs {
            r.push(v);
        }
        assert_eq!(r.rank(), 2);
        let red = r.reduce(&vs[2]);
        assert!(red.remainder.is_empty());
        let mut check = vs[2].clone();
        for &(i, c) in &red.combo {
            check = axpy(f, &check, c, &vs[i as usize]);
        }
        assert!(check.is_empty());
    }

    #[test]
    fn remainder_is_canonical() {
        let f = Field::F2;
        let mut r = Reducer::new(f);
        r.push(&[(1, 1), (2, 1)]);
        let a = r.remainder(&[(0, 1), (2, 1)]);
        let b = r.remainder(&[(0, 1), (1, 1)]);
        assert_eq!(a, b);
    }
}
