//! Enumeration of complementary subspace pairs of F_q^k through Schubert cells.

use crate::field::Field;
use crate::linalg::DenseMatrix;

/// A complementary pair: the columns of `t1` span an `l`-dimensional subspace in
/// reduced column echelon form, `t2` consists of the standard vectors off its pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionPair {
    pub t1: DenseMatrix,
    pub t2: DenseMatrix,
    pub pivots: Vec<usize>,
}

impl DecompositionPair {
    pub fn k(&self) -> usize {
        self.t1.rows()
    }

    pub fn l(&self) -> usize {
        self.t1.cols()
    }

    /// `[T1 T2]`.
    pub fn combined(&self) -> DenseMatrix {
        self.t1.hconcat(&self.t2).expect("same row count")
    }
}

/// Standard basis vectors on the rows outside `pivots`.
pub fn complement(field: Field, k: usize, pivots: &[usize]) -> DenseMatrix {
    let rest: Vec<usize> = (0..k).filter(|r| !pivots.contains(r)).collect();
    let mut t2 = DenseMatrix::zeros(field, k, rest.len());
    for (c, &r) in rest.iter().enumerate() {
        t2.set(r, c, 1);
    }
    t2
}

/// Lexicographic iterator over `l`-subsets of `0..k`.
#[derive(Clone, Debug)]
struct Combinations {
    k: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    fn new(k: usize, l: usize) -> Self {
        Combinations { k, cur: (l <= k).then(|| (0..l).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let l = out.len();
        let mut next = out.clone();
        let mut i = l;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if next[i] < self.k - l + i {
                next[i] += 1;
                for j in i + 1..l {
                    next[j] = next[j - 1] + 1;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

type PivotFilter = Box<dyn Fn(&[usize]) -> bool>;
/// Pivots, free positions, and the odometer over their coefficients.
type Cell = (Vec<usize>, Vec<(usize, usize)>, Vec<u32>);

/// Iterates over all `l`-dimensional subspaces of F_q^k, each given once by its
/// reduced column echelon basis (pivot of a column = its first nonzero row).
pub struct GrassmannianCells {
    field: Field,
    k: usize,
    subsets: Combinations,
    filter: PivotFilter,
    current: Option<Cell>,
}

impl GrassmannianCells {
    fn with_filter(field: Field, k: usize, l: usize, filter: PivotFilter) -> Self {
        let subsets = if l == 0 || l >= k { Combinations { k, cur: None } } else { Combinations::new(k, l) };
        GrassmannianCells { field, k, subsets, filter, current: None }
    }

    fn advance_subset(&mut self) -> bool {
        for pivots in self.subsets.by_ref() {
            if !(self.filter)(&pivots) {
                continue;
            }
            let mut free = Vec::new();
            for (c, &p) in pivots.iter().enumerate() {
                for r in p + 1..self.k {
                    if !pivots.contains(&r) {
                        free.push((r, c));
                    }
                }
            }
            let counter = vec![0; free.len()];
            self.current = Some((pivots, free, counter));
            return true;
        }
        false
    }
}

impl Iterator for GrassmannianCells {
    type Item = DecompositionPair;

    fn next(&mut self) -> Option<DecompositionPair> {
        if self.current.is_none() && !self.advance_subset() {
            return None;
        }
        let q = self.field.q();
        let (pivots, free, counter) = self.current.as_mut().unwrap();
        let mut t1 = DenseMatrix::zeros(self.field, self.k, pivots.len());
        for (c, &p) in pivots.iter().enumerate() {
            t1.set(p, c, 1);
        }
        for (&(r, c), &v) in free.iter().zip(counter.iter()) {
            t1.set(r, c, v as u8);
        }
        let out = DecompositionPair { t2: complement(self.field, self.k, pivots), t1, pivots: pivots.clone() };
        // odometer, last position fastest
        let mut i = counter.len();
        let mut done = true;
        while i > 0 {
            i -= 1;
            counter[i] += 1;
            if counter[i] < q {
                done = false;
                break;
            }
            counter[i] = 0;
        }
        if done {
            self.current = None;
        }
        Some(out)
    }
}

pub fn grassmannian_cells(k: usize, l: usize, field: Field) -> GrassmannianCells {
    GrassmannianCells::with_filter(field, k, l, Box::new(|_| true))
}

/// The pairs tried by the exhaustive split search: subspaces of dimension at most
/// `k/2`, where for `l = k/2` only pivot sets containing the first position are
/// used (a subspace or its complement is always among them). For `k = 1` the only
/// pair is the trivial one.
pub fn generate_dec(k: usize, field: Field) -> Box<dyn Iterator<Item = DecompositionPair>> {
    if k <= 1 {
        let trivial = DecompositionPair {
            t1: DenseMatrix::zeros(field, k, 0),
            t2: DenseMatrix::identity(field, k),
            pivots: Vec::new(),
        };
        return Box::new(std::iter::once(trivial));
    }
    let it = (1..=k / 2).flat_map(move |l| {
        let half = 2 * l == k;
        GrassmannianCells::with_filter(field, k, l, Box::new(move |p: &[usize]| !half || p[0] == 0))
    });
    Box::new(it)
}

/// `|Dec_q(k)|` computed by enumeration.
pub fn count_dec(k: usize, field: Field) -> u64 {
    generate_dec(k, field).count() as u64
}

/// Gaussian binomial coefficient `[k choose l]_q`.
pub fn gaussian_binomial(k: u32, l: u32, q: u64) -> u128 {
    if l > k {
        return 0;
    }
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..l {
        num *= (q as u128).pow(k - i) - 1;
        den *= (q as u128).pow(i + 1) - 1;
    }
    num / den
}

/// `|Dec_q(k)|` from the closed form.
pub fn dec_cardinality(k: u32, q: u64) -> u128 {
    if k <= 1 {
        return 1;
    }
    let mut total = 0;
    for l in 1..=k / 2 {
        total += if 2 * l == k { cells_with_first_pivot(k, l, q) } else { gaussian_binomial(k, l, q) };
    }
    total
}

/// Number of `l`-subspaces whose echelon pivot set contains the first position.
fn cells_with_first_pivot(k: u32, l: u32, q: u64) -> u128 {
    // the first pivot is 0 exactly when the subspace is not contained in span(e_2..e_k)
    gaussian_binomial(k, l, q) - gaussian_binomial(k - 1, l, q)
}

/// `|GL_k(F_q)|`.
pub fn gl_order(k: u32, q: u64) -> u128 {
    let qk = (q as u128).pow(k);
    (0..k).map(|i| qk - (q as u128).pow(i)).product()
}

/// Iterations of the naive split search over all invertible `T` and all split
/// positions, summed over the batch sizes `2..=k` it recurses through.
pub fn naive_loop_count(k: u32, q: u64) -> u128 {
    (2..=k).map(|j| (j as u128 - 1) * gl_order(j, q)).sum()
}
