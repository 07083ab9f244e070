//! Random presentations: mixed interval sums with known decomposition, and
//! presentations whose relations pick random subsets of the generators below them.
//!
//! All generators draw from [`Xoshiro256PlusPlus`] (xoshiro256++, 64-bit output) seeded with
//! `SeedableRng::seed_from_u64`, so a seed fixes the output.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::degree::{self, Degree};
use crate::field::{Field, Scalar};
use crate::graded::{minimize, GradedMatrix, TrackedMatrix};
use crate::interval::{interval_presentation, IntervalShape};
use crate::signature::Signature;

/// Degrees are drawn from `{0, .., RESOLUTION - 1}^2`.
pub const RESOLUTION: i64 = 10_000;

/// Probability that a generated interval is free.
pub const FREE_PROBABILITY: f64 = 0.1;

pub fn rng(seed: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

fn point(rng: &mut Xoshiro256PlusPlus, grid: i64) -> Degree {
    vec![rng.random_range(0..grid), rng.random_range(0..grid)]
}

fn nonzero(rng: &mut Xoshiro256PlusPlus, f: Field) -> Scalar {
    rng.random_range(1..f.q()) as Scalar
}

/// A direct sum of intervals with the signatures of its summands.
#[derive(Clone, Debug)]
pub struct IntervalInstance {
    pub matrix: GradedMatrix,
    pub shapes: Vec<IntervalShape>,
    pub truth: Vec<Signature>,
}

/// `n` intervals: with probability 0.1 a free module, otherwise the quadrant of a
/// generator minus the quadrant of a relation strictly above it in both coordinates.
/// Generator and relation are the meet and join of two uniform points, redrawn
/// until they differ in both coordinates.
pub fn gen_intervals(n: usize, seed: u64, field: Field) -> IntervalInstance {
    let mut rng = rng(seed);
    let mut shapes = Vec::with_capacity(n);
    for _ in 0..n {
        if rng.random_bool(FREE_PROBABILITY) {
            shapes.push(IntervalShape::free(point(&mut rng, RESOLUTION)));
            continue;
        }
        loop {
            let a = point(&mut rng, RESOLUTION);
            let b = point(&mut rng, RESOLUTION);
            if a[0] != b[0] && a[1] != b[1] {
                shapes.push(IntervalShape { lower: vec![degree::meet(&a, &b)], upper: vec![degree::join(&a, &b)] });
                break;
            }
        }
    }
    let parts: Vec<GradedMatrix> = shapes.iter().map(|s| interval_presentation(field, s)).collect();
    let mut truth: Vec<Signature> = parts.iter().map(Signature::of).collect();
    truth.sort();
    IntervalInstance { matrix: GradedMatrix::direct_sum(field, 2, &parts), shapes, truth }
}

/// Number of mixing operations used by default: ten per row and column.
pub fn default_mix_ops(m: &GradedMatrix) -> usize {
    10 * (m.num_rows() + m.num_cols())
}

/// Applies `op_count` uniformly drawn admissible row or column additions with
/// nonzero coefficients. Proposals that are not admissible are redrawn; if none
/// has been accepted after many attempts the remaining operations are skipped.
pub fn mix_tracked(m: &GradedMatrix, op_count: usize, seed: u64) -> TrackedMatrix {
    let f = m.field();
    let mut rng = rng(seed);
    let mut t = TrackedMatrix::new(m);
    let (rows, cols) = (m.num_rows(), m.num_cols());
    let mut done = 0;
    let mut misses = 0usize;
    while done < op_count && misses < 10_000 + 100 * op_count {
        let row = rng.random_bool(rows as f64 / (rows + cols).max(1) as f64);
        let n = if row { rows } else { cols };
        if n < 2 {
            misses += 1;
            continue;
        }
        let from = rng.random_range(0..n);
        let to = rng.random_range(0..n);
        let c = nonzero(&mut rng, f);
        let ok =
            if row { t.admissible_row_add(from, to, c).is_ok() } else { t.admissible_col_add(from, to, c).is_ok() };
        if ok {
            done += 1;
        } else {
            misses += 1;
        }
    }
    t
}

pub fn mix(m: &GradedMatrix, op_count: usize, seed: u64) -> GradedMatrix {
    mix_tracked(m, op_count, seed).current()
}

/// Indices of a Bernoulli(`p`) subset of `0..n`, drawn by geometric skips.
fn bernoulli_subset(rng: &mut Xoshiro256PlusPlus, n: usize, p: f64) -> Vec<usize> {
    let mut out = Vec::new();
    let log_q = (1.0 - p).ln();
    let mut i = 0usize;
    loop {
        let u: f64 = rng.random();
        let skip = ((1.0 - u).ln() / log_q).floor();
        if !skip.is_finite() || skip >= (n - i) as f64 {
            return out;
        }
        i += skip as usize;
        out.push(i);
        i += 1;
        if i >= n {
            return out;
        }
    }
}

/// Relations at uniform degrees on `{0, .., grid - 1}^2`, each relating every
/// generator below it independently with probability `p`; minimised. Empty
/// relations are redrawn with the same degree; a degree with no generator below it
/// is redrawn.
pub fn gen_grid(m: usize, n: usize, grid: i64, p: f64, seed: u64, field: Field) -> GradedMatrix {
    assert!(grid >= 2 && p > 0.0 && p < 1.0);
    let mut rng = rng(seed);
    let gens: Vec<Degree> = (0..m).map(|_| point(&mut rng, grid)).collect();
    let mut cols = Vec::with_capacity(n);
    while cols.len() < n && m > 0 {
        let alpha = point(&mut rng, grid);
        if !gens.iter().any(|g| degree::leq(g, &alpha)) {
            continue;
        }
        // a subset of all generators restricted to those below alpha is a subset
        // of the generators below alpha with the same law
        let rows = loop {
            let rows: Vec<usize> =
                bernoulli_subset(&mut rng, m, p).into_iter().filter(|&i| degree::leq(&gens[i], &alpha)).collect();
            if !rows.is_empty() {
                break rows;
            }
        };
        let col = rows.into_iter().map(|i| (i as u32, nonzero(&mut rng, field))).collect();
        cols.push((alpha, col));
    }
    let raw = GradedMatrix::new(field, 2, gens, cols).expect("generated matrix is graded");
    minimize(&raw).matrix
}

/// [`gen_grid`] on the full resolution grid.
pub fn gen_random_er(m: usize, n: usize, p: f64, seed: u64, field: Field) -> GradedMatrix {
    gen_grid(m, n, RESOLUTION, p, seed, field)
}

/// Parameters of a generated instance, as recorded next to generated files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Intervals { n: usize, mix_ops: usize },
    RandomEr { m: usize, n: usize, p: f64 },
    RandomGrid { m: usize, n: usize, grid: i64, p: f64 },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_output() {
        let a = gen_intervals(20, 7, Field::F2);
        let b = gen_intervals(20, 7, Field::F2);
        assert_eq!(a.matrix, b.matrix);
        assert_eq!(gen_grid(30, 30, 5, 0.3, 3, Field::F2), gen_grid(30, 30, 5, 0.3, 3, Field::F2));
    }

    #[test]
    fn some_seed_gives_a_free_interval() {
        let seed = (0..200).find(|&s| gen_intervals(1, s, Field::F2).matrix.num_cols() == 0).unwrap();
        let m = gen_intervals(1, seed, Field::F2).matrix;
        assert_eq!((m.num_rows(), m.num_cols()), (1, 0));
    }

    #[test]
    fn free_fraction_near_one_tenth() {
        let inst = gen_intervals(1000, 11, Field::F2);
        let free = inst.truth.iter().filter(|s| s.relations.is_empty()).count();
        assert!((70..=130).contains(&free), "{free}");
    }

    #[test]
    fn zero_mixing_is_identity() {
        let inst = gen_intervals(10, 1, Field::F2);
        assert_eq!(mix(&inst.matrix, 0, 5), inst.matrix);
    }

    #[test]
    fn mixing_keeps_grading() {
        for seed in 0..100 {
            let inst = gen_intervals(8, seed, Field::new(3).unwrap());
            let m = mix(&inst.matrix, default_mix_ops(&inst.matrix), seed);
            m.check().unwrap();
        }
    }

    #[test]
    fn bernoulli_subset_rate() {
        let mut r = rng(4);
        let total: usize = (0..200).map(|_| bernoulli_subset(&mut r, 1000, 0.05).len()).sum();
        assert!((9000..11000).contains(&total), "{total}");
    }

    #[test]
    fn small_grid_forces_shared_degrees() {
        let mut found = false;
        for seed in 0..10 {
            let m = gen_grid(40, 60, 2, 0.5, seed, Field::F2);
            found |= crate::graded::sort_and_batch(&m).iter().any(|b| b.cols.len() > 1);
        }
        assert!(found);
    }
}
