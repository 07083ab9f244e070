//! Decomposition of a graded presentation into indecomposable summands.
//!
//! Relations are processed batch by batch in colexicographic order of their
//! degrees. Every batch is split among the summands found so far, which are merged
//! whenever the new relations cannot be separated.

mod certificate;
mod engine;
mod search;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded::{minimize, sort_and_batch, GradedMatrix};
use crate::interval::IntervalShape;
use crate::sparse::SparseVec;

pub use certificate::{verify, CertificateError};
use engine::Engine;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Search over all decompositions of each batch.
    Exhaustive,
    /// Split along the strongly connected components of the morphism digraph.
    Aida,
    /// As `Aida`, with the interval shortcut and an interval verdict.
    IntervalAuto,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Aida => "aida",
            Strategy::IntervalAuto => "interval-auto",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "aida" => Ok(Strategy::Aida),
            "interval-auto" => Ok(Strategy::IntervalAuto),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub strategy: Strategy,
    /// Reduce batch columns by the relations of each block before solving for a
    /// clearing; without it every clearing system carries the relations as unknowns.
    pub sweep: bool,
    /// Keep computed Hom spaces between batches.
    pub keep_homs: bool,
    /// Use all morphisms instead of those nonzero at the batch degree for the digraph.
    pub full_hom_graph: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { strategy: Strategy::Exhaustive, sweep: true, keep_homs: true, full_hom_graph: false }
    }
}

impl Options {
    pub fn with_strategy(strategy: Strategy) -> Self {
        Options { strategy, ..Options::default() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub batches: usize,
    /// Largest number of relations sharing one degree.
    pub max_batch: usize,
    /// Largest number of earlier columns that had to be split jointly with a component.
    pub max_cocycle: usize,
    pub subspace_iterations: u64,
    pub hom_computations: u64,
    pub merges: usize,
}

/// Wall-clock seconds per phase.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub minimize: f64,
    pub decompose: f64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("presentation is not minimal")]
    NotMinimal,
    #[error("internal error: {0}")]
    Internal(String),
}

/// One indecomposable summand, as the restriction of the transformed matrix to
/// some rows and columns.
#[derive(Clone, Debug)]
pub struct Summand {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub matrix: GradedMatrix,
    pub interval: Option<IntervalShape>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// The presentation the certificate refers to (the minimised input).
    pub input: GradedMatrix,
    /// Generators and relations removed when minimising the input.
    pub removed: Option<(usize, usize)>,
    pub strategy: Strategy,
    pub summands: Vec<Summand>,
    /// Columns of the row transformation `Q`.
    pub q: Vec<SparseVec>,
    /// Columns of the column transformation `P`.
    pub p: Vec<SparseVec>,
    pub stats: Stats,
    pub timings: Timings,
}

impl Decomposition {
    /// `Some(true)` if every summand was recognised as an interval; only computed
    /// by the interval strategy.
    pub fn interval_decomposable(&self) -> Option<bool> {
        (self.strategy == Strategy::IntervalAuto).then(|| self.summands.iter().all(|s| s.interval.is_some()))
    }

    pub fn sizes(&self) -> Vec<(usize, usize)> {
        self.summands.iter().map(|s| (s.rows.len(), s.cols.len())).collect()
    }
}

/// Decomposes `coker m`. Non-minimal input is minimised first.
pub fn decompose(m: &GradedMatrix, opts: &Options) -> Result<Decomposition, DecomposeError> {
    if m.has_equal_degree_entry() {
        return decompose_minimized(m, opts);
    }
    let start = Instant::now();
    match run(m, opts) {
        Err(DecomposeError::NotMinimal) => {
            let wasted = start.elapsed().as_secs_f64();
            let mut d = decompose_minimized(m, opts)?;
            d.timings.decompose += wasted;
            Ok(d)
        }
        r => r,
    }
}

fn decompose_minimized(m: &GradedMatrix, opts: &Options) -> Result<Decomposition, DecomposeError> {
    let start = Instant::now();
    let min = minimize(m);
    let elapsed = start.elapsed().as_secs_f64();
    let removed = (m.num_rows() - min.matrix.num_rows(), m.num_cols() - min.matrix.num_cols());
    let mut d = run(&min.matrix, opts)?;
    d.removed = Some(removed);
    d.timings.minimize = elapsed;
    Ok(d)
}

fn run(m: &GradedMatrix, opts: &Options) -> Result<Decomposition, DecomposeError> {
    let start = Instant::now();
    let mut eng = Engine::new(m, opts);
    for batch in sort_and_batch(m) {
        let k = batch.cols.len();
        eng.stats.batches += 1;
        eng.stats.max_batch = eng.stats.max_batch.max(k);
        let mut ctx = eng.load(&batch.degree, &batch.cols);
        let blocks = ctx.touched();
        if !eng.batch_independent(&mut ctx) {
            return Err(DecomposeError::NotMinimal);
        }
        let all: Vec<usize> = (0..k).collect();
        let groups = match opts.strategy {
            Strategy::Exhaustive => eng.exhaustive(&mut ctx, &blocks, &all)?,
            Strategy::Aida | Strategy::IntervalAuto => eng.guided(&mut ctx, &blocks, &all)?,
        };
        eng.commit(ctx, &groups)?;
    }
    let summands = eng
        .live_blocks()
        .into_iter()
        .map(|b| Summand {
            rows: b.rows.iter().map(|&r| r as usize).collect(),
            cols: b.cols.iter().map(|&c| c as usize).collect(),
            matrix: b.mat.clone(),
            interval: if opts.strategy == Strategy::IntervalAuto { b.shape.clone() } else { None },
        })
        .collect();
    Ok(Decomposition {
        input: m.clone(),
        removed: None,
        strategy: opts.strategy,
        summands,
        q: eng.q_columns().to_vec(),
        p: eng.p_cols.clone(),
        stats: eng.stats.clone(),
        timings: Timings { minimize: 0.0, decompose: start.elapsed().as_secs_f64() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::fixtures;

    fn all_strategies() -> [Strategy; 3] {
        [Strategy::Exhaustive, Strategy::Aida, Strategy::IntervalAuto]
    }

    fn sorted_sizes(d: &Decomposition) -> Vec<(usize, usize)> {
        let mut s = d.sizes();
        s.sort_unstable();
        s
    }

    #[test]
    fn glued_pair_is_indecomposable() {
        for s in all_strategies() {
            let d = decompose(&fixtures::glued_pair(Field::new(5).unwrap()), &Options::with_strategy(s)).unwrap();
            assert_eq!(sorted_sizes(&d), vec![(2, 1)]);
            verify(&d).unwrap();
        }
    }

    #[test]
    fn linked_triple_splits_off_one_summand() {
        for s in all_strategies() {
            let d = decompose(&fixtures::linked_triple(), &Options::with_strategy(s)).unwrap();
            assert_eq!(sorted_sizes(&d), vec![(1, 1), (3, 3)], "{s}");
            verify(&d).unwrap();
        }
    }

    #[test]
    fn antidiagonal_six_has_two_halves() {
        for s in all_strategies() {
            let d = decompose(&fixtures::antidiagonal_six(), &Options::with_strategy(s)).unwrap();
            assert_eq!(sorted_sizes(&d), vec![(3, 2), (3, 2)], "{s}");
            verify(&d).unwrap();
        }
    }

    #[test]
    fn ablations_agree() {
        for sweep in [true, false] {
            for keep_homs in [true, false] {
                let opts = Options { sweep, keep_homs, ..Options::default() };
                let d = decompose(&fixtures::antidiagonal_six(), &opts).unwrap();
                assert_eq!(sorted_sizes(&d), vec![(3, 2), (3, 2)]);
                verify(&d).unwrap();
            }
        }
    }
}
