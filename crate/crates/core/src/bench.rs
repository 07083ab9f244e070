//! Timing of the decomposition under the optimisation toggles.
//!
//! Every instance is decomposed in three configurations: `vanilla` (no column
//! sweeps, Hom spaces recomputed per batch), `+sweep`, and `+homset` (sweeps and
//! cached Hom spaces). Times are averaged over repeats. The summand signatures
//! of all configurations are compared, since the toggles must never change the
//! result.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decompose::{decompose, DecomposeError, Options, Strategy};
use crate::graded::GradedMatrix;
use crate::signature::{multiset, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Config {
    Vanilla,
    Sweep,
    Homset,
}

impl Config {
    pub const ALL: [Config; 3] = [Config::Vanilla, Config::Sweep, Config::Homset];

    pub fn options(self, strategy: Strategy) -> Options {
        let (sweep, keep_homs) = match self {
            Config::Vanilla => (false, false),
            Config::Sweep => (true, false),
            Config::Homset => (true, true),
        };
        Options { strategy, sweep, keep_homs, ..Options::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub generators: usize,
    pub relations: usize,
    pub summands: usize,
    /// Mean seconds for vanilla, +sweep and +homset.
    pub vanilla: f64,
    pub sweep: f64,
    pub homset: f64,
    /// Whether all configurations produced the same summand signatures.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub schema_version: u32,
    pub strategy: Strategy,
    pub repeats: usize,
    pub rows: Vec<BenchRow>,
}

fn time_one(m: &GradedMatrix, opts: &Options, repeats: usize) -> Result<(f64, usize, Vec<Signature>), DecomposeError> {
    let mut total = 0.0;
    let mut last = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let d = decompose(m, opts)?;
        total += start.elapsed().as_secs_f64();
        last = Some(d);
    }
    let d = last.unwrap();
    Ok((total / repeats.max(1) as f64, d.summands.len(), multiset(d.summands.iter().map(|s| &s.matrix))))
}

pub fn bench_instance(
    name: &str,
    m: &GradedMatrix,
    strategy: Strategy,
    repeats: usize,
) -> Result<BenchRow, DecomposeError> {
    let mut times = [0.0; 3];
    let mut sigs = Vec::new();
    let mut summands = 0;
    for (slot, cfg) in Config::ALL.into_iter().enumerate() {
        let (t, k, s) = time_one(m, &cfg.options(strategy), repeats)?;
        times[slot] = t;
        summands = k;
        sigs.push(s);
    }
    Ok(BenchRow {
        instance: name.to_string(),
        generators: m.num_rows(),
        relations: m.num_cols(),
        summands,
        vanilla: times[0],
        sweep: times[1],
        homset: times[2],
        consistent: sigs.windows(2).all(|w| w[0] == w[1]),
    })
}

/// Benchmarks every instance, on `threads` worker threads if more than one.
pub fn run_bench(
    instances: &[(String, GradedMatrix)],
    strategy: Strategy,
    repeats: usize,
    threads: usize,
) -> Result<BenchTable, DecomposeError> {
    let one = |(name, m): &(String, GradedMatrix)| bench_instance(name, m, strategy, repeats);
    let rows = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| DecomposeError::Internal(e.to_string()))?;
        pool.install(|| instances.par_iter().map(one).collect::<Result<Vec<_>, _>>())?
    } else {
        instances.iter().map(one).collect::<Result<Vec<_>, _>>()?
    };
    Ok(BenchTable { schema_version: crate::report::SCHEMA_VERSION, strategy, repeats, rows })
}

impl BenchTable {
    pub fn to_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.instance.len()).max().unwrap_or(0).max(8);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$} {:>8} {:>8} {:>8} {:>10} {:>10} {:>10}",
            "instance", "gens", "rels", "summands", "vanilla", "+sweep", "+homset"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<width$} {:>8} {:>8} {:>8} {:>10.4} {:>10.4} {:>10.4}{}",
                r.instance,
                r.generators,
                r.relations,
                r.summands,
                r.vanilla,
                r.sweep,
                r.homset,
                if r.consistent { "" } else { "  MISMATCH" }
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::generate::gen_intervals;

    #[test]
    fn toggles_agree_and_table_round_trips() {
        let inst: Vec<(String, GradedMatrix)> =
            (0..3).map(|s| (format!("intervals-{s}"), gen_intervals(20, s, Field::F2).matrix)).collect();
        let table = run_bench(&inst, Strategy::Aida, 1, 2).unwrap();
        assert!(table.rows.iter().all(|r| r.consistent));
        let back: BenchTable = serde_json::from_str(&serde_json::to_string(&table).unwrap()).unwrap();
        assert_eq!(back, table);
        assert_eq!(table.to_text().lines().count(), 4);
    }
}
