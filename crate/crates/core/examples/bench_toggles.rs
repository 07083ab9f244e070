// Time the decomposition with and without column sweeps and cached Hom spaces.

use pmdecomp::bench::{run_bench, BenchTable};
use pmdecomp::decompose::Strategy;
use pmdecomp::generate::{default_mix_ops, gen_intervals, mix};
use pmdecomp::Field;

pub fn run_example() -> BenchTable {
    let instances: Vec<_> = [50, 100, 200]
        .into_iter()
        .map(|n| {
            let inst = gen_intervals(n, n as u64, Field::F2);
            (format!("intervals-{n}"), mix(&inst.matrix, default_mix_ops(&inst.matrix), 1))
        })
        .collect();
    let table = run_bench(&instances, Strategy::Aida, 2, 1).expect("decomposes");
    print!("{}", table.to_text());
    table
}

#[allow(dead_code)]
fn main() {
    run_example();
}
