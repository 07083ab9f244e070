// Mix a random sum of intervals and recover the intervals.

use pmdecomp::decompose::{decompose, Options, Strategy};
use pmdecomp::generate::{default_mix_ops, gen_intervals, mix};
use pmdecomp::signature::multiset;
use pmdecomp::Field;

pub fn run_example() -> (bool, Option<bool>) {
    let inst = gen_intervals(200, 17, Field::F2);
    let mixed = mix(&inst.matrix, default_mix_ops(&inst.matrix), 18);
    let d = decompose(&mixed, &Options::with_strategy(Strategy::IntervalAuto)).expect("decomposes");
    let found = multiset(d.summands.iter().map(|s| &s.matrix));
    let same = found == inst.truth;
    println!(
        "{} generators, {} relations -> {} summands, matches generator: {same}, all intervals: {:?}",
        mixed.num_rows(),
        mixed.num_cols(),
        d.summands.len(),
        d.interval_decomposable()
    );
    (same, d.interval_decomposable())
}

#[allow(dead_code)]
fn main() {
    run_example();
}
