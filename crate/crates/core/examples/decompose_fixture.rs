// Decompose a small presentation with each strategy and check the certificate.

use pmdecomp::decompose::{decompose, verify, Options, Strategy};
use pmdecomp::fixtures;

pub fn run_example() -> Vec<(Strategy, Vec<(usize, usize)>)> {
    let m = fixtures::antidiagonal_six();
    let mut out = Vec::new();
    for strategy in [Strategy::Exhaustive, Strategy::Aida, Strategy::IntervalAuto] {
        let d = decompose(&m, &Options::with_strategy(strategy)).expect("fixture decomposes");
        verify(&d).expect("certificate holds");
        let mut sizes = d.sizes();
        sizes.sort_unstable();
        println!(
            "{strategy}: {} summands {:?}, {} subspace iterations",
            sizes.len(),
            sizes,
            d.stats.subspace_iterations
        );
        out.push((strategy, sizes));
    }
    out
}

#[allow(dead_code)]
fn main() {
    run_example();
}
