// Decompose a random presentation on a coarse grid and print the JSON report.

use pmdecomp::decompose::{decompose, verify, Options, Strategy};
use pmdecomp::generate::gen_grid;
use pmdecomp::report::Report;
use pmdecomp::Field;

pub fn run_example() -> Report {
    let m = gen_grid(60, 60, 6, 0.08, 5, Field::F2);
    let d = decompose(&m, &Options::with_strategy(Strategy::Aida)).expect("decomposes");
    verify(&d).expect("certificate holds");
    let report = Report::new(&m, &d);
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    report
}

#[allow(dead_code)]
fn main() {
    run_example();
}
