// Count the splittings of F_q^k tried when a batch of k relations is searched.

use pmdecomp::subspace::{count_dec, dec_cardinality, generate_dec};
use pmdecomp::Field;

pub fn run_example() -> Vec<u64> {
    let f2 = Field::F2;
    let counts: Vec<u64> = (1..=6).map(|k| count_dec(k, f2)).collect();
    println!("F_2, k = 1..6: {counts:?}");
    println!("closed form for k = 7, 8: {} {}", dec_cardinality(7, 2), dec_cardinality(8, 2));
    for pair in generate_dec(2, f2) {
        print!("{}", pair.combined());
        println!("--");
    }
    counts
}

#[allow(dead_code)]
fn main() {
    run_example();
}
