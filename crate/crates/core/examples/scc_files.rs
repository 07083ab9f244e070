// Read a presentation in scc2020 format, write it back, and decompose it.

use pmdecomp::decompose::{decompose, Options};
use pmdecomp::scc::{parse_scc2020, write_scc2020};
use pmdecomp::Field;

const INPUT: &str = "scc2020
# two relations at (2,2) and (1,3) over F_3
2
2 3 0
2 2 ; 0:1 1:2
1 3 ; 2:1
0 1 ;
1 0 ;
1 2 ;
";

pub fn run_example() -> (String, usize) {
    let m = parse_scc2020(INPUT, Field::new(3).unwrap()).expect("valid input");
    let text = write_scc2020(&m);
    print!("{text}");
    let d = decompose(&m, &Options::default()).expect("decomposes");
    println!("{} summands", d.summands.len());
    (text, d.summands.len())
}

#[allow(dead_code)]
fn main() {
    run_example();
}
