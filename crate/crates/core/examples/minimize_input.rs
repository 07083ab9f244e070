// Minimise a presentation with a redundant relation and a cancelling pair.

use pmdecomp::decompose::{decompose, Options};
use pmdecomp::graded::{minimize, GradedMatrix};
use pmdecomp::Field;

pub fn run_example() -> ((usize, usize), Option<(usize, usize)>) {
    let m = GradedMatrix::from_dense(
        Field::F2,
        &[vec![0, 0], vec![1, 1], vec![2, 0]],
        &[vec![1, 1], vec![3, 3], vec![2, 2]],
        &[vec![0, 1, 1], vec![1, 1, 0], vec![0, 0, 0]],
    )
    .unwrap();
    let min = minimize(&m);
    println!(
        "{}x{} -> {}x{}, cancelled {:?}, redundant {:?}",
        m.num_rows(),
        m.num_cols(),
        min.matrix.num_rows(),
        min.matrix.num_cols(),
        min.cancelled,
        min.redundant
    );
    let d = decompose(&m, &Options::default()).unwrap();
    println!("decomposition removed {:?} and found {} summands", d.removed, d.summands.len());
    ((min.matrix.num_rows(), min.matrix.num_cols()), d.removed)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
