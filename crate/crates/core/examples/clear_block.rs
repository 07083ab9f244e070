// Clear the part of a new relation lying in one block by using a map from another block.

use pmdecomp::block_reduce::{apply_certificate, block_reduce, BatchState, HomChoice};
use pmdecomp::graded::GradedMatrix;
use pmdecomp::sparse::from_dense;
use pmdecomp::Field;

pub fn run_example() -> (bool, bool) {
    let f = Field::F2;
    let upper = GradedMatrix::new(
        f,
        2,
        vec![vec![0, 1], vec![1, 0]],
        vec![(vec![1, 1], from_dense(&[1, 1])), (vec![5, 0], from_dense(&[0, 1]))],
    )
    .unwrap();
    let lower = GradedMatrix::new(
        f,
        2,
        vec![vec![1, 2], vec![3, 1]],
        vec![(vec![3, 2], from_dense(&[1, 1])), (vec![5, 1], from_dense(&[0, 1]))],
    )
    .unwrap();
    let state = BatchState {
        alpha: vec![4, 3],
        blocks: vec![upper, lower],
        batch: vec![vec![from_dense(&[1, 0])], vec![from_dense(&[1, 0])]],
    };
    let upper_clears = match block_reduce(&state, 0, HomChoice::AtAlpha) {
        Some(cert) => {
            let after = apply_certificate(&state, &cert).expect("blocks stay separate");
            println!(
                "upper part after clearing: {:?}, blocks unchanged: {}",
                after.batch[0],
                after.blocks == state.blocks
            );
            after.batch[0][0].is_empty()
        }
        None => false,
    };
    let lower_clears = block_reduce(&state, 1, HomChoice::Full).is_some();
    println!("upper block clears: {upper_clears}, lower block clears: {lower_clears}");
    (upper_clears, lower_clears)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
