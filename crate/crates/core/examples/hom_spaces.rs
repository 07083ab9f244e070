// Dimensions of module maps between blocks, and of those nonzero at a degree.

use pmdecomp::fixtures;
use pmdecomp::hom::{alpha_quotient, hom_space};
use pmdecomp::interval::interval_presentation;
use pmdecomp::Field;

pub struct HomDims {
    /// `dims[s][t]` is the dimension of maps from block `s` to block `t`.
    pub dims: [[usize; 3]; 3],
    pub staircase: usize,
    pub staircase_at_alpha: usize,
}

pub fn run_example() -> HomDims {
    let blocks = fixtures::linked_triple_blocks();
    let names = ["b", "c", "d"];
    let mut dims = [[0; 3]; 3];
    for s in 0..3 {
        for t in 0..3 {
            if s != t {
                dims[s][t] = hom_space(&blocks[s], &blocks[t]).dim();
                println!("dim Hom({}, {}) = {}", names[s], names[t], dims[s][t]);
            }
        }
    }
    let (src, dst, alpha) = fixtures::staircase_pair();
    let (ms, md) = (interval_presentation(Field::F2, &src), interval_presentation(Field::F2, &dst));
    let h = hom_space(&ms, &md);
    let at = alpha_quotient(&h, &ms, &md, &alpha);
    println!("staircases: dim Hom = {}, nonzero at {alpha:?}: {}", h.dim(), at.dim());
    HomDims { dims, staircase: h.dim(), staircase_at_alpha: at.dim() }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
