#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use pmdecomp::decompose::Decomposition;

pub fn sorted_sizes(d: &Decomposition) -> Vec<(usize, usize)> {
    let mut s = d.sizes();
    s.sort_unstable();
    s
}
