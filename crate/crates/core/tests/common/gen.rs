//! Random small presentations and brute-force checks shared by the test suites.

use pmdecomp::degree::leq;
use pmdecomp::field::Field;
use pmdecomp::graded::GradedMatrix;
use pmdecomp::linalg::{rank, DenseMatrix};
use proptest::prelude::*;

/// Presentations over F_q with up to `max_m` generators and `max_n` relations,
/// degrees in `{0, .., grid - 1}^2`, entries kept only where the grading allows.
pub fn presentation(max_m: usize, max_n: usize, grid: i64, q: u32) -> impl Strategy<Value = GradedMatrix> {
    let f = Field::new(q).unwrap();
    (1usize..=max_m, 0usize..=max_n).prop_flat_map(move |(m, n)| {
        let deg = move || proptest::collection::vec(0i64..grid, 2);
        (
            proptest::collection::vec(deg(), m),
            proptest::collection::vec((deg(), proptest::collection::vec(0u8..q as u8, m)), n),
        )
            .prop_map(move |(gens, rels)| {
                let cols = rels
                    .into_iter()
                    .map(|(alpha, vals)| {
                        let col = vals
                            .iter()
                            .enumerate()
                            .filter(|&(i, &v)| v != 0 && leq(&gens[i], &alpha))
                            .map(|(i, &v)| (i as u32, v))
                            .collect();
                        (alpha, col)
                    })
                    .collect();
                GradedMatrix::new(f, 2, gens, cols).unwrap()
            })
    })
}

/// The small F_2 shapes used by the brute-force oracle.
pub fn small_presentation() -> impl Strategy<Value = GradedMatrix> {
    presentation(4, 3, 3, 2)
}

/// `dim coker(M)` at `x`: generators below `x` minus the rank of the relations below `x`.
pub fn dim_at(m: &GradedMatrix, x: &[i64]) -> usize {
    let rows: Vec<usize> = (0..m.num_rows()).filter(|&i| leq(m.row_degree(i), x)).collect();
    let cols: Vec<usize> = (0..m.num_cols()).filter(|&j| leq(m.col_degree(j), x)).collect();
    let mut a = DenseMatrix::zeros(m.field(), rows.len(), cols.len());
    for (c, &j) in cols.iter().enumerate() {
        for (r, &i) in rows.iter().enumerate() {
            a.set(r, c, m.entry(i, j));
        }
    }
    rows.len() - rank(&a)
}

/// All points of the grid spanned by the coordinates of the degrees of `m`.
pub fn grid_of(m: &GradedMatrix) -> Vec<Vec<i64>> {
    let mut axes = vec![Vec::new(); m.dim()];
    for deg in m.row_degrees().into_iter().chain(m.col_degrees()) {
        for (k, x) in deg.into_iter().enumerate() {
            axes[k].push(x);
        }
    }
    for a in &mut axes {
        a.sort_unstable();
        a.dedup();
    }
    let mut pts = vec![Vec::new()];
    for a in &axes {
        pts = pts.into_iter().flat_map(|p| a.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect();
    }
    pts
}

/// No relation lies in the span of the other relations at or below its degree,
/// and no nonzero entry joins a generator and a relation of the same degree.
pub fn is_minimal(m: &GradedMatrix) -> bool {
    if m.has_equal_degree_entry() {
        return false;
    }
    (0..m.num_cols()).all(|j| {
        let others: Vec<usize> =
            (0..m.num_cols()).filter(|&c| c != j && leq(m.col_degree(c), m.col_degree(j))).collect();
        let dense = m.to_dense();
        let a = dense.select_columns(&others);
        let with = dense.select_columns(&[others.clone(), vec![j]].concat());
        rank(&with) > rank(&a)
    })
}
