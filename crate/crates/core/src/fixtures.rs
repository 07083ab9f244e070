//! Small hand-made presentations with known decompositions, used by tests and examples.

use crate::field::Field;
use crate::graded::GradedMatrix;
use crate::interval::IntervalShape;

fn dense(field: Field, rows: &[[i64; 2]], cols: &[[i64; 2]], entries: &[&[i64]]) -> GradedMatrix {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    let cols: Vec<Vec<i64>> = cols.iter().map(|c| c.to_vec()).collect();
    let entries: Vec<Vec<i64>> = entries.iter().map(|r| r.to_vec()).collect();
    GradedMatrix::from_dense(field, &rows, &cols, &entries).expect("fixture is graded")
}

/// Two generators at (0,1) and (1,0) tied by one relation at (2,2). Indecomposable,
/// two dimensional on `[1,2)^2`.
pub fn glued_pair(field: Field) -> GradedMatrix {
    dense(field, &[[0, 1], [1, 0]], &[[2, 2]], &[&[1], &[-1]])
}

/// Over F_2: a free generator at (1,2), a generator at (1,1) killed at (2,2) and a
/// glued pair, joined by four relations. Decomposes into summands of sizes 3x3 and 1x1.
pub fn linked_triple() -> GradedMatrix {
    dense(
        Field::F2,
        &[[0, 1], [1, 0], [1, 1], [1, 2]],
        &[[2, 2], [2, 2], [1, 3], [1, 3]],
        &[&[1, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 1]],
    )
}

/// The three blocks [`linked_triple`] is built from, before its last two
/// relations: the free generator, the generator killed at (2,2), and the glued pair.
pub fn linked_triple_blocks() -> [GradedMatrix; 3] {
    let m = linked_triple();
    [m.submatrix(&[3], &[]), m.submatrix(&[2], &[1]), m.submatrix(&[0, 1], &[0])]
}

/// Over F_2: six generators on the antidiagonal and four relations at (5,5).
/// Decomposes into two summands with three generators and two relations each.
pub fn antidiagonal_six() -> GradedMatrix {
    let rows = [[0, 5], [1, 4], [2, 3], [3, 2], [4, 1], [5, 0]];
    dense(
        Field::F2,
        &rows,
        &[[5, 5]; 4],
        &[&[0, 1, 0, 1], &[1, 0, 1, 0], &[1, 1, 1, 1], &[0, 1, 1, 0], &[1, 1, 0, 1], &[1, 0, 1, 1]],
    )
}

/// Two interval shapes and a degree where morphisms from the first to the second
/// span a two dimensional space, one dimension of which survives at the degree.
pub fn staircase_pair() -> (IntervalShape, IntervalShape, Vec<i64>) {
    let pts = |v: &[[i64; 2]]| v.iter().map(|p| p.to_vec()).collect::<Vec<_>>();
    let source = IntervalShape {
        lower: pts(&[[10, 310], [260, 150], [390, 20]]),
        upper: pts(&[[10, 410], [460, 210], [510, 20]]),
    };
    let target = IntervalShape {
        lower: pts(&[[50, 100], [150, 10]]),
        upper: pts(&[[50, 370], [150, 200], [350, 100], [470, 10]]),
    };
    (source, target, vec![430, 50])
}
