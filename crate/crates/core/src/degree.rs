//! Degrees in Z^d under the product order.

use std::cmp::Ordering;

use thiserror::Error;

pub type Degree = Vec<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("degree dimensions differ: {0} vs {1}")]
pub struct DimensionMismatch(pub usize, pub usize);

#[inline]
pub fn leq(a: &[i64], b: &[i64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Strictly below in the product order.
#[inline]
pub fn lt(a: &[i64], b: &[i64]) -> bool {
    leq(a, b) && a != b
}

pub fn comparable(a: &[i64], b: &[i64]) -> bool {
    leq(a, b) || leq(b, a)
}

/// Componentwise maximum.
pub fn join(a: &[i64], b: &[i64]) -> Degree {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Componentwise minimum.
pub fn meet(a: &[i64], b: &[i64]) -> Degree {
    a.iter().zip(b).map(|(x, y)| *x.min(y)).collect()
}

pub fn try_leq(a: &[i64], b: &[i64]) -> Result<bool, DimensionMismatch> {
    if a.len() != b.len() {
        return Err(DimensionMismatch(a.len(), b.len()));
    }
    Ok(leq(a, b))
}

pub fn try_join(a: &[i64], b: &[i64]) -> Result<Degree, DimensionMismatch> {
    if a.len() != b.len() {
        return Err(DimensionMismatch(a.len(), b.len()));
    }
    Ok(join(a, b))
}

/// Colexicographic order: compare the last coordinate first. It extends the
/// product order.
pub fn colex_cmp(a: &[i64], b: &[i64]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_join() {
        assert!(!comparable(&[0, 1], &[1, 0]));
        assert_eq!(join(&[0, 1], &[1, 0]), vec![1, 1]);
        assert!(leq(&[1, 1], &[2, 2]));
        assert_eq!(join(&[1, 4], &[3, 2]), vec![3, 4]);
        assert!(try_leq(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn colex_extends_product_order() {
        let pts: Vec<Degree> = (0..4).flat_map(|x| (0..4).map(move |y| vec![x, y])).collect();
        for a in &pts {
            for b in &pts {
                if lt(a, b) {
                    assert_eq!(colex_cmp(a, b), Ordering::Less);
                }
            }
        }
    }
}
