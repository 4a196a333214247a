//! Dense exact linear algebra over ℚ.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<BigRational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![BigRational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigRational::one();
    }
    m
}

pub fn transpose(m: &Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_vec(m: &Matrix, v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let bt = transpose(b);
    a.iter()
        .map(|row| {
            bt.iter()
                .map(|col| row.iter().zip(col).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect()
}

/// Row-reduces `m` in place to reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (src, dst) = if i < r {
                    let (lo, hi) = m.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = m.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= &f * s;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    rref(&mut m.clone()).len()
}

/// Solves `a · x = b` column by column, where `a` has full column rank.
///
/// `a` may have more rows than columns; the system must then be consistent.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let n = a.first().map_or(0, Vec::len);
    let k = b.first().map_or(0, Vec::len);
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().chain(rb).cloned().collect())
        .collect();
    let pivots = rref(&mut aug);
    let rank = pivots.iter().filter(|&&c| c < n).count();
    if rank < n {
        return Err(Error::RankDeficient { rank, expected: n });
    }
    if pivots.iter().any(|&c| c >= n) {
        return Err(Error::Inconsistent);
    }
    Ok(aug[..n].iter().map(|row| row[n..n + k].to_vec()).collect())
}

pub fn solve_vec(a: &Matrix, v: &[BigRational]) -> Result<Vec<BigRational>> {
    let b: Matrix = v.iter().map(|x| vec![x.clone()]).collect();
    Ok(solve(a, &b)?.into_iter().map(|mut row| row.remove(0)).collect())
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    if a.iter().any(|row| row.len() != a.len()) {
        return Err(Error::Unsupported("inverse of a non-square matrix".into()));
    }
    solve(a, &identity(a.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn inverse_of_two_by_two() {
        let a = m(&[&[1, 1], &[1, -1]]);
        let inv = inverse(&a).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(inv, vec![vec![half.clone(), half.clone()], vec![half.clone(), -half]]);
        assert_eq!(mat_mul(&a, &inv), identity(2));
    }

    #[test]
    fn singular_and_inconsistent() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert!(matches!(inverse(&a), Err(Error::RankDeficient { rank: 1, .. })));
        let tall = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(solve_vec(&tall, &[q(1), q(2), q(3)]).unwrap(), vec![q(1), q(2)]);
        assert_eq!(solve_vec(&tall, &[q(1), q(2), q(4)]), Err(Error::Inconsistent));
    }

    #[test]
    fn rank_counts_pivots() {
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]])), 2);
        assert_eq!(rank(&identity(5)), 5);
    }
}
