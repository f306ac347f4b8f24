//! Exact dense linear algebra over any integer ring.
//!
//! Everything here is generic over [`ExactInt`], so the same routines run on
//! machine integers for the small fixed-size work and on [`BigInt`](crate::Int)
//! where entries can grow (24×24 determinants, Hermite normal forms of scaled
//! generator sets).

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer rings the exact routines accept.
pub trait ExactInt:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
}

impl<T> ExactInt for T where
    T: Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
}

pub type Matrix<I> = Vec<Vec<I>>;

pub fn convert<A: ToPrimitive, B: ExactInt>(m: &[Vec<A>]) -> Matrix<B> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| B::from_i64(x.to_i64().expect("entry fits i64")).unwrap())
                .collect()
        })
        .collect()
}

fn check_square<I>(m: &[Vec<I>]) -> usize {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    n
}

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn det_bareiss<I: ExactInt>(m: &[Vec<I>]) -> I {
    let n = check_square(m);
    if n == 0 {
        return I::one();
    }
    let mut a: Matrix<I> = m.to_vec();
    let mut sign_flip = false;
    let mut prev = I::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return I::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
            a[i][k] = I::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        -d
    } else {
        d
    }
}

/// Fraction-free factorisation of a positive definite symmetric matrix.
///
/// `upper` is the Bareiss upper-triangular factor, `minors[k]` the leading
/// principal minor of size `k` (`minors[0] = 1`). For every integer vector x,
///
/// ```text
/// xᵀ G x = Σ_k (Σ_{j≥k} upper[k][j]·x_j)² / (minors[k]·minors[k+1])
/// ```
#[derive(Debug, Clone)]
pub struct IntegerLdl<I> {
    pub upper: Matrix<I>,
    pub minors: Vec<I>,
}

pub fn integer_ldl<I: ExactInt>(g: &[Vec<I>]) -> Result<IntegerLdl<I>> {
    let n = check_square(g);
    let mut a: Matrix<I> = g.to_vec();
    let mut minors = Vec::with_capacity(n + 1);
    minors.push(I::one());
    let mut prev = I::one();
    for k in 0..n {
        if !a[k][k].is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
        minors.push(prev.clone());
    }
    let mut upper = vec![vec![I::zero(); n]; n];
    for k in 0..n {
        for j in k..n {
            upper[k][j] = a[k][j].clone();
        }
    }
    Ok(IntegerLdl { upper, minors })
}

/// Rational `L·D·Lᵀ` with unit lower-triangular `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalLdl<I: Clone + Integer> {
    pub lower: Vec<Vec<Ratio<I>>>,
    pub pivots: Vec<Ratio<I>>,
}

pub fn rational_ldl<I: ExactInt>(g: &[Vec<I>]) -> Result<RationalLdl<I>> {
    let n = check_square(g);
    let mut a: Vec<Vec<Ratio<I>>> = g
        .iter()
        .map(|r| r.iter().map(|x| Ratio::from_integer(x.clone())).collect())
        .collect();
    let mut lower = vec![vec![Ratio::from_integer(I::zero()); n]; n];
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let p = a[k][k].clone();
        if !p.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        lower[k][k] = Ratio::from_integer(I::one());
        for i in k + 1..n {
            lower[i][k] = a[i][k].clone() / p.clone();
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() - lower[i][k].clone() * a[k][j].clone();
                a[i][j] = v;
            }
        }
        pivots.push(p);
    }
    Ok(RationalLdl { lower, pivots })
}

/// Exact positive-semidefiniteness by symmetric Gaussian elimination.
///
/// A zero pivot is allowed only when the rest of its row is zero as well.
pub fn is_psd<I: ExactInt>(g: &[Vec<I>]) -> bool {
    let n = check_square(g);
    let mut a: Vec<Vec<Ratio<I>>> = g
        .iter()
        .map(|r| r.iter().map(|x| Ratio::from_integer(x.clone())).collect())
        .collect();
    for k in 0..n {
        let p = a[k][k].clone();
        if p.is_negative() {
            return false;
        }
        if p.is_zero() {
            if (k + 1..n).any(|j| !a[k][j].is_zero() || !a[j][k].is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            let f = a[i][k].clone() / p.clone();
            for j in k + 1..n {
                let v = a[i][j].clone() - f.clone() * a[k][j].clone();
                a[i][j] = v;
            }
        }
    }
    true
}

/// Row-style Hermite normal form.
///
/// Returns the nonzero rows of the echelon form: pivots positive, entries
/// above each pivot reduced into `[0, pivot)`. The row space is unchanged.
pub fn hermite_normal_form<I: ExactInt>(rows: &[Vec<I>]) -> Matrix<I> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut a: Matrix<I> = rows.to_vec();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        loop {
            let best = (r..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(best) = best else { break };
            a.swap(r, best);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                for j in c..ncols {
                    let v = a[i][j].clone() - q.clone() * a[r][j].clone();
                    a[i][j] = v;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for j in c..ncols {
                a[r][j] = -a[r][j].clone();
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                for j in c..ncols {
                    let v = a[i][j].clone() - q.clone() * a[r][j].clone();
                    a[i][j] = v;
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

pub fn mat_mul<I: ExactInt>(a: &[Vec<I>], b: &[Vec<I>]) -> Matrix<I> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(I::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn transpose<I: Clone>(a: &[Vec<I>]) -> Matrix<I> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Inverse of a nonsingular integer matrix, as rationals (Gauss–Jordan).
pub fn rational_inverse<I: ExactInt>(m: &[Vec<I>]) -> Option<Vec<Vec<Ratio<I>>>> {
    let n = check_square(m);
    let zero = || Ratio::from_integer(I::zero());
    let mut a: Vec<Vec<Ratio<I>>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<Ratio<I>> = r.iter().map(|x| Ratio::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    Ratio::from_integer(I::one())
                } else {
                    zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = x.clone() / piv.clone();
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let v = a[r][j].clone() - f.clone() * a[c][j].clone();
                    a[r][j] = v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn identity_det_is_one() {
        let id: Matrix<i64> = (0..4).map(|i| (0..4).map(|j| (i == j) as i64).collect()).collect();
        assert_eq!(det_bareiss(&id), 1);
    }

    #[test]
    fn det_handles_zero_leading_pivot() {
        let m = vec![vec![0i64, 1], vec![1, 0]];
        assert_eq!(det_bareiss(&m), -1);
        let m = vec![vec![0i64, 0], vec![1, 0]];
        assert_eq!(det_bareiss(&m), 0);
    }

    #[test]
    fn ldl_of_a2() {
        let g = vec![vec![2i64, -1], vec![-1, 2]];
        let ldl = rational_ldl(&g).unwrap();
        assert_eq!(ldl.pivots, vec![Ratio::from_integer(2), Ratio::new(3, 2)]);
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&[vec![0i64, 0], vec![0, 0]]));
        assert!(is_psd(&[vec![2i64, 2], vec![2, 2]]));
        assert!(!is_psd(&[vec![2i64, 3], vec![3, 2]]));
        assert!(!is_psd(&[vec![0i64, 1], vec![1, 2]]));
    }

    #[test]
    fn hnf_of_small_lattice() {
        let rows = vec![vec![Int::from(2), Int::from(4)], vec![Int::from(3), Int::from(5)]];
        let h = hermite_normal_form(&rows);
        // det is -2, the lattice has index 2 in Z²
        assert_eq!(h, vec![vec![Int::from(1), Int::from(1)], vec![Int::from(0), Int::from(2)]]);
    }

    #[test]
    fn rational_inverse_of_a2() {
        let inv = rational_inverse(&[vec![2i64, -1], vec![-1, 2]]).unwrap();
        assert_eq!(inv[0][0], Ratio::new(2, 3));
        assert_eq!(inv[0][1], Ratio::new(1, 3));
    }

    proptest::proptest! {
        #[test]
        fn bareiss_matches_cofactor(n in 1usize..=4, seed in proptest::collection::vec(-5i64..=5, 16)) {
            let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| seed[i * 4 + j]).collect()).collect();
            proptest::prop_assert_eq!(det_bareiss(&m), cofactor_det(&m));
            let big: Matrix<Int> = convert(&m);
            proptest::prop_assert_eq!(det_bareiss(&big), Int::from(cofactor_det(&m)));
        }

        #[test]
        fn psd_matches_principal_minors(n in 1usize..=4, seed in proptest::collection::vec(-3i64..=3, 16)) {
            // symmetric with a bias towards the psd boundary
            let mut m = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in i..n {
                    let v = if i == j { seed[i * 4 + j].abs() } else { seed[i * 4 + j] };
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            let minors_ok = (1u32..(1 << n)).all(|mask| {
                let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let sub: Vec<Vec<i64>> = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j]).collect()).collect();
                cofactor_det(&sub) >= 0
            });
            proptest::prop_assert_eq!(is_psd(&m), minors_ok);
        }

        #[test]
        fn integer_ldl_reproduces_quadratic_form(x in proptest::collection::vec(-4i64..=4, 4), a in -1i64..=1, b in -1i64..=1) {
            let g = vec![
                vec![4i64, a, 1, 0],
                vec![a, 4, b, 1],
                vec![1, b, 6, 2],
                vec![0, 1, 2, 8],
            ];
            let f = integer_ldl(&g).unwrap();
            let direct: i64 = (0..4).map(|i| (0..4).map(|j| x[i] * g[i][j] * x[j]).sum::<i64>()).sum();
            let mut via = Ratio::from_integer(0i64);
            for k in 0..4 {
                let y: i64 = (k..4).map(|j| f.upper[k][j] * x[j]).sum();
                via += Ratio::new(y * y, f.minors[k] * f.minors[k + 1]);
            }
            proptest::prop_assert_eq!(via, Ratio::from_integer(direct));
        }
    }
}
