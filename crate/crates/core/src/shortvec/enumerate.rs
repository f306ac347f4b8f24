use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::forms::EvenGram;
use crate::lattice::Lattice;
use crate::linalg::{convert, integer_ldl, rational_ldl, ExactInt, IntegerLdl, Matrix, RationalLdl};
use crate::{Int, Rational};

/// Default cap on the number of vectors one enumeration may produce.
pub const DEFAULT_VECTOR_BUDGET: usize = 10_000_000;

/// All vectors of one norm, as a flat row-major array of basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shell {
    rank: usize,
    coords: Vec<i32>,
}

impl Shell {
    pub fn new(rank: usize) -> Self {
        Self { rank, coords: Vec::new() }
    }

    pub fn from_vectors(rank: usize, mut vs: Vec<Vec<i32>>) -> Self {
        vs.sort_unstable();
        vs.dedup();
        Self { rank, coords: vs.into_iter().flatten().collect() }
    }

    pub fn len(&self) -> usize {
        if self.rank == 0 {
            return 0;
        }
        self.coords.len() / self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize) -> &[i32] {
        &self.coords[i * self.rank..(i + 1) * self.rank]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i32]> {
        self.coords.chunks_exact(self.rank.max(1))
    }

    pub fn contains(&self, v: &[i32]) -> bool {
        let n = self.len();
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(v) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }
}

/// Every lattice vector of norm at most `bound`, grouped by norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorList {
    pub label: String,
    pub gram_hash: String,
    pub rank: usize,
    pub bound: u32,
    shells: BTreeMap<u32, Shell>,
}

impl VectorList {
    pub fn from_shells(label: String, gram_hash: String, rank: usize, bound: u32, shells: BTreeMap<u32, Shell>) -> Self {
        Self { label, gram_hash, rank, bound, shells }
    }

    /// Vectors of exactly this norm; empty when the norm does not occur.
    pub fn shell(&self, norm: u32) -> Result<&Shell> {
        if norm > self.bound {
            return Err(Error::ShellMissing { norm, bound: self.bound });
        }
        static EMPTY: std::sync::OnceLock<Shell> = std::sync::OnceLock::new();
        Ok(self.shells.get(&norm).unwrap_or_else(|| EMPTY.get_or_init(|| Shell::new(0))))
    }

    pub fn count(&self, norm: u32) -> usize {
        self.shells.get(&norm).map_or(0, Shell::len)
    }

    pub fn shells(&self) -> &BTreeMap<u32, Shell> {
        &self.shells
    }

    pub fn counts(&self) -> BTreeMap<u32, usize> {
        self.shells.iter().map(|(&n, s)| (n, s.len())).collect()
    }

    pub fn restrict(&self, bound: u32) -> VectorList {
        VectorList {
            label: self.label.clone(),
            gram_hash: self.gram_hash.clone(),
            rank: self.rank,
            bound: bound.min(self.bound),
            shells: self.shells.range(..=bound).map(|(&n, s)| (n, s.clone())).collect(),
        }
    }
}

/// Exact rational `L·D·Lᵀ` of a Gram matrix.
pub fn cholesky_rational(g: &EvenGram) -> Result<RationalLdl<Int>> {
    rational_ldl(&convert::<i64, Int>(g.entries()))
}

/// Integer data for the exact enumeration: the quadratic form scaled by
/// `scale` is `Σ_k weight[k]·y_k²` with `y_k = Σ_{j≥k} upper[k][j]·x_j`.
struct ScaledForm<I> {
    upper: Matrix<I>,
    weight: Vec<I>,
    scale: I,
}

fn scaled_form<I: ExactInt>(ldl: &IntegerLdl<Int>) -> ScaledForm<I> {
    let n = ldl.upper.len();
    let denoms: Vec<Int> = (0..n).map(|k| &ldl.minors[k] * &ldl.minors[k + 1]).collect();
    let scale = denoms.iter().fold(Int::one(), |acc, d| acc.lcm(d));
    let to = |x: &Int| I::from_i128(x.to_i128().expect("checked magnitude")).unwrap();
    ScaledForm {
        upper: ldl.upper.iter().map(|r| r.iter().map(to).collect()).collect(),
        weight: denoms.iter().map(|d| to(&(&scale / d))).collect(),
        scale: to(&scale),
    }
}

/// Depth-first exact Fincke–Pohst; `visit` receives each vector with norm.
fn fincke_pohst<I, F>(form: &ScaledForm<I>, bound: u32, visit: &mut F) -> Result<()>
where
    I: ExactInt + Roots,
    F: FnMut(&[i64], u32) -> Result<()>,
{
    let n = form.upper.len();
    let top = form.scale.clone() * I::from_u32(bound).unwrap();
    let mut x = vec![0i64; n];
    if n == 0 {
        return visit(&x, 0);
    }
    rec(form, n - 1, top.clone(), &top, &mut x, visit)
}

fn rec<I, F>(form: &ScaledForm<I>, k: usize, rem: I, top: &I, x: &mut [i64], visit: &mut F) -> Result<()>
where
    I: ExactInt + Roots,
    F: FnMut(&[i64], u32) -> Result<()>,
{
    let n = x.len();
    let mut s = I::zero();
    for j in k + 1..n {
        if x[j] != 0 {
            s = s + form.upper[k][j].clone() * I::from_i64(x[j]).unwrap();
        }
    }
    let d = form.upper[k][k].clone();
    let w = &form.weight[k];
    let m = (rem.clone() / w.clone()).sqrt();
    // d > 0: x ranges over ceil((-m - s)/d) ..= floor((m - s)/d)
    let lo = (-(m.clone()) - s.clone()).div_ceil(&d);
    let hi = (m - s.clone()).div_floor(&d);
    let (Some(lo), Some(hi)) = (lo.to_i64(), hi.to_i64()) else {
        return Err(Error::BudgetExceeded("coordinate range overflow".into()));
    };
    for xk in lo..=hi {
        let y = d.clone() * I::from_i64(xk).unwrap() + s.clone();
        let r2 = rem.clone() - w.clone() * y.clone() * y;
        if r2.is_negative() {
            continue;
        }
        x[k] = xk;
        if k == 0 {
            let norm = (top.clone() - r2) / form.scale.clone();
            visit(x, norm.to_u32().expect("norm within bound"))?;
        } else {
            rec(form, k - 1, r2, top, x, visit)?;
        }
    }
    x[k] = 0;
    Ok(())
}

/// Runs the exact enumeration in `i128` when the scaled form fits, in
/// arbitrary precision otherwise.
fn enumerate_gram<F>(g: &EvenGram, bound: u32, mut visit: F) -> Result<()>
where
    F: FnMut(&[i64], u32) -> Result<()>,
{
    let ldl = integer_ldl(&convert::<i64, Int>(g.entries()))?;
    let n = g.rank();
    let scale = (0..n).fold(Int::one(), |acc, k| acc.lcm(&(&ldl.minors[k] * &ldl.minors[k + 1])));
    let max_upper = ldl.upper.iter().flatten().map(|v| v.magnitude().clone()).max().unwrap_or_default();
    let headroom = BigInt::one() << 100u32;
    if &scale * Int::from(bound + 1) * Int::from(16) < headroom && Int::from(max_upper) < (BigInt::one() << 40u32) {
        fincke_pohst(&scaled_form::<i128>(&ldl), bound, &mut visit)
    } else {
        let form = ScaledForm {
            weight: (0..n).map(|k| &scale / (&ldl.minors[k] * &ldl.minors[k + 1])).collect(),
            upper: ldl.upper.clone(),
            scale,
        };
        fincke_pohst(&form, bound, &mut visit)
    }
}

/// All vectors of norm ≤ `bound`, with the default vector budget.
pub fn enumerate_short(lat: &Lattice, bound: u32) -> Result<VectorList> {
    enumerate_short_with_budget(lat, bound, DEFAULT_VECTOR_BUDGET)
}

pub fn enumerate_short_with_budget(lat: &Lattice, bound: u32, budget: usize) -> Result<VectorList> {
    let rank = lat.rank();
    let mut found: BTreeMap<u32, Vec<Vec<i32>>> = BTreeMap::new();
    let mut total = 0usize;
    enumerate_gram(&lat.gram, bound, |x, norm| {
        total += 1;
        if total > budget {
            return Err(Error::BudgetExceeded(format!(
                "more than {budget} vectors of norm ≤ {bound} in {}",
                lat.label
            )));
        }
        let v = x
            .iter()
            .map(|&c| i32::try_from(c).map_err(|_| Error::BudgetExceeded("coordinate exceeds i32".into())))
            .collect::<Result<Vec<i32>>>()?;
        found.entry(norm).or_default().push(v);
        Ok(())
    })?;
    let shells = found
        .into_iter()
        .map(|(n, vs)| (n, Shell::from_vectors(rank, vs)))
        .collect();
    Ok(VectorList::from_shells(lat.label.to_string(), lat.gram.hash(), rank, bound, shells))
}

/// Shell sizes only, without storing vectors.
pub fn count_short(g: &EvenGram, bound: u32) -> Result<BTreeMap<u32, u64>> {
    let mut counts = BTreeMap::new();
    enumerate_gram(g, bound, |_, norm| {
        *counts.entry(norm).or_insert(0u64) += 1;
        Ok(())
    })?;
    Ok(counts)
}

/// Product of the pivots of a rational factorisation.
pub fn pivot_product(ldl: &RationalLdl<Int>) -> Rational {
    ldl.pivots.iter().fold(Rational::one(), |acc, p| acc * p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{quaternary_gram, root_gram, Label};

    /// Every integer vector in a box, kept when its norm is small enough.
    fn brute_force(g: &EvenGram, bound: u32, radius: i64) -> BTreeMap<u32, usize> {
        let n = g.rank();
        let mut counts = BTreeMap::new();
        let mut x = vec![-radius; n];
        loop {
            let q = g.norm(&x);
            if q <= i64::from(bound) {
                *counts.entry(q as u32).or_insert(0) += 1;
            }
            let mut i = 0;
            while i < n {
                if x[i] < radius {
                    x[i] += 1;
                    break;
                }
                x[i] = -radius;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        counts
    }

    #[test]
    fn cholesky_examples() {
        let a1 = EvenGram::new(vec![vec![2]]).unwrap();
        assert_eq!(cholesky_rational(&a1).unwrap().pivots, vec![Rational::from_integer(Int::from(2))]);
        let a2 = root_gram('A', 2).unwrap();
        let p = cholesky_rational(&a2).unwrap().pivots;
        assert_eq!(p[1], Rational::new(Int::from(3), Int::from(2)));
        let s1 = quaternary_gram(1);
        let ldl = cholesky_rational(&s1.gram).unwrap();
        assert!(ldl.pivots.iter().all(|p| p > &Rational::from_integer(Int::from(0))));
        assert_eq!(pivot_product(&ldl), Rational::from_integer(Int::from(121)));
    }

    #[test]
    fn matches_brute_force_on_quaternaries() {
        for i in 1..=3 {
            let lat = quaternary_gram(i);
            let got: BTreeMap<u32, usize> = enumerate_short(&lat, 8).unwrap().counts();
            // a radius of 4 covers norm 8 for these forms (min eigenvalue > 1)
            assert_eq!(got, brute_force(&lat.gram, 8, 4), "S{i}");
        }
    }

    #[test]
    fn s1_has_four_minimal_vectors() {
        let v = enumerate_short(&quaternary_gram(1), 2).unwrap();
        assert_eq!(v.count(2), 4);
        assert_eq!(v.count(0), 1);
        let s3 = enumerate_short(&quaternary_gram(3), 2).unwrap();
        assert_eq!(s3.count(2), 0);
    }

    #[test]
    fn shells_are_sorted_and_closed_under_negation() {
        let lat = Lattice::explicit(Label::AdHoc("E8".into()), root_gram('E', 8).unwrap());
        let v = enumerate_short(&lat, 4).unwrap();
        assert_eq!(v.count(2), 240);
        assert_eq!(v.count(4), 2160);
        for shell in v.shells().values() {
            let vs: Vec<&[i32]> = shell.iter().collect();
            assert!(vs.windows(2).all(|w| w[0] < w[1]));
            for x in &vs {
                let neg: Vec<i32> = x.iter().map(|c| -c).collect();
                assert!(shell.contains(&neg));
            }
        }
    }

    #[test]
    fn budget_guard() {
        let lat = Lattice::explicit(Label::AdHoc("E8".into()), root_gram('E', 8).unwrap());
        assert!(matches!(enumerate_short_with_budget(&lat, 4, 100), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn permuted_basis_gives_same_counts() {
        let g = quaternary_gram(2).gram;
        let p = g.permuted(&[2, 0, 3, 1]);
        assert_eq!(count_short(&g, 10).unwrap(), count_short(&p, 10).unwrap());
    }

    #[test]
    fn restrict_drops_outer_shells() {
        let v = enumerate_short(&quaternary_gram(1), 6).unwrap();
        let r = v.restrict(2);
        assert_eq!(r.bound, 2);
        assert!(r.shells().keys().all(|&n| n <= 2));
        assert!(matches!(r.shell(4), Err(Error::ShellMissing { .. })));
    }
}
