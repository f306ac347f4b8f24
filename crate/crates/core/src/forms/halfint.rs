use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, is_psd, Matrix};
use crate::Int;

/// Largest supported degree of a Fourier index.
pub const MAX_DEGREE: usize = 4;

/// Position of `(i, j)`, `i < j`, in the row-major upper triangle.
pub(crate) fn off_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// A half-integral symmetric matrix `T` (integer diagonal, off-diagonal in ½ℤ).
///
/// Off-diagonal entries are stored doubled (`g_ij = 2 t_ij`) in row-major
/// upper-triangle order `(1,2), (1,3), …, (1,n), (2,3), …`, so `2T` is the
/// integer matrix with diagonal `2 t_ii` and off-diagonal `g_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfIntegralMatrix {
    diag: Vec<i64>,
    off: Vec<i64>,
}

impl HalfIntegralMatrix {
    pub fn new(diag: Vec<i64>, doubled_off: Vec<i64>) -> Result<Self> {
        let n = diag.len();
        if n > MAX_DEGREE {
            return Err(Error::Parse(format!("degree {n} exceeds {MAX_DEGREE}")));
        }
        if doubled_off.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::Parse(format!(
                "degree {n} needs {} off-diagonal entries, got {}",
                n * n.saturating_sub(1) / 2,
                doubled_off.len()
            )));
        }
        Ok(Self { diag, off: doubled_off })
    }

    pub fn zero(n: usize) -> Self {
        Self { diag: vec![0; n], off: vec![0; n * n.saturating_sub(1) / 2] }
    }

    /// Builds `T` from its doubled matrix `2T`; the diagonal must be even.
    pub fn from_even_matrix(m: &[Vec<i64>]) -> Result<Self> {
        let n = m.len();
        let mut diag = Vec::with_capacity(n);
        let mut off = Vec::new();
        for i in 0..n {
            if m[i].len() != n || m[i][i] % 2 != 0 {
                return Err(Error::Parse("2T must be square with even diagonal".into()));
            }
            diag.push(m[i][i] / 2);
            for j in i + 1..n {
                if m[i][j] != m[j][i] {
                    return Err(Error::Parse("2T must be symmetric".into()));
                }
                off.push(m[i][j]);
            }
        }
        Self::new(diag, off)
    }

    pub fn degree(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[i64] {
        &self.diag
    }

    pub fn doubled_off(&self) -> &[i64] {
        &self.off
    }

    /// Entry `(i, j)` of `2T`.
    pub fn doubled(&self, i: usize, j: usize) -> i64 {
        match i.cmp(&j) {
            Ordering::Equal => 2 * self.diag[i],
            Ordering::Less => self.off[off_index(self.degree(), i, j)],
            Ordering::Greater => self.off[off_index(self.degree(), j, i)],
        }
    }

    pub fn even_matrix(&self) -> Matrix<i64> {
        let n = self.degree();
        (0..n).map(|i| (0..n).map(|j| self.doubled(i, j)).collect()).collect()
    }

    /// `d_T = det(2T)`.
    pub fn discriminant(&self) -> Int {
        let m: Matrix<Int> = self
            .even_matrix()
            .into_iter()
            .map(|r| r.into_iter().map(Int::from).collect())
            .collect();
        det_bareiss(&m)
    }

    pub fn is_positive_semidefinite(&self) -> bool {
        let m: Matrix<i128> = self
            .even_matrix()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        is_psd(&m)
    }

    pub fn max_diag(&self) -> i64 {
        self.diag.iter().copied().max().unwrap_or(0)
    }

    /// Applies the signed permutation `x_i ↦ signs[i]·x_{perm[i]}`: the
    /// result has entry `(i, j)` equal to `signs[i]·signs[j]·T[perm[i]][perm[j]]`.
    pub fn transform(&self, perm: &[usize], signs: &[i64]) -> Self {
        let n = self.degree();
        let diag = perm.iter().map(|&p| self.diag[p]).collect();
        let mut off = Vec::with_capacity(self.off.len());
        for i in 0..n {
            for j in i + 1..n {
                off.push(signs[i] * signs[j] * self.doubled(perm[i], perm[j]));
            }
        }
        Self { diag, off }
    }

    /// Drops the rows and columns whose diagonal entry is zero.
    ///
    /// For a semidefinite `T` those rows vanish entirely, and the
    /// representation number is unchanged by removing them.
    pub fn strip_zero_rows(&self) -> Self {
        let keep: Vec<usize> = (0..self.degree()).filter(|&i| self.diag[i] != 0).collect();
        let diag = keep.iter().map(|&i| self.diag[i]).collect();
        let mut off = Vec::new();
        for (a, &i) in keep.iter().enumerate() {
            for &j in &keep[a + 1..] {
                off.push(self.doubled(i, j));
            }
        }
        Self { diag, off }
    }

    /// Embeds into a larger degree by appending zero rows.
    pub fn pad_to(&self, n: usize) -> Self {
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..self.degree() {
            for j in 0..self.degree() {
                m[i][j] = self.doubled(i, j);
            }
        }
        Self::from_even_matrix(&m).expect("padding preserves shape")
    }

    pub fn canonical_key(&self) -> TKey {
        canonical_key(self)
    }
}

impl fmt::Display for HalfIntegralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.diag, &self.off)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, diag: &[i64], off: &[i64]) -> fmt::Result {
    let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    write!(f, "{}:{}", join(diag), join(off))
}

/// Canonical representative of a signed-permutation class of `T`.
///
/// The key is the lexicographically largest `(diag, off)` tuple over all
/// simultaneous signed permutations, so diagonals come out non-increasing
/// and off-diagonals as positive as the class allows. Keys order by degree
/// first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TKey {
    degree: usize,
    diag: Vec<i64>,
    off: Vec<i64>,
}

impl TKey {
    pub fn to_matrix(&self) -> HalfIntegralMatrix {
        HalfIntegralMatrix { diag: self.diag.clone(), off: self.off.clone() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn diag(&self) -> &[i64] {
        &self.diag
    }

    pub fn doubled_off(&self) -> &[i64] {
        &self.off
    }
}

impl fmt::Display for TKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.diag, &self.off)
    }
}

impl FromStr for TKey {
    type Err = Error;

    /// Parses `d1,…,dn:g12,g13,…` and canonicalises it.
    fn from_str(s: &str) -> Result<Self> {
        let (d, o) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("key `{s}` lacks ':'")))?;
        let t = HalfIntegralMatrix::new(parse_ints(d)?, parse_ints(o)?)?;
        Ok(canonical_key(&t))
    }
}

pub(crate) fn parse_ints(s: &str) -> Result<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("`{x}`: {e}")))
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Sign choice maximising the off-diagonal tuple of an already permuted
/// matrix, entry by entry in row-major order.
///
/// Signs are tracked as components with a relative parity; a nonzero entry
/// between two components merges them with the parity that makes it
/// positive, and every earlier entry between them was zero.
fn best_signs(n: usize, entry: impl Fn(usize, usize) -> i64) -> [i64; MAX_DEGREE] {
    let mut comp: [usize; MAX_DEGREE] = [0, 1, 2, 3];
    let mut parity: [i64; MAX_DEGREE] = [1; MAX_DEGREE];
    for i in 0..n {
        for j in i + 1..n {
            let g = entry(i, j);
            if g == 0 || comp[i] == comp[j] {
                continue;
            }
            // flip j's component so that parity[i]*parity[j]*g > 0
            let want = if parity[i] * g > 0 { 1 } else { -1 };
            let (cj, flip) = (comp[j], want * parity[j]);
            let ci = comp[i];
            for k in 0..n {
                if comp[k] == cj {
                    comp[k] = ci;
                    parity[k] *= flip;
                }
            }
        }
    }
    // the component of index 0 keeps sign +1; others are free and positive
    parity
}

pub fn canonical_key(t: &HalfIntegralMatrix) -> TKey {
    let n = t.degree();
    let mut best: Option<(Vec<i64>, Vec<i64>)> = None;
    let mut sorted = t.diag.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    for perm in permutations(n) {
        if perm.iter().map(|&p| t.diag[p]).ne(sorted.iter().copied()) {
            continue;
        }
        let signs = best_signs(n, |i, j| t.doubled(perm[i], perm[j]));
        let cand = t.transform(&perm, &signs[..n]);
        let better = match &best {
            None => true,
            Some((_, off)) => cand.off > *off,
        };
        if better {
            best = Some((cand.diag, cand.off));
        }
    }
    let (diag, off) = best.unwrap_or_default();
    TKey { degree: n, diag, off }
}

/// Number of distinct matrices in the signed-permutation class of `t`.
pub fn class_size(t: &HalfIntegralMatrix) -> usize {
    let n = t.degree();
    let mut seen = std::collections::HashSet::new();
    for perm in permutations(n) {
        for mask in 0..(1u32 << n) {
            let signs: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            seen.insert(t.transform(&perm, &signs));
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_key(t: &HalfIntegralMatrix) -> (Vec<i64>, Vec<i64>) {
        let n = t.degree();
        let mut best: Option<(Vec<i64>, Vec<i64>)> = None;
        for perm in permutations(n) {
            for mask in 0..(1u32 << n) {
                let signs: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                let c = t.transform(&perm, &signs);
                let cand = (c.diag, c.off);
                if best.as_ref().is_none_or(|b| cand > *b) {
                    best = Some(cand);
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn discriminant_of_zero_is_zero() {
        assert_eq!(HalfIntegralMatrix::zero(4).discriminant(), Int::from(0));
    }

    #[test]
    fn psd_examples() {
        assert!(HalfIntegralMatrix::zero(3).is_positive_semidefinite());
        assert!(HalfIntegralMatrix::new(vec![1, 1], vec![2]).unwrap().is_positive_semidefinite());
        let bad = HalfIntegralMatrix::new(vec![1, 1], vec![3]).unwrap();
        assert_eq!(bad.discriminant(), Int::from(-5));
        assert!(!bad.is_positive_semidefinite());
    }

    #[test]
    fn keys_identify_permutations_and_signs() {
        let a = HalfIntegralMatrix::new(vec![1, 0], vec![0]).unwrap();
        let b = HalfIntegralMatrix::new(vec![0, 1], vec![0]).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
        let c = HalfIntegralMatrix::new(vec![1, 1], vec![1]).unwrap();
        let d = HalfIntegralMatrix::new(vec![1, 1], vec![-1]).unwrap();
        assert_eq!(c.canonical_key(), d.canonical_key());
    }

    #[test]
    fn key_roundtrips_through_text() {
        let t = HalfIntegralMatrix::new(vec![2, 1, 2], vec![-1, 2, 0]).unwrap();
        let k = t.canonical_key();
        let back: TKey = k.to_string().parse().unwrap();
        assert_eq!(k, back);
    }

    #[test]
    fn strip_and_pad() {
        let t = HalfIntegralMatrix::new(vec![1, 0, 1], vec![0, 1, 0]).unwrap();
        let s = t.strip_zero_rows();
        assert_eq!(s.diag(), &[1, 1]);
        assert_eq!(s.doubled_off(), &[1]);
        assert_eq!(s.pad_to(3).strip_zero_rows(), s);
    }

    proptest::proptest! {
        #[test]
        fn greedy_key_matches_brute_force(n in 1usize..=4, d in proptest::collection::vec(0i64..=2, 4), g in proptest::collection::vec(-4i64..=4, 6)) {
            let t = HalfIntegralMatrix::new(d[..n].to_vec(), g[..n * (n - 1) / 2].to_vec()).unwrap();
            let k = t.canonical_key();
            let (bd, bo) = brute_key(&t);
            proptest::prop_assert_eq!(k.diag(), &bd[..]);
            proptest::prop_assert_eq!(k.doubled_off(), &bo[..]);
        }

        #[test]
        fn discriminant_invariant_on_class(d in proptest::collection::vec(0i64..=2, 4), g in proptest::collection::vec(-4i64..=4, 6), mask in 0u32..16, p in 0usize..24) {
            let t = HalfIntegralMatrix::new(d.clone(), g.clone()).unwrap();
            let perm = permutations(4)[p].clone();
            let signs: Vec<i64> = (0..4).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let u = t.transform(&perm, &signs);
            proptest::prop_assert_eq!(t.discriminant(), u.discriminant());
            proptest::prop_assert_eq!(t.canonical_key(), u.canonical_key());
        }
    }
}
