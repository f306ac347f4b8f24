use std::collections::BTreeSet;

use num_integer::Roots;

use crate::forms::{HalfIntegralMatrix, TKey};

/// Largest `g` with `g² ≤ 4ab`.
fn cs_bound(a: i64, b: i64) -> i64 {
    (4 * a * b).sqrt()
}

fn desc_diagonals(n: usize, bound: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in desc_diagonals(n - 1, bound) {
        let top = rest.last().copied().unwrap_or(bound);
        for d in 0..=top {
            let mut v = rest.clone();
            v.push(d);
            out.push(v);
        }
    }
    out
}

/// Canonical keys of every semidefinite `T` of degree `n` with `t_ii ≤ bound`.
///
/// Diagonals are taken non-increasing and `g_1j ≥ 0` for `j > 1`; every
/// class has such a representative.
pub fn psd_classes(n: usize, bound: u32) -> Vec<TKey> {
    let mut keys = BTreeSet::new();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    for diag in desc_diagonals(n, i64::from(bound)) {
        let ranges: Vec<(i64, i64)> = pairs
            .iter()
            .map(|&(i, j)| {
                let m = cs_bound(diag[i], diag[j]);
                if i == 0 { (0, m) } else { (-m, m) }
            })
            .collect();
        let mut off: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            let t = HalfIntegralMatrix::new(diag.clone(), off.clone()).expect("shape");
            if t.is_positive_semidefinite() {
                keys.insert(t.canonical_key());
            }
            let mut k = 0;
            while k < off.len() && off[k] == ranges[k].1 {
                off[k] = ranges[k].0;
                k += 1;
            }
            if k == off.len() {
                break;
            }
            off[k] += 1;
        }
    }
    keys.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_two_unit_box() {
        let keys: Vec<String> = psd_classes(2, 1).iter().map(|k| k.to_string()).collect();
        assert_eq!(keys.len(), 5);
        for k in ["0,0:0", "1,0:0", "1,1:0", "1,1:1", "1,1:2"] {
            assert!(keys.contains(&k.to_string()), "{k} missing from {keys:?}");
        }
    }

    #[test]
    fn every_small_psd_matrix_is_covered() {
        let keys: BTreeSet<TKey> = psd_classes(3, 1).into_iter().collect();
        let r = -2..=2i64;
        for a in 0..=1 {
            for b in 0..=1 {
                for c in 0..=1 {
                    for g in itertools(&r) {
                        let t = HalfIntegralMatrix::new(vec![a, b, c], g).unwrap();
                        if t.is_positive_semidefinite() {
                            assert!(keys.contains(&t.canonical_key()), "{t}");
                        }
                    }
                }
            }
        }
    }

    fn itertools(r: &std::ops::RangeInclusive<i64>) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for x in r.clone() {
            for y in r.clone() {
                for z in r.clone() {
                    out.push(vec![x, y, z]);
                }
            }
        }
        out
    }
}
