//! Joint inner-product histograms against a pinned pair of shell vectors.
//!
//! With `v1, v2` fixed in a shell `S`, every `w ∈ S` falls in a class
//! `(⟨w,v1⟩, ⟨w,v2⟩)`. The table stores the class sizes and, for each pair
//! of classes, how many `(w, x)` have each value of `⟨w,x⟩`. Under a
//! pair-transitivity assertion this determines every count of degree ≤ 4
//! whose columns all lie in `S`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{dot, Lane, Packed, LANES};
use crate::error::{Error, Result};

/// Half of each `±` class pair; the self-paired class `(0, 0)` is kept whole.
fn is_positive(c: (i32, i32)) -> bool {
    c.0 > 0 || (c.0 == 0 && c.1 >= 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTable {
    pub norm: u32,
    pub inner: i32,
    pub v1: usize,
    pub v2: usize,
    /// `(a, b, size)` for every class over the whole shell, sorted.
    pub class_sizes: Vec<(i32, i32, u64)>,
    /// Positive classes, in table order.
    pub classes: Vec<(i32, i32)>,
    /// `hist[(p * k + q) * span + (e + norm)]` for class indices `p ≤ q`.
    pub hist: Vec<u64>,
}

impl PairTable {
    /// Pins `v1` to the first shell vector and `v2` to the first vector with
    /// `⟨v1, v2⟩ = inner`; `None` when no such vector exists.
    pub fn build<E: Lane>(packed: &Packed<E>, norm: u32, inner: i32, with_hist: bool) -> Result<Option<Self>> {
        let Some(shell) = packed.shell(norm)? else { return Ok(None) };
        if shell.len == 0 {
            return Ok(None);
        }
        let v1 = 0usize;
        let d1 = shell.dual(v1);
        let Some(v2) = (0..shell.len).find(|&w| dot(shell.coord(w), d1) == inner) else { return Ok(None) };
        Ok(Some(Self::build_pinned(packed, norm, v1, v2, with_hist)?))
    }

    /// Without `with_hist` only the class sizes are filled in.
    pub fn build_pinned<E: Lane>(packed: &Packed<E>, norm: u32, v1: usize, v2: usize, with_hist: bool) -> Result<Self> {
        let shell = packed.shell(norm)?.ok_or(Error::ShellMissing { norm, bound: packed.bound })?;
        let (d1, d2) = (shell.dual(v1), shell.dual(v2));
        let inner = dot(shell.coord(v2), d1);
        let class_of: Vec<(i32, i32)> =
            (0..shell.len).map(|w| (dot(shell.coord(w), d1), dot(shell.coord(w), d2))).collect();
        let mut sizes = BTreeMap::new();
        for &c in &class_of {
            *sizes.entry(c).or_insert(0u64) += 1;
        }
        let classes: Vec<(i32, i32)> = sizes.keys().copied().filter(|&c| is_positive(c)).collect();
        let class_sizes: Vec<(i32, i32, u64)> = sizes.into_iter().map(|((a, b), m)| (a, b, m)).collect();
        if !with_hist {
            return Ok(Self { norm, inner, v1, v2, class_sizes, classes, hist: Vec::new() });
        }
        let k = classes.len();

        // positive-class members, contiguous by class
        let stride = shell.stride;
        let mut starts = vec![0usize; k + 1];
        let mut coords: Vec<E> = Vec::new();
        let mut duals: Vec<E> = Vec::new();
        for (ci, c) in classes.iter().enumerate() {
            for w in (0..shell.len).filter(|&w| class_of[w] == *c) {
                coords.extend_from_slice(shell.coord(w));
                duals.extend_from_slice(shell.dual(w));
            }
            starts[ci + 1] = coords.len() / stride;
        }
        let m = starts[k];
        let class_at: Vec<usize> = (0..k).flat_map(|ci| std::iter::repeat_n(ci, starts[ci + 1] - starts[ci])).collect();

        let span = 2 * norm as usize + 1;
        let shift = norm as i32;
        let size = k * k * span;
        let (rows, cols) = (128usize, 2048usize);
        let hist = (0..m.div_ceil(rows))
            .into_par_iter()
            .map(|task| {
                let mut local = vec![0u64; size];
                let (lo, hi) = (task * rows, ((task + 1) * rows).min(m));
                let first = starts[class_at[lo]];
                for xb in (first..m).step_by(cols) {
                    let xe = (xb + cols).min(m);
                    for w in lo..hi {
                        let p = class_at[w];
                        let dw = &duals[w * stride..(w + 1) * stride];
                        let base = p * k * span;
                        for x in starts[p].max(xb)..xe {
                            let e = dot(&coords[x * stride..(x + 1) * stride], dw) + shift;
                            local[base + class_at[x] * span + e as usize] += 1;
                        }
                    }
                }
                local
            })
            .reduce(
                || vec![0u64; size],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        debug_assert_eq!(stride % LANES, 0);
        Ok(Self { norm, inner, v1, v2, class_sizes, classes, hist })
    }

    pub fn class_size(&self, a: i64, b: i64) -> u64 {
        self.class_sizes
            .binary_search_by(|&(x, y, _)| (x, y).cmp(&(a as i32, b as i32)))
            .map_or(0, |i| self.class_sizes[i].2)
    }

    /// Number of `(w, x)` with `⟨w,v1⟩ = a`, `⟨w,v2⟩ = b`, `⟨x,v1⟩ = c`,
    /// `⟨x,v2⟩ = d` and `⟨w,x⟩ = e`.
    ///
    /// Panics when the table was built without its histogram.
    /// Number of `w` with `⟨w, v1⟩ = a`.
    pub fn first_size(&self, a: i64) -> u64 {
        self.class_sizes.iter().filter(|c| i64::from(c.0) == a).map(|c| c.2).sum()
    }

    pub fn pairs(&self, a: i64, b: i64, c: i64, d: i64, e: i64) -> u64 {
        let (mut a, mut b, mut c, mut d, mut e) = (a, b, c, d, e);
        if !is_positive((a as i32, b as i32)) {
            (a, b, e) = (-a, -b, -e);
        }
        if !is_positive((c as i32, d as i32)) {
            (c, d, e) = (-c, -d, -e);
        }
        assert!(!self.hist.is_empty(), "pair histogram not built");
        let find = |x: i64, y: i64| self.classes.binary_search(&(x as i32, y as i32)).ok();
        let (Some(mut p), Some(mut q)) = (find(a, b), find(c, d)) else { return 0 };
        if p > q {
            std::mem::swap(&mut p, &mut q);
        }
        if e.abs() > i64::from(self.norm) {
            return 0;
        }
        let span = 2 * self.norm as usize + 1;
        let k = self.classes.len();
        self.hist[(p * k + q) * span + (e + i64::from(self.norm)) as usize]
    }
}
