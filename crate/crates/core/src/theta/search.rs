//! Backtracking over shells: the columns of `X` are chosen one at a time,
//! each drawn from the shell of its prescribed norm and filtered by its
//! inner products with the columns already fixed.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{dot, Lane, Packed};
use crate::error::{Error, Result};
use crate::forms::HalfIntegralMatrix;

/// Column order: descending norm, ties broken towards columns with the
/// largest total off-diagonal weight against the columns already placed.
pub fn column_order(t: &HalfIntegralMatrix, first: Option<usize>) -> Vec<usize> {
    let n = t.degree();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut left: Vec<usize> = (0..n).collect();
    if let Some(f) = first {
        order.push(f);
        left.retain(|&c| c != f);
    }
    while !left.is_empty() {
        let score = |c: usize| {
            let placed: i64 = order.iter().map(|&p| t.doubled(p, c).abs()).sum();
            let all: i64 = (0..n).filter(|&k| k != c).map(|k| t.doubled(k, c).abs()).sum();
            (t.diag()[c], placed, all, std::cmp::Reverse(c))
        };
        let best = *left.iter().max_by_key(|&&c| score(c)).expect("nonempty");
        order.push(best);
        left.retain(|&c| c != best);
    }
    order
}

/// Shared node counter enforcing an optional budget on filter tests.
pub struct Budget {
    used: AtomicU64,
    limit: Option<u64>,
}

impl Budget {
    pub fn new(limit: Option<u64>) -> Self {
        Self { used: AtomicU64::new(0), limit }
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    fn charge(&self, n: u64) -> Result<()> {
        let total = self.used.fetch_add(n, Ordering::Relaxed) + n;
        match self.limit {
            Some(l) if total > l => Err(Error::BudgetExceeded(format!("node budget {l} exhausted"))),
            _ => Ok(()),
        }
    }
}

/// Partial sums per top-level partition, persisted between runs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub task: String,
    pub partitions: usize,
    pub done: BTreeMap<usize, String>,
}

impl Checkpoint {
    pub fn load(path: &Path, task: &str, partitions: usize) -> Result<Self> {
        let fresh = Self { task: task.to_string(), partitions, done: BTreeMap::new() };
        if !path.exists() {
            return Ok(fresh);
        }
        let cp: Checkpoint = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if cp.task != task || cp.partitions != partitions {
            return Ok(fresh);
        }
        Ok(cp)
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(self)?)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }
}

struct Search<'a> {
    stride: usize,
    gram: Vec<Vec<i32>>,
    budget: &'a Budget,
}

/// Candidates of one column: packed coordinates and `G·c` rows.
#[derive(Clone, Copy)]
struct View<'a, E> {
    coords: &'a [E],
    dual: &'a [E],
}

impl Search<'_> {
    fn len<E: Lane>(&self, v: &View<'_, E>) -> usize {
        v.coords.len() / self.stride
    }

    fn rec<E: Lane>(&self, j: usize, cands: &[View<'_, E>]) -> Result<u128> {
        let n = self.gram.len();
        let st = self.stride;
        if j + 1 == n {
            return Ok(self.len(&cands[0]) as u128);
        }
        let mut total = 0u128;
        if j + 2 == n {
            // every row meets the same last list: tile for cache reuse
            let g = self.gram[j][j + 1];
            let (rows, cols) = (64 * st, 2048 * st);
            for vb in cands[0].dual.chunks(rows) {
                for wb in cands[1].coords.chunks(cols) {
                    for dv in vb.chunks_exact(st) {
                        total += wb.chunks_exact(st).filter(|w| dot(w, dv) == g).count() as u128;
                    }
                    self.budget.charge(((vb.len() / st) * (wb.len() / st)) as u64)?;
                }
            }
            return Ok(total);
        }
        let (rows, cols) = (64usize, 2048 * st);
        let lists = n - j - 1;
        for vb in cands[0].dual.chunks(rows * st) {
            let nrows = vb.len() / st;
            // surviving candidate indices per row and list
            let mut hits: Vec<Vec<Vec<u32>>> = vec![Vec::with_capacity(lists); nrows];
            let mut alive = vec![true; nrows];
            for (off, list) in cands[1..].iter().enumerate() {
                let g = self.gram[j][j + 1 + off];
                for h in hits.iter_mut() {
                    h.push(Vec::new());
                }
                let mut nodes = 0u64;
                for (b, wb) in list.coords.chunks(cols).enumerate() {
                    let base = (b * 2048) as u32;
                    for (r, dv) in vb.chunks_exact(st).enumerate() {
                        if !alive[r] {
                            continue;
                        }
                        nodes += (wb.len() / st) as u64;
                        let h = &mut hits[r][off];
                        for (i, w) in wb.chunks_exact(st).enumerate() {
                            if dot(w, dv) == g {
                                h.push(base + i as u32);
                            }
                        }
                    }
                }
                self.budget.charge(nodes)?;
                for (r, h) in hits.iter().enumerate() {
                    alive[r] &= !h[off].is_empty();
                }
                if !alive.iter().any(|&a| a) {
                    break;
                }
            }
            for (r, h) in hits.iter().enumerate() {
                if !alive[r] || h.len() != lists {
                    continue;
                }
                let bufs: Vec<(Vec<E>, Vec<E>)> = h
                    .iter()
                    .zip(&cands[1..])
                    .map(|(idx, list)| {
                        let mut c = Vec::with_capacity(idx.len() * st);
                        let mut d = Vec::with_capacity(idx.len() * st);
                        for &i in idx {
                            let i = i as usize * st;
                            c.extend_from_slice(&list.coords[i..i + st]);
                            d.extend_from_slice(&list.dual[i..i + st]);
                        }
                        (c, d)
                    })
                    .collect();
                let views: Vec<View<'_, E>> = bufs.iter().map(|(c, d)| View { coords: c, dual: d }).collect();
                total += self.rec(j + 1, &views)?;
            }
        }
        Ok(total)
    }
}

/// Inputs of one backtracking run, with columns already in search order.
pub struct SearchSpec<'a> {
    /// `2T` in search order.
    pub gram: Vec<Vec<i64>>,
    /// Restricts the first column to its first shell vector (orbit pinning).
    pub pinned: bool,
    pub partitions: usize,
    pub budget: &'a Budget,
    pub checkpoint: Option<(&'a Path, String)>,
}

/// Counts tuples of shell vectors with the prescribed Gram matrix.
pub fn run<E: Lane>(packed: &Packed<E>, spec: &SearchSpec<'_>) -> Result<u128> {
    // a norm-0 column is the zero vector
    let live: Vec<usize> = (0..spec.gram.len()).filter(|&k| spec.gram[k][k] != 0).collect();
    if live.len() < spec.gram.len() {
        let n = spec.gram.len();
        if (0..n).any(|k| spec.gram[k][k] == 0 && (0..n).any(|j| spec.gram[k][j] != 0)) {
            return Ok(0);
        }
        if spec.pinned && live.first() != Some(&0) {
            return Err(Error::Parse("pinned column has norm 0".into()));
        }
        let gram = live.iter().map(|&i| live.iter().map(|&j| spec.gram[i][j]).collect()).collect();
        let sub = SearchSpec { gram, pinned: spec.pinned, partitions: spec.partitions, budget: spec.budget, checkpoint: spec.checkpoint.clone() };
        return run(packed, &sub);
    }
    let n = spec.gram.len();
    if n == 0 {
        return Ok(1);
    }
    let mut shells = Vec::with_capacity(n);
    for k in 0..n {
        let norm = u32::try_from(spec.gram[k][k]).map_err(|_| Error::NotSemidefinite("negative diagonal".into()))?;
        match packed.shell(norm)? {
            Some(s) if s.len > 0 => shells.push(s),
            _ => return Ok(0),
        }
    }
    let mut gram = vec![vec![0i32; n]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = i32::try_from(spec.gram[i][j]).map_err(|_| Error::Parse("2T entry out of range".into()))?;
        }
    }
    let st = packed.stride;
    let all: Vec<View<'_, E>> = shells.iter().map(|s| View { coords: &s.coords, dual: &s.dual }).collect();
    let top_len = if spec.pinned { 1 } else { shells[0].len };
    let search = Search { stride: st, gram, budget: spec.budget };

    let parts = spec.partitions.max(1);
    let chunk = |p: usize| {
        let lo = p * top_len / parts * st;
        let hi = (p + 1) * top_len / parts * st;
        View { coords: &all[0].coords[lo..hi], dual: &all[0].dual[lo..hi] }
    };
    let mut cp = match &spec.checkpoint {
        Some((path, task)) => Checkpoint::load(path, task, parts)?,
        None => Checkpoint::default(),
    };
    let todo: Vec<usize> = (0..parts).filter(|p| !cp.done.contains_key(p)).collect();
    let shared = Mutex::new(&mut cp);
    let results: Vec<Result<()>> = todo
        .par_iter()
        .map(|&p| {
            let mut cands = Vec::with_capacity(n);
            cands.push(chunk(p));
            cands.extend(all[1..].iter().copied());
            let c = search.rec(0, &cands)?;
            let mut guard = shared.lock().expect("checkpoint lock");
            guard.done.insert(p, c.to_string());
            if let Some((path, _)) = &spec.checkpoint {
                guard.store(path)?;
            }
            Ok(())
        })
        .collect();
    for r in results {
        r?;
    }
    cp.done
        .values()
        .map(|s| s.parse::<u128>().map_err(|_| Error::CorruptCache("checkpoint partial sum".into())))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_puts_largest_norm_first() {
        let t = HalfIntegralMatrix::new(vec![1, 2, 0], vec![1, 0, 0]).unwrap();
        assert_eq!(column_order(&t, None), vec![1, 0, 2]);
        assert_eq!(column_order(&t, Some(0))[0], 0);
    }

    #[test]
    fn checkpoint_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let mut cp = Checkpoint::load(&path, "task", 4).unwrap();
        cp.done.insert(2, "17".into());
        cp.store(&path).unwrap();
        assert_eq!(Checkpoint::load(&path, "task", 4).unwrap(), cp);
        assert!(Checkpoint::load(&path, "other", 4).unwrap().done.is_empty());
    }
}
