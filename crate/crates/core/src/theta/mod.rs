//! Fourier coefficients of Siegel theta series as representation numbers
//! `#{X : S[X] = 2T}`.

mod aut;
mod boxes;
pub mod kernel;
mod ledger;
mod pair;
mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{HalfIntegralMatrix, QExpansion};
use crate::lattice::{Label, Lattice};
use crate::shortvec::VectorList;
use crate::Int;

pub use aut::aut_order;
pub use boxes::psd_classes;
pub use kernel::Kernel;
pub use ledger::{CountRecord, Ledger, LEDGER_FILE};
pub use pair::PairTable;
pub use search::{column_order, Budget, Checkpoint};

use search::SearchSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Direct,
    /// First column pinned to one vector of a shell assumed to be one orbit.
    Orbit { shell: u32 },
    /// Two columns pinned; the rest read off a [`PairTable`].
    PairOrbit { shell: u32 },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Direct => f.write_str("direct"),
            Method::Orbit { shell } => write!(f, "orbit:{shell}"),
            Method::PairOrbit { shell } => write!(f, "pair-orbit:{shell}"),
        }
    }
}

/// Transitivity assertions, supplied as data rather than derived.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transitivity {
    /// Shells on which the automorphism group acts transitively.
    pub shells: Vec<u32>,
    /// Shells on which the stabiliser of one vector is transitive on each
    /// inner-product class.
    pub pair_shells: Vec<u32>,
}

impl Transitivity {
    pub fn none() -> Self {
        Self::default()
    }

    /// Roots of every Niemeier lattice with roots form one orbit; the
    /// minimal vectors of the Leech lattice form one orbit, and so does each
    /// inner-product class relative to a fixed minimal vector.
    pub fn for_label(label: &Label) -> Self {
        match label {
            Label::Omega => Self { shells: vec![4], pair_shells: vec![4] },
            l if l.is_niemeier() => Self { shells: vec![2], pair_shells: vec![] },
            _ => Self::none(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CountOptions {
    pub partitions: usize,
    pub node_budget: Option<u64>,
    pub checkpoint_dir: Option<PathBuf>,
    /// Recount factored results directly when the direct search is
    /// estimated below this many filter tests (0 disables).
    pub cross_check_limit: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            partitions: rayon::current_num_threads().max(1),
            node_budget: None,
            checkpoint_dir: None,
            cross_check_limit: 0,
        }
    }
}

impl CountOptions {
    pub fn with_partitions(mut self, p: usize) -> Self {
        self.partitions = p.max(1);
        self
    }
}

/// One planned count: `T`, its column order and the method.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTask {
    pub lattice: String,
    pub t: HalfIntegralMatrix,
    pub order: Vec<usize>,
    pub method: Method,
    pub partitions: usize,
}

impl CountTask {
    fn id(&self) -> String {
        let order: Vec<String> = self.order.iter().map(usize::to_string).collect();
        format!("{};{};{};{}", self.lattice, self.t, self.method, order.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct StoredTable {
    gram_hash: String,
    table: PairTable,
}

/// Shells of one lattice packed for counting, plus cached pair tables.
pub struct Engine {
    lattice: Lattice,
    vectors: VectorList,
    kernel: Kernel,
    transitivity: Transitivity,
    tables: Mutex<BTreeMap<(u32, i32), Option<Arc<PairTable>>>>,
    table_dir: Option<PathBuf>,
}

macro_rules! with_packed {
    ($kernel:expr, $p:ident => $body:expr) => {
        match $kernel {
            Kernel::Narrow($p) => $body,
            Kernel::Wide($p) => $body,
        }
    };
}

impl Engine {
    pub fn new(lattice: Lattice, vectors: VectorList) -> Result<Self> {
        if vectors.gram_hash != lattice.gram.hash() {
            return Err(Error::CorruptCache(format!("vector list does not belong to {}", lattice.label)));
        }
        let kernel = Kernel::new(&vectors, &lattice.gram)?;
        let transitivity = Transitivity::for_label(&lattice.label);
        Ok(Self { lattice, vectors, kernel, transitivity, tables: Mutex::new(BTreeMap::new()), table_dir: None })
    }

    pub fn with_transitivity(mut self, t: Transitivity) -> Self {
        self.transitivity = t;
        self
    }

    /// Persists pair tables under `dir` and reuses them across runs.
    pub fn with_table_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.table_dir = Some(dir.into());
        self
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn vectors(&self) -> &VectorList {
        &self.vectors
    }

    pub fn transitivity(&self) -> &Transitivity {
        &self.transitivity
    }

    fn shell_len(&self, norm: u32) -> Result<usize> {
        Ok(self.vectors.shell(norm)?.len())
    }

    fn check_index(&self, t: &HalfIntegralMatrix) -> Result<()> {
        if !t.is_positive_semidefinite() {
            return Err(Error::NotSemidefinite(t.to_string()));
        }
        let need = 2 * t.max_diag();
        if need > i64::from(self.vectors.bound) {
            return Err(Error::ShellMissing { norm: need as u32, bound: self.vectors.bound });
        }
        Ok(())
    }

    pub fn plan(&self, t: &HalfIntegralMatrix, method: Method, partitions: usize) -> Result<CountTask> {
        self.check_index(t)?;
        let order = match method {
            Method::Direct | Method::PairOrbit { .. } => column_order(t, None),
            Method::Orbit { shell } => {
                let first = (0..t.degree())
                    .filter(|&i| 2 * t.diag()[i] == i64::from(shell))
                    .max_by_key(|&i| (0..t.degree()).map(|k| t.doubled(i, k).abs()).sum::<i64>())
                    .ok_or_else(|| Error::Parse(format!("{t} has no column of norm {shell}")))?;
                column_order(t, Some(first))
            }
        };
        Ok(CountTask { lattice: self.lattice.label.to_string(), t: t.clone(), order, method, partitions })
    }

    /// Runs a direct or single-pinned task.
    pub fn execute(&self, task: &CountTask, opts: &CountOptions) -> Result<Int> {
        let (pinned, factor) = match task.method {
            Method::Direct => (false, 1usize),
            Method::Orbit { shell } => {
                if !self.transitivity.shells.contains(&shell) {
                    return Err(Error::AssertionUnverified(format!(
                        "shell {shell} of {} is not declared transitive",
                        self.lattice.label
                    )));
                }
                (true, self.shell_len(shell)?)
            }
            Method::PairOrbit { shell } => return self.pair_factored_count(&task.t, shell),
        };
        let n = task.t.degree();
        let gram: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| task.t.doubled(task.order[i], task.order[j])).collect()).collect();
        let budget = Budget::new(opts.node_budget);
        let ckpt_path = opts.checkpoint_dir.as_ref().map(|d| d.join(checkpoint_name(&task.id())));
        if let Some(d) = &opts.checkpoint_dir {
            std::fs::create_dir_all(d)?;
        }
        let spec = SearchSpec {
            gram,
            pinned,
            partitions: task.partitions,
            budget: &budget,
            checkpoint: ckpt_path.as_deref().map(|p| (p, task.id())),
        };
        let count = with_packed!(&self.kernel, p => search::run(p, &spec)).map_err(|e| match (e, &ckpt_path) {
            (Error::BudgetExceeded(m), Some(p)) => {
                Error::BudgetExceeded(format!("{m}; partial sums kept in {}", p.display()))
            }
            (e, _) => e,
        })?;
        Ok(Int::from(count) * Int::from(factor))
    }

    /// Unfactored count.
    pub fn representation_count(&self, t: &HalfIntegralMatrix, opts: &CountOptions) -> Result<Int> {
        let task = self.plan(t, Method::Direct, opts.partitions)?;
        self.execute(&task, opts)
    }

    /// `|shell| ×` the count with the first column pinned.
    pub fn orbit_factored_count(&self, t: &HalfIntegralMatrix, shell: u32, opts: &CountOptions) -> Result<Int> {
        let task = self.plan(t, Method::Orbit { shell }, opts.partitions)?;
        self.execute(&task, opts)
    }

    /// Pair table for `⟨v1, v2⟩ = inner`, built on first use.
    pub fn pair_table(&self, shell: u32, inner: i32, with_hist: bool) -> Result<Option<Arc<PairTable>>> {
        let key = (shell, inner);
        if let Some(cached) = self.tables.lock().expect("table lock").get(&key) {
            match cached {
                None => return Ok(None),
                Some(t) if !with_hist || !t.hist.is_empty() => return Ok(Some(t.clone())),
                _ => {}
            }
        }
        let file = self
            .table_dir
            .as_ref()
            .map(|d| d.join(format!("{}.pairs{shell}.ip{inner}.json", self.lattice.label)));
        let hash = self.lattice.gram.hash();
        let mut table = None;
        if let Some(f) = file.as_ref().filter(|f| f.exists() && with_hist) {
            let stored: StoredTable = serde_json::from_str(&std::fs::read_to_string(f)?)
                .map_err(|e| Error::CorruptCache(format!("{}: {e}", f.display())))?;
            if stored.gram_hash != hash {
                return Err(Error::CorruptCache(format!("{}: Gram hash mismatch", f.display())));
            }
            table = Some(stored.table);
        }
        if table.is_none() {
            table = with_packed!(&self.kernel, p => PairTable::build(p, shell, inner, with_hist))?;
            if let (Some(t), Some(f), true) = (&table, &file, with_hist) {
                std::fs::create_dir_all(f.parent().expect("table dir"))?;
                let tmp = f.with_extension("tmp");
                std::fs::write(&tmp, serde_json::to_string(&StoredTable { gram_hash: hash, table: t.clone() })?)?;
                std::fs::rename(tmp, f)?;
            }
        }
        let table = table.map(Arc::new);
        self.tables.lock().expect("table lock").insert(key, table.clone());
        Ok(table)
    }

    /// Count of `T` whose nonzero columns all have norm `shell`, from pair
    /// tables.
    pub fn pair_factored_count(&self, t: &HalfIntegralMatrix, shell: u32) -> Result<Int> {
        self.check_index(t)?;
        if !self.transitivity.pair_shells.contains(&shell) {
            return Err(Error::AssertionUnverified(format!(
                "pair classes of shell {shell} of {} are not declared transitive",
                self.lattice.label
            )));
        }
        let t = t.strip_zero_rows();
        let n = t.degree();
        let s = i64::from(shell);
        if t.diag().iter().any(|&d| 2 * d != s) {
            return Err(Error::Parse(format!("{t}: pair factoring needs every column of norm {shell}")));
        }
        let size = Int::from(self.shell_len(shell)?);
        if n == 0 {
            return Ok(Int::from(1));
        }
        if n == 1 || size == Int::from(0) {
            return Ok(size);
        }
        // a pair of columns that are not ± each other
        let Some((i, j)) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| t.doubled(i, j).abs() < s)
            .min_by_key(|&(i, j)| (t.doubled(i, j).abs(), i, j))
        else {
            // every column is ± the first
            return Ok(size);
        };
        let mut perm = vec![i, j];
        perm.extend((0..n).filter(|&k| k != i && k != j));
        let mut signs = vec![1i64; n];
        if t.doubled(i, j) < 0 {
            signs[1] = -1;
        }
        let u = t.transform(&perm, &signs);
        let g = u.doubled(0, 1);
        let g32 = i32::try_from(g).map_err(|_| Error::Parse("inner product out of range".into()))?;
        let Some(table) = self.pair_table(shell, g32, n == 4)? else { return Ok(Int::from(0)) };
        let first = table.first_size(g);
        let rest = match n {
            2 => 1,
            3 => table.class_size(u.doubled(0, 2), u.doubled(1, 2)),
            4 => table.pairs(u.doubled(0, 2), u.doubled(1, 2), u.doubled(0, 3), u.doubled(1, 3), u.doubled(2, 3)),
            _ => return Err(Error::Parse(format!("degree {n} exceeds pair factoring"))),
        };
        Ok(size * Int::from(first) * Int::from(rest))
    }

    /// Method used when none is requested.
    pub fn preferred_method(&self, t: &HalfIntegralMatrix) -> Method {
        let live = t.strip_zero_rows();
        if live.degree() >= 2 {
            if let Some(&s) = self
                .transitivity
                .pair_shells
                .iter()
                .find(|&&s| live.diag().iter().all(|&d| 2 * d == i64::from(s)))
            {
                return Method::PairOrbit { shell: s };
            }
        }
        if live.degree() >= 2 {
            for &s in &self.transitivity.shells {
                if live.diag().iter().any(|&d| 2 * d == i64::from(s)) {
                    return Method::Orbit { shell: s };
                }
            }
        }
        Method::Direct
    }

    /// Rough number of filter tests of a direct search.
    pub fn direct_cost(&self, t: &HalfIntegralMatrix) -> u128 {
        let order = column_order(t, None);
        order
            .iter()
            .take(3)
            .map(|&c| self.vectors.count(2 * t.diag()[c] as u32).max(1) as u128)
            .product()
    }

    /// Counts with the preferred method, recounting directly when that is
    /// cheap enough.
    pub fn count(&self, t: &HalfIntegralMatrix, opts: &CountOptions) -> Result<(Int, Method)> {
        let method = self.preferred_method(t);
        let task = self.plan(t, method, opts.partitions)?;
        let value = self.execute(&task, opts)?;
        if method != Method::Direct && opts.cross_check_limit > 0 && self.direct_cost(t) <= u128::from(opts.cross_check_limit)
        {
            let direct = self.representation_count(t, opts)?;
            if direct != value {
                return Err(Error::AssertionUnverified(format!(
                    "{} at {t}: {method} gives {value}, direct gives {direct}",
                    self.lattice.label
                )));
            }
        }
        Ok((value, method))
    }

    /// Counts `t`, consulting and extending the ledger.
    pub fn coefficient(&self, t: &HalfIntegralMatrix, opts: &CountOptions, ledger: &Ledger) -> Result<Int> {
        let key = t.canonical_key().to_string();
        let name = self.lattice.label.to_string();
        if let Some(r) = ledger.get(&name, &key) {
            return r.coeff();
        }
        let start = Instant::now();
        let (value, method) = self.count(t, opts)?;
        ledger.record(CountRecord {
            lattice: name,
            key,
            coeff: value.to_string(),
            d_t: t.discriminant().to_string(),
            wall_time: start.elapsed().as_secs_f64(),
            method: method.to_string(),
            partitions: opts.partitions,
        })?;
        Ok(value)
    }

    /// Coefficients at every class of the box `t_ii ≤ bound`.
    pub fn theta_block(&self, degree: usize, bound: u32, opts: &CountOptions, ledger: &Ledger) -> Result<QExpansion> {
        let mut f = QExpansion::new(degree, bound, self.lattice.label.to_string());
        for key in psd_classes(degree, bound) {
            let c = self.coefficient(&key.to_matrix(), opts, ledger)?;
            f.insert_key(key, c);
        }
        Ok(f)
    }
}

fn checkpoint_name(id: &str) -> String {
    let clean: String = id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
    format!("{clean}.ckpt.json")
}

/// Reads a table of checkpoints left in `dir`.
pub fn list_checkpoints(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    if dir.exists() {
        for e in std::fs::read_dir(dir)? {
            let p = e?.path();
            if p.to_string_lossy().ends_with(".ckpt.json") {
                out.push(p);
            }
        }
    }
    out.sort();
    Ok(out)
}
