//! Append-only record of computed coefficients (`counts.jsonl`).

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Int;

pub const LEDGER_FILE: &str = "counts.jsonl";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub lattice: String,
    pub key: String,
    /// Decimal string; coefficients exceed 64 bits.
    pub coeff: String,
    #[serde(rename = "d_T")]
    pub d_t: String,
    pub wall_time: f64,
    pub method: String,
    pub partitions: usize,
}

impl CountRecord {
    pub fn coeff(&self) -> Result<Int> {
        self.coeff.parse().map_err(|_| Error::CorruptCache(format!("ledger coefficient `{}`", self.coeff)))
    }
}

/// In-memory index over a ledger file; with no path it only lives in memory.
#[derive(Debug, Default)]
pub struct Ledger {
    path: Option<PathBuf>,
    entries: Mutex<BTreeMap<(String, String), CountRecord>>,
}

impl Ledger {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn open(path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let mut entries = BTreeMap::new();
        if path.exists() {
            let f = std::fs::File::open(&path)?;
            for (no, line) in BufReader::new(f).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let r: CountRecord = serde_json::from_str(&line)
                    .map_err(|e| Error::CorruptCache(format!("{}:{}: {e}", path.display(), no + 1)))?;
                entries.insert((r.lattice.clone(), r.key.clone()), r);
            }
        } else if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        Ok(Self { path: Some(path), entries: Mutex::new(entries) })
    }

    pub fn in_dir(dir: &Path) -> Result<Self> {
        Self::open(dir.join(LEDGER_FILE))
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn get(&self, lattice: &str, key: &str) -> Option<CountRecord> {
        self.entries.lock().expect("ledger lock").get(&(lattice.to_string(), key.to_string())).cloned()
    }

    /// Records a count; an existing entry for the same class is kept.
    pub fn record(&self, r: CountRecord) -> Result<()> {
        let mut entries = self.entries.lock().expect("ledger lock");
        let k = (r.lattice.clone(), r.key.clone());
        if let Some(old) = entries.get(&k) {
            if old.coeff != r.coeff {
                return Err(Error::CorruptCache(format!(
                    "{} {}: ledger has {} but recount gives {}",
                    r.lattice, r.key, old.coeff, r.coeff
                )));
            }
            return Ok(());
        }
        if let Some(path) = &self.path {
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            writeln!(f, "{}", serde_json::to_string(&r)?)?;
        }
        entries.insert(k, r);
        Ok(())
    }

    pub fn records(&self) -> Vec<CountRecord> {
        self.entries.lock().expect("ledger lock").values().cloned().collect()
    }

    /// Overwrites a coefficient in memory only (fault-injection hook).
    pub fn tamper(&self, lattice: &str, key: &str, coeff: Int) -> bool {
        let mut entries = self.entries.lock().expect("ledger lock");
        match entries.get_mut(&(lattice.to_string(), key.to_string())) {
            Some(r) => {
                r.coeff = coeff.to_string();
                true
            }
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(coeff: &str) -> CountRecord {
        CountRecord {
            lattice: "S1".into(),
            key: "1,1:0".into(),
            coeff: coeff.into(),
            d_t: "4".into(),
            wall_time: 0.0,
            method: "direct".into(),
            partitions: 1,
        }
    }

    #[test]
    fn reopen_sees_records() {
        let dir = tempfile::tempdir().unwrap();
        let l = Ledger::in_dir(dir.path()).unwrap();
        l.record(rec("8")).unwrap();
        l.record(rec("8")).unwrap();
        assert!(l.record(rec("9")).is_err());
        let again = Ledger::in_dir(dir.path()).unwrap();
        assert_eq!(again.get("S1", "1,1:0").unwrap().coeff, "8");
        let text = std::fs::read_to_string(dir.path().join(LEDGER_FILE)).unwrap();
        assert_eq!(text.lines().count(), 1);
    }
}
