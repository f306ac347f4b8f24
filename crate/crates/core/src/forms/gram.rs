use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{convert, det_bareiss, rational_ldl, Matrix};
use crate::Int;

/// An even, positive definite, symmetric integer Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Matrix<i64>", into = "Matrix<i64>")]
pub struct EvenGram {
    entries: Matrix<i64>,
}

impl EvenGram {
    pub fn new(entries: Matrix<i64>) -> Result<Self> {
        let m = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Parse("Gram matrix must be square".into()));
            }
            if row[i] % 2 != 0 {
                return Err(Error::Parse(format!("diagonal entry {i} is odd")));
            }
            if (0..m).any(|j| entries[j][i] != row[j]) {
                return Err(Error::Parse("Gram matrix must be symmetric".into()));
            }
        }
        let big: Matrix<Int> = convert(&entries);
        rational_ldl(&big)?;
        Ok(Self { entries })
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &Matrix<i64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn det(&self) -> Int {
        det_bareiss(&convert::<i64, Int>(&self.entries))
    }

    pub fn norm(&self, v: &[i64]) -> i64 {
        self.inner(v, v)
    }

    pub fn inner(&self, v: &[i64], w: &[i64]) -> i64 {
        self.entries
            .iter()
            .zip(v)
            .map(|(row, &a)| a * row.iter().zip(w).map(|(&g, &b)| g * b).sum::<i64>())
            .sum()
    }

    /// Hex SHA-256 of the canonical text rendering of the entries.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for row in &self.entries {
            let line = row.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
            h.update(line.as_bytes());
            h.update(b"\n");
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Direct sum of Grams.
    pub fn block_diag(blocks: &[EvenGram]) -> EvenGram {
        let m: usize = blocks.iter().map(EvenGram::rank).sum();
        let mut e = vec![vec![0i64; m]; m];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rank() {
                for j in 0..b.rank() {
                    e[off + i][off + j] = b.get(i, j);
                }
            }
            off += b.rank();
        }
        EvenGram { entries: e }
    }

    /// Reorders the basis: row/column `i` of the result is `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> EvenGram {
        let e = perm
            .iter()
            .map(|&i| perm.iter().map(|&j| self.entries[i][j]).collect())
            .collect();
        EvenGram { entries: e }
    }
}

impl TryFrom<Matrix<i64>> for EvenGram {
    type Error = Error;
    fn try_from(m: Matrix<i64>) -> Result<Self> {
        EvenGram::new(m)
    }
}

impl From<EvenGram> for Matrix<i64> {
    fn from(g: EvenGram) -> Self {
        g.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_indefinite() {
        assert!(EvenGram::new(vec![vec![1]]).is_err());
        assert!(matches!(
            EvenGram::new(vec![vec![2, 3], vec![3, 2]]),
            Err(Error::NotPositiveDefinite)
        ));
        assert!(EvenGram::new(vec![vec![2, 1], vec![0, 2]]).is_err());
    }

    #[test]
    fn hash_depends_on_entries() {
        let a = EvenGram::new(vec![vec![2, -1], vec![-1, 2]]).unwrap();
        let b = EvenGram::new(vec![vec![2, 1], vec![1, 2]]).unwrap();
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
