use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Claim;

pub const REPORT_FORMAT: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grade {
    /// A finite check that implies the claim given the cited external results.
    Proof,
    Evidence,
}

/// Outcome of one check at one index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub key: String,
    pub values: Vec<String>,
    pub ok: bool,
}

impl Verdict {
    pub fn new(check: impl Into<String>, key: impl Into<String>, values: Vec<String>, ok: bool) -> Self {
        Self { check: check.into(), key: key.into(), values, ok }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub format: u32,
    pub claim: String,
    pub prime: u64,
    /// Modulus actually tested; a power of `prime`.
    pub modulus: u64,
    pub weight: u32,
    pub degree: usize,
    pub bound: u32,
    pub grade: Grade,
    pub checked: usize,
    pub violations: Vec<Verdict>,
    pub pass: bool,
    pub caveat: String,
    pub notes: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

impl CongruenceReport {
    pub(crate) fn new(claim: Claim, prime: u64, weight: u32, degree: usize, bound: u32, grade: Grade, caveat: &str) -> Self {
        Self {
            format: REPORT_FORMAT,
            claim: claim.to_string(),
            prime,
            modulus: prime,
            weight,
            degree,
            bound,
            grade,
            checked: 0,
            violations: Vec::new(),
            pass: false,
            caveat: caveat.to_string(),
            notes: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub(crate) fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    pub(crate) fn finish(mut self) -> Self {
        self.checked = self.verdicts.len();
        self.violations = self.verdicts.iter().filter(|v| !v.ok).cloned().collect();
        self.pass = self.checked > 0 && self.violations.is_empty();
        self
    }

    /// Recomputes the summary after verdicts were edited.
    pub fn refresh(self) -> Self {
        self.finish()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "claim {}: {verdict}", self.claim);
        let _ = writeln!(
            s,
            "modulus {} (p = {}), weight {}, degree ≤ {}, box t_ii ≤ {}, grade {:?}",
            self.modulus, self.prime, self.weight, self.degree, self.bound, self.grade
        );
        let _ = writeln!(s, "{} checks, {} violations", self.checked, self.violations.len());
        let mut groups: Vec<(&str, usize, usize)> = Vec::new();
        for v in &self.verdicts {
            match groups.iter_mut().find(|g| g.0 == v.check) {
                Some(g) => {
                    g.1 += 1;
                    g.2 += usize::from(!v.ok);
                }
                None => groups.push((&v.check, 1, usize::from(!v.ok))),
            }
        }
        for (check, n, bad) in groups {
            let _ = writeln!(s, "  {check:<32} {n:>6} checked {bad:>4} failed");
        }
        for v in &self.violations {
            let _ = writeln!(s, "  VIOLATION {} at {}: {}", v.check, v.key, v.values.join(" vs "));
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "caveat: {}", self.caveat);
        s
    }
}
