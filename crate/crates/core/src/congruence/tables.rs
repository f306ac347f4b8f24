//! Reproduction of the published tables as diffs against stored fixtures.

use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::fixtures::{coefficient_tables, decode_bracket, ozeki_row, COXETER_ROW, FIXTURE_VERSION, OZEKI_ROWS, PUBLISHED};
use super::Lab;
use crate::error::{Error, Result};
use crate::forms::{format_factored, HalfIntegralMatrix};
use crate::lattice::Label;
use crate::Int;

pub const TABLE_IDS: [&str; 6] = ["paper-1", "paper-2", "paper-3", "paper-4", "paper-5", "ozeki-5"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub index: String,
    pub column: String,
    pub computed: String,
    pub expected: String,
    /// `match`, `mismatch` or `anomaly`; anomalies do not count against the verdict.
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub id: String,
    pub caption: String,
    pub citation: String,
    pub fixture_version: u32,
    pub rows: Vec<TableRow>,
    pub pass: bool,
}

impl TableReport {
    fn new(id: &str, caption: &str, citation: &str) -> Self {
        Self {
            id: id.into(),
            caption: caption.into(),
            citation: citation.into(),
            fixture_version: FIXTURE_VERSION,
            rows: Vec::new(),
            pass: false,
        }
    }

    fn push(&mut self, index: &str, column: &str, computed: String, expected: String, anomaly: bool) {
        let status = if anomaly {
            "anomaly"
        } else if computed == expected {
            "match"
        } else {
            "mismatch"
        };
        self.rows.push(TableRow { index: index.into(), column: column.into(), computed, expected, status: status.into() });
    }

    fn finish(mut self) -> Self {
        self.pass = !self.rows.is_empty() && self.rows.iter().all(|r| r.status != "mismatch");
        self
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} ({}): {}", self.id, self.citation, self.caption);
        let w = self.rows.iter().map(|r| r.computed.len().max(r.expected.len())).max().unwrap_or(8).max(8);
        let _ = writeln!(s, "{:<24} {:<8} {:>w$} {:>w$}  status", "index", "column", "computed", "expected");
        for r in &self.rows {
            let _ = writeln!(s, "{:<24} {:<8} {:>w$} {:>w$}  {}", r.index, r.column, r.computed, r.expected, r.status);
        }
        let _ = writeln!(s, "{}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}

/// Recomputes table `id`, optionally only the rows named in `rows`.
pub fn reproduce_table(lab: &Lab, id: &str, rows: Option<&[String]>) -> Result<TableReport> {
    let wanted = |index: &str| rows.is_none_or(|r| r.iter().any(|x| x.trim() == index));
    if id == "paper-3" {
        let mut rep = TableReport::new(id, "Coxeter numbers", PUBLISHED);
        for (label, h) in COXETER_ROW {
            if !wanted(label.name()) {
                continue;
            }
            let e = lab.engine(&label, 2)?;
            let roots = e.vectors().count(2);
            rep.push("h", label.name(), (roots / 24).to_string(), h.to_string(), roots % 24 != 0);
        }
        return Ok(rep.finish());
    }
    if id == "ozeki-5" {
        let mut rep = TableReport::new(id, "Fourier coefficients of degree 4 theta series for the Leech lattice", PUBLISHED);
        let selected: Vec<_> = match rows {
            Some(r) => r
                .iter()
                .map(|x| ozeki_row(x).ok_or_else(|| Error::Parse(format!("unknown row `{x}`"))))
                .collect::<Result<_>>()?,
            None => OZEKI_ROWS.iter().collect(),
        };
        let e = lab.engine(&Label::Omega, 4)?;
        for row in selected {
            let c = e.coefficient(&row.t(), lab.options(), lab.ledger())?;
            let index = format!("{} [{}]", row.id, row.tuple);
            rep.push(&index, "omega", format_factored(&c), format_factored(&row.value()), row.anomaly);
        }
        return Ok(rep.finish());
    }
    let fixture = coefficient_tables()
        .into_iter()
        .find(|t| t.id == id)
        .ok_or_else(|| Error::Parse(format!("unknown table `{id}`; expected one of {}", TABLE_IDS.join(", "))))?;
    let mut rep = TableReport::new(fixture.id, fixture.caption, fixture.citation);
    for label in &fixture.columns {
        lab.engine(label, 2)?;
    }
    for exp in fixture.expected() {
        if !wanted(exp.index) {
            continue;
        }
        let e = lab.engine(&exp.label, 2)?;
        let c = e.coefficient(&decode_bracket(exp.index), lab.options(), lab.ledger())?;
        rep.push(exp.index, exp.label.name(), c.to_string(), exp.value.to_string(), false);
    }
    Ok(rep.finish())
}

/// Agreement of independent counting methods on the Leech lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub index: String,
    /// `(method, value, seconds)` for every method run.
    pub results: Vec<(String, String, f64)>,
    pub agree: bool,
}

impl CrossCheck {
    fn from_runs(index: String, runs: Vec<(String, Int, f64)>) -> Self {
        let agree = runs.windows(2).all(|w| w[0].1 == w[1].1);
        let results = runs.into_iter().map(|(m, v, s)| (m, v.to_string(), s)).collect();
        Self { index, results, agree }
    }
}

fn timed(f: impl FnOnce() -> Result<Int>) -> Result<(Int, f64)> {
    let t = Instant::now();
    let v = f()?;
    Ok((v, t.elapsed().as_secs_f64()))
}

/// Counts one degree-4 Leech row with the pair-orbit and single-pin methods, and a
/// degenerate degree-4 index directly and by both factored methods.
pub fn cross_validate_leech(lab: &Lab, row: &str, with_direct: bool) -> Result<Vec<CrossCheck>> {
    let e = lab.engine(&Label::Omega, 4)?;
    let opts = lab.options();
    let r = ozeki_row(row).ok_or_else(|| Error::Parse(format!("unknown row `{row}`")))?;
    let t = r.t();
    let pair = timed(|| e.pair_factored_count(&t, 4))?;
    let orbit = timed(|| e.orbit_factored_count(&t, 4, opts))?;
    let mut out = vec![CrossCheck::from_runs(
        format!("{} [{}]", r.id, r.tuple),
        vec![("pair-orbit:4".into(), pair.0, pair.1), ("orbit:4".into(), orbit.0, orbit.1)],
    )];
    if with_direct {
        let t0 = HalfIntegralMatrix::new(vec![2, 2, 0, 0], vec![2, 0, 0, 0, 0, 0])?;
        let direct = timed(|| e.representation_count(&t0, opts))?;
        let orbit = timed(|| e.orbit_factored_count(&t0, 4, opts))?;
        let pair = timed(|| e.pair_factored_count(&t0, 4))?;
        out.push(CrossCheck::from_runs(
            t0.canonical_key().to_string(),
            vec![
                ("direct".into(), direct.0, direct.1),
                ("orbit:4".into(), orbit.0, orbit.1),
                ("pair-orbit:4".into(), pair.0, pair.1),
            ],
        ));
    }
    Ok(out)
}
