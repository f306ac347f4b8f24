use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::halfint::{HalfIntegralMatrix, TKey};
use crate::error::{Error, Result};
use crate::Int;

pub const QEXP_FORMAT: u32 = 1;

/// A truncated Fourier expansion on the box `t_ii ≤ box_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    degree: usize,
    box_bound: u32,
    label: String,
    coeffs: BTreeMap<TKey, Int>,
}

impl QExpansion {
    pub fn new(degree: usize, box_bound: u32, label: impl Into<String>) -> Self {
        Self { degree, box_bound, label: label.into(), coeffs: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn box_bound(&self) -> u32 {
        self.box_bound
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn insert(&mut self, t: &HalfIntegralMatrix, coeff: Int) -> Result<()> {
        if t.degree() != self.degree {
            return Err(Error::Parse(format!("degree {} index in a degree {} expansion", t.degree(), self.degree)));
        }
        if !t.is_positive_semidefinite() {
            return Err(Error::NotSemidefinite(t.to_string()));
        }
        if t.max_diag() > i64::from(self.box_bound) {
            return Err(Error::BoxUnderflow { have: self.box_bound, need: t.max_diag() as u32 });
        }
        self.coeffs.insert(t.canonical_key(), coeff);
        Ok(())
    }

    pub fn insert_key(&mut self, key: TKey, coeff: Int) {
        self.coeffs.insert(key, coeff);
    }

    /// Coefficient at `t`; indices inside the box that were never stored
    /// read as zero.
    pub fn coeff(&self, t: &HalfIntegralMatrix) -> Int {
        self.coeffs.get(&t.canonical_key()).cloned().unwrap_or_else(Int::zero)
    }

    pub fn coeff_by_key(&self, k: &TKey) -> Option<&Int> {
        self.coeffs.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TKey, &Int)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient-wise map, keeping keys and box.
    pub fn map_coeffs(&self, label: impl Into<String>, f: impl Fn(&TKey, &Int) -> Int) -> QExpansion {
        QExpansion {
            degree: self.degree,
            box_bound: self.box_bound,
            label: label.into(),
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), f(k, c))).collect(),
        }
    }

    /// Restriction to the sub-box `t_ii ≤ bound`.
    pub fn restrict(&self, bound: u32) -> QExpansion {
        QExpansion {
            degree: self.degree,
            box_bound: bound.min(self.box_bound),
            label: self.label.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| k.diag().iter().all(|&d| d <= i64::from(bound)))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "degree={};box={};label={};format={}\n",
            self.degree, self.box_bound, self.label, QEXP_FORMAT
        );
        for (k, c) in &self.coeffs {
            let _ = writeln!(s, "{k};{c}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty expansion".into()))?;
        let mut degree = None;
        let mut box_bound = None;
        let mut label = None;
        for field in header.split(';') {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field `{field}`")))?;
            match k {
                "degree" => degree = v.parse().ok(),
                "box" => box_bound = v.parse().ok(),
                "label" => label = Some(v.to_string()),
                "format" if v == QEXP_FORMAT.to_string() => {}
                "format" => return Err(Error::Parse(format!("unsupported format {v}"))),
                _ => return Err(Error::Parse(format!("unknown header field `{k}`"))),
            }
        }
        let (Some(degree), Some(box_bound), Some(label)) = (degree, box_bound, label) else {
            return Err(Error::Parse("incomplete expansion header".into()));
        };
        let mut q = QExpansion::new(degree, box_bound, label);
        for line in lines.filter(|l| !l.is_empty()) {
            let (k, c) = line
                .split_once(';')
                .ok_or_else(|| Error::Parse(format!("bad record `{line}`")))?;
            let key: TKey = k.parse()?;
            let coeff: Int = c.parse().map_err(|_| Error::Parse(format!("bad coefficient `{c}`")))?;
            q.coeffs.insert(key, coeff);
        }
        Ok(q)
    }
}

/// Outcome of comparing two expansions modulo a prime.
#[derive(Clone, Debug, Serialize)]
pub struct CongruenceDiff {
    pub prime: u64,
    pub bound: u32,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub key: String,
    pub left: String,
    pub right: String,
}

impl CongruenceDiff {
    pub fn is_congruent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every index in the box `t_ii ≤ bound` where the two expansions
/// differ modulo `p`.
pub fn qexp_congruent(f1: &QExpansion, f2: &QExpansion, p: u64, bound: u32) -> Result<CongruenceDiff> {
    for f in [f1, f2] {
        if f.box_bound < bound {
            return Err(Error::BoxUnderflow { have: f.box_bound, need: bound });
        }
    }
    let modulus = Int::from(p);
    let inside = |k: &TKey| k.diag().iter().all(|&d| d <= i64::from(bound));
    let keys: std::collections::BTreeSet<&TKey> =
        f1.coeffs.keys().chain(f2.coeffs.keys()).filter(|k| inside(k)).collect();
    let zero = Int::zero();
    let mut violations = Vec::new();
    for k in &keys {
        let a = f1.coeffs.get(*k).unwrap_or(&zero);
        let b = f2.coeffs.get(*k).unwrap_or(&zero);
        if !(a - b).mod_floor(&modulus).is_zero() {
            violations.push(Violation { key: k.to_string(), left: a.to_string(), right: b.to_string() });
        }
    }
    Ok(CongruenceDiff { prime: p, bound, checked: keys.len(), violations })
}

/// Whether `x ≡ 0 (mod m)`.
pub fn divisible(x: &Int, m: u64) -> bool {
    x.mod_floor(&Int::from(m)).is_zero()
}

/// Trial-division factorisation into `(prime, exponent)` pairs, for display.
pub fn factor(x: &Int) -> Vec<(Int, u32)> {
    let mut n = x.abs();
    let mut out = Vec::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    let mut p = Int::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

pub fn format_factored(x: &Int) -> String {
    if x.is_zero() {
        return "0".into();
    }
    factor(x)
        .iter()
        .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("·")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::codec::decode_binary;

    fn sample(label: &str, vals: [i64; 4]) -> QExpansion {
        let mut q = QExpansion::new(2, 1, label);
        let ts = [decode_binary(0, 0, 0), decode_binary(1, 0, 0), decode_binary(1, 1, 1), decode_binary(1, 0, 1)];
        for (t, v) in ts.iter().zip(vals) {
            q.insert(t, Int::from(v)).unwrap();
        }
        q
    }

    #[test]
    fn reflexive_and_table_one_columns() {
        let a = sample("alpha", [1, 1104, 97152, 1022304]);
        let s = sample("S1", [1, 4, 0, 8]);
        assert!(qexp_congruent(&a, &a, 11, 1).unwrap().is_congruent());
        assert!(qexp_congruent(&a, &s, 11, 1).unwrap().is_congruent());
        assert!(!qexp_congruent(&a, &s, 7, 1).unwrap().is_congruent());
    }

    #[test]
    fn box_underflow() {
        let a = sample("alpha", [1, 0, 0, 0]);
        assert!(matches!(qexp_congruent(&a, &a, 11, 2), Err(Error::BoxUnderflow { have: 1, need: 2 })));
    }

    #[test]
    fn text_roundtrip_is_byte_stable() {
        let a = sample("alpha", [1, 1104, 97152, 1022304]);
        let text = a.to_text();
        let b = QExpansion::from_text(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.to_text(), text);
        assert!(text.starts_with("degree=2;box=1;label=alpha;format=1\n"));
    }

    #[test]
    fn factoring() {
        assert_eq!(format_factored(&Int::from(96)), "2^5·3");
        assert_eq!(format_factored(&Int::from(121)), "11^2");
    }

    proptest::proptest! {
        #[test]
        fn congruence_is_an_equivalence(x in proptest::collection::vec(-50i64..50, 4), y in proptest::collection::vec(-50i64..50, 4), z in proptest::collection::vec(-50i64..50, 4)) {
            let (a, b, c) = (sample("a", x.try_into().unwrap()), sample("b", y.try_into().unwrap()), sample("c", z.try_into().unwrap()));
            let ok = |f: &QExpansion, g: &QExpansion| qexp_congruent(f, g, 5, 1).unwrap().is_congruent();
            proptest::prop_assert_eq!(ok(&a, &b), ok(&b, &a));
            if ok(&a, &b) && ok(&b, &c) {
                proptest::prop_assert!(ok(&a, &c));
            }
        }
    }
}
