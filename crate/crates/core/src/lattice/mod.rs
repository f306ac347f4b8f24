//! Gram matrices of the lattices under study.
//!
//! The eight Niemeier lattices are identified by their Coxeter numbers:
//! α = D₂₄ (46), δ = A₂₄ (25), ε = D₁₂² (22), ι = D₈³ (14), κ = A₁₂² (13),
//! χ = A₂¹² (3), ψ = A₁²⁴ (2) and the Leech lattice ω (0). The first seven
//! are glued from root lattices; ω is built from the binary Golay code.

pub mod golay;
mod leech;
mod niemeier;
mod quaternary;
pub mod roots;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::EvenGram;
use crate::linalg::Matrix;

pub use golay::{golay_code, GlueCode, GolayKind};
pub use leech::build_leech;
pub use niemeier::{assemble_niemeier, niemeier_glue};
pub use quaternary::quaternary_gram;
pub use roots::{root_gram, RootSystem};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Alpha,
    Delta,
    Epsilon,
    Iota,
    Kappa,
    Chi,
    Psi,
    Omega,
    S1,
    S2,
    S3,
    AdHoc(String),
}

impl Label {
    pub const NIEMEIER: [Label; 8] = [
        Label::Alpha,
        Label::Delta,
        Label::Epsilon,
        Label::Iota,
        Label::Kappa,
        Label::Chi,
        Label::Psi,
        Label::Omega,
    ];

    pub const QUATERNARY: [Label; 3] = [Label::S1, Label::S2, Label::S3];

    pub fn is_niemeier(&self) -> bool {
        Self::NIEMEIER.contains(self)
    }

    pub fn name(&self) -> &str {
        match self {
            Label::Alpha => "alpha",
            Label::Delta => "delta",
            Label::Epsilon => "epsilon",
            Label::Iota => "iota",
            Label::Kappa => "kappa",
            Label::Chi => "chi",
            Label::Psi => "psi",
            Label::Omega => "omega",
            Label::S1 => "S1",
            Label::S2 => "S2",
            Label::S3 => "S3",
            Label::AdHoc(s) => s,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Label {
    type Err = Error;

    /// Accepts the ASCII names, the Greek letters, and `S1`…`S3`.
    fn from_str(s: &str) -> Result<Self> {
        let l = match s {
            "alpha" | "α" => Label::Alpha,
            "delta" | "δ" => Label::Delta,
            "epsilon" | "ε" | "ϵ" => Label::Epsilon,
            "iota" | "ι" => Label::Iota,
            "kappa" | "κ" => Label::Kappa,
            "chi" | "χ" => Label::Chi,
            "psi" | "ψ" => Label::Psi,
            "omega" | "ω" | "leech" => Label::Omega,
            "S1" | "s1" | "S₁" => Label::S1,
            "S2" | "s2" | "S₂" => Label::S2,
            "S3" | "s3" | "S₃" => Label::S3,
            other => return Err(Error::UnknownLabel(other.to_string())),
        };
        Ok(l)
    }
}

/// Coxeter number of a supported Niemeier lattice.
pub fn coxeter_number(label: &Label) -> Result<u32> {
    let h = match label {
        Label::Alpha => 46,
        Label::Delta => 25,
        Label::Epsilon => 22,
        Label::Iota => 14,
        Label::Kappa => 13,
        Label::Chi => 3,
        Label::Psi => 2,
        Label::Omega => 0,
        other => return Err(Error::UnknownLabel(other.to_string())),
    };
    Ok(h)
}

/// How a lattice was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction {
    /// Root lattice components extended by glue words; `basis` rows are
    /// the integral basis in simple-root coordinates, scaled by `denominator`.
    RootGlue {
        components: Vec<RootSystem>,
        glue_generators: Vec<Vec<u8>>,
        basis: Matrix<i64>,
        denominator: i64,
    },
    /// Basis rows in an orthogonal frame; the Gram matrix is `B·Bᵀ / scale`.
    Embedded { basis: Matrix<i64>, scale: i64 },
    /// Gram matrix given directly.
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub label: Label,
    pub gram: EvenGram,
    pub coxeter: Option<u32>,
    pub construction: Construction,
}

impl Lattice {
    pub fn explicit(label: Label, gram: EvenGram) -> Self {
        Self { label, gram, coxeter: None, construction: Construction::Explicit }
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }
}

/// Builds any supported lattice by label.
pub fn build(label: &Label) -> Result<Lattice> {
    match label {
        Label::Omega => build_leech(),
        Label::S1 => Ok(quaternary_gram(1)),
        Label::S2 => Ok(quaternary_gram(2)),
        Label::S3 => Ok(quaternary_gram(3)),
        Label::AdHoc(s) => Err(Error::UnknownLabel(s.clone())),
        l => assemble_niemeier(l),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_parse_both_spellings() {
        assert_eq!("δ".parse::<Label>().unwrap(), Label::Delta);
        assert_eq!("omega".parse::<Label>().unwrap(), Label::Omega);
        assert!(matches!("zeta".parse::<Label>(), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn coxeter_numbers() {
        assert_eq!(coxeter_number(&Label::Delta).unwrap(), 25);
        assert_eq!(coxeter_number(&Label::Omega).unwrap(), 0);
        assert_eq!(coxeter_number(&Label::Kappa).unwrap(), 13);
        assert!(coxeter_number(&Label::S1).is_err());
    }
}
