use num_traits::ToPrimitive;

use super::golay::{golay_code, GolayKind};
use super::{Construction, Label, Lattice};
use crate::error::{Error, Result};
use crate::forms::EvenGram;
use crate::linalg::{hermite_normal_form, Matrix};
use crate::shortvec::enumerate_short;
use crate::Int;

/// Integer generators of √8·Λ in the Golay-code frame.
///
/// Even vectors: `2c` for code generators `c`, `4(e_0 ± e_j)`. Odd vectors:
/// `(-3, 1, …, 1)`. The lattice consists of `x ≡ m (mod 2)` with
/// `Σx ≡ 4m (mod 8)` and `{i : x_i ≡ a (mod 4)}` a codeword.
fn leech_generators() -> Matrix<i64> {
    let code = golay_code(GolayKind::Binary24);
    let mut rows: Matrix<i64> = code
        .generators()
        .iter()
        .map(|c| c.iter().map(|&b| 2 * i64::from(b)).collect())
        .collect();
    for j in 1..24 {
        let mut plus = vec![0i64; 24];
        plus[0] = 4;
        plus[j] = 4;
        rows.push(plus);
        let mut minus = vec![0i64; 24];
        minus[0] = 4;
        minus[j] = -4;
        rows.push(minus);
    }
    let mut odd = vec![1i64; 24];
    odd[0] = -3;
    rows.push(odd);
    rows
}

fn failure(reason: impl Into<String>) -> Error {
    Error::ConstructionFailure { label: Label::Omega.to_string(), reason: reason.into() }
}

/// The Leech lattice, checked to be even unimodular without roots.
pub fn build_leech() -> Result<Lattice> {
    let gens: Matrix<Int> = leech_generators()
        .into_iter()
        .map(|r| r.into_iter().map(Int::from).collect())
        .collect();
    let basis: Matrix<i64> = hermite_normal_form(&gens)
        .into_iter()
        .map(|r| r.into_iter().map(|x| x.to_i64().expect("small HNF entry")).collect())
        .collect();
    if basis.len() != 24 {
        return Err(failure("generators do not span rank 24"));
    }
    let mut gram = vec![vec![0i64; 24]; 24];
    for i in 0..24 {
        for j in 0..24 {
            let dot: i64 = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
            if dot % 8 != 0 {
                return Err(failure("Gram is not integral"));
            }
            gram[i][j] = dot / 8;
        }
    }
    let gram = EvenGram::new(gram).map_err(|e| failure(e.to_string()))?;
    if gram.det() != Int::from(1) {
        return Err(failure(format!("determinant {}", gram.det())));
    }
    let lattice = Lattice {
        label: Label::Omega,
        gram,
        coxeter: Some(0),
        construction: Construction::Embedded { basis, scale: 8 },
    };
    let roots = enumerate_short(&lattice, 2)?.count(2);
    if roots != 0 {
        return Err(failure(format!("{roots} vectors of norm 2")));
    }
    Ok(lattice)
}
