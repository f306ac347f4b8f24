use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::golay::{golay_code, GlueCode, GolayKind};
use super::roots::RootSystem;
use super::{coxeter_number, Construction, Label, Lattice};
use crate::error::{Error, Result};
use crate::forms::EvenGram;
use crate::linalg::{hermite_normal_form, mat_mul, transpose, Matrix};
use crate::shortvec::enumerate_short;
use crate::{Int, SmallRational};

/// Root components and glue code of a Niemeier lattice with roots.
pub fn niemeier_glue(label: &Label) -> Result<GlueCode> {
    use RootSystem::{A, D};
    let code = match label {
        Label::Alpha => GlueCode::generated(vec![D(24)], vec![vec![1]]),
        Label::Delta => GlueCode::generated(vec![A(24)], vec![vec![5]]),
        Label::Epsilon => GlueCode::generated(vec![D(12); 2], vec![vec![1, 2], vec![2, 1]]),
        Label::Iota => GlueCode::generated(
            vec![D(8); 3],
            vec![vec![1, 2, 2], vec![2, 1, 2], vec![2, 2, 1]],
        ),
        Label::Kappa => GlueCode::generated(vec![A(12); 2], vec![vec![1, 5]]),
        Label::Chi => golay_code(GolayKind::Ternary12),
        Label::Psi => golay_code(GolayKind::Binary24),
        other => return Err(Error::UnknownLabel(other.to_string())),
    };
    Ok(code)
}

fn failure(label: &Label, reason: impl Into<String>) -> Error {
    Error::ConstructionFailure { label: label.to_string(), reason: reason.into() }
}

/// Glues the root lattice of `label` and returns it in an integral basis.
///
/// Glue vectors are written in simple-root coordinates (rationals whose
/// denominators divide the glue-group exponents); the stacked generator set
/// is scaled to integers and reduced to Hermite normal form.
pub fn assemble_niemeier(label: &Label) -> Result<Lattice> {
    let code = niemeier_glue(label)?;
    let comps = code.components();
    let blocks: Vec<EvenGram> = comps
        .iter()
        .map(|r| EvenGram::new(r.cartan()))
        .collect::<Result<_>>()?;
    let root = EvenGram::block_diag(&blocks);
    let rank = root.rank();
    if rank != 24 {
        return Err(failure(label, format!("root rank {rank}")));
    }
    let root_det = root.det();
    if Int::from(code.len()).pow(2) != root_det {
        return Err(failure(label, format!("|glue|² = {} but det = {root_det}", code.len() * code.len())));
    }

    let glue_rows: Vec<Vec<SmallRational>> = code
        .generators()
        .iter()
        .map(|word| {
            word.iter()
                .zip(comps)
                .flat_map(|(&c, r)| r.glue_vector(c))
                .collect()
        })
        .collect();
    let denom = glue_rows
        .iter()
        .flatten()
        .fold(1i64, |acc, q| acc.lcm(q.denom()));

    let mut gens: Matrix<Int> = (0..rank)
        .map(|i| (0..rank).map(|j| Int::from(if i == j { denom } else { 0 })).collect())
        .collect();
    gens.extend(glue_rows.iter().map(|row| {
        row.iter()
            .map(|q| Int::from(q.numer() * (denom / q.denom())))
            .collect()
    }));
    let basis = hermite_normal_form(&gens);
    if basis.len() != rank {
        return Err(failure(label, "generator set does not have full rank"));
    }

    let cartan: Matrix<Int> = root
        .entries()
        .iter()
        .map(|r| r.iter().map(|&x| Int::from(x)).collect())
        .collect();
    let scaled = mat_mul(&mat_mul(&basis, &cartan), &transpose(&basis));
    let d2 = Int::from(denom * denom);
    let mut gram = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        for j in 0..rank {
            let (q, r) = scaled[i][j].div_rem(&d2);
            if !r.is_zero() {
                return Err(failure(label, "glued Gram is not integral"));
            }
            gram[i][j] = q.to_i64().ok_or_else(|| failure(label, "Gram entry overflow"))?;
        }
    }
    let gram = EvenGram::new(gram).map_err(|e| failure(label, e.to_string()))?;
    let det = gram.det();
    if det != Int::from(1) {
        return Err(failure(label, format!("determinant {det}")));
    }
    let basis_small = basis
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small HNF entry")).collect())
        .collect();
    let h = coxeter_number(label)?;
    let lattice = Lattice {
        label: label.clone(),
        gram,
        coxeter: Some(h),
        construction: Construction::RootGlue {
            components: comps.to_vec(),
            glue_generators: code.generators().to_vec(),
            basis: basis_small,
            denominator: denom,
        },
    };
    let roots = enumerate_short(&lattice, 2)?.count(2);
    if roots != 24 * h as usize {
        return Err(failure(label, format!("{roots} roots, expected 24·{h}")));
    }
    Ok(lattice)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glue_index_formula() {
        for l in &Label::NIEMEIER[..7] {
            let code = niemeier_glue(l).unwrap();
            let blocks: Vec<EvenGram> =
                code.components().iter().map(|r| EvenGram::new(r.cartan()).unwrap()).collect();
            let det = EvenGram::block_diag(&blocks).det();
            assert_eq!(Int::from(code.len()).pow(2), det, "{l}");
        }
    }

    #[test]
    fn glue_words_are_even() {
        // every glue word must have integral even norm
        for l in &Label::NIEMEIER[..7] {
            let code = niemeier_glue(l).unwrap();
            for w in code.words() {
                let mut norm = SmallRational::from_integer(0);
                for (&c, r) in w.iter().zip(code.components()) {
                    let v = r.glue_vector(c);
                    let cm = r.cartan();
                    for i in 0..v.len() {
                        for j in 0..v.len() {
                            norm += v[i] * v[j] * cm[i][j];
                        }
                    }
                }
                assert!(norm.is_integer() && norm.to_integer() % 2 == 0, "{l}: {w:?} has norm {norm}");
            }
        }
    }

    #[test]
    fn alpha_delta_psi() {
        for (l, roots) in [(Label::Alpha, 1104), (Label::Delta, 600), (Label::Psi, 48)] {
            let lat = assemble_niemeier(&l).unwrap();
            assert_eq!(lat.gram.det(), Int::from(1));
            assert_eq!(enumerate_short(&lat, 2).unwrap().count(2), roots);
        }
    }
}
