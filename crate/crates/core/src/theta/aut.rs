use crate::error::Result;
use crate::forms::{EvenGram, HalfIntegralMatrix};
use crate::lattice::{Label, Lattice};
use crate::shortvec::enumerate_short;
use crate::Int;

use super::{CountOptions, Engine, Transitivity};

/// Order of the isometry group of `g`: the number of bases of the lattice
/// with the same Gram matrix, i.e. the representation number of `g` by
/// itself.
pub fn aut_order(g: &EvenGram) -> Result<Int> {
    let lat = Lattice::explicit(Label::AdHoc("aut".into()), g.clone());
    let t = HalfIntegralMatrix::from_even_matrix(g.entries())?;
    let bound = 2 * t.max_diag() as u32;
    let vectors = enumerate_short(&lat, bound)?;
    let engine = Engine::new(lat, vectors)?.with_transitivity(Transitivity::none());
    engine.representation_count(&t, &CountOptions::default().with_partitions(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{quaternary_gram, root_gram};

    #[test]
    fn small_groups() {
        assert_eq!(aut_order(&EvenGram::new(vec![vec![2]]).unwrap()).unwrap(), Int::from(2));
        assert_eq!(aut_order(&root_gram('A', 2).unwrap()).unwrap(), Int::from(12));
        assert_eq!(aut_order(&quaternary_gram(3).gram).unwrap(), Int::from(24));
    }
}
