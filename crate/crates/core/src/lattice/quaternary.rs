use super::{Label, Lattice};
use crate::forms::EvenGram;

/// Representatives of the three classes in the genus of even positive
/// quaternary forms of discriminant 11² and level 11.
pub fn quaternary_gram(i: u8) -> Lattice {
    let (label, m) = match i {
        1 => (
            Label::S1,
            vec![vec![2, 0, 1, 0], vec![0, 2, 0, 1], vec![1, 0, 6, 0], vec![0, 1, 0, 6]],
        ),
        2 => (
            Label::S2,
            vec![vec![2, 1, 1, 1], vec![1, 2, 0, 1], vec![1, 0, 8, 4], vec![1, 1, 4, 8]],
        ),
        3 => (
            Label::S3,
            vec![vec![4, 2, 1, 1], vec![2, 4, 0, 1], vec![1, 0, 4, 2], vec![1, 1, 2, 4]],
        ),
        _ => panic!("quaternary form index must be 1, 2 or 3"),
    };
    Lattice::explicit(label, EvenGram::new(m).expect("fixed positive definite form"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;

    #[test]
    fn fixed_forms() {
        assert_eq!(quaternary_gram(1).gram.entries()[0], vec![2, 0, 1, 0]);
        for i in 1..=3 {
            assert_eq!(quaternary_gram(i).gram.det(), Int::from(121));
        }
        let s3 = quaternary_gram(3);
        assert_eq!((0..4).map(|i| s3.gram.get(i, i)).collect::<Vec<_>>(), vec![4, 4, 4, 4]);
    }
}
