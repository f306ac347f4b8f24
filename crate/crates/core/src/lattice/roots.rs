use std::fmt;

use crate::error::{Error, Result};
use crate::forms::EvenGram;
use crate::linalg::{rational_inverse, Matrix};
use crate::SmallRational;

/// An irreducible simply-laced root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum RootSystem {
    A(usize),
    D(usize),
    E(usize),
}

impl RootSystem {
    pub fn new(family: char, rank: usize) -> Result<Self> {
        let r = match family.to_ascii_uppercase() {
            'A' if rank >= 1 => RootSystem::A(rank),
            'D' if rank >= 3 => RootSystem::D(rank),
            'E' if (6..=8).contains(&rank) => RootSystem::E(rank),
            f => return Err(Error::InvalidRank { family: f, rank }),
        };
        Ok(r)
    }

    pub fn rank(self) -> usize {
        match self {
            RootSystem::A(n) | RootSystem::D(n) | RootSystem::E(n) => n,
        }
    }

    /// Number of roots.
    pub fn root_count(self) -> usize {
        match self {
            RootSystem::A(n) => n * (n + 1),
            RootSystem::D(n) => 2 * n * (n - 1),
            RootSystem::E(6) => 72,
            RootSystem::E(7) => 126,
            RootSystem::E(_) => 240,
        }
    }

    pub fn coxeter_number(self) -> usize {
        match self {
            RootSystem::A(n) => n + 1,
            RootSystem::D(n) => 2 * n - 2,
            RootSystem::E(6) => 12,
            RootSystem::E(7) => 18,
            RootSystem::E(_) => 30,
        }
    }

    /// Edges of the Dynkin diagram in Bourbaki numbering (0-based).
    fn edges(self) -> Vec<(usize, usize)> {
        match self {
            RootSystem::A(n) => (1..n).map(|i| (i - 1, i)).collect(),
            RootSystem::D(n) => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((n - 3, n - 1));
                e
            }
            RootSystem::E(n) => {
                // chain 1-3-4-…-n with node 2 attached to node 4
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((3..n).map(|i| (i - 1, i)));
                e
            }
        }
    }

    /// Cartan matrix, which is the Gram matrix of the simple roots.
    pub fn cartan(self) -> Matrix<i64> {
        let n = self.rank();
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (i, j) in self.edges() {
            c[i][j] = -1;
            c[j][i] = -1;
        }
        c
    }

    /// Order of the discriminant group `L*/L`.
    pub fn discriminant(self) -> usize {
        match self {
            RootSystem::A(n) => n + 1,
            RootSystem::D(_) => 4,
            RootSystem::E(n) => 9 - n,
        }
    }

    /// Number of glue classes (the elements of `L*/L`).
    pub fn glue_classes(self) -> usize {
        self.discriminant()
    }

    /// Sum of two glue classes in the discriminant group.
    ///
    /// Class labels: `A_n` classes are `0..=n` (cyclic); `D_n` uses
    /// `0` (lattice), `1` (spinor), `2` (vector), `3` (other spinor).
    pub fn add_classes(self, a: u8, b: u8) -> u8 {
        match self {
            RootSystem::A(n) => ((a as usize + b as usize) % (n + 1)) as u8,
            RootSystem::D(n) if n % 2 == 0 => {
                // Klein four-group: spinor + vector = other spinor
                let enc = |x: u8| match x {
                    0 => 0u8,
                    1 => 1,
                    3 => 2,
                    _ => 3,
                };
                let dec = |x: u8| match x {
                    0 => 0u8,
                    1 => 1,
                    2 => 3,
                    _ => 2,
                };
                dec(enc(a) ^ enc(b))
            }
            RootSystem::D(_) => {
                // cyclic of order 4 generated by a spinor class; its double is the vector class
                let to = |x: u8| match x {
                    0 => 0u8,
                    1 => 1,
                    2 => 2,
                    _ => 3,
                };
                (to(a) + to(b)) % 4
            }
            RootSystem::E(n) => ((a as usize + b as usize) % (9 - n)) as u8,
        }
    }

    /// A representative of a glue class, in simple-root coordinates.
    pub fn glue_vector(self, class: u8) -> Vec<SmallRational> {
        let n = self.rank();
        let zero = vec![SmallRational::from_integer(0); n];
        if class == 0 {
            return zero;
        }
        let node = match self {
            RootSystem::A(_) => class as usize - 1,
            RootSystem::D(n) => match class {
                1 => n - 1,
                2 => 0,
                _ => n - 2,
            },
            // E6: the minuscule nodes 1 and 6; E7: node 7
            RootSystem::E(6) => {
                if class == 1 {
                    0
                } else {
                    5
                }
            }
            RootSystem::E(_) => 6,
        };
        self.fundamental_weight(node)
    }

    /// Fundamental weight of a node in simple-root coordinates.
    pub fn fundamental_weight(self, node: usize) -> Vec<SmallRational> {
        let inv = rational_inverse(&self.cartan()).expect("Cartan matrix is nonsingular");
        inv[node].clone()
    }
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootSystem::A(n) => write!(f, "A{n}"),
            RootSystem::D(n) => write!(f, "D{n}"),
            RootSystem::E(n) => write!(f, "E{n}"),
        }
    }
}

/// Gram matrix of a root lattice.
pub fn root_gram(family: char, rank: usize) -> Result<EvenGram> {
    EvenGram::new(RootSystem::new(family, rank)?.cartan())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Int;

    #[test]
    fn small_grams() {
        assert_eq!(root_gram('A', 1).unwrap().entries(), &vec![vec![2]]);
        let a2 = root_gram('A', 2).unwrap();
        assert_eq!(a2.entries(), &vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(a2.det(), Int::from(3));
    }

    #[test]
    fn determinants() {
        for n in 1..=24 {
            assert_eq!(root_gram('A', n).unwrap().det(), Int::from(n + 1));
        }
        for n in 3..=24 {
            assert_eq!(root_gram('D', n).unwrap().det(), Int::from(4));
        }
        for (n, d) in [(6, 3), (7, 2), (8, 1)] {
            assert_eq!(root_gram('E', n).unwrap().det(), Int::from(d));
        }
    }

    #[test]
    fn invalid_ranks() {
        assert!(matches!(root_gram('D', 2), Err(Error::InvalidRank { .. })));
        assert!(matches!(root_gram('E', 9), Err(Error::InvalidRank { .. })));
        assert!(matches!(root_gram('A', 0), Err(Error::InvalidRank { .. })));
    }

    fn weight_norm(r: RootSystem, class: u8) -> SmallRational {
        let v = r.glue_vector(class);
        let c = r.cartan();
        let mut s = SmallRational::from_integer(0);
        for i in 0..v.len() {
            for j in 0..v.len() {
                s += v[i] * v[j] * c[i][j];
            }
        }
        s
    }

    #[test]
    fn glue_norms() {
        // A_n class i has norm i(n+1-i)/(n+1)
        assert_eq!(weight_norm(RootSystem::A(24), 5), SmallRational::from_integer(4));
        assert_eq!(weight_norm(RootSystem::A(12), 5), SmallRational::new(40, 13));
        assert_eq!(weight_norm(RootSystem::A(2), 1), SmallRational::new(2, 3));
        // D_n: spinors n/4, vector 1
        assert_eq!(weight_norm(RootSystem::D(24), 1), SmallRational::from_integer(6));
        assert_eq!(weight_norm(RootSystem::D(8), 3), SmallRational::from_integer(2));
        assert_eq!(weight_norm(RootSystem::D(12), 2), SmallRational::from_integer(1));
    }

    #[test]
    fn klein_group_law() {
        let d = RootSystem::D(8);
        assert_eq!(d.add_classes(1, 1), 0);
        assert_eq!(d.add_classes(1, 2), 3);
        assert_eq!(d.add_classes(3, 2), 1);
        assert_eq!(d.add_classes(1, 3), 2);
        let d5 = RootSystem::D(5);
        assert_eq!(d5.add_classes(1, 1), 2);
        assert_eq!(d5.add_classes(1, 3), 0);
    }
}
