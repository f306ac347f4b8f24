//! Glue codes: subgroups of products of discriminant groups.

use std::collections::BTreeSet;

use super::roots::RootSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GolayKind {
    /// Extended binary Golay code, [24, 12, 8].
    Binary24,
    /// Extended ternary Golay code, [12, 6, 6].
    Ternary12,
}

/// A glue code for a direct sum of root lattices: a closed set of words,
/// each word listing one glue class per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueCode {
    components: Vec<RootSystem>,
    generators: Vec<Vec<u8>>,
    words: Vec<Vec<u8>>,
}

impl GlueCode {
    /// Closes `generators` under the componentwise group law.
    pub fn generated(components: Vec<RootSystem>, generators: Vec<Vec<u8>>) -> Self {
        let k = components.len();
        assert!(generators.iter().all(|g| g.len() == k), "glue word length mismatch");
        let mut words: BTreeSet<Vec<u8>> = BTreeSet::new();
        let mut frontier = vec![vec![0u8; k]];
        words.insert(vec![0u8; k]);
        while let Some(w) = frontier.pop() {
            for g in &generators {
                let sum: Vec<u8> = (0..k).map(|i| components[i].add_classes(w[i], g[i])).collect();
                if words.insert(sum.clone()) {
                    frontier.push(sum);
                }
            }
        }
        Self { components, generators, words: words.into_iter().collect() }
    }

    pub fn components(&self) -> &[RootSystem] {
        &self.components
    }

    pub fn generators(&self) -> &[Vec<u8>] {
        &self.generators
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn weight(word: &[u8]) -> usize {
        word.iter().filter(|&&c| c != 0).count()
    }

    pub fn min_weight(&self) -> usize {
        self.words.iter().map(|w| Self::weight(w)).filter(|&w| w > 0).min().unwrap_or(0)
    }

    pub fn weight_distribution(&self) -> Vec<usize> {
        let mut d = vec![0; self.components.len() + 1];
        for w in &self.words {
            d[Self::weight(w)] += 1;
        }
        d
    }

    pub fn contains(&self, word: &[u8]) -> bool {
        self.words.binary_search_by(|w| w.as_slice().cmp(word)).is_ok()
    }
}

/// Shifts of a generator polynomial of a cyclic code, extended by a check
/// digit making the coordinate sum vanish mod `q`.
fn extended_cyclic(len: usize, q: u8, poly: &[u8]) -> Vec<Vec<u8>> {
    let dim = len - (poly.len() - 1);
    (0..dim)
        .map(|s| {
            let mut row = vec![0u8; len + 1];
            for (i, &c) in poly.iter().enumerate() {
                row[s + i] = c;
            }
            let sum: u32 = row.iter().map(|&x| u32::from(x)).sum();
            row[len] = ((u32::from(q) - sum % u32::from(q)) % u32::from(q)) as u8;
            row
        })
        .collect()
}

pub fn golay_code(kind: GolayKind) -> GlueCode {
    match kind {
        GolayKind::Binary24 => {
            // g(x) = 1 + x² + x⁴ + x⁵ + x⁶ + x¹⁰ + x¹¹
            let poly = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1];
            GlueCode::generated(vec![RootSystem::A(1); 24], extended_cyclic(23, 2, &poly))
        }
        GolayKind::Ternary12 => {
            // g(x) = -1 + x² - x³ + x⁴ + x⁵ over GF(3)
            let poly = [2, 0, 1, 2, 1, 1];
            GlueCode::generated(vec![RootSystem::A(2); 12], extended_cyclic(11, 3, &poly))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force span of the generator rows over GF(q).
    fn span(gens: &[Vec<u8>], q: u8) -> BTreeSet<Vec<u8>> {
        let len = gens[0].len();
        let total = (q as usize).pow(gens.len() as u32);
        (0..total)
            .map(|mut idx| {
                let mut w = vec![0u8; len];
                for g in gens {
                    let c = (idx % q as usize) as u8;
                    idx /= q as usize;
                    for (x, &y) in w.iter_mut().zip(g) {
                        *x = (*x + c * y) % q;
                    }
                }
                w
            })
            .collect()
    }

    #[test]
    fn binary_golay_weight_enumerator() {
        let c = golay_code(GolayKind::Binary24);
        let oracle = span(c.generators(), 2);
        assert_eq!(oracle.len(), 4096);
        assert_eq!(c.words().iter().cloned().collect::<BTreeSet<_>>(), oracle);
        let d = c.weight_distribution();
        assert_eq!((d[0], d[8], d[12], d[16], d[24]), (1, 759, 2576, 759, 1));
        assert_eq!(c.min_weight(), 8);
        assert!(c.contains(&[1u8; 24]));
    }

    #[test]
    fn ternary_golay_weight_enumerator() {
        let c = golay_code(GolayKind::Ternary12);
        let oracle = span(c.generators(), 3);
        assert_eq!(oracle.len(), 729);
        assert_eq!(c.words().iter().cloned().collect::<BTreeSet<_>>(), oracle);
        let d = c.weight_distribution();
        assert_eq!((d[0], d[6], d[9], d[12]), (1, 264, 440, 24));
        assert_eq!(c.min_weight(), 6);
    }
}
