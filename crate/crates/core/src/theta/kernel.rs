//! Packed shell vectors for the counting inner loops.
//!
//! Each vector is stored twice, as basis coordinates `c` and as `G·c`, so
//! an inner product is one fixed-stride dot product of small integers.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::EvenGram;
use crate::shortvec::VectorList;

/// Lane type of the packed arrays.
pub trait Lane: Copy + Default + Send + Sync + 'static {
    fn from_i64(x: i64) -> Option<Self>;
    fn widen(self) -> i32;
    /// Dot product of two equal-length slices whose length is a multiple
    /// of [`LANES`].
    fn dot(a: &[Self], b: &[Self]) -> i32 {
        scalar_dot(a, b)
    }
}

impl Lane for i16 {
    fn from_i64(x: i64) -> Option<Self> {
        i16::try_from(x).ok()
    }
    #[inline(always)]
    fn widen(self) -> i32 {
        i32::from(self)
    }
    #[cfg(target_arch = "x86_64")]
    #[inline(always)]
    fn dot(a: &[i16], b: &[i16]) -> i32 {
        use std::arch::x86_64::*;
        assert!(a.len() == b.len() && a.len().is_multiple_of(LANES));
        // SAFETY: SSE2 is part of the x86_64 baseline; every load reads
        // 8 lanes inside the slices checked above.
        unsafe {
            let mut acc = _mm_setzero_si128();
            for k in (0..a.len()).step_by(LANES) {
                let x = _mm_loadu_si128(a.as_ptr().add(k).cast());
                let y = _mm_loadu_si128(b.as_ptr().add(k).cast());
                acc = _mm_add_epi32(acc, _mm_madd_epi16(x, y));
            }
            let hi = _mm_shuffle_epi32(acc, 0b01_00_11_10);
            let s = _mm_add_epi32(acc, hi);
            let hi = _mm_shuffle_epi32(s, 0b10_11_00_01);
            _mm_cvtsi128_si32(_mm_add_epi32(s, hi))
        }
    }
}

impl Lane for i32 {
    fn from_i64(x: i64) -> Option<Self> {
        i32::try_from(x).ok()
    }
    #[inline(always)]
    fn widen(self) -> i32 {
        self
    }
}

pub const LANES: usize = 8;

#[inline(always)]
fn scalar_dot<E: Lane>(a: &[E], b: &[E]) -> i32 {
    let mut acc = [0i32; LANES];
    for (ca, cb) in a.chunks_exact(LANES).zip(b.chunks_exact(LANES)) {
        for l in 0..LANES {
            acc[l] += ca[l].widen() * cb[l].widen();
        }
    }
    acc.iter().sum()
}

#[inline(always)]
pub fn dot<E: Lane>(a: &[E], b: &[E]) -> i32 {
    E::dot(a, b)
}

#[derive(Clone, Debug)]
pub struct PackedShell<E> {
    pub norm: u32,
    pub len: usize,
    pub stride: usize,
    pub coords: Vec<E>,
    pub dual: Vec<E>,
}

impl<E: Lane> PackedShell<E> {
    #[inline(always)]
    pub fn coord(&self, i: usize) -> &[E] {
        &self.coords[i * self.stride..(i + 1) * self.stride]
    }

    #[inline(always)]
    pub fn dual(&self, i: usize) -> &[E] {
        &self.dual[i * self.stride..(i + 1) * self.stride]
    }
}

#[derive(Clone, Debug)]
pub struct Packed<E> {
    pub rank: usize,
    pub stride: usize,
    pub bound: u32,
    pub shells: BTreeMap<u32, PackedShell<E>>,
}

impl<E: Lane> Packed<E> {
    pub fn new(vectors: &VectorList, gram: &EvenGram) -> Option<Self> {
        let rank = gram.rank();
        let stride = rank.div_ceil(LANES).max(1) * LANES;
        let mut shells = BTreeMap::new();
        for (&norm, shell) in vectors.shells() {
            let mut coords = vec![E::default(); shell.len() * stride];
            let mut dual = vec![E::default(); shell.len() * stride];
            for (i, v) in shell.iter().enumerate() {
                for j in 0..rank {
                    coords[i * stride + j] = E::from_i64(i64::from(v[j]))?;
                    let gv: i64 = (0..rank).map(|k| gram.get(j, k) * i64::from(v[k])).sum();
                    dual[i * stride + j] = E::from_i64(gv)?;
                }
            }
            shells.insert(norm, PackedShell { norm, len: shell.len(), stride, coords, dual });
        }
        Some(Self { rank, stride, bound: vectors.bound, shells })
    }

    pub fn shell(&self, norm: u32) -> Result<Option<&PackedShell<E>>> {
        if norm > self.bound {
            return Err(Error::ShellMissing { norm, bound: self.bound });
        }
        Ok(self.shells.get(&norm))
    }
}

/// Packed shells in the narrowest lane type that holds them.
#[derive(Clone, Debug)]
pub enum Kernel {
    Narrow(Packed<i16>),
    Wide(Packed<i32>),
}

impl Kernel {
    pub fn new(vectors: &VectorList, gram: &EvenGram) -> Result<Self> {
        if let Some(p) = Packed::<i16>::new(vectors, gram) {
            return Ok(Kernel::Narrow(p));
        }
        Packed::<i32>::new(vectors, gram)
            .map(Kernel::Wide)
            .ok_or_else(|| Error::BudgetExceeded("shell coordinates exceed i32".into()))
    }

    pub fn bound(&self) -> u32 {
        match self {
            Kernel::Narrow(p) => p.bound,
            Kernel::Wide(p) => p.bound,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::quaternary_gram;
    use crate::shortvec::enumerate_short;

    #[test]
    fn packed_dot_is_the_gram_inner_product() {
        let lat = quaternary_gram(2);
        let v = enumerate_short(&lat, 8).unwrap();
        let Kernel::Narrow(p) = Kernel::new(&v, &lat.gram).unwrap() else { panic!("narrow lanes expected") };
        let s8 = v.shell(8).unwrap();
        let k8 = &p.shells[&8];
        for i in 0..s8.len() {
            for j in 0..s8.len() {
                let a: Vec<i64> = s8.get(i).iter().map(|&x| x.into()).collect();
                let b: Vec<i64> = s8.get(j).iter().map(|&x| x.into()).collect();
                assert_eq!(i64::from(dot(k8.coord(i), k8.dual(j))), lat.gram.inner(&a, &b));
                assert_eq!(dot(k8.coord(i), k8.dual(j)), scalar_dot(k8.coord(i), k8.dual(j)));
            }
        }
    }
}
