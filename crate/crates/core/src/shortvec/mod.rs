//! Exact enumeration of short lattice vectors.

mod cache;
mod enumerate;

pub use cache::{cache_load, cache_store, load_or_enumerate, CACHE_FORMAT};
pub use enumerate::{
    cholesky_rational, count_short, enumerate_short, enumerate_short_with_budget, pivot_product, Shell,
    VectorList, DEFAULT_VECTOR_BUDGET,
};
