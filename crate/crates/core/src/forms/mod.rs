//! Fourier indices, Gram matrices and truncated expansions.

pub mod codec;
pub mod gram;
pub mod halfint;
pub mod qexp;

pub use codec::{decode_binary, decode_ozeki4, decode_ternary, parse_ozeki, parse_table_spec};
pub use gram::EvenGram;
pub use halfint::{canonical_key, class_size, HalfIntegralMatrix, TKey};
pub use qexp::{divisible, factor, format_factored, qexp_congruent, CongruenceDiff, QExpansion};
