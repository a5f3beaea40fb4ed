//! GF(2) words, index sets and linear codes.

mod code;
mod word;

pub use code::{far_probability_lower_bound, restrict_set, LinearCode};
pub use word::{IndexSet, Word, WordSet, MAX_LEN};
