//! Partial-testability laboratory: GF(2) linear codes, exact distributions,
//! decision-tree readers, testers, and entropy certificates that bound
//! `log2 |C'|` for subsets `C'` of a code accepted by a tester.

pub mod budget;
pub mod cert;
pub mod cli;
pub mod dist;
pub mod error;
pub mod exemplars;
pub mod formats;
pub mod gf2;
pub mod reader;
pub mod rng;
pub mod selftest;
pub mod tester;

pub use error::{Error, Result};
