//! Entropy certificates: audited upper bounds on `log2 |C'|` for a subset
//! `C'` of a linear code `C`, built from a tester that accepts `C'`.

pub mod adaptive;
pub mod nonadaptive;
pub mod report;

pub use adaptive::{build_certifying_reader, certify_adaptive, find_discerning_reader, AdaptiveCertificate, Discerning};
pub use nonadaptive::{certify_nonadaptive, greedy_cover, heavy_set, Cover, CoverEntry, HeavySet, NonAdaptiveCertificate};
pub use report::{Report, Step, VERSION};

use crate::error::{Error, Result};
use crate::formats;
use crate::gf2::{LinearCode, WordSet};
use crate::tester::Tester;

/// `C'` must be a non-empty subset of `C`.
pub(crate) fn check_subset(code: &LinearCode, cp: &WordSet) -> Result<()> {
    if cp.is_empty() {
        return Err(Error::EmptySet);
    }
    if cp.word_len() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), found: cp.word_len() });
    }
    if let Some(bad) = cp.iter().find(|w| !code.contains(w)) {
        return Err(Error::InvalidParameter(format!("subset word {bad} is not a codeword")));
    }
    Ok(())
}

pub(crate) fn digests(code: &LinearCode, cp: &WordSet, t: &Tester) -> Vec<(String, String)> {
    vec![
        ("code".into(), formats::digest(&formats::print_code(code))),
        ("subset".into(), formats::digest(&formats::print_wordset(cp))),
        ("tester".into(), formats::digest(&formats::print_tester(t))),
    ]
}
