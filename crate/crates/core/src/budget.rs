//! Process-wide enumeration cap.
//!
//! Every exhaustive loop over 2^m elements checks `m` against this cap before
//! starting. The default is 2^24; the CLI lowers or raises it from the
//! `PTLAB_BUDGET` environment variable.

use std::sync::atomic::{AtomicU32, Ordering};

use crate::error::{Error, Result};

/// Default cap, as a power of two.
pub const DEFAULT_BUDGET_LOG2: u32 = 24;

static BUDGET_LOG2: AtomicU32 = AtomicU32::new(DEFAULT_BUDGET_LOG2);

/// Current cap as a power of two.
pub fn budget_log2() -> u32 {
    BUDGET_LOG2.load(Ordering::Relaxed)
}

/// Sets the cap to `2^log2`. Values above 40 are clamped.
pub fn set_budget_log2(log2: u32) {
    BUDGET_LOG2.store(log2.min(40), Ordering::Relaxed);
}

/// Parses a budget given either as an element count (`16777216`) or as a
/// power of two (`2^24`). Counts are rounded down to a power of two.
pub fn parse_budget(text: &str) -> Option<u32> {
    let text = text.trim();
    if let Some(exp) = text.strip_prefix("2^") {
        return exp.parse().ok();
    }
    let count: u64 = text.parse().ok()?;
    if count == 0 {
        return None;
    }
    Some(63 - count.leading_zeros())
}

/// Fails unless `2^log2_size` elements fit in the budget.
pub fn check(what: &'static str, log2_size: usize) -> Result<()> {
    let budget = budget_log2();
    if log2_size > budget as usize {
        return Err(Error::BudgetExceeded {
            what,
            log2_size: log2_size.min(u32::MAX as usize) as u32,
            budget_log2: budget,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_counts_and_powers() {
        assert_eq!(parse_budget("2^20"), Some(20));
        assert_eq!(parse_budget("16777216"), Some(24));
        assert_eq!(parse_budget("1000"), Some(9));
        assert_eq!(parse_budget("0"), None);
        assert_eq!(parse_budget("lots"), None);
    }

    #[test]
    fn default_cap_admits_two_to_the_24() {
        assert!(check("test", 24).is_ok());
        assert!(matches!(
            check("test", 25),
            Err(Error::BudgetExceeded { log2_size: 25, .. })
        ));
    }
}
