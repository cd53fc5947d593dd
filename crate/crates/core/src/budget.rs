use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Environment variable that overrides [`Budget::DEFAULT_LIMIT`].
pub const BUDGET_ENV: &str = "COHESIO_BUDGET";

/// Counter of candidate extensions tried by the backtracking enumerators.
///
/// Every enumerator charges one unit per candidate value it tries; once the
/// limit is crossed the enumeration aborts with [`Error::BudgetExceeded`]
/// instead of running unbounded.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub const DEFAULT_LIMIT: u64 = 10_000_000;

    pub fn new(limit: u64) -> Self {
        Self {
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    /// Default limit, overridden by `COHESIO_BUDGET` when it parses.
    pub fn from_env() -> Self {
        let limit = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(Self::DEFAULT_LIMIT);
        Self::new(limit)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn charge(&self, units: u64) -> Result<()> {
        let before = self.used.fetch_add(units, Ordering::Relaxed);
        if before.saturating_add(units) > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(Self::DEFAULT_LIMIT)
    }
}
