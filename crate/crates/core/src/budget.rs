//! Memory budget for the level tables.
//!
//! Level k holds 2^k histograms per family, so the resident set doubles with
//! every level; the budget turns a runaway k into a clean error instead of an
//! OOM kill.

use crate::error::{Error, Result};

/// Upper bound, in bytes, on the carry-table working set (the level being
/// built plus the level it is built from).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryBudget {
    bytes: u64,
}

/// Sized for a 16 GB desk machine; verification through k = 20 uses a small
/// fraction of this.
pub const DEFAULT_MEMORY_BUDGET_BYTES: u64 = 12 * (1 << 30);

impl Default for MemoryBudget {
    fn default() -> Self {
        MemoryBudget {
            bytes: DEFAULT_MEMORY_BUDGET_BYTES,
        }
    }
}

impl MemoryBudget {
    pub fn new(bytes: u64) -> Self {
        MemoryBudget { bytes }
    }

    pub fn bytes(&self) -> u64 {
        self.bytes
    }

    /// Bytes needed to hold level k: two flat count arrays of 2^k rows with
    /// 2k+1 slots of 8 bytes each.
    pub fn level_bytes(k: u32) -> u64 {
        let rows = 1u64 << k.min(63);
        2 * rows * (2 * k as u64 + 1) * 8
    }

    /// Checks that level k can be built while level k-1 is still resident.
    pub fn check_level(&self, k: u32) -> Result<()> {
        if k > 48 {
            return Err(Error::KOutOfRange {
                k,
                reason: "level tables support k <= 48",
            });
        }
        let needed = Self::level_bytes(k) + if k > 0 { Self::level_bytes(k - 1) } else { 0 };
        if needed > self.bytes {
            return Err(Error::MemoryBudget {
                needed,
                budget: self.bytes,
                k,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_allows_k20() {
        let budget = MemoryBudget::default();
        assert!(budget.check_level(20).is_ok());
    }

    #[test]
    fn tiny_budget_rejects() {
        let budget = MemoryBudget::new(1024);
        let err = budget.check_level(10).unwrap_err();
        match err {
            Error::MemoryBudget { budget: b, .. } => assert_eq!(b, 1024),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
