use crate::error::{Error, Result};

/// Bound on exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_checks: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_checks: 10_000_000,
        }
    }
}

impl Limits {
    pub fn new(max_checks: u64) -> Self {
        Limits { max_checks }
    }

    /// Rejects a search whose candidate count is known up front.
    pub fn admit(&self, needed: u128) -> Result<()> {
        if needed > self.max_checks as u128 {
            Err(Error::TooLarge {
                needed,
                bound: self.max_checks,
            })
        } else {
            Ok(())
        }
    }

    pub fn budget(&self) -> Budget {
        Budget {
            spent: 0,
            bound: self.max_checks,
        }
    }
}

/// Running counter for searches whose size is only known as they proceed.
#[derive(Debug)]
pub struct Budget {
    spent: u64,
    bound: u64,
}

impl Budget {
    pub fn spend(&mut self, n: u64) -> Result<()> {
        self.spent = self.spent.saturating_add(n);
        if self.spent > self.bound {
            Err(Error::TooLarge {
                needed: self.spent as u128,
                bound: self.bound,
            })
        } else {
            Ok(())
        }
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }
}

/// Product of sizes, saturating in `u128`.
pub fn product_size<I: IntoIterator<Item = usize>>(sizes: I) -> u128 {
    sizes
        .into_iter()
        .fold(1u128, |acc, s| acc.saturating_mul(s as u128))
}
