use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Size limits for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Guardrails {
    pub max_n: u32,
    pub max_m: u32,
    pub max_q: u64,
    /// Upper bound on any enumerated carrier (ring or level space).
    pub max_carrier: u64,
}

impl Default for Guardrails {
    fn default() -> Self {
        Guardrails {
            max_n: 12,
            max_m: 6,
            max_q: 9,
            max_carrier: 1_000_000,
        }
    }
}

impl Guardrails {
    pub fn check(&self, what: &'static str, value: u64, limit: u64) -> Result<()> {
        if value > limit {
            Err(Error::SizeGuardExceeded { what, value, limit })
        } else {
            Ok(())
        }
    }

    pub fn check_carrier(&self, value: u64) -> Result<()> {
        self.check("carrier size", value, self.max_carrier)
    }
}

/// `base^exp`, saturating at `u64::MAX`.
pub(crate) fn sat_pow(base: u64, exp: u32) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}
