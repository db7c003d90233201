use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sieve::first_primes;

/// An increasing divisibility chain of moduli `m_1 | m_2 | ... | m_L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Ladder(Vec<u64>);

impl Ladder {
    pub fn new(levels: Vec<u64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Specification("ladder must have at least one level".into()));
        }
        if levels[0] == 0 {
            return Err(Error::Specification("ladder moduli must be >= 1".into()));
        }
        for w in levels.windows(2) {
            if w[1] <= w[0] || w[1] % w[0] != 0 {
                return Err(Error::Specification(format!(
                    "ladder is not an increasing divisibility chain at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self(levels))
    }

    /// `1!, 2!, ..., k!` (1! and 2! both kept as 1, 2).
    pub fn factorial(k: u32) -> Result<Self> {
        let mut out = Vec::new();
        let mut f = 1u64;
        for i in 1..=k as u64 {
            f = f
                .checked_mul(i)
                .ok_or_else(|| Error::Capacity(format!("{k}! overflows u64")))?;
            out.push(f);
        }
        Self::new(out)
    }

    /// `2, 6, 30, ...`: products of the first `k` primes.
    pub fn primorial(k: usize) -> Result<Self> {
        let mut out = Vec::new();
        let mut f = 1u64;
        for p in first_primes(k) {
            f = f
                .checked_mul(p)
                .ok_or_else(|| Error::Capacity("primorial overflows u64".into()))?;
            out.push(f);
        }
        Self::new(out)
    }

    /// `1, b, b^2, ..., b^k`.
    pub fn powers(base: u64, k: u32) -> Result<Self> {
        let mut out = vec![1u64];
        for _ in 0..k {
            let next = out
                .last()
                .unwrap()
                .checked_mul(base)
                .ok_or_else(|| Error::Capacity("power ladder overflows u64".into()))?;
            out.push(next);
        }
        Self::new(out)
    }

    pub fn levels(&self) -> &[u64] {
        &self.0
    }

    pub fn top(&self) -> u64 {
        *self.0.last().unwrap()
    }

    /// Levels not exceeding `cap`.
    pub fn truncated(&self, cap: u64) -> Result<Ladder> {
        Ladder::new(self.0.iter().copied().filter(|&m| m <= cap).collect())
    }
}

impl Default for Ladder {
    /// Factorials up to `8! = 40320`.
    fn default() -> Self {
        Ladder::factorial(8).expect("8! fits")
    }
}

impl TryFrom<Vec<u64>> for Ladder {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Ladder::new(v)
    }
}

impl From<Ladder> for Vec<u64> {
    fn from(l: Ladder) -> Self {
        l.0
    }
}
