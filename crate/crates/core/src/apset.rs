//! Finite unions of arithmetic progressions `r + (m) = {r, r+m, r+2m, ...}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on inclusion-exclusion terms for [`APSet::density`].
pub const DEFAULT_TERM_LIMIT: usize = 1 << 20;

/// A single progression `r + (m)` in normalized form (`r < m`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Progression {
    pub r: u64,
    pub m: u64,
}

impl Progression {
    /// Builds `r + (m)`, reducing `r` modulo `m`.
    pub fn new(r: u64, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Specification("progression modulus must be >= 1".into()));
        }
        Ok(Self { r: r % m, m })
    }

    pub fn contains(&self, n: u64) -> bool {
        n % self.m == self.r
    }

    /// Intersection of two progressions, `None` when disjoint.
    pub fn intersect(&self, other: &Progression) -> Result<Option<Progression>> {
        match crt(self.r as u128, self.m as u128, other.r as u128, other.m as u128)? {
            Some((r, m)) => {
                let m = u64::try_from(m)
                    .map_err(|_| Error::Capacity(format!("lcm({}, {}) overflows u64", self.m, other.m)))?;
                Ok(Some(Progression { r: r as u64, m }))
            }
            None => Ok(None),
        }
    }
}

/// Solves `x = r1 (mod m1), x = r2 (mod m2)`; returns `(x mod l, l)` with `l = lcm(m1, m2)`.
fn crt(r1: u128, m1: u128, r2: u128, m2: u128) -> Result<Option<(u128, u128)>> {
    let g = m1.gcd(&m2);
    let diff = (r2 as i128) - (r1 as i128);
    if diff.rem_euclid(g as i128) != 0 {
        return Ok(None);
    }
    let l = (m1 / g)
        .checked_mul(m2)
        .ok_or_else(|| Error::Capacity(format!("lcm({m1}, {m2}) overflows")))?;
    // x = r1 + m1 * t with (m1/g) t = diff/g (mod m2/g)
    let m2g = (m2 / g) as i128;
    let t = if m2g == 1 {
        0
    } else {
        let inv = mod_inverse(((m1 / g) as i128).rem_euclid(m2g), m2g);
        ((diff / g as i128).rem_euclid(m2g) * inv).rem_euclid(m2g)
    };
    let x = (r1 + m1 * t as u128) % l;
    Ok(Some((x, l)))
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    let e = a.extended_gcd(&m);
    e.x.rem_euclid(m)
}

/// A finite union of progressions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct APSet {
    progressions: Vec<Progression>,
}

impl APSet {
    pub fn new(progressions: Vec<Progression>) -> Self {
        Self { progressions }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds from raw `(r, m)` pairs, normalizing each.
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<Self> {
        pairs
            .iter()
            .map(|&(r, m)| Progression::new(r, m))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    /// All residues `r` mod `m` listed as progressions `r + (m)`.
    pub fn from_residues(residues: impl IntoIterator<Item = u64>, m: u64) -> Result<Self> {
        residues
            .into_iter()
            .map(|r| Progression::new(r, m))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn progressions(&self) -> &[Progression] {
        &self.progressions
    }

    pub fn len(&self) -> usize {
        self.progressions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.progressions.is_empty()
    }

    pub fn push(&mut self, p: Progression) {
        self.progressions.push(p);
    }

    pub fn contains(&self, n: u64) -> bool {
        self.progressions.iter().any(|p| p.contains(n))
    }

    /// Concatenation of two covers.
    pub fn union(&self, other: &APSet) -> APSet {
        let mut progressions = self.progressions.clone();
        progressions.extend_from_slice(&other.progressions);
        APSet { progressions }
    }

    /// Sum of reciprocal moduli, the cover cost in the Buck sense.
    pub fn cost(&self) -> BigRational {
        self.progressions.iter().fold(BigRational::zero(), |acc, p| {
            acc + BigRational::new(BigInt::one(), BigInt::from(p.m))
        })
    }

    /// Least common multiple of all moduli (the period of the indicator).
    pub fn period(&self) -> Result<u64> {
        self.progressions.iter().try_fold(1u64, |acc, p| {
            let g = acc.gcd(&p.m);
            (acc / g)
                .checked_mul(p.m)
                .ok_or_else(|| Error::Capacity("period overflows u64".into()))
        })
    }

    /// True when no two progressions of `self` and `other` share an integer.
    pub fn is_disjoint_from(&self, other: &APSet) -> Result<bool> {
        for a in &self.progressions {
            for b in &other.progressions {
                if a.intersect(b)?.is_some() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Exact density of the union, by inclusion-exclusion over intersections.
    pub fn density(&self) -> Result<BigRational> {
        self.density_with_limit(DEFAULT_TERM_LIMIT)
    }

    /// As [`APSet::density`] with an explicit cap on the number of non-empty
    /// intersection terms visited.
    pub fn density_with_limit(&self, term_limit: usize) -> Result<BigRational> {
        let mut ps = self.progressions.clone();
        ps.sort();
        ps.dedup();
        let mut acc = BigRational::zero();
        let mut terms = 0usize;
        for i in 0..ps.len() {
            include(&ps, i, ps[i], 1, &mut acc, &mut terms, term_limit)?;
        }
        Ok(acc)
    }
}

// Adds the signed term for the intersection ending at `idx`, then recurses on
// supersets. Empty intersections prune their whole subtree.
fn include(
    ps: &[Progression],
    idx: usize,
    cur: Progression,
    sign: i32,
    acc: &mut BigRational,
    terms: &mut usize,
    limit: usize,
) -> Result<()> {
    *terms += 1;
    if *terms > limit {
        return Err(Error::Capacity(format!(
            "inclusion-exclusion exceeded {limit} terms"
        )));
    }
    let term = BigRational::new(BigInt::from(sign), BigInt::from(cur.m));
    *acc += term;
    for j in idx + 1..ps.len() {
        if let Some(next) = cur.intersect(&ps[j])? {
            include(ps, j, next, -sign, acc, terms, limit)?;
        }
    }
    Ok(())
}

impl std::fmt::Display for APSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.progressions.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .progressions
            .iter()
            .map(|p| format!("{}+({})", p.r, p.m))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
