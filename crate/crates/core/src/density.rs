//! Asymptotic density on growing windows, and Buck measure density through
//! arithmetic-progression covers and residue saturation.
//!
//! A residue class only counts as "infinitely hit" when the window shows it
//! persistently (see [`Persistence`]). Everything here is a statement about
//! the window `[1, N]`; certificates record the `N` they were verified on.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::apset::{APSet, Progression};
use crate::error::{Error, Result};
use crate::ladder::Ladder;
use crate::seqgen::GeneratorSpec;
use crate::sieve::{divisors, is_prime, SpfSieve};

/// Membership test for a set of positive integers.
pub trait SetPredicate {
    fn contains(&self, n: u64) -> bool;

    /// `[1 in S, 2 in S, ..., len in S]`.
    fn indicator(&self, len: u64) -> Vec<bool> {
        (1..=len).map(|n| self.contains(n)).collect()
    }
}

impl SetPredicate for APSet {
    fn contains(&self, n: u64) -> bool {
        APSet::contains(self, n)
    }
}

impl<F: Fn(u64) -> bool> SetPredicate for F {
    fn contains(&self, n: u64) -> bool {
        self(n)
    }
}

/// Perfect squares.
#[derive(Clone, Copy, Debug)]
pub struct Squares;

impl SetPredicate for Squares {
    fn contains(&self, n: u64) -> bool {
        let r = (n as f64).sqrt() as u64;
        (r.saturating_sub(1)..=r + 1).any(|s| s * s == n)
    }

    fn indicator(&self, len: u64) -> Vec<bool> {
        let mut out = vec![false; len as usize];
        let mut s = 1u64;
        while s * s <= len {
            out[(s * s - 1) as usize] = true;
            s += 1;
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Primes;

impl SetPredicate for Primes {
    fn contains(&self, n: u64) -> bool {
        is_prime(n)
    }

    fn indicator(&self, len: u64) -> Vec<bool> {
        let sieve = SpfSieve::new(len as usize);
        (1..=len as usize).map(|n| sieve.is_prime(n)).collect()
    }
}

/// `union_k [4^k, 2 * 4^k)`: the set with density oscillating between 1/3 and 2/3.
#[derive(Clone, Copy, Debug)]
pub struct Blocks;

impl SetPredicate for Blocks {
    fn contains(&self, n: u64) -> bool {
        n > 0 && (63 - n.leading_zeros()).is_multiple_of(2)
    }
}

/// `N \ S`.
#[derive(Clone, Copy, Debug)]
pub struct Complement<P>(pub P);

impl<P: SetPredicate> SetPredicate for Complement<P> {
    fn contains(&self, n: u64) -> bool {
        !self.0.contains(n)
    }

    fn indicator(&self, len: u64) -> Vec<bool> {
        self.0.indicator(len).into_iter().map(|b| !b).collect()
    }
}

/// `S union T`.
#[derive(Clone, Copy, Debug)]
pub struct Union<P, Q>(pub P, pub Q);

impl<P: SetPredicate, Q: SetPredicate> SetPredicate for Union<P, Q> {
    fn contains(&self, n: u64) -> bool {
        self.0.contains(n) || self.1.contains(n)
    }

    fn indicator(&self, len: u64) -> Vec<bool> {
        let a = self.0.indicator(len);
        let b = self.1.indicator(len);
        a.into_iter().zip(b).map(|(x, y)| x || y).collect()
    }
}

/// A precomputed indicator; indices beyond it are outside the set.
#[derive(Clone, Debug)]
pub struct WindowSet(pub Vec<bool>);

impl SetPredicate for WindowSet {
    fn contains(&self, n: u64) -> bool {
        n >= 1 && self.0.get(n as usize - 1).copied().unwrap_or(false)
    }
}

/// JSON-addressable predicate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredicateSpec {
    Squares,
    Primes,
    Blocks,
    Ap { r: u64, m: u64 },
    Aps(Vec<(u64, u64)>),
    Finite(Vec<u64>),
    /// `{n : v(n) < below}` for a generated sequence.
    Threshold { sequence: GeneratorSpec, below: f64 },
    Complement(Box<PredicateSpec>),
}

impl PredicateSpec {
    pub fn build(&self) -> Result<Box<dyn SetPredicate>> {
        Ok(match self {
            PredicateSpec::Squares => Box::new(Squares),
            PredicateSpec::Primes => Box::new(Primes),
            PredicateSpec::Blocks => Box::new(Blocks),
            PredicateSpec::Ap { r, m } => Box::new(APSet::new(vec![Progression::new(*r, *m)?])),
            PredicateSpec::Aps(pairs) => Box::new(APSet::from_pairs(pairs)?),
            PredicateSpec::Finite(items) => {
                let set: HashSet<u64> = items.iter().copied().collect();
                Box::new(move |n: u64| set.contains(&n))
            }
            PredicateSpec::Threshold { sequence, below } => {
                let g = sequence.build()?;
                let below = *below;
                Box::new(move |n: u64| g.value(n as u128).map(|v| v < below).unwrap_or(false))
            }
            PredicateSpec::Complement(inner) => Box::new(Complement(inner.build()?)),
        })
    }
}

impl SetPredicate for Box<dyn SetPredicate> {
    fn contains(&self, n: u64) -> bool {
        (**self).contains(n)
    }

    fn indicator(&self, len: u64) -> Vec<bool> {
        (**self).indicator(len)
    }
}

/// `|S cap [1, N]|`.
pub fn count_in_window(pred: &impl SetPredicate, n: u64) -> u64 {
    pred.indicator(n).into_iter().filter(|&b| b).count() as u64
}

/// Ratios `|S cap [1, N]| / N` along a grid, with liminf/limsup read off the
/// last third of the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    /// Set only when `limsup_est - liminf_est <= tolerance`.
    pub value: Option<f64>,
    pub liminf_est: f64,
    pub limsup_est: f64,
    pub tolerance: f64,
    pub window_grid: Vec<u64>,
    pub ratios: Vec<f64>,
}

impl DensityEstimate {
    /// CSV series `N,ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,ratio\n");
        for (n, r) in self.window_grid.iter().zip(&self.ratios) {
            out.push_str(&format!("{n},{r}\n"));
        }
        out
    }
}

pub const DEFAULT_DENSITY_TOLERANCE: f64 = 1e-2;

/// `points` roughly log-spaced integers from `lo` to `hi` inclusive, deduplicated.
pub fn log_grid(lo: u64, hi: u64, points: usize) -> Vec<u64> {
    let lo = lo.max(1);
    if points < 2 || hi <= lo {
        return vec![hi.max(lo)];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut grid: Vec<u64> = (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp().round() as u64)
        .collect();
    *grid.last_mut().unwrap() = hi;
    grid[0] = lo;
    grid.dedup();
    grid
}

pub fn asymptotic_density_profile(
    pred: &impl SetPredicate,
    grid: &[u64],
    tolerance: f64,
) -> Result<DensityEstimate> {
    if grid.is_empty() {
        return Err(Error::Diagnostic("density grid is empty".into()));
    }
    if grid[0] == 0 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Diagnostic("density grid must be positive and increasing".into()));
    }
    let top = *grid.last().unwrap();
    let ind = pred.indicator(top);
    let mut ratios = Vec::with_capacity(grid.len());
    let mut count = 0u64;
    let mut pos = 0usize;
    for &n in grid {
        while pos < n as usize {
            count += ind[pos] as u64;
            pos += 1;
        }
        ratios.push(count as f64 / n as f64);
    }
    let tail_len = (grid.len() / 3).max(1);
    let tail = &ratios[grid.len() - tail_len..];
    let liminf_est = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let limsup_est = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let value = (limsup_est - liminf_est <= tolerance).then(|| *ratios.last().unwrap());
    Ok(DensityEstimate {
        value,
        liminf_est,
        limsup_est,
        tolerance,
        window_grid: grid.to_vec(),
        ratios,
    })
}

/// Exact density of a finite union of progressions.
pub fn ap_union_density(s: &APSet) -> Result<BigRational> {
    s.density()
}

/// When a residue class counts as infinitely hit on a window `[1, N]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Persistence {
    pub min_hits: u64,
    /// The last hit must fall in `(N * (1 - recent_fraction), N]`; `1.0` disables this.
    pub recent_fraction: f64,
}

impl Default for Persistence {
    fn default() -> Self {
        Self { min_hits: 3, recent_fraction: 1.0 / 3.0 }
    }
}

impl Persistence {
    /// Hit count only.
    pub fn count_only(min_hits: u64) -> Self {
        Self { min_hits, recent_fraction: 1.0 }
    }

    fn accepts(&self, hits: u64, last: u64, window: u64) -> bool {
        hits >= self.min_hits && (last as f64) > window as f64 * (1.0 - self.recent_fraction)
    }
}

/// Per-residue hit counts and last-hit positions of `S cap [1, N]` mod `m`.
fn residue_profile(ind: &[bool], m: u64) -> (Vec<u64>, Vec<u64>) {
    let mut hits = vec![0u64; m as usize];
    let mut last = vec![0u64; m as usize];
    for (i, &b) in ind.iter().enumerate() {
        if b {
            let n = i as u64 + 1;
            let r = (n % m) as usize;
            hits[r] += 1;
            last[r] = n;
        }
    }
    (hits, last)
}

/// A cover of `S cap [1, verified_upto]` by progressions, with its cost.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverCertificate {
    pub cover: APSet,
    /// `sum 1/m_j` over the cover, exact.
    pub cost: BigRational,
    pub verified_upto: u64,
    /// Ladder level whose residues make up the bulk of the cover (0 for hinted covers).
    pub level: u64,
    pub singletons: usize,
}

impl CoverCertificate {
    pub fn cost_f64(&self) -> f64 {
        self.cost.to_f64().unwrap_or(f64::NAN)
    }

    /// Checks that every element of `S cap [1, verified_upto]` is covered.
    pub fn verify(&self, pred: &impl SetPredicate) -> bool {
        let ind = pred.indicator(self.verified_upto);
        covers_window(&self.cover, &ind)
    }

    /// Concatenation of two covers (cost is additive).
    pub fn concat(&self, other: &CoverCertificate) -> CoverCertificate {
        CoverCertificate {
            cover: self.cover.union(&other.cover),
            cost: &self.cost + &other.cost,
            verified_upto: self.verified_upto.min(other.verified_upto),
            level: 0,
            singletons: self.singletons + other.singletons,
        }
    }
}

impl Serialize for CoverCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CoverCertificate", 6)?;
        st.serialize_field("level", &self.level)?;
        st.serialize_field("cost", &self.cost.to_string())?;
        st.serialize_field("cost_f64", &self.cost_f64())?;
        st.serialize_field("verified_upto", &self.verified_upto)?;
        st.serialize_field("singletons", &self.singletons)?;
        st.serialize_field("progressions", &self.cover.len())?;
        st.end()
    }
}

fn covers_window(cover: &APSet, ind: &[bool]) -> bool {
    let mut by_mod: BTreeMap<u64, HashSet<u64>> = BTreeMap::new();
    for p in cover.progressions() {
        by_mod.entry(p.m).or_default().insert(p.r);
    }
    ind.iter().enumerate().filter(|(_, &b)| b).all(|(i, _)| {
        let n = i as u64 + 1;
        by_mod.iter().any(|(m, rs)| rs.contains(&(n % m)))
    })
}

/// Rewrites a residue set mod `m` as progressions with the smallest moduli
/// possible: a residue `r` mod `d | m` whose `m/d` lifts are all present
/// becomes `r + (d)`.
fn merge_residues(present: &[bool], m: u64) -> APSet {
    let mut left: Vec<bool> = present.to_vec();
    let mut out = APSet::empty();
    for d in divisors(m) {
        for r in 0..d {
            let mut lifts = (r..m).step_by(d as usize);
            if lifts.all(|x| left[x as usize]) {
                for x in (r..m).step_by(d as usize) {
                    left[x as usize] = false;
                }
                out.push(Progression { r, m: d });
            }
        }
    }
    out
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Per-level covers: persistent residues mod `m` as progressions, other
/// window elements as singletons `n + (M)` with `M = max(ladder) * (N + 1)`.
/// Levels with `N < min_hits * m` cannot be classified and are skipped.
pub fn buck_upper_levels(
    pred: &impl SetPredicate,
    ladder: &Ladder,
    window: u64,
    persistence: Persistence,
) -> Result<Vec<CoverCertificate>> {
    let ind = pred.indicator(window);
    let singleton_mod = ladder
        .top()
        .checked_mul(window + 1)
        .ok_or_else(|| Error::Capacity("singleton modulus overflows u64".into()))?;
    let mut out = Vec::new();
    for &m in ladder.levels() {
        if window < persistence.min_hits.saturating_mul(m) {
            continue;
        }
        let (hits, last) = residue_profile(&ind, m);
        let persistent: Vec<bool> = (0..m as usize)
            .map(|r| persistence.accepts(hits[r], last[r], window))
            .collect();
        let classes = persistent.iter().filter(|&&p| p).count() as u64;
        let mut cover = merge_residues(&persistent, m);
        let mut singletons = 0usize;
        for (i, &b) in ind.iter().enumerate() {
            let n = i as u64 + 1;
            if b && !persistent[(n % m) as usize] {
                cover.push(Progression { r: n, m: singleton_mod });
                singletons += 1;
            }
        }
        let cost = ratio(classes, m) + ratio(singletons as u64, singleton_mod);
        out.push(CoverCertificate { cover, cost, verified_upto: window, level: m, singletons });
    }
    if out.is_empty() {
        return Err(Error::Diagnostic(format!(
            "window {window} too small to classify residues at any ladder level (need >= {} * {})",
            persistence.min_hits,
            ladder.levels()[0]
        )));
    }
    Ok(out)
}

/// Cheapest certificate over the ladder.
pub fn buck_upper(
    pred: &impl SetPredicate,
    ladder: &Ladder,
    window: u64,
    persistence: Persistence,
) -> Result<CoverCertificate> {
    buck_upper_with_hints(pred, ladder, window, persistence, &[])
}

/// As [`buck_upper`], also considering caller-supplied covers (for instance the
/// concatenation of covers of two parts). Hints that fail verification on the
/// window are ignored.
pub fn buck_upper_with_hints(
    pred: &impl SetPredicate,
    ladder: &Ladder,
    window: u64,
    persistence: Persistence,
    hints: &[CoverCertificate],
) -> Result<CoverCertificate> {
    let mut best = buck_upper_levels(pred, ladder, window, persistence)?
        .into_iter()
        .min_by(|a, b| a.cost.cmp(&b.cost))
        .expect("non-empty");
    if !hints.is_empty() {
        let ind = pred.indicator(window);
        for h in hints {
            if h.verified_upto >= window && h.cost < best.cost && covers_window(&h.cover, &ind) {
                best = CoverCertificate { verified_upto: window, ..h.clone() };
            }
        }
    }
    Ok(best)
}

/// `c_m(S) / m`, where `c_m(S)` counts residues mod `m` holding at least
/// `threshold` elements of `S cap [1, N]`.
pub fn residue_saturation(
    pred: &impl SetPredicate,
    m: u64,
    window: u64,
    threshold: u64,
) -> Result<BigRational> {
    let ind = pred.indicator(window);
    saturation_from_indicator(&ind, m, window, threshold)
}

fn saturation_from_indicator(ind: &[bool], m: u64, window: u64, threshold: u64) -> Result<BigRational> {
    if m == 0 || window < threshold.saturating_mul(m) {
        return Err(Error::Diagnostic(format!(
            "window {window} shorter than threshold {threshold} x modulus {m}"
        )));
    }
    let (hits, _) = residue_profile(ind, m);
    let saturated = hits.iter().filter(|&&h| h >= threshold).count() as u64;
    Ok(ratio(saturated, m))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelGap {
    pub modulus: u64,
    pub upper: f64,
    pub upper_complement: f64,
    /// `upper + upper_complement - 1`.
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurabilityReport {
    pub levels: Vec<LevelGap>,
    /// `1 - upper_complement` at the last level.
    pub lower_estimate: f64,
    pub upper_estimate: f64,
    pub tolerance: f64,
    pub measurable: bool,
    pub window: u64,
}

impl fmt::Display for MeasurabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.levels {
            writeln!(f, "m={:<8} upper={:.6} upper_c={:.6} gap={:.6}", l.modulus, l.upper, l.upper_complement, l.gap)?;
        }
        write!(
            f,
            "verdict: {}",
            if self.measurable { "measurable within tolerance" } else { "non-measurable" }
        )
    }
}

pub const DEFAULT_GAP_TOLERANCE: f64 = 0.15;

/// Saturation of `S` and of its complement along the ladder; the verdict
/// compares the gap at the last usable level with `tolerance`.
pub fn buck_measurability_check(
    pred: &impl SetPredicate,
    ladder: &Ladder,
    window: u64,
    threshold: u64,
    tolerance: f64,
) -> Result<MeasurabilityReport> {
    let ind = pred.indicator(window);
    let comp: Vec<bool> = ind.iter().map(|b| !b).collect();
    let mut levels = Vec::new();
    for &m in ladder.levels() {
        if window < threshold.saturating_mul(m) {
            continue;
        }
        let upper = saturation_from_indicator(&ind, m, window, threshold)?;
        let upper_c = saturation_from_indicator(&comp, m, window, threshold)?;
        let gap = &upper + &upper_c - BigRational::from_integer(1.into());
        levels.push(LevelGap {
            modulus: m,
            upper: upper.to_f64().unwrap(),
            upper_complement: upper_c.to_f64().unwrap(),
            gap: gap.to_f64().unwrap(),
        });
    }
    let last = levels.last().ok_or_else(|| {
        Error::Diagnostic(format!("window {window} too small for every ladder level"))
    })?;
    Ok(MeasurabilityReport {
        lower_estimate: 1.0 - last.upper_complement,
        upper_estimate: last.upper,
        measurable: last.gap <= tolerance,
        tolerance,
        window,
        levels,
    })
}
