//! The polyadic metric, p-continuity diagnostics, Haar means along ladders,
//! and points of the polyadic integers as coherent residue chains.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::apset::APSet;
use crate::error::{Error, Result};
use crate::ladder::Ladder;
use crate::seqgen::{Generator, SequenceWindow};
use crate::sieve::divisors;

/// `numerator / 2^exponent`, kept with an odd numerator (or zero with exponent 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigInt,
    exponent: u64,
}

impl DyadicRational {
    pub fn new(numerator: BigInt, exponent: u64) -> Self {
        if numerator.is_zero() {
            return Self::zero();
        }
        let tz = numerator.trailing_zeros().unwrap_or(0).min(exponent);
        Self { numerator: numerator >> tz, exponent: exponent - tz }
    }

    pub fn zero() -> Self {
        Self { numerator: BigInt::zero(), exponent: 0 }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Nearest-ish `f64` (truncates the numerator to 64 leading bits).
    pub fn to_f64(&self) -> f64 {
        let bits = self.numerator.bits();
        let shift = bits.saturating_sub(64);
        let top = (&self.numerator >> shift).to_f64().unwrap_or(0.0);
        top * 2f64.powi(shift as i32 - self.exponent.min(i32::MAX as u64) as i32)
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt) {
        let e = self.exponent.max(other.exponent);
        (
            &self.numerator << (e - self.exponent),
            &other.numerator << (e - other.exponent),
        )
    }
}

impl std::ops::Add for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: Self) -> DyadicRational {
        let (a, b) = self.aligned(rhs);
        DyadicRational::new(a + b, self.exponent.max(rhs.exponent))
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, BigInt::one() << self.exponent)
        }
    }
}

/// `d(a, b) = sum_{n >= 1} psi_n(a - b) / 2^n`, with `psi_n(x) = 0` iff `n | x`,
/// evaluated exactly as `1 - sum_{n | a-b} 2^-n` (and 0 when `a = b`).
pub fn polyadic_distance(a: i64, b: i64) -> DyadicRational {
    let d = a.abs_diff(b);
    if d == 0 {
        return DyadicRational::zero();
    }
    let mut num = BigInt::one() << d;
    for n in divisors(d) {
        num -= BigInt::one() << (d - n);
    }
    DyadicRational::new(num, d)
}

/// Double-precision `d(a, b)`; divisors beyond 64 are below `f64` resolution.
pub fn polyadic_distance_f64(a: i64, b: i64) -> f64 {
    let d = a.abs_diff(b);
    if d == 0 {
        return 0.0;
    }
    let hit: f64 = (1..=64u64).filter(|n| d.is_multiple_of(*n)).map(|n| 0.5f64.powi(n as i32)).sum();
    1.0 - hit
}

/// Max value range inside each residue class mod `m`, over window indices `1..=N`.
fn residue_ranges(w: &SequenceWindow, m: u64) -> Vec<f64> {
    let mut lo = vec![f64::INFINITY; m as usize];
    let mut hi = vec![f64::NEG_INFINITY; m as usize];
    for (i, &x) in w.values().iter().enumerate() {
        let r = ((i as u64 + 1) % m) as usize;
        lo[r] = lo[r].min(x);
        hi[r] = hi[r].max(x);
    }
    lo.iter().zip(&hi).map(|(a, b)| if b >= a { b - a } else { 0.0 }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub eps: f64,
    pub modulus: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityProfile {
    /// Smallest ladder modulus for each `eps` that has one.
    pub pairs: Vec<Witness>,
    /// `eps` values with no witness in the ladder.
    pub failures: Vec<f64>,
    /// `(m, max over residues of the in-class range)` per ladder level.
    pub level_ranges: Vec<(u64, f64)>,
    pub window: usize,
}

impl ContinuityProfile {
    pub fn witness(&self, eps: f64) -> Option<u64> {
        self.pairs.iter().find(|w| w.eps == eps).map(|w| w.modulus)
    }
}

/// For each `eps`, the smallest ladder `m` with `a = b (mod m) => |v(a) - v(b)| < eps`
/// on the whole window.
pub fn p_continuity_profile(w: &SequenceWindow, eps_list: &[f64], ladder: &Ladder) -> Result<ContinuityProfile> {
    if (w.len() as u64) < 2 * ladder.top() {
        return Err(Error::Diagnostic(format!(
            "window {} shorter than twice the top ladder level {}",
            w.len(),
            ladder.top()
        )));
    }
    let level_ranges: Vec<(u64, f64)> = ladder
        .levels()
        .iter()
        .map(|&m| (m, residue_ranges(w, m).into_iter().fold(0.0, f64::max)))
        .collect();
    let mut pairs = Vec::new();
    let mut failures = Vec::new();
    for &eps in eps_list {
        match level_ranges.iter().find(|(_, r)| *r < eps) {
            Some(&(m, _)) => pairs.push(Witness { eps, modulus: m }),
            None => failures.push(eps),
        }
    }
    Ok(ContinuityProfile { pairs, failures, level_ranges, window: w.len() })
}

/// Residue classes mod `modulus` allowed to break continuity, with their measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalSet {
    pub aps: APSet,
    /// `|exceptional residues| / modulus`, the exact density of `aps`.
    pub mu_upper: f64,
    pub modulus: u64,
    pub eps: f64,
    pub verified_upto: usize,
}

impl ExceptionalSet {
    /// Re-checks the continuity implication off the exceptional set on `w`.
    pub fn verify(&self, w: &SequenceWindow) -> bool {
        residue_ranges(w, self.modulus)
            .iter()
            .enumerate()
            .all(|(r, &range)| range < self.eps || self.aps.contains(r as u64))
    }
}

/// Witness search for weak p-continuity: the first ladder level where residue
/// classes with range `>= eps` make up less than `delta` of all classes.
/// Levels above `N/2` are not examined.
pub fn weak_continuity_profile(w: &SequenceWindow, eps: f64, delta: f64, ladder: &Ladder) -> Result<ExceptionalSet> {
    let mut best = (0u64, f64::INFINITY);
    let mut examined = false;
    for &m in ladder.levels() {
        if 2 * m > w.len() as u64 {
            break;
        }
        examined = true;
        let ranges = residue_ranges(w, m);
        let bad: Vec<u64> = (0..m).filter(|&r| ranges[r as usize] >= eps).collect();
        let fraction = bad.len() as f64 / m as f64;
        if fraction < delta {
            return Ok(ExceptionalSet {
                aps: APSet::from_residues(bad, m)?,
                mu_upper: fraction,
                modulus: m,
                eps,
                verified_upto: w.len(),
            });
        }
        if fraction < best.1 {
            best = (m, fraction);
        }
    }
    if !examined {
        return Err(Error::Diagnostic(format!(
            "window {} shorter than twice the first ladder level",
            w.len()
        )));
    }
    Err(Error::WeakContinuity { best_level: best.0, best_fraction: best.1 })
}

/// The `m`-periodic sequence `n -> h(n mod m)`.
pub fn periodize(h: &Generator, m: u64) -> Result<Generator> {
    if m == 0 {
        return Err(Error::Specification("period must be >= 1".into()));
    }
    let table = (0..m as u128).map(|s| h.value(s)).collect::<Result<Vec<_>>>()?;
    Ok(Generator::Periodic(table))
}

/// `(1/m) sum_{s < m} h(s)`: the Haar integral of the periodization.
pub fn period_mean(h: &Generator, m: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Specification("period must be >= 1".into()));
    }
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for s in 0..m as u128 {
        let x = h.value(s)?;
        let t = sum + x;
        c += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    Ok((sum + c) / m as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HaarTrace {
    /// Period mean at the top level.
    pub value: f64,
    /// `(m, period_mean(h, m))` for every level.
    pub trace: Vec<(u64, f64)>,
}

/// Period means along the ladder; the top level gives the estimate.
pub fn haar_integral(h: &Generator, ladder: &Ladder) -> Result<HaarTrace> {
    let trace = ladder
        .levels()
        .iter()
        .map(|&m| period_mean(h, m).map(|v| (m, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(HaarTrace { value: trace.last().unwrap().1, trace })
}

/// A point of the polyadic integers, given by its residues along a divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaPoint {
    levels: Vec<BigUint>,
    residues: Vec<BigUint>,
}

impl OmegaPoint {
    pub fn new(levels: Vec<BigUint>, residues: Vec<BigUint>) -> Result<Self> {
        validate_chain(&levels)?;
        if residues.len() != levels.len() {
            return Err(Error::Specification("one residue per level required".into()));
        }
        for (i, (r, m)) in residues.iter().zip(&levels).enumerate() {
            if r >= m {
                return Err(Error::Specification(format!("residue {r} not reduced mod {m}")));
            }
            if i > 0 && (r % &levels[i - 1]) != residues[i - 1] {
                return Err(Error::Specification(format!("residues incoherent at level {m}")));
            }
        }
        Ok(Self { levels, residues })
    }

    /// The point `n` (its residues along the chain).
    pub fn from_integer(n: &BigUint, levels: Vec<BigUint>) -> Result<Self> {
        let residues = levels.iter().map(|m| n % m).collect();
        Self::new(levels, residues)
    }

    pub fn levels(&self) -> &[BigUint] {
        &self.levels
    }

    pub fn residues(&self) -> &[BigUint] {
        &self.residues
    }

    /// Residue modulo any `q` dividing the top level.
    pub fn residue_mod(&self, q: u128) -> Result<u128> {
        let top = self.levels.last().unwrap();
        let qb = BigUint::from(q);
        if q == 0 || !(top % &qb).is_zero() {
            return Err(Error::InsufficientResolution(format!(
                "modulus {q} does not divide the top level {top}"
            )));
        }
        Ok((self.residues.last().unwrap() % qb).to_u128().unwrap())
    }
}

fn validate_chain(levels: &[BigUint]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::Specification("ladder must have at least one level".into()));
    }
    if levels[0].is_zero() {
        return Err(Error::Specification("ladder levels must be >= 1".into()));
    }
    for w in levels.windows(2) {
        if w[1] <= w[0] || !(&w[1] % &w[0]).is_zero() {
            return Err(Error::Specification(format!("not a divisibility chain at {} -> {}", w[0], w[1])));
        }
    }
    Ok(())
}

pub fn big_levels(ladder: &Ladder) -> Vec<BigUint> {
    ladder.levels().iter().map(|&m| BigUint::from(m)).collect()
}

/// Cumulative products of `p^{j_p}` with `p^{j_p} >= 1/eps`: a chain fine enough
/// to resolve base-`p` digit expansions to `eps` for every listed prime.
pub fn prime_power_levels(primes: &[u64], eps: f64) -> Vec<BigUint> {
    let mut acc = BigUint::one();
    primes
        .iter()
        .map(|&p| {
            let mut q = 1u128;
            while (q as f64) < 1.0 / eps {
                q *= p as u128;
            }
            acc *= BigUint::from(q);
            acc.clone()
        })
        .collect()
}

fn uniform_below(rng: &mut impl RngCore, bound: &BigUint) -> BigUint {
    if let Some(b) = bound.to_u64() {
        return BigUint::from(rand::Rng::gen_range(rng, 0..b));
    }
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess = bytes as u64 * 8 - bits;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[bytes - 1] >>= excess;
        let x = BigUint::from_bytes_le(&buf);
        if &x < bound {
            return x;
        }
    }
}

/// Haar-random point: uniform residue at the first level, then uniform digits
/// `< m_{i+1}/m_i` lifting each residue to the next level.
pub fn sample_omega(seed: u64, levels: &[BigUint]) -> Result<OmegaPoint> {
    validate_chain(levels)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut residues = Vec::with_capacity(levels.len());
    let mut r = uniform_below(&mut rng, &levels[0]);
    residues.push(r.clone());
    for w in levels.windows(2) {
        let digit = uniform_below(&mut rng, &(&w[1] / &w[0]));
        r += &w[0] * digit;
        residues.push(r.clone());
    }
    Ok(OmegaPoint { levels: levels.to_vec(), residues })
}

/// `v~(alpha)` to within `eps`: `v` at the representative of `alpha` modulo a
/// continuity modulus for `eps`. The modulus comes from the generator when it
/// has a closed-form one, otherwise from an exhaustive profile of `window` over
/// the point's (word-sized) levels.
pub fn extend_eval(v: &Generator, alpha: &OmegaPoint, eps: f64, window: Option<&SequenceWindow>) -> Result<f64> {
    if let Some(q) = v.modulus_for(eps) {
        let r = alpha.residue_mod(q).map_err(|_| {
            Error::InsufficientResolution(format!("eps = {eps} needs modulus {q} dividing a ladder level"))
        })?;
        return v.value(r);
    }
    let w = window.ok_or_else(|| {
        Error::InsufficientResolution("no closed-form continuity modulus and no window to profile".into())
    })?;
    let usable: Vec<u64> = alpha
        .levels
        .iter()
        .filter_map(|m| m.to_u64())
        .filter(|&m| 2 * m <= w.len() as u64)
        .collect();
    if usable.is_empty() {
        return Err(Error::InsufficientResolution("no ladder level fits the window".into()));
    }
    let profile = p_continuity_profile(w, &[eps], &Ladder::new(usable)?)?;
    let m = profile.witness(eps).ok_or_else(|| {
        Error::InsufficientResolution(format!("no ladder level witnesses continuity at eps = {eps}"))
    })?;
    let r = alpha.residue_mod(m as u128)?;
    v.value(r)
}

// JSON form {"levels": [...], "residues": [...]}: word-sized entries as numbers,
// larger ones as decimal strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonUint {
    Small(u64),
    Big(String),
}

impl From<&BigUint> for JsonUint {
    fn from(x: &BigUint) -> Self {
        match x.to_u64() {
            Some(v) => JsonUint::Small(v),
            None => JsonUint::Big(x.to_str_radix(10)),
        }
    }
}

impl JsonUint {
    fn into_big(self) -> std::result::Result<BigUint, String> {
        match self {
            JsonUint::Small(v) => Ok(BigUint::from(v)),
            JsonUint::Big(s) => BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| format!("bad integer `{s}`")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct OmegaJson {
    levels: Vec<JsonUint>,
    residues: Vec<JsonUint>,
}

impl Serialize for OmegaPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OmegaJson {
            levels: self.levels.iter().map(JsonUint::from).collect(),
            residues: self.residues.iter().map(JsonUint::from).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OmegaPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = OmegaJson::deserialize(d)?;
        let conv = |v: Vec<JsonUint>| v.into_iter().map(JsonUint::into_big).collect::<std::result::Result<Vec<_>, _>>();
        let levels = conv(j.levels).map_err(D::Error::custom)?;
        let residues = conv(j.residues).map_err(D::Error::custom)?;
        OmegaPoint::new(levels, residues).map_err(D::Error::custom)
    }
}

/// Whether `q` divides some level (equivalently the top level) of the ladder.
pub fn ladder_resolves(ladder: &Ladder, q: u64) -> bool {
    q != 0 && ladder.top().is_multiple_of(q)
}
