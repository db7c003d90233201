//! Sequence families: van der Corput sequences in general base chains,
//! prime-power-insensitive additive functions, simple sequences, and the
//! finite windows they produce.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::apset::{APSet, Progression};
use crate::error::{Error, Result};
use crate::sieve::{distinct_prime_factors, is_prime, SpfSieve};

/// How a [`BaseChain`] continues past its stored levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    /// No continuation; the stored levels are all there is.
    Fixed,
    /// `Q_{k+1} = ratio * Q_k`.
    Geometric(u64),
    /// `Q_k = (k+1)!`.
    Factorial,
}

/// A divisibility chain `1 = Q_0 | Q_1 | ... | Q_K` with a growth rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseChain {
    moduli: Vec<u128>,
    growth: Growth,
}

impl BaseChain {
    /// A fixed chain from explicit moduli.
    pub fn new(moduli: Vec<u128>) -> Result<Self> {
        Self::validate(&moduli)?;
        Ok(Self { moduli, growth: Growth::Fixed })
    }

    /// `Q_k = ratio^k` for `k = 0..=levels`, growing geometrically beyond.
    pub fn geometric(ratio: u64, levels: usize) -> Result<Self> {
        if ratio < 2 {
            return Err(Error::Specification("chain ratio must be >= 2".into()));
        }
        let mut moduli = vec![1u128];
        for _ in 0..levels {
            let next = moduli.last().unwrap().checked_mul(ratio as u128).ok_or_else(|| {
                Error::Capacity(format!("{ratio}^{levels} overflows u128"))
            })?;
            moduli.push(next);
        }
        Ok(Self { moduli, growth: Growth::Geometric(ratio) })
    }

    /// `Q_k = (k+1)!` for `k = 0..=levels`.
    pub fn factorial(levels: usize) -> Result<Self> {
        let mut moduli = vec![1u128];
        for k in 1..=levels {
            let next = moduli[k - 1]
                .checked_mul(k as u128 + 1)
                .ok_or_else(|| Error::Capacity(format!("{}! overflows u128", levels + 1)))?;
            moduli.push(next);
        }
        Ok(Self { moduli, growth: Growth::Factorial })
    }

    fn validate(moduli: &[u128]) -> Result<()> {
        if moduli.first() != Some(&1) {
            return Err(Error::Specification("base chain must start with Q_0 = 1".into()));
        }
        for w in moduli.windows(2) {
            if w[1] <= w[0] || w[1] % w[0] != 0 {
                return Err(Error::Specification(format!(
                    "base chain must be strictly increasing under divisibility ({} -> {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    pub fn moduli(&self) -> &[u128] {
        &self.moduli
    }

    pub fn growth(&self) -> Growth {
        self.growth
    }

    /// Number of stored levels `K` (so `Q_K` is the last stored modulus).
    pub fn levels(&self) -> usize {
        self.moduli.len() - 1
    }

    /// `Q_K`; `gen_vdc` accepts `n < Q_K`.
    pub fn capacity(&self) -> u128 {
        *self.moduli.last().unwrap()
    }

    /// Digit radices `Q_{j+1}/Q_j`: stored ones first, then the growth rule.
    pub fn radices(&self) -> impl Iterator<Item = u128> + '_ {
        let stored = self.moduli.windows(2).map(|w| w[1] / w[0]);
        let k0 = self.moduli.len() as u128;
        let tail: Box<dyn Iterator<Item = u128>> = match self.growth {
            Growth::Fixed => Box::new(std::iter::empty()),
            Growth::Geometric(r) => Box::new(std::iter::repeat(r as u128)),
            Growth::Factorial => Box::new(k0 + 1..),
        };
        stored.chain(tail)
    }

    /// A copy grown (by the growth rule) until `Q_K > n`.
    pub fn extended_to(&self, n: u128) -> Result<BaseChain> {
        let mut out = self.clone();
        let mut radices = self.radices().skip(self.levels());
        while out.capacity() <= n {
            let r = radices.next().ok_or_else(|| {
                Error::Capacity(format!("fixed chain with Q_K = {} cannot reach {n}", out.capacity()))
            })?;
            let next = out
                .capacity()
                .checked_mul(r)
                .ok_or_else(|| Error::Capacity("chain modulus overflows u128".into()))?;
            out.moduli.push(next);
        }
        Ok(out)
    }

    /// Mixed-radix digits `a_0, a_1, ...` of `n` (stored levels only, `n < Q_K`).
    pub fn digits(&self, n: u128) -> Result<Vec<u128>> {
        if n >= self.capacity() {
            return Err(Error::Capacity(format!(
                "n = {n} needs a chain beyond Q_K = {}",
                self.capacity()
            )));
        }
        let mut rem = n;
        let mut out = Vec::new();
        for w in self.moduli.windows(2) {
            if rem == 0 {
                break;
            }
            let b = w[1] / w[0];
            out.push(rem % b);
            rem /= b;
        }
        Ok(out)
    }

    /// Inverse of [`BaseChain::digits`]: `sum a_j Q_j`.
    pub fn from_digits(&self, digits: &[u128]) -> u128 {
        digits.iter().zip(&self.moduli).map(|(a, q)| a * q).sum()
    }

    /// `gamma(n) = sum a_j / Q_{j+1}`, continuing the chain by its growth rule.
    pub fn radical_inverse(&self, n: u128) -> Result<f64> {
        let mut rem = n;
        let mut stack: Vec<(u128, u128)> = Vec::new();
        let mut radices = self.radices();
        while rem > 0 {
            let b = radices.next().ok_or_else(|| {
                Error::Capacity(format!(
                    "n = {n} needs a chain beyond Q_K = {}",
                    self.capacity()
                ))
            })?;
            stack.push((rem % b, b));
            rem /= b;
        }
        let mut acc = 0.0f64;
        for &(a, b) in stack.iter().rev() {
            acc = (a as f64 + acc) / b as f64;
        }
        Ok(acc)
    }

    /// Smallest chain modulus `Q_j >= 1/eps`. Congruence mod `Q_j` pins the
    /// first `j` digits, so values differ by less than `1/Q_j <= eps`.
    pub fn modulus_for(&self, eps: f64) -> Option<u128> {
        if !(eps > 0.0) {
            return None;
        }
        let mut q = 1u128;
        let mut radices = self.radices();
        loop {
            if 1.0 / (q as f64) <= eps {
                return Some(q);
            }
            q = q.checked_mul(radices.next()?)?;
        }
    }
}

/// `gamma(n)` for `n < Q_K`.
pub fn gen_vdc(n: u64, chain: &BaseChain) -> Result<f64> {
    if n as u128 >= chain.capacity() {
        return Err(Error::Capacity(format!(
            "n = {n} needs a chain beyond Q_K = {}",
            chain.capacity()
        )));
    }
    chain.radical_inverse(n as u128)
}

/// Window `gamma(1..=len)`, growing the chain as needed.
pub fn vdc_window(chain: &BaseChain, len: usize) -> Result<SequenceWindow> {
    let chain = chain.extended_to(len as u128)?;
    let values = (1..=len as u128)
        .map(|n| chain.radical_inverse(n))
        .collect::<Result<Vec<_>>>()?;
    Ok(SequenceWindow::with_bounds(values, 0.0, 1.0)?.with_generator(Generator::Vdc(chain)))
}

/// Values `f(p)` of a non-negative additive function with `f(p^k) = f(p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdditiveFunctionSpec {
    prime_values: BTreeMap<u64, f64>,
    tail_bound: f64,
    truncated: bool,
}

impl AdditiveFunctionSpec {
    /// Strict spec: every prime a window touches must be stored.
    pub fn new(prime_values: BTreeMap<u64, f64>, tail_bound: f64) -> Result<Self> {
        if !(tail_bound >= 0.0) || !tail_bound.is_finite() {
            return Err(Error::Specification("tail bound must be finite and >= 0".into()));
        }
        for (&p, &v) in &prime_values {
            if !is_prime(p) {
                return Err(Error::Specification(format!("{p} is not prime")));
            }
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Specification(format!("f({p}) = {v} must be finite and >= 0")));
            }
        }
        let mut seen: Vec<f64> = prime_values.values().copied().collect();
        seen.sort_by(f64::total_cmp);
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Specification("f must take distinct values on distinct primes".into()));
        }
        Ok(Self { prime_values, tail_bound, truncated: false })
    }

    /// `f(p) = value(p)` for all primes `p <= p_max`; primes above are dropped
    /// and accounted for by `tail_bound`.
    pub fn from_fn(p_max: u64, value: impl Fn(u64) -> f64, tail_bound: f64) -> Result<Self> {
        let sieve = SpfSieve::new(p_max as usize);
        let map = sieve.primes().map(|p| (p, value(p))).collect();
        Ok(Self::new(map, tail_bound)?.truncated())
    }

    /// Treat primes above the largest stored prime as zero (mass <= tail bound).
    pub fn truncated(mut self) -> Self {
        self.truncated = true;
        self
    }

    pub fn prime_values(&self) -> &BTreeMap<u64, f64> {
        &self.prime_values
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn max_prime(&self) -> u64 {
        self.prime_values.keys().next_back().copied().unwrap_or(1)
    }

    fn f(&self, p: u64) -> Result<f64> {
        match self.prime_values.get(&p) {
            Some(&v) => Ok(v),
            None if self.truncated && p > self.max_prime() => Ok(0.0),
            None => Err(Error::Specification(format!("no value stored for prime {p}"))),
        }
    }

    /// Sum of all stored values; the polyadic limit of `f(N!)`, i.e. `f` at 0.
    pub fn total_mass(&self) -> f64 {
        self.prime_values.values().sum()
    }

    /// `sum_{p > bound} f(p)` over stored primes plus the tail bound.
    pub fn tail_beyond(&self, bound: u64) -> f64 {
        self.prime_values.range(bound + 1..).map(|(_, v)| v).sum::<f64>() + self.tail_bound
    }

    pub fn value(&self, n: u128) -> Result<f64> {
        if n == 0 {
            return Ok(self.total_mass());
        }
        let n = u64::try_from(n).map_err(|_| Error::Capacity("additive argument beyond u64".into()))?;
        distinct_prime_factors(n).into_iter().try_fold(0.0, |acc, p| Ok(acc + self.f(p)?))
    }

    /// Smallest primorial `P#` whose congruence class forces `|f(a) - f(b)| < eps`:
    /// congruent arguments share their primes up to `P`, the rest weighs at most
    /// `tail_beyond(P)`.
    pub fn modulus_for(&self, eps: f64) -> Option<u128> {
        let mut modulus = 1u128;
        if self.tail_beyond(1) < eps {
            return Some(1);
        }
        for &p in self.prime_values.keys() {
            modulus = modulus.checked_mul(p as u128)?;
            if self.tail_beyond(p) < eps {
                return Some(modulus);
            }
        }
        None
    }
}

/// Window `f(1..=len)` via a smallest-prime-factor sieve.
pub fn gen_additive(len: usize, spec: &AdditiveFunctionSpec) -> Result<SequenceWindow> {
    if len == 0 {
        return Err(Error::Specification("window length must be >= 1".into()));
    }
    let sieve = SpfSieve::new(len);
    let mut values = Vec::with_capacity(len);
    for n in 1..=len {
        let mut acc = 0.0;
        for p in sieve.distinct_primes(n) {
            acc += spec.f(p)?;
        }
        values.push(acc);
    }
    Ok(SequenceWindow::new(values)?.with_generator(Generator::Additive(spec.clone())))
}

/// One part `c * 1_S` of a simple sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplePart {
    pub set: APSet,
    pub coefficient: f64,
}

/// `s(n) = sum_j c_j 1_{S_j}(n)` over pairwise disjoint progression sets.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SimpleSpec {
    parts: Vec<SimplePart>,
}

impl SimpleSpec {
    pub fn new(parts: Vec<SimplePart>) -> Result<Self> {
        for (i, a) in parts.iter().enumerate() {
            for b in &parts[i + 1..] {
                if !a.set.is_disjoint_from(&b.set)? {
                    return Err(Error::Specification(format!(
                        "simple sequence parts {} and {} overlap",
                        a.set, b.set
                    )));
                }
            }
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[SimplePart] {
        &self.parts
    }

    pub fn value(&self, n: u128) -> f64 {
        self.parts
            .iter()
            .find(|p| {
                p.set
                    .progressions()
                    .iter()
                    .any(|q| n % q.m as u128 == q.r as u128)
            })
            .map_or(0.0, |p| p.coefficient)
    }

    /// Common period of all parts.
    pub fn period(&self) -> Result<u64> {
        let all = self
            .parts
            .iter()
            .fold(APSet::empty(), |acc, p| acc.union(&p.set));
        all.period()
    }
}

pub fn gen_simple(len: usize, spec: &SimpleSpec) -> Result<SequenceWindow> {
    if len == 0 {
        return Err(Error::Specification("window length must be >= 1".into()));
    }
    let values = (1..=len as u128).map(|n| spec.value(n)).collect();
    Ok(SequenceWindow::new(values)?.with_generator(Generator::Simple(spec.clone())))
}

/// A closed-form sequence without further structure.
#[derive(Clone)]
pub struct CustomFn {
    name: String,
    f: Arc<dyn Fn(u128) -> f64 + Send + Sync>,
}

impl fmt::Debug for CustomFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomFn({})", self.name)
    }
}

/// Closed-form handle attached to a window.
#[derive(Clone, Debug)]
pub enum Generator {
    Vdc(BaseChain),
    Additive(AdditiveFunctionSpec),
    Simple(SimpleSpec),
    /// `v(n) = table[n mod len]`.
    Periodic(Vec<f64>),
    Custom(CustomFn),
}

impl Generator {
    pub fn custom(name: impl Into<String>, f: impl Fn(u128) -> f64 + Send + Sync + 'static) -> Self {
        Generator::Custom(CustomFn { name: name.into(), f: Arc::new(f) })
    }

    /// `v(n)` for any `n >= 0`.
    pub fn value(&self, n: u128) -> Result<f64> {
        match self {
            Generator::Vdc(chain) => chain.radical_inverse(n),
            Generator::Additive(spec) => spec.value(n),
            Generator::Simple(spec) => Ok(spec.value(n)),
            Generator::Periodic(table) => Ok(table[(n % table.len() as u128) as usize]),
            Generator::Custom(c) => Ok((c.f)(n)),
        }
    }

    /// A modulus `q` such that `a = b (mod q)` implies `|v(a) - v(b)| < eps`,
    /// when the family has a known continuity modulus.
    pub fn modulus_for(&self, eps: f64) -> Option<u128> {
        match self {
            Generator::Vdc(chain) => chain.modulus_for(eps),
            Generator::Additive(spec) => spec.modulus_for(eps),
            Generator::Simple(spec) => spec.period().ok().map(u128::from),
            Generator::Periodic(table) => Some(table.len() as u128),
            Generator::Custom(_) => None,
        }
    }

    /// `v(1..=len)`.
    pub fn window(&self, len: usize) -> Result<SequenceWindow> {
        match self {
            Generator::Vdc(chain) => vdc_window(chain, len),
            Generator::Additive(spec) => gen_additive(len, spec),
            Generator::Simple(spec) => gen_simple(len, spec),
            _ => {
                let values = (1..=len as u128).map(|n| self.value(n)).collect::<Result<Vec<_>>>()?;
                Ok(SequenceWindow::new(values)?.with_generator(self.clone()))
            }
        }
    }
}

/// A finite prefix `v(1..=N)` of a real sequence with value bounds.
#[derive(Clone, Debug)]
pub struct SequenceWindow {
    values: Vec<f64>,
    lower: f64,
    upper: f64,
    generator: Option<Generator>,
}

impl SequenceWindow {
    /// Window with bounds taken from the observed range.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Specification("window length must be >= 1".into()));
        }
        if let Some(&x) = values.iter().find(|x| !x.is_finite()) {
            return Err(Error::Domain(x));
        }
        let lower = values.iter().copied().fold(f64::INFINITY, f64::min);
        let upper = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self { values, lower, upper, generator: None })
    }

    /// Window with declared bounds `[lower, upper]`.
    pub fn with_bounds(values: Vec<f64>, lower: f64, upper: f64) -> Result<Self> {
        let mut w = Self::new(values)?;
        if w.lower < lower || w.upper > upper {
            return Err(Error::Specification(format!(
                "values span [{}, {}] outside declared bounds [{lower}, {upper}]",
                w.lower, w.upper
            )));
        }
        w.lower = lower;
        w.upper = upper;
        Ok(w)
    }

    pub fn with_generator(mut self, generator: Generator) -> Self {
        self.generator = Some(generator);
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `v(n)` for `1 <= n <= N`.
    pub fn get(&self, n: u64) -> Result<f64> {
        if n == 0 || n as usize > self.values.len() {
            return Err(Error::Range { index: n, len: self.values.len() });
        }
        Ok(self.values[n as usize - 1])
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn generator(&self) -> Option<&Generator> {
        self.generator.as_ref()
    }

    /// First `len` entries as a new window (generator kept).
    pub fn prefix(&self, len: usize) -> Result<SequenceWindow> {
        if len == 0 || len > self.values.len() {
            return Err(Error::Range { index: len as u64, len: self.values.len() });
        }
        Ok(SequenceWindow {
            values: self.values[..len].to_vec(),
            lower: self.lower,
            upper: self.upper,
            generator: self.generator.clone(),
        })
    }
}

/// `v(k_1), ..., v(k_M)`; indices are 1-based.
pub fn subsequence(w: &SequenceWindow, indices: &[u64]) -> Result<SequenceWindow> {
    let values = indices.iter().map(|&k| w.get(k)).collect::<Result<Vec<_>>>()?;
    let mut out = SequenceWindow::new(values)?;
    out.lower = out.lower.min(w.lower);
    out.upper = out.upper.max(w.upper);
    Ok(out)
}

/// `g(v(n))`; bounds are the observed image range. Non-finite output is a domain error.
pub fn apply_pointwise(g: impl Fn(f64) -> f64, w: &SequenceWindow) -> Result<SequenceWindow> {
    let values = w
        .values
        .iter()
        .map(|&x| {
            let y = g(x);
            if y.is_finite() { Ok(y) } else { Err(Error::Domain(x)) }
        })
        .collect::<Result<Vec<_>>>()?;
    SequenceWindow::new(values)
}

/// JSON-addressable generator description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Vdc { chain: ChainSpec },
    /// Either explicit `primes` (keys are decimal primes) or `decay`/`pmax`
    /// meaning `f(p) = decay^-p` for `p <= pmax`.
    Additive {
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        primes: BTreeMap<String, f64>,
        #[serde(default)]
        tail: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        decay: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pmax: Option<u64>,
    },
    Simple { parts: Vec<SimplePartSpec> },
    Periodic { values: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChainSpec {
    Ratio { ratio: u64, levels: usize },
    Factorial { factorial: usize },
    Moduli { moduli: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplePartSpec {
    pub r: u64,
    pub m: u64,
    pub c: f64,
}

impl ChainSpec {
    pub fn build(&self) -> Result<BaseChain> {
        match self {
            ChainSpec::Ratio { ratio, levels } => BaseChain::geometric(*ratio, *levels),
            ChainSpec::Factorial { factorial } => BaseChain::factorial(*factorial),
            ChainSpec::Moduli { moduli } => BaseChain::new(moduli.iter().map(|&m| m as u128).collect()),
        }
    }
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<Generator> {
        match self {
            GeneratorSpec::Vdc { chain } => Ok(Generator::Vdc(chain.build()?)),
            GeneratorSpec::Additive { primes, tail, decay, pmax } => {
                let spec = match (decay, pmax) {
                    (Some(base), Some(pmax)) => {
                        let base = *base;
                        AdditiveFunctionSpec::from_fn(*pmax, |p| base.powf(-(p as f64)), *tail)?
                    }
                    (None, None) => {
                        let map = primes
                            .iter()
                            .map(|(k, &v)| {
                                k.parse::<u64>()
                                    .map(|p| (p, v))
                                    .map_err(|_| Error::Specification(format!("bad prime key `{k}`")))
                            })
                            .collect::<Result<BTreeMap<_, _>>>()?;
                        AdditiveFunctionSpec::new(map, *tail)?
                    }
                    _ => {
                        return Err(Error::Specification(
                            "additive spec needs both `decay` and `pmax`, or explicit `primes`".into(),
                        ))
                    }
                };
                Ok(Generator::Additive(spec))
            }
            GeneratorSpec::Simple { parts } => {
                let parts = parts
                    .iter()
                    .map(|p| {
                        Ok(SimplePart {
                            set: APSet::new(vec![Progression::new(p.r, p.m)?]),
                            coefficient: p.c,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Generator::Simple(SimpleSpec::new(parts)?))
            }
            GeneratorSpec::Periodic { values } => {
                if values.is_empty() {
                    return Err(Error::Specification("periodic table must be non-empty".into()));
                }
                Ok(Generator::Periodic(values.clone()))
            }
        }
    }
}
