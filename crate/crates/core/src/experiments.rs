//! Desk-scale limit-theorem experiments with explicit precondition gates.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::json;
use libm::erf;

use crate::dist::{edf, interval_independence_stat, moments, uniform_intervals, DEFAULT_INDEPENDENCE_THRESHOLD};
use crate::error::{Error, Result};
use crate::func::TestFn;
use crate::ladder::Ladder;
use crate::polyadic::{extend_eval, prime_power_levels, sample_omega, weak_continuity_profile};
use crate::seqgen::{subsequence, BaseChain, Generator, SequenceWindow};
use crate::sieve::first_primes;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: serde_json::Value,
    /// Key into `statistics` that `pass` compares against `tolerance`.
    pub primary: String,
    pub statistics: BTreeMap<String, f64>,
    pub trace: Vec<BTreeMap<String, f64>>,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: Option<u64>,
}

impl ExperimentReport {
    fn new(name: &str, parameters: serde_json::Value, primary: &str, statistics: BTreeMap<String, f64>, tolerance: f64) -> Self {
        let pass = statistics[primary] <= tolerance;
        Self {
            name: name.into(),
            parameters,
            primary: primary.into(),
            statistics,
            trace: Vec::new(),
            tolerance,
            pass,
            seed: None,
        }
    }

    pub fn statistic(&self) -> f64 {
        self.statistics[&self.primary]
    }

    /// Trace rows as CSV; columns are the union of the row keys in sorted order.
    pub fn trace_csv(&self) -> String {
        let mut cols: Vec<&String> = self.trace.iter().flat_map(|r| r.keys()).collect();
        cols.sort();
        cols.dedup();
        let mut out = cols.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(",");
        out.push('\n');
        for row in &self.trace {
            let line: Vec<String> = cols.iter().map(|c| row.get(*c).map(|v| v.to_string()).unwrap_or_default()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

fn stats<const K: usize>(pairs: [(&str, f64); K]) -> BTreeMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Index sequences `k_n` used for subsequence experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "index")]
pub enum IndexSpec {
    Identity,
    /// `2, 1, 4, 3, ...`
    PairSwap,
    /// `k_n = a n`
    Multiple { a: u64 },
    /// `k_n` = the n-th prime
    Primes,
}

impl IndexSpec {
    pub fn build(&self, n: usize) -> Vec<u64> {
        match self {
            IndexSpec::Identity => (1..=n as u64).collect(),
            IndexSpec::PairSwap => pair_swap(n),
            IndexSpec::Multiple { a } => (1..=n as u64).map(|i| a * i).collect(),
            IndexSpec::Primes => first_primes(n),
        }
    }
}

/// The permutation swapping `2i - 1` and `2i`; an odd last index stays fixed.
pub fn pair_swap(n: usize) -> Vec<u64> {
    (1..=n as u64)
        .map(|i| if i % 2 == 1 { if i < n as u64 { i + 1 } else { i } } else { i - 1 })
        .collect()
}

pub const DEFAULT_NIVEN_TOLERANCE: f64 = 1e-2;
pub const DEFAULT_NIVEN_MODULUS_CAP: u64 = 10;

/// Largest `|freq{k_n = r mod m} - 1/m|` over `m <= modulus_cap`, `r < m`.
pub fn niven_ud_test(k: &[u64], modulus_cap: u64, tolerance: f64) -> Result<ExperimentReport> {
    if modulus_cap == 0 {
        return Err(Error::Specification("modulus cap must be >= 1".into()));
    }
    if (k.len() as u64) < 100 * modulus_cap {
        return Err(Error::Precondition(format!(
            "index window {} shorter than 100 x modulus cap {}",
            k.len(),
            modulus_cap
        )));
    }
    let n = k.len() as f64;
    let mut worst = 0.0f64;
    let mut trace = Vec::new();
    for m in 1..=modulus_cap {
        let mut counts = vec![0u64; m as usize];
        for &x in k {
            counts[(x % m) as usize] += 1;
        }
        let dev = counts.iter().map(|&c| (c as f64 / n - 1.0 / m as f64).abs()).fold(0.0, f64::max);
        trace.push(stats([("m", m as f64), ("deviation", dev)]));
        worst = worst.max(dev);
    }
    let mut r = ExperimentReport::new(
        "niven",
        json!({ "window": k.len(), "modulus_cap": modulus_cap }),
        "max_deviation",
        stats([("max_deviation", worst)]),
        tolerance,
    );
    r.trace = trace;
    Ok(r)
}

fn niven_gate(k: &[u64]) -> Result<()> {
    let cap = DEFAULT_NIVEN_MODULUS_CAP.min(k.len() as u64 / 100).max(1);
    let report = niven_ud_test(k, cap, DEFAULT_NIVEN_TOLERANCE)?;
    if !report.pass {
        return Err(Error::Precondition(format!(
            "index sequence is not uniformly distributed in Z: deviation {} > {}",
            report.statistic(),
            report.tolerance
        )));
    }
    Ok(())
}

fn mean(xs: &[f64]) -> f64 {
    crate::dist::compensated_sum(xs.iter().copied()) / xs.len() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResampleOptions {
    pub eps: f64,
    pub delta: f64,
    pub ladder: Ladder,
}

impl Default for ResampleOptions {
    fn default() -> Self {
        Self { eps: 0.05, delta: 0.05, ladder: Ladder::default() }
    }
}

/// `|E_N(v(k)) - E_N(v)|` for `N = |k|`, gated on weak p-continuity of `v` and
/// uniform distribution of `k` in Z. Tolerance is `2 H mu + eps` with `H` the
/// sup norm and `mu` the measure of the exceptional set found.
pub fn resample_invariance(v: &SequenceWindow, k: &[u64], opts: &ResampleOptions) -> Result<ExperimentReport> {
    niven_gate(k)?;
    let exceptional = weak_continuity_profile(v, opts.eps, opts.delta, &opts.ladder).map_err(|e| match e {
        Error::WeakContinuity { best_level, best_fraction } => Error::Precondition(format!(
            "sequence is not weakly p-continuous on the ladder (best level {best_level}, fraction {best_fraction})"
        )),
        other => other,
    })?;
    let sub = subsequence(v, k)?;
    let base = v.prefix(k.len())?;
    let diff = (mean(sub.values()) - mean(base.values())).abs();
    let h = crate::dist::sup_norm(v);
    let tolerance = 2.0 * h * exceptional.mu_upper + opts.eps;
    Ok(ExperimentReport::new(
        "resample",
        json!({ "window": k.len(), "eps": opts.eps, "delta": opts.delta, "ladder": opts.ladder }),
        "difference",
        stats([
            ("difference", diff),
            ("exceptional_measure", exceptional.mu_upper),
            ("continuity_modulus", exceptional.modulus as f64),
            ("sup_norm", h),
        ]),
        tolerance,
    ))
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyGate {
    /// Allowed spread of member means and dispersions.
    pub moment_tolerance: f64,
    pub independence_threshold: f64,
    /// Intervals per axis in the pairwise independence grid.
    pub grid: usize,
}

impl Default for FamilyGate {
    fn default() -> Self {
        Self { moment_tolerance: 1e-2, independence_threshold: DEFAULT_INDEPENDENCE_THRESHOLD, grid: 10 }
    }
}

/// Checks shared moments and pairwise interval independence; returns the
/// common mean and dispersion.
fn family_gate(windows: &[SequenceWindow], gate: &FamilyGate) -> Result<(f64, f64)> {
    let ms: Vec<_> = windows.iter().map(moments).collect();
    let spread = |f: &dyn Fn(&crate::dist::MomentSummary) -> f64| {
        let (lo, hi) = ms.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
        hi - lo
    };
    if spread(&|m| m.mean) > gate.moment_tolerance || spread(&|m| m.dispersion) > gate.moment_tolerance {
        return Err(Error::Precondition("family members do not share mean and dispersion".into()));
    }
    independence_gate(windows, gate)?;
    let e = ms.iter().map(|m| m.mean).sum::<f64>() / ms.len() as f64;
    let d2 = ms.iter().map(|m| m.dispersion).sum::<f64>() / ms.len() as f64;
    Ok((e, d2))
}

fn independence_gate(windows: &[SequenceWindow], gate: &FamilyGate) -> Result<()> {
    let grids: Vec<_> = windows
        .iter()
        .map(|w| {
            let (lo, hi) = w.bounds();
            let mut g = uniform_intervals(gate.grid, lo, hi);
            // close the top interval so the upper bound is counted
            if let Some(last) = g.last_mut() {
                last.hi = f64::INFINITY;
            }
            g
        })
        .collect();
    for i in 0..windows.len() {
        for j in i + 1..windows.len() {
            let r = interval_independence_stat(&windows[i], &windows[j], &grids[i], &grids[j], gate.independence_threshold)?;
            if !r.independent {
                return Err(Error::Precondition(format!(
                    "members {i} and {j} fail the independence gate: {} > {}",
                    r.statistic, gate.independence_threshold
                )));
            }
        }
    }
    Ok(())
}

fn family_windows(family: &[Generator], n: usize) -> Result<Vec<SequenceWindow>> {
    if family.is_empty() {
        return Err(Error::Specification("family must not be empty".into()));
    }
    family.iter().map(|g| g.window(n)).collect()
}

/// van der Corput generators over the first `k` primes.
pub fn vdc_prime_family(k: usize) -> Result<Vec<Generator>> {
    first_primes(k).into_iter().map(|p| Ok(Generator::Vdc(BaseChain::geometric(p, 2)?))).collect()
}

pub const DEFAULT_CLT_TOLERANCE: f64 = 0.05;

/// Kolmogorov distance between the EDF of `(v_1 + ... + v_k - kE) / (sqrt(k) D)`
/// over `n <= N` and the standard normal CDF.
pub fn clt_experiment(family: &[Generator], n: usize, k: usize, gate: &FamilyGate, tolerance: f64) -> Result<ExperimentReport> {
    if k == 0 || k > family.len() {
        return Err(Error::Specification(format!("k = {k} must be in 1..={}", family.len())));
    }
    let windows = family_windows(&family[..k], n)?;
    let (e, d2) = family_gate(&windows, gate)?;
    if d2 <= 0.0 {
        return Err(Error::Precondition("family has zero dispersion".into()));
    }
    let scale = (k as f64).sqrt() * d2.sqrt();
    let z: Vec<f64> = (0..n)
        .map(|i| {
            let s = crate::dist::compensated_sum(windows.iter().map(|w| w.values()[i]));
            (s - k as f64 * e) / scale
        })
        .collect();
    let z_mean = mean(&z);
    let z_var = z.iter().map(|x| (x - z_mean).powi(2)).sum::<f64>() / n as f64;
    let mut trace = Vec::new();
    let mut distance = 0.0;
    for size in [n / 8, n / 4, n / 2, n] {
        if size == 0 {
            continue;
        }
        let f = edf(&SequenceWindow::new(z[..size].to_vec())?);
        distance = f.ks_distance_to(normal_cdf);
        trace.push(stats([("n", size as f64), ("distance", distance)]));
    }
    let mut r = ExperimentReport::new(
        "clt",
        json!({ "n": n, "k": k, "gate": gate }),
        "kolmogorov_distance",
        stats([
            ("kolmogorov_distance", distance),
            ("mean", e),
            ("dispersion", d2),
            ("standardized_mean", z_mean),
            ("standardized_variance", z_var),
        ]),
        tolerance,
    );
    r.trace = trace;
    Ok(r)
}

/// For each `k` in the grid, `freq{|avg_k(n) - E| >= eps}` against the bound
/// `D^2 / (k eps^2)`. The primary statistic is the largest excess over the
/// bound, with tolerance `1/N`.
pub fn weak_law_experiment(family: &[Generator], n: usize, eps: f64, k_grid: &[usize], gate: &FamilyGate) -> Result<ExperimentReport> {
    if eps <= 0.0 || !eps.is_finite() {
        return Err(Error::Specification("eps must be positive".into()));
    }
    let kmax = k_grid.iter().copied().max().ok_or_else(|| Error::Specification("empty k grid".into()))?;
    if k_grid.contains(&0) || kmax > family.len() {
        return Err(Error::Specification(format!("k values must be in 1..={}", family.len())));
    }
    let windows = family_windows(&family[..kmax], n)?;
    let (e, d2) = family_gate(&windows, gate)?;
    let mut trace = Vec::new();
    let mut excess = f64::NEG_INFINITY;
    for &k in k_grid {
        let hits = (0..n)
            .filter(|&i| {
                let avg = windows[..k].iter().map(|w| w.values()[i]).sum::<f64>() / k as f64;
                (avg - e).abs() >= eps
            })
            .count();
        let observed = hits as f64 / n as f64;
        let bound = d2 / (k as f64 * eps * eps);
        excess = excess.max(observed - bound);
        trace.push(stats([("k", k as f64), ("observed", observed), ("bound", bound)]));
    }
    let mut r = ExperimentReport::new(
        "weaklaw",
        json!({ "n": n, "eps": eps, "k_grid": k_grid, "gate": gate }),
        "max_excess",
        stats([("max_excess", excess), ("mean", e), ("dispersion", d2)]),
        1.0 / n as f64,
    );
    r.trace = trace;
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricUdOptions {
    pub n_alphas: usize,
    pub seed: u64,
    pub h_max: u32,
    /// Per-sample pass threshold on `max_h |S_N(h, alpha)|`.
    pub threshold: f64,
    /// Resolution the sampled ladder is built for.
    pub ladder_eps: f64,
    /// Accuracy requested from each extension.
    pub eval_eps: f64,
    /// Largest failing fraction of samples still counted as a pass.
    pub allowed_failures: f64,
}

impl Default for MetricUdOptions {
    fn default() -> Self {
        Self {
            n_alphas: 20,
            seed: 0,
            h_max: 3,
            threshold: 0.25,
            ladder_eps: 1e-6,
            eval_eps: 1e-6,
            allowed_failures: 0.05,
        }
    }
}

/// Per-unit seed derived from the master seed.
pub fn derive_seed(master: u64, unit: u64) -> u64 {
    let mut z = master.wrapping_add(unit.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Weyl sums of `n -> v~_n(alpha)` for Haar-random `alpha`, where `v_n` is the
/// van der Corput sequence in base `bases[n-1]`.
pub fn metric_ud_experiment(bases: &[u64], opts: &MetricUdOptions) -> Result<ExperimentReport> {
    if bases.is_empty() || opts.n_alphas == 0 || opts.h_max == 0 {
        return Err(Error::Specification("need at least one base, one sample and h_max >= 1".into()));
    }
    for (i, &a) in bases.iter().enumerate() {
        for &b in &bases[i + 1..] {
            if num_integer::gcd(a, b) != 1 {
                return Err(Error::Precondition(format!("bases {a} and {b} are not coprime")));
            }
        }
    }
    let family = bases
        .iter()
        .map(|&b| BaseChain::geometric(b, 2).map(Generator::Vdc))
        .collect::<Result<Vec<_>>>()?;
    let levels = prime_power_levels(bases, opts.ladder_eps);
    let n = bases.len() as f64;
    let mut trace = Vec::new();
    let mut worst = 0.0f64;
    let mut failing = 0usize;
    for unit in 0..opts.n_alphas {
        let alpha = sample_omega(derive_seed(opts.seed, unit as u64), &levels)?;
        let xs = family.iter().map(|g| extend_eval(g, &alpha, opts.eval_eps, None)).collect::<Result<Vec<_>>>()?;
        let mut sample_max = 0.0f64;
        for h in 1..=opts.h_max {
            let (mut re, mut im) = (0.0, 0.0);
            for &x in &xs {
                let t = 2.0 * PI * h as f64 * x;
                re += t.cos();
                im += t.sin();
            }
            sample_max = sample_max.max((re * re + im * im).sqrt() / n);
        }
        if sample_max > opts.threshold {
            failing += 1;
        }
        worst = worst.max(sample_max);
        trace.push(stats([("sample", unit as f64), ("max_weyl", sample_max)]));
    }
    let fail_fraction = failing as f64 / opts.n_alphas as f64;
    let mut r = ExperimentReport::new(
        "metric-ud",
        json!({ "bases": bases, "options": opts }),
        "fail_fraction",
        stats([("fail_fraction", fail_fraction), ("max_weyl", worst), ("threshold", opts.threshold)]),
        opts.allowed_failures,
    );
    r.trace = trace;
    r.seed = Some(opts.seed);
    Ok(r)
}

pub const DEFAULT_SSS_TOLERANCE: f64 = 0.02;

/// `max |E_N(prod g_j(v_j(k))) - prod E_N(g_j(v_j(k)))|` over the given tuples.
pub fn composed_independence_check(
    family: &[SequenceWindow],
    g_tuples: &[Vec<TestFn>],
    k: &[u64],
    gate: &FamilyGate,
    tolerance: f64,
) -> Result<ExperimentReport> {
    if family.is_empty() || g_tuples.is_empty() {
        return Err(Error::Specification("family and test-function tuples must be non-empty".into()));
    }
    if let Some(t) = g_tuples.iter().find(|t| t.len() != family.len()) {
        return Err(Error::Specification(format!(
            "tuple of {} functions for a family of {}",
            t.len(),
            family.len()
        )));
    }
    niven_gate(k)?;
    let prefixes = family.iter().map(|w| w.prefix(k.len())).collect::<Result<Vec<_>>>()?;
    independence_gate(&prefixes, gate)?;
    let subs = family.iter().map(|w| subsequence(w, k)).collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    let mut trace = Vec::new();
    for (t, tuple) in g_tuples.iter().enumerate() {
        let mapped: Vec<Vec<f64>> = subs
            .iter()
            .zip(tuple)
            .map(|(w, g)| w.values().iter().map(|&x| g.eval(x)).collect())
            .collect();
        let product_of_means: f64 = mapped.iter().map(|c| mean(c)).product();
        let joint: Vec<f64> = (0..k.len()).map(|i| mapped.iter().map(|c| c[i]).product()).collect();
        let dev = (mean(&joint) - product_of_means).abs();
        worst = worst.max(dev);
        trace.push(stats([("tuple", t as f64), ("deviation", dev)]));
    }
    let names: Vec<String> = g_tuples
        .iter()
        .map(|t| t.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    let mut r = ExperimentReport::new(
        "sss",
        json!({ "window": k.len(), "tuples": names, "gate": gate }),
        "max_deviation",
        stats([("max_deviation", worst)]),
        tolerance,
    );
    r.trace = trace;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vdc(b: u64, n: usize) -> SequenceWindow {
        Generator::Vdc(BaseChain::geometric(b, 2).unwrap()).window(n).unwrap()
    }

    #[test]
    fn niven_examples() {
        let n = 10_000;
        let r = niven_ud_test(&IndexSpec::Identity.build(n), 10, DEFAULT_NIVEN_TOLERANCE).unwrap();
        assert!(r.pass && r.statistic() <= 10.0 / n as f64);
        let r = niven_ud_test(&IndexSpec::Multiple { a: 2 }.build(n), 10, DEFAULT_NIVEN_TOLERANCE).unwrap();
        assert!(!r.pass);
        assert_eq!(r.trace[1]["deviation"], 0.5);
        let primes = IndexSpec::Primes.build(n);
        let r = niven_ud_test(&primes, 10, DEFAULT_NIVEN_TOLERANCE).unwrap();
        // residue-count oracle at m = 3
        let zero = primes.iter().filter(|&&p| p % 3 == 0).count() as f64 / n as f64;
        assert!((1.0 / 3.0 - zero) >= 1.0 / 3.0 - 1.0 / n as f64);
        assert!(!r.pass && r.trace[2]["deviation"] >= 1.0 / 6.0);
        assert!(matches!(niven_ud_test(&primes[..500], 10, 0.01), Err(Error::Precondition(_))));
    }

    #[test]
    fn pair_swap_is_a_permutation() {
        assert_eq!(pair_swap(5), vec![2, 1, 4, 3, 5]);
        let mut p = pair_swap(1000);
        p.sort();
        assert_eq!(p, (1..=1000).collect::<Vec<_>>());
    }

    #[test]
    fn resample_examples() {
        let n = 100_000;
        let v = vdc(2, n);
        let opts = ResampleOptions::default();
        let r = resample_invariance(&v, &IndexSpec::Identity.build(n), &opts).unwrap();
        assert_eq!(r.statistic(), 0.0);
        let r = resample_invariance(&v, &pair_swap(n), &opts).unwrap();
        assert!(r.statistic() <= 2.0 / n as f64 && r.pass);
        let v2 = vdc(2, 2 * n);
        assert!(matches!(
            resample_invariance(&v2, &IndexSpec::Multiple { a: 2 }.build(n), &opts),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn resample_rejects_discontinuous_sequences() {
        let inv = Generator::custom("1/n", |n| 1.0 / n as f64).window(20_000).unwrap();
        let opts = ResampleOptions { eps: 0.1, delta: 0.0001, ladder: Ladder::factorial(7).unwrap() };
        assert!(matches!(
            resample_invariance(&inv, &IndexSpec::Identity.build(20_000), &opts),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn normal_reference() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-12);
        assert!((normal_cdf(-1.96) - 0.024_997_895_148_220_435).abs() < 1e-12);
    }

    #[test]
    fn clt_examples() {
        let fam = vdc_prime_family(12).unwrap();
        let r = clt_experiment(&fam, 10_000, 12, &FamilyGate::default(), DEFAULT_CLT_TOLERANCE).unwrap();
        assert!(r.pass, "{:?}", r.statistics);
        assert!(r.statistics["standardized_mean"].abs() <= 1e-10 * 12.0);
        assert!((r.statistics["standardized_variance"] - 1.0).abs() <= 1.0 / (10_000f64).sqrt());

        let r = clt_experiment(&fam, 10_000, 1, &FamilyGate::default(), DEFAULT_CLT_TOLERANCE).unwrap();
        // numeric oracle: sup |x - Phi(sqrt(12)(x - 1/2))| over [0, 1]
        let oracle = (0..=100_000)
            .map(|i| {
                let x = i as f64 / 100_000.0;
                (x - normal_cdf(12f64.sqrt() * (x - 0.5))).abs()
            })
            .fold(0.0, f64::max);
        assert!((r.statistic() - oracle).abs() < 2e-3, "{} vs {oracle}", r.statistic());
        assert!(!r.pass);
    }

    #[test]
    fn clt_gates() {
        let dependent = vec![Generator::Vdc(BaseChain::geometric(2, 2).unwrap()); 2];
        assert!(matches!(
            clt_experiment(&dependent, 4096, 2, &FamilyGate::default(), 0.05),
            Err(Error::Precondition(_))
        ));
        let mixed = vec![Generator::Vdc(BaseChain::geometric(2, 2).unwrap()), Generator::Periodic(vec![0.0, 0.2])];
        assert!(matches!(clt_experiment(&mixed, 4096, 2, &FamilyGate::default(), 0.05), Err(Error::Precondition(_))));
    }

    #[test]
    fn weak_law_examples() {
        let fam = vdc_prime_family(20).unwrap();
        let r = weak_law_experiment(&fam, 10_000, 0.2, &[1, 5, 10, 20], &FamilyGate::default()).unwrap();
        assert!(r.pass, "{:?}", r.trace);
        let k10 = &r.trace[2];
        assert!((k10["bound"] - (1.0 / 12.0) / (10.0 * 0.04)).abs() < 5e-3);
        assert!(k10["observed"] < 0.05);
        for row in &r.trace {
            assert!(row["observed"] <= 1.0 && row["bound"] >= 0.0);
        }

        let constant = vec![Generator::Periodic(vec![0.5]); 3];
        let r = weak_law_experiment(&constant, 1000, 0.1, &[1, 3], &FamilyGate::default()).unwrap();
        assert!(r.pass && r.trace.iter().all(|row| row["observed"] == 0.0));
    }

    #[test]
    fn metric_ud_examples() {
        let opts = MetricUdOptions { n_alphas: 1, seed: 9, h_max: 1, threshold: 0.25, ..Default::default() };
        let r = metric_ud_experiment(&[2], &opts).unwrap();
        assert!((r.statistics["max_weyl"] - 1.0).abs() < 1e-12);
        assert!(!r.pass);

        let opts = MetricUdOptions { n_alphas: 4, seed: 3, ..Default::default() };
        let bases = first_primes(50);
        let a = metric_ud_experiment(&bases, &opts).unwrap();
        assert_eq!(a, metric_ud_experiment(&bases, &opts).unwrap());

        assert!(matches!(metric_ud_experiment(&[2, 4], &opts), Err(Error::Precondition(_))));
        let coarse = MetricUdOptions { ladder_eps: 1e-2, eval_eps: 1e-6, ..opts };
        assert!(matches!(metric_ud_experiment(&[2, 3], &coarse), Err(Error::InsufficientResolution(_))));
    }

    #[test]
    fn composed_independence_examples() {
        let n = 100_000;
        let fam = vec![vdc(2, n), vdc(3, n)];
        let gate = FamilyGate::default();
        let id = IndexSpec::Identity.build(n);
        let c = vec![vec![TestFn::Constant { c: 2.0 }, TestFn::Constant { c: 3.0 }]];
        assert_eq!(composed_independence_check(&fam, &c, &id, &gate, 0.02).unwrap().statistic(), 0.0);

        let ids = vec![vec![TestFn::Identity, TestFn::Identity]];
        let r = composed_independence_check(&fam, &ids, &id, &gate, 0.02).unwrap();
        let corr = crate::dist::correlation(&fam[0], &fam[1]).unwrap();
        assert!((r.statistic() - corr.covariance.abs()).abs() < 1e-12);
        assert!(r.pass);

        let sq = vec![vec![TestFn::Power { k: 2 }, TestFn::Identity]];
        let r = composed_independence_check(&fam, &sq, &pair_swap(n), &gate, 0.02).unwrap();
        assert!(r.pass);

        let doubled = IndexSpec::Multiple { a: 2 }.build(n / 2);
        assert!(matches!(
            composed_independence_check(&fam, &ids, &doubled, &gate, 0.02),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn report_csv() {
        let r = niven_ud_test(&IndexSpec::Identity.build(1000), 3, 0.01).unwrap();
        let csv = r.trace_csv();
        assert!(csv.starts_with("deviation,m\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
