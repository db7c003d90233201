//! Empirical distribution functions, moments and independence statistics on
//! windows.
//!
//! Distribution functions follow the strict convention `F(x) = #{n : v(n) < x} / N`,
//! so `F` is left-continuous and a jump at `x` is not yet counted in `F(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::TestFn;
use crate::seqgen::SequenceWindow;

/// Default cap on `J1 * J2` breakpoint pairs in [`convolve_edf`].
pub const DEFAULT_CONVOLUTION_CAP: usize = 1 << 22;

/// A right-open step distribution function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edf {
    breakpoints: Vec<f64>,
    masses: Vec<f64>,
    /// `cum[j]` = mass at or below `breakpoints[j]`.
    cum: Vec<f64>,
}

impl Edf {
    /// Builds a step function from `(point, mass)` pairs; equal points are merged.
    pub fn from_masses(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Specification("distribution needs at least one point".into()));
        }
        if let Some(&(x, _)) = points.iter().find(|(x, m)| !x.is_finite() || !(*m >= 0.0)) {
            return Err(Error::Domain(x));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut breakpoints: Vec<f64> = Vec::with_capacity(points.len());
        let mut masses: Vec<f64> = Vec::with_capacity(points.len());
        for (x, m) in points {
            if breakpoints.last() == Some(&x) {
                *masses.last_mut().unwrap() += m;
            } else {
                breakpoints.push(x);
                masses.push(m);
            }
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Specification(format!("total mass {total} != 1")));
        }
        let mut acc = 0.0;
        let mut cum: Vec<f64> = masses
            .iter()
            .map(|m| {
                acc += m;
                acc
            })
            .collect();
        *cum.last_mut().unwrap() = 1.0;
        Ok(Self { breakpoints, masses, cum })
    }

    /// Point masses `1/n` at `(i + 1/2)/n`: the discretized uniform law on `[0, 1]`.
    pub fn uniform_grid(n: usize) -> Self {
        let points = (0..n).map(|i| ((i as f64 + 0.5) / n as f64, 1.0 / n as f64)).collect();
        Self::from_masses(points).expect("valid grid")
    }

    /// Unit mass at `x`.
    pub fn dirac(x: f64) -> Self {
        Self { breakpoints: vec![x], masses: vec![1.0], cum: vec![1.0] }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cum
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    /// `F(x)`: mass strictly below `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b < x);
        if i == 0 { 0.0 } else { self.cum[i - 1] }
    }

    /// Mass at or below `x` (the right limit `F(x+)`).
    pub fn eval_right(&self, x: f64) -> f64 {
        let i = self.breakpoints.partition_point(|&b| b <= x);
        if i == 0 { 0.0 } else { self.cum[i - 1] }
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.breakpoints.iter().zip(&self.masses).map(|(x, m)| x * m))
    }

    /// Merges consecutive breakpoints into at most `max_points` groups of
    /// roughly equal count, each placed at its mass-weighted mean. The mean is
    /// preserved.
    pub fn coarsen(&self, max_points: usize) -> Edf {
        if max_points == 0 || self.len() <= max_points {
            return self.clone();
        }
        let per = self.len().div_ceil(max_points);
        let points = self
            .breakpoints
            .chunks(per)
            .zip(self.masses.chunks(per))
            .map(|(xs, ms)| {
                let m: f64 = ms.iter().sum();
                let x = if m > 0.0 {
                    xs.iter().zip(ms).map(|(x, w)| x * w).sum::<f64>() / m
                } else {
                    xs[0]
                };
                (x, m)
            })
            .collect();
        Edf::from_masses(points).expect("coarsening keeps total mass")
    }

    /// CSV rows `x,F(x)` at each breakpoint and its right limit.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,F\n");
        for (x, c) in self.breakpoints.iter().zip(&self.cum) {
            out.push_str(&format!("{x},{}\n", self.eval(*x)));
            out.push_str(&format!("{x},{c}\n"));
        }
        out
    }

    /// `sup_x |F(x) - G(x)|` against a continuous CDF, checked on both sides of every jump.
    pub fn ks_distance_to(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let mut below = 0.0;
        let mut d = 0.0f64;
        for (x, c) in self.breakpoints.iter().zip(&self.cum) {
            let g = cdf(*x);
            d = d.max((below - g).abs()).max((c - g).abs());
            below = *c;
        }
        d
    }
}

/// Kolmogorov distance between two step functions.
pub fn ks_distance(a: &Edf, b: &Edf) -> f64 {
    let mut d = 0.0f64;
    for &x in a.breakpoints.iter().chain(&b.breakpoints) {
        d = d
            .max((a.eval(x) - b.eval(x)).abs())
            .max((a.eval_right(x) - b.eval_right(x)).abs());
    }
    d
}

/// Empirical distribution of a window: jumps of `count/N` at each distinct value.
pub fn edf(w: &SequenceWindow) -> Edf {
    let n = w.len();
    let mut sorted = w.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut breakpoints = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for x in sorted {
        if breakpoints.last() == Some(&x) {
            *counts.last_mut().unwrap() += 1;
        } else {
            breakpoints.push(x);
            counts.push(1);
        }
    }
    let mut seen = 0usize;
    let mut cum = Vec::with_capacity(counts.len());
    let mut masses = Vec::with_capacity(counts.len());
    for c in counts {
        seen += c;
        cum.push(seen as f64 / n as f64);
        masses.push(c as f64 / n as f64);
    }
    Edf { breakpoints, masses, cum }
}

/// Neumaier-compensated sum.
pub fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

fn mean_of(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Mean and dispersion of a window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub dispersion: f64,
    pub n_used: usize,
    /// `|E_N - E_{N/2}|`.
    pub stability_gap: f64,
}

pub fn moments(w: &SequenceWindow) -> MomentSummary {
    let v = w.values();
    let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let (mean, dispersion) = if lo == hi {
        (lo, 0.0)
    } else {
        let m = mean_of(v);
        (m, v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64)
    };
    let half = (v.len() / 2).max(1);
    let half_mean = if lo == hi { lo } else { mean_of(&v[..half]) };
    MomentSummary { mean, dispersion, n_used: v.len(), stability_gap: (mean - half_mean).abs() }
}

fn check_len(a: &SequenceWindow, b: &SequenceWindow) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(())
}

/// `|E_N(a v + b w) - a E_N(v) - b E_N(w)|`.
pub fn linearity_check(v: &SequenceWindow, w: &SequenceWindow, a: f64, b: f64) -> Result<f64> {
    check_len(v, w)?;
    let combo: Vec<f64> = v.values().iter().zip(w.values()).map(|(x, y)| a * x + b * y).collect();
    Ok((mean_of(&combo) - a * mean_of(v.values()) - b * mean_of(w.values())).abs())
}

/// Integral of `g` against a step distribution: `sum g(x_j) * mass_j`.
pub fn stieltjes_mean(f: &Edf, g: impl Fn(f64) -> f64) -> Result<f64> {
    let mut terms = Vec::with_capacity(f.len());
    for (&x, &m) in f.breakpoints.iter().zip(&f.masses) {
        let y = g(x);
        if !y.is_finite() {
            return Err(Error::Domain(x));
        }
        terms.push(y * m);
    }
    Ok(compensated_sum(terms))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    /// `|cov| / (D(v) D(w))`.
    pub rho: f64,
    /// Regression slope `cov / D^2(v)`, signed.
    pub alpha: f64,
    /// `E(w) - alpha E(v)`.
    pub beta: f64,
    /// `E_N(v w)`.
    pub mean_product: f64,
    /// `E(vw) - E(v) E(w)`.
    pub covariance: f64,
}

pub fn correlation(v: &SequenceWindow, w: &SequenceWindow) -> Result<Correlation> {
    check_len(v, w)?;
    let mv = moments(v);
    let mw = moments(w);
    if mv.dispersion == 0.0 {
        return Err(Error::Degenerate("v"));
    }
    if mw.dispersion == 0.0 {
        return Err(Error::Degenerate("w"));
    }
    let n = v.len() as f64;
    let covariance = v
        .values()
        .iter()
        .zip(w.values())
        .map(|(x, y)| (x - mv.mean) * (y - mw.mean))
        .sum::<f64>()
        / n;
    let mean_product = v.values().iter().zip(w.values()).map(|(x, y)| x * y).sum::<f64>() / n;
    let alpha = covariance / mv.dispersion;
    Ok(Correlation {
        rho: covariance.abs() / (mv.dispersion.sqrt() * mw.dispersion.sqrt()),
        alpha,
        beta: mw.mean - alpha * mv.mean,
        mean_product,
        covariance,
    })
}

/// `(fraction of n with |v(n) - E_N| > eps, D_N^2 / eps^2)`.
pub fn chebyshev_check(w: &SequenceWindow, eps: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0) {
        return Err(Error::Specification("eps must be positive".into()));
    }
    let m = moments(w);
    let far = w.values().iter().filter(|&&x| (x - m.mean).abs() > eps).count();
    Ok((far as f64 / w.len() as f64, m.dispersion / (eps * eps)))
}

/// Identifies the built-in test-function family; bump when it changes.
pub const DEFAULT_FAMILY_VERSION: &str = "v1";
pub const DEFAULT_INDEPENDENCE_THRESHOLD: f64 = 0.02;

/// `x, x^2, x^3` and ramps of width 0.1 starting at 0.2, 0.4, 0.6, 0.8.
pub fn default_family() -> Vec<TestFn> {
    let mut f = vec![TestFn::Identity, TestFn::Power { k: 2 }, TestFn::Power { k: 3 }];
    for c in [0.2, 0.4, 0.6, 0.8] {
        f.push(TestFn::Ramp { center: c, width: 0.1 });
    }
    f
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDeviation {
    pub left: String,
    pub right: String,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    /// Maximum of `deviations`.
    pub statistic: f64,
    pub family: String,
    pub deviations: Vec<PairDeviation>,
    pub verdict_threshold: f64,
    pub independent: bool,
}

impl IndependenceReport {
    fn from_deviations(family: String, deviations: Vec<PairDeviation>, threshold: f64) -> Self {
        let statistic = deviations.iter().map(|d| d.deviation).fold(0.0, f64::max);
        Self { statistic, family, deviations, verdict_threshold: threshold, independent: statistic <= threshold }
    }
}

/// `max |E_N(g(v)) E_N(h(w)) - E_N(g(v) h(w))|` over `g, h` in `family`.
pub fn statistical_independence_stat(
    v: &SequenceWindow,
    w: &SequenceWindow,
    family: &[TestFn],
    threshold: f64,
) -> Result<IndependenceReport> {
    check_len(v, w)?;
    let gv: Vec<Vec<f64>> = family.iter().map(|g| v.values().iter().map(|&x| g.eval(x)).collect()).collect();
    let gw: Vec<Vec<f64>> = family.iter().map(|g| w.values().iter().map(|&x| g.eval(x)).collect()).collect();
    let mut deviations = Vec::with_capacity(family.len() * family.len());
    for (i, a) in gv.iter().enumerate() {
        let ea = mean_of(a);
        for (j, b) in gw.iter().enumerate() {
            let eb = mean_of(b);
            let joint = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / a.len() as f64;
            deviations.push(PairDeviation {
                left: family[i].to_string(),
                right: family[j].to_string(),
                deviation: (ea * eb - joint).abs(),
            });
        }
    }
    let name = family.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(",");
    Ok(IndependenceReport::from_deviations(name, deviations, threshold))
}

/// Half-open interval `[lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn everything() -> Self {
        Self { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }
}

/// `k` equal intervals `[lo + i h, lo + (i+1) h)`.
pub fn uniform_intervals(k: usize, lo: f64, hi: f64) -> Vec<Interval> {
    let h = (hi - lo) / k as f64;
    (0..k).map(|i| Interval::new(lo + i as f64 * h, lo + (i + 1) as f64 * h)).collect()
}

/// `max |freq(v in I, w in J) - freq(v in I) freq(w in J)|` over the grid.
pub fn interval_independence_stat(
    v: &SequenceWindow,
    w: &SequenceWindow,
    grid_v: &[Interval],
    grid_w: &[Interval],
    threshold: f64,
) -> Result<IndependenceReport> {
    check_len(v, w)?;
    let n = v.len() as f64;
    let member = |vals: &[f64], iv: &Interval| -> Vec<bool> { vals.iter().map(|&x| iv.contains(x)).collect() };
    let mv: Vec<Vec<bool>> = grid_v.iter().map(|iv| member(v.values(), iv)).collect();
    let mw: Vec<Vec<bool>> = grid_w.iter().map(|iv| member(w.values(), iv)).collect();
    let mut deviations = Vec::new();
    for (i, a) in mv.iter().enumerate() {
        let fa = a.iter().filter(|&&b| b).count() as f64 / n;
        for (j, b) in mw.iter().enumerate() {
            let fb = b.iter().filter(|&&x| x).count() as f64 / n;
            let joint = a.iter().zip(b).filter(|(x, y)| **x && **y).count() as f64 / n;
            deviations.push(PairDeviation {
                left: format!("[{},{})", grid_v[i].lo, grid_v[i].hi),
                right: format!("[{},{})", grid_w[j].lo, grid_w[j].hi),
                deviation: (joint - fa * fb).abs(),
            });
        }
    }
    Ok(IndependenceReport::from_deviations(
        format!("{}x{} intervals", grid_v.len(), grid_w.len()),
        deviations,
        threshold,
    ))
}

/// Closed axis-aligned box `prod [lo_i, hi_i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Cell {
    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (a, b))| a <= x && x <= b)
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| (b - a).max(0.0)).product()
    }
}

/// Finite union of boxes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub cells: Vec<Cell>,
}

impl Region {
    pub fn contains(&self, p: &[f64]) -> bool {
        self.cells.iter().any(|c| c.contains(p))
    }

    /// `[0,1]^2 cap {t1 + t2 <= 1}` as `k` columns of height `1 - (i + 1/2)/k`
    /// (total area exactly 1/2).
    pub fn triangle_staircase(k: usize) -> Self {
        let cells = (0..k)
            .map(|i| {
                let x0 = i as f64 / k as f64;
                let x1 = (i + 1) as f64 / k as f64;
                Cell { lo: vec![x0, 0.0], hi: vec![x1, 1.0 - (i as f64 + 0.5) / k as f64] }
            })
            .collect();
        Self { cells }
    }
}

/// `freq{n : (v_1(n), ..., v_k(n)) in region}`.
pub fn region_density(seqs: &[&SequenceWindow], region: &Region) -> Result<f64> {
    let first = seqs.first().ok_or_else(|| Error::Specification("need at least one sequence".into()))?;
    for s in seqs {
        check_len(first, s)?;
    }
    let n = first.len();
    let mut point = vec![0.0; seqs.len()];
    let mut hits = 0usize;
    for i in 0..n {
        for (k, s) in seqs.iter().enumerate() {
            point[k] = s.values()[i];
        }
        if region.contains(&point) {
            hits += 1;
        }
    }
    Ok(hits as f64 / n as f64)
}

/// Law of the sum of independent variables with step laws `f` and `g`: jumps at
/// all `x_i + y_j` with mass products, equal sums merged.
pub fn convolve_edf(f: &Edf, g: &Edf, cap: usize) -> Result<Edf> {
    let pairs = f.len().saturating_mul(g.len());
    if pairs > cap {
        return Err(Error::Capacity(format!(
            "{} x {} breakpoints exceed cap {cap}; coarsen first",
            f.len(),
            g.len()
        )));
    }
    let mut points = Vec::with_capacity(pairs);
    for (&x, &mx) in f.breakpoints.iter().zip(&f.masses) {
        for (&y, &my) in g.breakpoints.iter().zip(&g.masses) {
            points.push((x + y, mx * my));
        }
    }
    Edf::from_masses(points)
}

/// `max |v(n)|`.
pub fn sup_norm(w: &SequenceWindow) -> f64 {
    w.values().iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqgen::{vdc_window, BaseChain};

    fn vdc(base: u64, n: usize) -> SequenceWindow {
        vdc_window(&BaseChain::geometric(base, 2).unwrap(), n).unwrap()
    }

    #[test]
    fn edf_examples() {
        let c = edf(&SequenceWindow::new(vec![0.3; 5]).unwrap());
        assert_eq!(c.breakpoints(), &[0.3]);
        assert_eq!(c.eval(0.3), 0.0);
        assert_eq!(c.eval(0.30001), 1.0);
        let w = vdc(2, 4);
        assert_eq!(w.values(), &[0.5, 0.25, 0.75, 0.125]);
        let f = edf(&w);
        assert_eq!(f.eval(0.5), 0.5);
        assert_eq!(f.eval(0.8), 1.0);
        assert_eq!(f.eval(0.125), 0.0);
        assert_eq!(f.eval_right(0.125), 0.25);
    }

    #[test]
    fn moments_examples() {
        let m = moments(&vdc(2, 100_000));
        assert!((m.mean - 0.5).abs() < 1e-3);
        assert!((m.dispersion - 1.0 / 12.0).abs() < 1e-3);
        let c = moments(&SequenceWindow::new(vec![0.1; 7]).unwrap());
        assert_eq!((c.mean, c.dispersion), (0.1, 0.0));
    }

    #[test]
    fn linearity_examples() {
        let v = vdc(2, 1000);
        let w = vdc(3, 1000);
        assert_eq!(linearity_check(&v, &w, 0.0, 0.0).unwrap(), 0.0);
        assert!(linearity_check(&v, &v, 1.0, -1.0).unwrap() <= 1e-15);
        assert!(linearity_check(&v, &w, 2.0, 3.0).unwrap() <= 1e-12);
        assert!(matches!(linearity_check(&v, &vdc(3, 10), 1.0, 1.0), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn stieltjes_examples() {
        let f = edf(&vdc(2, 100_000));
        assert!((stieltjes_mean(&f, |_| 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((stieltjes_mean(&f, |x| x).unwrap() - 0.5).abs() < 1e-3);
        assert!((stieltjes_mean(&f, |x| x * x).unwrap() - 1.0 / 3.0).abs() < 1e-2);
        assert!(matches!(stieltjes_mean(&Edf::dirac(0.0), |x| 1.0 / x), Err(Error::Domain(_))));
    }

    #[test]
    fn correlation_examples() {
        let v = vdc(2, 100_000);
        let c = correlation(&v, &v).unwrap();
        assert!((c.rho - 1.0).abs() < 1e-9 && (c.alpha - 1.0).abs() < 1e-9 && c.beta.abs() < 1e-9);
        assert!((c.mean_product - 1.0 / 3.0).abs() < 1e-3);
        let w = crate::seqgen::apply_pointwise(|x| 1.0 - x, &v).unwrap();
        let c = correlation(&v, &w).unwrap();
        assert!((c.rho - 1.0).abs() < 1e-9 && (c.alpha + 1.0).abs() < 1e-9 && (c.beta - 1.0).abs() < 1e-9);
        assert!((c.mean_product - 1.0 / 6.0).abs() < 1e-3);
        let c = correlation(&v, &vdc(3, 100_000)).unwrap();
        assert!((c.mean_product - 0.25).abs() <= 1e-2);
        assert!(c.rho < 1e-2);
        let k = SequenceWindow::new(vec![1.0; 100_000]).unwrap();
        assert_eq!(correlation(&k, &v), Err(Error::Degenerate("v")));
        assert_eq!(correlation(&v, &k), Err(Error::Degenerate("w")));
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_check(&SequenceWindow::new(vec![2.0; 9]).unwrap(), 0.1).unwrap(), (0.0, 0.0));
        let v = vdc(2, 1 << 16);
        let (l, r) = chebyshev_check(&v, 0.5).unwrap();
        assert_eq!(l, 0.0);
        assert!((r - 1.0 / 3.0).abs() < 1e-3);
        let (l, r) = chebyshev_check(&v, 0.25).unwrap();
        assert!((l - 0.5).abs() < 1e-3 && (r - 4.0 / 3.0).abs() < 1e-3);
        assert!(l <= r);
    }

    #[test]
    fn statistical_independence_examples() {
        let v = vdc(2, 100_000);
        let k = SequenceWindow::new(vec![0.3; 100_000]).unwrap();
        let rep = statistical_independence_stat(&v, &k, &default_family(), DEFAULT_INDEPENDENCE_THRESHOLD).unwrap();
        assert!(rep.statistic < 1e-12);
        let rep = statistical_independence_stat(&v, &v, &[TestFn::Identity], DEFAULT_INDEPENDENCE_THRESHOLD).unwrap();
        assert!((rep.statistic - 1.0 / 12.0).abs() < 1e-3);
        assert!(!rep.independent);
        let rep = statistical_independence_stat(&v, &vdc(3, 100_000), &default_family(), DEFAULT_INDEPENDENCE_THRESHOLD)
            .unwrap();
        assert!(rep.statistic <= 0.02);
        assert_eq!(rep.deviations.len(), 49);
        assert_eq!(rep.statistic, rep.deviations.iter().map(|d| d.deviation).fold(0.0, f64::max));
    }

    #[test]
    fn interval_independence_examples() {
        let v = vdc(2, 100_000);
        let w = vdc(3, 100_000);
        let full = [Interval::everything()];
        assert_eq!(interval_independence_stat(&v, &w, &full, &full, 0.02).unwrap().statistic, 0.0);
        let rep = interval_independence_stat(&v, &w, &[Interval::new(0.0, 0.5)], &[Interval::new(0.0, 1.0 / 3.0)], 0.02)
            .unwrap();
        assert!(rep.statistic <= 0.01);
        let rep = interval_independence_stat(&v, &v, &[Interval::new(0.0, 0.5)], &[Interval::new(0.5, 1.0)], 0.02)
            .unwrap();
        assert!((rep.statistic - 0.25).abs() < 1e-12);
    }

    #[test]
    fn region_examples() {
        let v = vdc(2, 100_000);
        let w = vdc(3, 100_000);
        assert_eq!(region_density(&[&v, &w], &Region::default()).unwrap(), 0.0);
        let unit = Region { cells: vec![Cell { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0] }] };
        assert_eq!(region_density(&[&v, &w], &unit).unwrap(), 1.0);
        let tri = Region::triangle_staircase(64);
        assert!((tri.cells.iter().map(Cell::volume).sum::<f64>() - 0.5).abs() < 1e-12);
        assert!((region_density(&[&v, &w], &tri).unwrap() - 0.5).abs() <= 0.02);
    }

    #[test]
    fn convolution_examples() {
        let u = Edf::uniform_grid(1000);
        assert_eq!(convolve_edf(&Edf::dirac(0.0), &u, DEFAULT_CONVOLUTION_CAP).unwrap(), u);
        let g = convolve_edf(&u, &u, DEFAULT_CONVOLUTION_CAP).unwrap();
        assert!((g.eval(1.0) - 0.5).abs() <= 5e-3);
        assert!((g.eval(0.5) - 0.125).abs() <= 5e-3);
        assert!(matches!(convolve_edf(&u, &u, 1000), Err(Error::Capacity(_))));
    }

    #[test]
    fn coarsen_preserves_mean() {
        let f = edf(&vdc(3, 5000));
        let c = f.coarsen(100);
        assert!(c.len() <= 100);
        assert!((c.mean() - f.mean()).abs() < 1e-12);
        assert!(ks_distance(&f, &c) < 0.03);
    }

    #[test]
    fn sup_norm_examples() {
        assert_eq!(sup_norm(&SequenceWindow::new(vec![-3.0; 4]).unwrap()), 3.0);
        assert!(sup_norm(&vdc(2, 1000)) < 1.0);
        let v = vdc(5, 100);
        let z = crate::seqgen::apply_pointwise(|x| x - x, &v).unwrap();
        assert_eq!(sup_norm(&z), 0.0);
    }

    #[test]
    fn ks_against_continuous_cdf() {
        let f = Edf::uniform_grid(10);
        // midpoints: max gap to x is 1/20 on each side of a jump
        assert!((f.ks_distance_to(|x| x.clamp(0.0, 1.0)) - 0.05).abs() < 1e-12);
    }
}
