//! Brute-force reference implementations: direct loops over the definitions,
//! sharing no code with the library.

#![allow(dead_code)]

use seqdensity::dist::{Interval, Region};
use seqdensity::{SequenceWindow, TestFn};

pub fn mean(v: &[f64]) -> f64 {
    let mut s = 0.0;
    for x in v {
        s += x;
    }
    s / v.len() as f64
}

pub fn dispersion(v: &[f64]) -> f64 {
    let m = mean(v);
    let mut s = 0.0;
    for x in v {
        s += (x - m) * (x - m);
    }
    s / v.len() as f64
}

/// `freq{v_n < x}`.
pub fn edf_left(v: &[f64], x: f64) -> f64 {
    v.iter().filter(|&&y| y < x).count() as f64 / v.len() as f64
}

/// `freq{v_n <= x}`.
pub fn edf_right(v: &[f64], x: f64) -> f64 {
    v.iter().filter(|&&y| y <= x).count() as f64 / v.len() as f64
}

/// Kolmogorov distance between two windows' EDFs, checked on both sides of every data point.
pub fn ks(v: &[f64], w: &[f64]) -> f64 {
    let mut d = 0.0f64;
    for &x in v.iter().chain(w) {
        d = d.max((edf_left(v, x) - edf_left(w, x)).abs());
        d = d.max((edf_right(v, x) - edf_right(w, x)).abs());
    }
    d
}

pub fn ks_to(v: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut d = 0.0f64;
    for &x in v {
        d = d.max((edf_left(v, x) - cdf(x)).abs()).max((edf_right(v, x) - cdf(x)).abs());
    }
    d
}

pub fn mean_product(v: &[f64], w: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..v.len() {
        s += v[i] * w[i];
    }
    s / v.len() as f64
}

/// `(rho, alpha, beta, covariance)` with the covariance as `E(vw) - E(v)E(w)`.
pub fn correlation(v: &[f64], w: &[f64]) -> (f64, f64, f64, f64) {
    let cov = mean_product(v, w) - mean(v) * mean(w);
    let alpha = cov / dispersion(v);
    let rho = cov.abs() / (dispersion(v) * dispersion(w)).sqrt();
    (rho, alpha, mean(w) - alpha * mean(v), cov)
}

pub fn statistical_independence(v: &[f64], w: &[f64], family: &[TestFn]) -> f64 {
    let mut worst = 0.0f64;
    for g in family {
        for h in family {
            let gv: Vec<f64> = v.iter().map(|&x| g.eval(x)).collect();
            let hw: Vec<f64> = w.iter().map(|&x| h.eval(x)).collect();
            worst = worst.max((mean(&gv) * mean(&hw) - mean_product(&gv, &hw)).abs());
        }
    }
    worst
}

pub fn interval_independence(v: &[f64], w: &[f64], gv: &[Interval], gw: &[Interval]) -> f64 {
    let n = v.len() as f64;
    let inside = |x: f64, i: &Interval| i.lo <= x && x < i.hi;
    let mut worst = 0.0f64;
    for a in gv {
        for b in gw {
            let (mut ca, mut cb, mut cab) = (0usize, 0usize, 0usize);
            for k in 0..v.len() {
                let (ia, ib) = (inside(v[k], a), inside(w[k], b));
                ca += ia as usize;
                cb += ib as usize;
                cab += (ia && ib) as usize;
            }
            worst = worst.max((cab as f64 / n - (ca as f64 / n) * (cb as f64 / n)).abs());
        }
    }
    worst
}

pub fn region_density(seqs: &[&[f64]], region: &Region) -> f64 {
    let n = seqs[0].len();
    let mut hits = 0;
    for i in 0..n {
        let mut any = false;
        for cell in &region.cells {
            let mut all = true;
            for (k, s) in seqs.iter().enumerate() {
                if s[i] < cell.lo[k] || s[i] > cell.hi[k] {
                    all = false;
                }
            }
            any |= all;
        }
        hits += any as usize;
    }
    hits as f64 / n as f64
}

/// `freq_{i,j}{v_i + w_j < x}` over all pairs: the convolution of two window EDFs.
pub fn convolution_left(v: &[f64], w: &[f64], x: f64) -> f64 {
    let mut c = 0usize;
    for a in v {
        for b in w {
            if a + b < x {
                c += 1;
            }
        }
    }
    c as f64 / (v.len() * w.len()) as f64
}

/// `(1/N) sum g(v_n)`: the Stieltjes integral of `g` against the window EDF.
pub fn stieltjes(v: &[f64], g: impl Fn(f64) -> f64) -> f64 {
    let mut s = 0.0;
    for &x in v {
        s += g(x);
    }
    s / v.len() as f64
}

pub fn chebyshev(v: &[f64], eps: f64) -> (f64, f64) {
    let m = mean(v);
    let far = v.iter().filter(|&&x| (x - m).abs() > eps).count();
    (far as f64 / v.len() as f64, dispersion(v) / (eps * eps))
}

pub fn sup_norm(v: &[f64]) -> f64 {
    let mut m = 0.0f64;
    for x in v {
        m = m.max(x.abs());
    }
    m
}

/// Base-`b` radical inverse by repeated division.
pub fn radical_inverse(mut n: u64, b: u64) -> f64 {
    let mut x = 0.0;
    let mut scale = 1.0 / b as f64;
    while n > 0 {
        x += (n % b) as f64 * scale;
        n /= b;
        scale /= b as f64;
    }
    x
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn values(w: &SequenceWindow) -> &[f64] {
    w.values()
}
