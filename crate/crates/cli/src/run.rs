use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use seqdensity::density::{
    ap_union_density, asymptotic_density_profile, buck_measurability_check, buck_upper_levels, log_grid, Persistence,
    PredicateSpec, DEFAULT_DENSITY_TOLERANCE,
};
use seqdensity::dist::{
    convolve_edf, correlation, default_family, edf, interval_independence_stat, moments, statistical_independence_stat,
    uniform_intervals, DEFAULT_CONVOLUTION_CAP,
};
use seqdensity::experiments::{
    clt_experiment, composed_independence_check, metric_ud_experiment, niven_ud_test, resample_invariance,
    vdc_prime_family, weak_law_experiment, ExperimentReport, FamilyGate, MetricUdOptions, ResampleOptions,
    DEFAULT_CLT_TOLERANCE, DEFAULT_NIVEN_TOLERANCE, DEFAULT_SSS_TOLERANCE,
};
use seqdensity::polyadic::{haar_integral, p_continuity_profile, polyadic_distance, sample_omega};
use seqdensity::sieve::first_primes;
use seqdensity::{APSet, BaseChain, Edf, Error, Generator, GeneratorSpec};

use crate::config::{Command, DistCmd, ExpCmd, Format, LadderArg, PolyadicCmd, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 1 for precondition or gate failures, 2 for anything wrong with the request itself.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                Error::Precondition(_)
                | Error::Diagnostic(_)
                | Error::WeakContinuity { .. }
                | Error::InsufficientResolution(_)
                | Error::Degenerate(_)
                | Error::Domain(_),
            ) => 1,
            _ => 2,
        }
    }
}

/// The result of a run before it is written anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub result: Value,
    pub csv: Option<String>,
    /// One-line human summary printed instead of JSON when writing to stdout.
    pub text: Option<String>,
    /// False when an experiment misses its tolerance.
    pub pass: bool,
}

impl Outcome {
    fn new(result: impl Serialize, csv: Option<String>) -> Self {
        Self { result: serde_json::to_value(result).expect("serializable"), csv, text: None, pass: true }
    }

    fn report(r: ExperimentReport) -> Self {
        let csv = Some(r.trace_csv());
        let pass = r.pass;
        Self { pass, ..Self::new(r, csv) }
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn window(spec: &GeneratorSpec, n: usize) -> Result<seqdensity::SequenceWindow, CliError> {
    Ok(spec.build()?.window(n)?)
}

fn values_csv(header: &str, values: &[f64]) -> String {
    let mut out = format!("{header}\n");
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{},{v}\n", i + 1));
    }
    out
}

fn bases_or_primes(bases: &[u64], k: usize) -> Result<Vec<Generator>, CliError> {
    if bases.is_empty() {
        return Ok(vdc_prime_family(k)?);
    }
    bases.iter().map(|&b| Ok(Generator::Vdc(BaseChain::geometric(b, 2)?))).collect()
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let tol = config.tolerance;
    match &config.command {
        Command::Gen(a) => {
            let w = window(&a.spec, a.n)?;
            let (lo, hi) = w.bounds();
            let csv = values_csv("n,value", w.values());
            Ok(Outcome::new(json!({ "len": w.len(), "lower": lo, "upper": hi, "values": w.values() }), Some(csv)))
        }
        Command::Density(a) => {
            let pred = a.pred.build()?;
            let grid = log_grid(a.grid.lo, a.grid.hi, a.grid.points);
            let profile = asymptotic_density_profile(&pred, &grid, tol.unwrap_or(DEFAULT_DENSITY_TOLERANCE))?;
            let exact = match &a.pred {
                PredicateSpec::Ap { r, m } => Some(ap_union_density(&APSet::from_pairs(&[(*r, *m)])?)?),
                PredicateSpec::Aps(pairs) => Some(ap_union_density(&APSet::from_pairs(pairs)?)?),
                _ => None,
            };
            let (mut certificates, mut measurability) = (Vec::new(), None);
            if let Some(ladder) = &a.ladder {
                let ladder = ladder.small().map_err(config_err)?;
                let w = a.window.unwrap_or(a.grid.hi);
                certificates = buck_upper_levels(&pred, &ladder, w, Persistence::default())?;
                measurability = Some(buck_measurability_check(&pred, &ladder, w, a.threshold, a.gap_tolerance)?);
            }
            let csv = Some(profile.to_csv());
            Ok(Outcome::new(
                json!({
                    "value": profile.value,
                    "liminf": profile.liminf_est,
                    "limsup": profile.limsup_est,
                    "exact": exact.map(|q| q.to_string()),
                    "profile": profile,
                    "certificates": certificates,
                    "measurability": measurability,
                }),
                csv,
            ))
        }
        Command::Dist(d) => run_dist(d),
        Command::Polyadic(p) => run_polyadic(p, config.seed),
        Command::Exp(e) => run_exp(e, config.seed, tol),
    }
}

fn run_dist(cmd: &DistCmd) -> Result<Outcome, CliError> {
    match cmd {
        DistCmd::Edf(a) => {
            let f = edf(&window(&a.spec, a.n)?);
            let points: Vec<(f64, f64)> = f.breakpoints().iter().copied().zip(f.cumulative().iter().copied()).collect();
            let csv = Some(f.to_csv());
            Ok(Outcome::new(json!({ "len": a.n, "mean": f.mean(), "points": points }), csv))
        }
        DistCmd::Moments(a) => Ok(Outcome::new(moments(&window(&a.spec, a.n)?), None)),
        DistCmd::Corr(a) => {
            let c = correlation(&window(&a.spec, a.n)?, &window(&a.spec2, a.n)?)?;
            Ok(Outcome::new(c, None))
        }
        DistCmd::Indep(a) => {
            let v = window(&a.pair.spec, a.pair.n)?;
            let w = window(&a.pair.spec2, a.pair.n)?;
            let grid = |s: &seqdensity::SequenceWindow| {
                let (lo, hi) = s.bounds();
                let mut g = uniform_intervals(a.intervals, lo, hi);
                if let Some(last) = g.last_mut() {
                    last.hi = f64::INFINITY;
                }
                g
            };
            let interval = interval_independence_stat(&v, &w, &grid(&v), &grid(&w), a.threshold)?;
            let statistical = statistical_independence_stat(&v, &w, &default_family(), a.threshold)?;
            Ok(Outcome::new(json!({ "interval": interval, "statistical": statistical }), None))
        }
        DistCmd::Conv(a) => {
            let mut operands: Vec<Edf> = (0..a.uniform).map(|_| Edf::uniform_grid(a.points)).collect();
            for s in &a.spec {
                operands.push(edf(&window(s, a.n)?).coarsen(a.points));
            }
            if operands.len() < 2 {
                return Err(config_err("conv needs at least two operands"));
            }
            let mut acc = operands[0].clone();
            for f in &operands[1..] {
                acc = convolve_edf(&acc, f, DEFAULT_CONVOLUTION_CAP)?.coarsen(a.points.max(1) * 4);
            }
            let evals: Vec<Value> = a.eval.iter().map(|&x| json!({ "x": x, "value": acc.eval(x) })).collect();
            let csv = Some(acc.to_csv());
            Ok(Outcome::new(json!({ "operands": operands.len(), "support": acc.len(), "evals": evals }), csv))
        }
    }
}

fn run_polyadic(cmd: &PolyadicCmd, seed: u64) -> Result<Outcome, CliError> {
    let ladder = |l: &LadderArg| l.small().map_err(config_err);
    match cmd {
        PolyadicCmd::Dist { a, b } => {
            let d = polyadic_distance(*a, *b);
            let text = format!("{d} = {}", d.to_f64());
            let mut o = Outcome::new(json!({ "a": a, "b": b, "exact": d.to_string(), "value": d.to_f64() }), None);
            o.text = Some(text);
            Ok(o)
        }
        PolyadicCmd::Profile { spec, n, ladder: l, eps } => {
            let p = p_continuity_profile(&window(spec, *n)?, eps, &ladder(l)?)?;
            let mut csv = String::from("m,range\n");
            for (m, r) in &p.level_ranges {
                csv.push_str(&format!("{m},{r}\n"));
            }
            Ok(Outcome::new(p, Some(csv)))
        }
        PolyadicCmd::Integrate { spec, ladder: l } => {
            let t = haar_integral(&spec.build()?, &ladder(l)?)?;
            let mut csv = String::from("m,mean\n");
            for (m, v) in &t.trace {
                csv.push_str(&format!("{m},{v}\n"));
            }
            Ok(Outcome::new(t, Some(csv)))
        }
        PolyadicCmd::Sample { levels } => {
            let levels = levels.big().map_err(config_err)?;
            Ok(Outcome::new(sample_omega(seed, &levels)?, None))
        }
    }
}

fn run_exp(cmd: &ExpCmd, seed: u64, tol: Option<f64>) -> Result<Outcome, CliError> {
    let gate = FamilyGate::default();
    let mut report = match cmd {
        ExpCmd::Clt { k, n, bases } => {
            let fam = bases_or_primes(bases, *k)?;
            clt_experiment(&fam, *n, *k, &gate, tol.unwrap_or(DEFAULT_CLT_TOLERANCE))?
        }
        ExpCmd::Weaklaw { n, eps, k, bases } => {
            let kmax = k.iter().copied().max().unwrap_or(0);
            let fam = bases_or_primes(bases, kmax)?;
            weak_law_experiment(&fam, *n, *eps, k, &gate)?
        }
        ExpCmd::MetricUd { count, alphas, h_max, threshold, ladder_eps, eval_eps } => {
            let defaults = MetricUdOptions::default();
            let opts = MetricUdOptions {
                n_alphas: *alphas,
                seed,
                h_max: *h_max,
                threshold: *threshold,
                ladder_eps: *ladder_eps,
                eval_eps: *eval_eps,
                allowed_failures: tol.unwrap_or(defaults.allowed_failures),
            };
            metric_ud_experiment(&first_primes(*count), &opts)?
        }
        ExpCmd::Niven { index, n, modulus_cap } => {
            niven_ud_test(&index.0.build(*n), *modulus_cap, tol.unwrap_or(DEFAULT_NIVEN_TOLERANCE))?
        }
        ExpCmd::Resample { spec, index, n, eps, delta, ladder } => {
            let k = index.0.build(*n);
            let len = k.iter().copied().max().unwrap_or(0) as usize;
            let v = window(spec, len.max(*n))?;
            let opts = ResampleOptions { eps: *eps, delta: *delta, ladder: ladder.small().map_err(config_err)? };
            resample_invariance(&v, &k, &opts)?
        }
        ExpCmd::Sss { spec, g, index, n } => {
            if spec.is_empty() || g.is_empty() {
                return Err(config_err("sss needs at least one --spec and one --g tuple"));
            }
            let k = index.0.build(*n);
            let len = k.iter().copied().max().unwrap_or(0) as usize;
            let fam = spec.iter().map(|s| window(s, len.max(*n))).collect::<Result<Vec<_>, _>>()?;
            let tuples: Vec<_> = g.iter().map(|t| t.0.clone()).collect();
            composed_independence_check(&fam, &tuples, &k, &gate, tol.unwrap_or(DEFAULT_SSS_TOLERANCE))?
        }
    };
    if report.seed.is_none() {
        report.seed = Some(seed);
    }
    Ok(Outcome::report(report))
}

/// The JSON document written for a run: the echoed config and the result.
pub fn document(config: &RunConfig, outcome: &Outcome) -> String {
    let mut s = serde_json::to_string_pretty(&json!({ "config": config, "result": outcome.result, "pass": outcome.pass }))
        .expect("serializable");
    s.push('\n');
    s
}

fn write(path: &Path, body: &str) -> Result<(), CliError> {
    fs::write(path, body).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Writes the outputs of a run. With `--format csv` and `--out`, the CSV series
/// goes to the path and the JSON document to the same path with `.json` appended.
pub fn emit(config: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    let doc = document(config, outcome);
    match (&config.out, config.format) {
        (Some(path), Format::Json) => {
            write(path, &doc)?;
            if let Some(t) = &outcome.text {
                println!("{t}");
            }
        }
        (Some(path), Format::Csv) => {
            let csv = outcome.csv.as_ref().ok_or_else(|| config_err("this command has no CSV series"))?;
            write(path, csv)?;
            let mut side = path.clone().into_os_string();
            side.push(".json");
            write(Path::new(&side), &doc)?;
        }
        (None, Format::Json) => match &outcome.text {
            Some(t) => println!("{t}"),
            None => print!("{doc}"),
        },
        (None, Format::Csv) => {
            let csv = outcome.csv.as_ref().ok_or_else(|| config_err("this command has no CSV series"))?;
            print!("{csv}");
        }
    }
    Ok(())
}

/// Reads a config file: either a bare `RunConfig` or a previous output document.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(config_err)?;
    let v = match v.get("config") {
        Some(inner) => inner.clone(),
        None => v,
    };
    serde_json::from_value(v).map_err(config_err)
}
