use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgAction, Args, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use seqdensity::density::PredicateSpec;
use seqdensity::experiments::IndexSpec;
use seqdensity::polyadic::{big_levels, prime_power_levels};
use seqdensity::sieve::first_primes;
use seqdensity::{GeneratorSpec, Ladder, TestFn};

/// Everything needed to reproduce a run. Echoed as `config` in every JSON output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tolerance: Option<f64>,
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Generate a sequence window
    Gen(GenArgs),
    /// Asymptotic density profile, Buck covers and measurability triage of a set
    Density(DensityArgs),
    /// Distribution functions, moments, correlation, independence, convolution
    #[command(subcommand)]
    Dist(DistCmd),
    /// Polyadic metric, continuity profiles, Haar integration, sampling
    #[command(subcommand)]
    Polyadic(PolyadicCmd),
    /// Limit-theorem experiments
    #[command(subcommand)]
    Exp(ExpCmd),
}

pub fn json_arg<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

fn gen_spec(s: &str) -> Result<GeneratorSpec, String> {
    json_arg(s)
}

fn pred_spec(s: &str) -> Result<PredicateSpec, String> {
    json_arg(s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct GenArgs {
    /// Generator spec as JSON, e.g. {"kind":"vdc","chain":{"ratio":2,"levels":20}}
    #[arg(long, value_parser = gen_spec)]
    pub spec: GeneratorSpec,
    /// Window length
    #[arg(short, long, default_value_t = 1000)]
    pub n: usize,
}

/// `lo..hi` with an optional `:points` suffix (log-spaced).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridArg {
    pub lo: u64,
    pub hi: u64,
    pub points: usize,
}

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (range, points) = match s.split_once(':') {
            Some((r, p)) => (r, p.parse::<usize>().map_err(|e| format!("points: {e}"))?),
            None => (s, 13),
        };
        let (lo, hi) = range.split_once("..").ok_or("expected lo..hi")?;
        let num = |x: &str| -> Result<u64, String> {
            let v: f64 = x.trim().parse().map_err(|e| format!("`{x}`: {e}"))?;
            if v < 1.0 || v.fract() != 0.0 || v > u64::MAX as f64 {
                return Err(format!("`{x}` is not a positive integer"));
            }
            Ok(v as u64)
        };
        let g = GridArg { lo: num(lo)?, hi: num(hi)?, points };
        if g.lo > g.hi || g.points == 0 {
            return Err("grid needs lo <= hi and at least one point".into());
        }
        Ok(g)
    }
}

/// Ladder descriptions: `factorial:K`, `primorial:K`, `powers:B:K`,
/// `prime-powers:COUNT:EPS` or an explicit list `1,2,6,24`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LadderArg(String);

impl LadderArg {
    pub fn big(&self) -> Result<Vec<BigUint>, String> {
        let parts: Vec<&str> = self.0.split(':').collect();
        let int = |x: &str| x.parse::<u64>().map_err(|e| format!("`{x}`: {e}"));
        let small = |l: seqdensity::Result<Ladder>| l.map(|l| big_levels(&l)).map_err(|e| e.to_string());
        match parts.as_slice() {
            ["factorial", k] => small(Ladder::factorial(int(k)? as u32)),
            ["primorial", k] => small(Ladder::primorial(int(k)? as usize)),
            ["powers", b, k] => small(Ladder::powers(int(b)?, int(k)? as u32)),
            ["prime-powers", c, eps] => {
                let eps: f64 = eps.parse().map_err(|e| format!("`{eps}`: {e}"))?;
                if !(eps > 0.0 && eps < 1.0) {
                    return Err("prime-powers eps must be in (0, 1)".into());
                }
                Ok(prime_power_levels(&first_primes(int(c)? as usize), eps))
            }
            [list] => {
                let levels = list.split(',').map(int).collect::<Result<Vec<_>, _>>()?;
                small(Ladder::new(levels))
            }
            _ => Err(format!("unrecognized ladder `{}`", self.0)),
        }
    }

    pub fn small(&self) -> Result<Ladder, String> {
        let levels = self
            .big()?
            .iter()
            .map(|m| u64::try_from(m).map_err(|_| format!("ladder level {m} exceeds 64 bits")))
            .collect::<Result<Vec<_>, _>>()?;
        Ladder::new(levels).map_err(|e| e.to_string())
    }
}

impl FromStr for LadderArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let l = LadderArg(s.to_string());
        l.big()?;
        Ok(l)
    }
}

impl TryFrom<String> for LadderArg {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<LadderArg> for String {
    fn from(l: LadderArg) -> String {
        l.0
    }
}

impl fmt::Display for LadderArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct DensityArgs {
    /// Set predicate as JSON: "squares", "primes", "blocks", {"ap":{"r":2,"m":4}},
    /// {"aps":[[1,3],[2,5]]}, {"threshold":{"sequence":{...},"below":0.5}}
    #[arg(long, value_parser = pred_spec)]
    pub pred: PredicateSpec,
    /// Window grid `lo..hi[:points]`
    #[arg(long, default_value = "1e3..1e6")]
    pub grid: GridArg,
    /// Ladder for Buck covers and measurability triage; omitted means profile only
    #[arg(long)]
    pub ladder: Option<LadderArg>,
    /// Window for covers and saturation (defaults to the top of the grid)
    #[arg(long)]
    pub window: Option<u64>,
    /// Minimum hits for a residue class to count as occupied
    #[arg(long, default_value_t = 3)]
    pub threshold: u64,
    /// Largest measurability gap still reported as measurable
    #[arg(long, default_value_t = seqdensity::density::DEFAULT_GAP_TOLERANCE)]
    pub gap_tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct SeqArgs {
    /// Generator spec as JSON
    #[arg(long, value_parser = gen_spec)]
    pub spec: GeneratorSpec,
    /// Window length
    #[arg(short, long, default_value_t = 10_000)]
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct PairArgs {
    /// Generator spec of the first sequence as JSON
    #[arg(long, value_parser = gen_spec)]
    pub spec: GeneratorSpec,
    /// Generator spec of the second sequence as JSON
    #[arg(long, value_parser = gen_spec)]
    pub spec2: GeneratorSpec,
    /// Window length
    #[arg(short, long, default_value_t = 10_000)]
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct IndepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: PairArgs,
    /// Intervals per axis in the interval statistic
    #[arg(long, default_value_t = 10)]
    pub intervals: usize,
    /// Largest statistic still reported as independent
    #[arg(long, default_value_t = seqdensity::dist::DEFAULT_INDEPENDENCE_THRESHOLD)]
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Args)]
pub struct ConvArgs {
    /// Add a uniform [0,1] operand (repeatable)
    #[arg(long, action = ArgAction::Count)]
    pub uniform: u8,
    /// Add the EDF of a generated window as an operand (repeatable)
    #[arg(long, value_parser = gen_spec)]
    pub spec: Vec<GeneratorSpec>,
    /// Window length for generated operands
    #[arg(short, long, default_value_t = 1000)]
    pub n: usize,
    /// Support points per operand after coarsening
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    /// Points at which to evaluate the convolution (repeatable)
    #[arg(long)]
    pub eval: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum DistCmd {
    /// Empirical distribution function
    Edf(SeqArgs),
    /// Mean and dispersion
    Moments(SeqArgs),
    /// Correlation coefficient and regression line
    Corr(PairArgs),
    /// Interval and statistical independence statistics
    Indep(IndepArgs),
    /// Distribution function of a sum of independent operands
    Conv(ConvArgs),
}

fn parse_eps_list(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum PolyadicCmd {
    /// Exact polyadic distance between two integers
    #[command(allow_negative_numbers = true)]
    Dist { a: i64, b: i64 },
    /// p-continuity witnesses along a ladder
    Profile {
        /// Generator spec as JSON
        #[arg(long, value_parser = gen_spec)]
        spec: GeneratorSpec,
        /// Window length
        #[arg(short, long, default_value_t = 20_000)]
        n: usize,
        /// Ladder of moduli to test
        #[arg(long, default_value = "factorial:7")]
        ladder: LadderArg,
        /// Comma-separated epsilons
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.01", value_parser = parse_eps_list)]
        eps: Vec<f64>,
    },
    /// Haar integral as period means along a ladder
    Integrate {
        /// Generator spec as JSON
        #[arg(long, value_parser = gen_spec)]
        spec: GeneratorSpec,
        /// Ladder of period lengths
        #[arg(long, default_value = "factorial:8")]
        ladder: LadderArg,
    },
    /// Haar-random point of the polyadic integers
    Sample {
        /// Ladder whose levels the point is resolved at
        #[arg(long, default_value = "factorial:10")]
        levels: LadderArg,
    },
}

/// `identity`, `pair-swap`, `primes` or `multiple:A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexArg(pub IndexSpec);

impl FromStr for IndexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(IndexArg(match s {
            "identity" => IndexSpec::Identity,
            "pair-swap" => IndexSpec::PairSwap,
            "primes" => IndexSpec::Primes,
            _ => match s.strip_prefix("multiple:") {
                Some(a) => IndexSpec::Multiple { a: a.parse().map_err(|e| format!("`{a}`: {e}"))? },
                None => return Err(format!("unknown index sequence `{s}`")),
            },
        }))
    }
}

/// Comma-separated test functions, one per family member: `x^2,x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TupleArg(pub Vec<TestFn>);

impl FromStr for TupleArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',').map(|g| g.trim().parse::<TestFn>().map_err(|e| e.to_string())).collect::<Result<_, _>>().map(TupleArg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(rename_all = "kebab-case")]
pub enum ExpCmd {
    /// Central limit theorem for sums of independent van der Corput sequences
    Clt {
        /// Number of sequences
        #[arg(short, long, default_value_t = 12)]
        k: usize,
        /// Window length
        #[arg(short, long, default_value_t = 10_000)]
        n: usize,
        /// Bases (default: the first k primes)
        #[arg(long, value_delimiter = ',')]
        bases: Vec<u64>,
    },
    /// Weak law of large numbers against the Chebyshev-type bound
    Weaklaw {
        /// Window length
        #[arg(short, long, default_value_t = 10_000)]
        n: usize,
        /// Deviation epsilon
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        /// Family sizes to test
        #[arg(short, long, value_delimiter = ',', default_value = "1,5,10,20")]
        k: Vec<usize>,
        /// Bases (default: the first primes)
        #[arg(long, value_delimiter = ',')]
        bases: Vec<u64>,
    },
    /// Weyl sums along Haar-random points for prime-base van der Corput families
    MetricUd {
        /// Number of sequences (bases are the first COUNT primes)
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Number of Haar-random points
        #[arg(long, default_value_t = 20)]
        alphas: usize,
        /// Largest |h| in the Weyl sums
        #[arg(long, default_value_t = 3)]
        h_max: u32,
        /// Bound on |S_N(h, alpha)|
        #[arg(long, default_value_t = 0.25)]
        threshold: f64,
        /// Precision of the ladder resolving each point
        #[arg(long, default_value_t = 1e-6)]
        ladder_eps: f64,
        /// Precision of each extended value
        #[arg(long, default_value_t = 1e-6)]
        eval_eps: f64,
    },
    /// Uniform distribution in Z of an index sequence
    Niven {
        /// Index sequence
        #[arg(long, default_value = "identity")]
        index: IndexArg,
        /// Window length
        #[arg(short, long, default_value_t = 10_000)]
        n: usize,
        /// Largest modulus checked
        #[arg(long, default_value_t = 10)]
        modulus_cap: u64,
    },
    /// Mean invariance under a uniformly distributed reindexing
    Resample {
        /// Generator spec as JSON
        #[arg(long, value_parser = gen_spec, default_value = r#"{"kind":"vdc","chain":{"ratio":2,"levels":2}}"#)]
        spec: GeneratorSpec,
        /// Index sequence
        #[arg(long, default_value = "pair-swap")]
        index: IndexArg,
        /// Window length
        #[arg(short, long, default_value_t = 100_000)]
        n: usize,
        /// Continuity epsilon
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// Bound on the exceptional-set measure
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        /// Ladder searched for a continuity level
        #[arg(long, default_value = "factorial:8")]
        ladder: LadderArg,
    },
    /// Product rule for test functions of independent sequences along a reindexing
    Sss {
        /// Family member (repeatable)
        #[arg(long, value_parser = gen_spec)]
        spec: Vec<GeneratorSpec>,
        /// Test-function tuple, one function per member (repeatable)
        #[arg(long)]
        g: Vec<TupleArg>,
        /// Index sequence
        #[arg(long, default_value = "identity")]
        index: IndexArg,
        /// Window length
        #[arg(short, long, default_value_t = 100_000)]
        n: usize,
    },
}
