//! Thin CLI over the batch drivers in `fregier::experiments`.
//!
//! Exit codes: 0 success, 2 bad input, 3 numerical failure, 4 documented
//! degeneracy. Parameters come from flags, from a `--config` JSON file, or
//! both — a parameter given in both places with different values is an
//! error, never a silent override.

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use fregier::experiments::{
    self, ConjectureParams, EnvelopeParams, PonceletParams, ReverseParams, RunOutput, ScanKind,
    ScanParams,
};
use fregier::{Error, Result};

#[derive(Parser)]
#[command(
    name = "fregier",
    version,
    about = "Chord envelopes of an ellipse at a fixed inscribed angle: figures, scans, and billiard experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the chord envelope for one (M, θ) and draw it
    Envelope(EnvelopeArgs),
    /// Scan M around the ellipse and tabulate the envelope area
    AreaScan(ScanArgs),
    /// Scan M around the ellipse and fit the locus of envelope centres
    Locus(ScanArgs),
    /// Scan M and tabulate the angle between the two tangents at M
    TangentAngle(ScanArgs),
    /// Tune an n-periodic billiard orbit and scan its invariant sums
    Poncelet(PonceletArgs),
    /// Scan the invariant-sum conjecture over a range of periods
    Conjecture(ConjectureArgs),
    /// Recover the viewpoints M that see a given chord at angle θ
    Reverse(ReverseArgs),
}

#[derive(Args, Debug)]
struct CommonOpts {
    /// Ellipse semi-axis along x
    #[arg(long)]
    a: Option<f64>,
    /// Ellipse semi-axis along y
    #[arg(long)]
    b: Option<f64>,
    /// JSON parameter file; must agree with any flag given twice
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory [default: out]
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnvelopeArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Inscribed angle θ in radians, 0 < θ < π
    #[arg(long)]
    theta: Option<f64>,
    /// Parameter angle of M on the ellipse [default: 0.7]
    #[arg(long)]
    m_angle: Option<f64>,
    /// Number of sampled chords [default: 48]
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Inscribed angle θ in radians, 0 < θ < π
    #[arg(long)]
    theta: Option<f64>,
    /// Number of sampled positions of M [default: 20/12/10 per subcommand]
    #[arg(long)]
    num_m: Option<usize>,
    /// Number of sampled chords per envelope fit [default: 48]
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug)]
struct PonceletArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Orbit period [default: 3]
    #[arg(long)]
    n: Option<NRange>,
    /// Number of starting phases [default: 32]
    #[arg(long)]
    phases: Option<usize>,
}

#[derive(Args, Debug)]
struct ConjectureArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Orbit period or range, e.g. `5` or `4:8` [default: 4:8]
    #[arg(long)]
    n: Option<NRange>,
    /// Number of starting phases per period [default: 32]
    #[arg(long)]
    phases: Option<usize>,
}

#[derive(Args, Debug)]
struct ReverseArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// Parameter angle of chord endpoint N
    #[arg(long)]
    n_angle: Option<f64>,
    /// Parameter angle of chord endpoint L
    #[arg(long)]
    l_angle: Option<f64>,
    /// Inscribed angle θ in radians, 0 < θ < π
    #[arg(long)]
    theta: Option<f64>,
}

/// A period or inclusive period range, written `3` or `4:8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct NRange {
    lo: usize,
    hi: usize,
}

impl NRange {
    fn single(self) -> Option<usize> {
        (self.lo == self.hi).then_some(self.lo)
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}:{}", self.lo, self.hi)
        }
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad period `{t}`"))
        };
        let (lo, hi) = match s.split_once(':') {
            Some((l, h)) => (parse(l)?, parse(h)?),
            None => {
                let n = parse(s)?;
                (n, n)
            }
        };
        if lo < 3 {
            return Err(format!("period must be at least 3, got {lo}"));
        }
        if hi < lo {
            return Err(format!("empty period range {lo}:{hi}"));
        }
        Ok(NRange { lo, hi })
    }
}

impl<'de> Deserialize<'de> for NRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(usize),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => n.to_string().parse().map_err(D::Error::custom),
            Raw::Str(s) => s.parse().map_err(D::Error::custom),
        }
    }
}

/// Everything a `--config` file may carry; unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    a: Option<f64>,
    b: Option<f64>,
    theta: Option<f64>,
    m_angle: Option<f64>,
    samples: Option<usize>,
    num_m: Option<usize>,
    n: Option<NRange>,
    phases: Option<usize>,
    n_angle: Option<f64>,
    l_angle: Option<f64>,
    out_dir: Option<PathBuf>,
}

fn load_config(path: &Option<PathBuf>) -> Result<ConfigFile> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("bad config {}: {e}", path.display())))
}

/// Merge one parameter given on the command line and/or in the config file.
/// Both present and different is an explicit conflict, never an override.
fn merge<T: PartialEq + Clone + fmt::Debug>(
    name: &str,
    cli: &Option<T>,
    cfg: &Option<T>,
) -> Result<Option<T>> {
    match (cli, cfg) {
        (Some(c), Some(f)) if c != f => Err(Error::InvalidInput(format!(
            "`{name}` is {c:?} on the command line but {f:?} in the config file; make them agree or pass it once"
        ))),
        (Some(c), _) => Ok(Some(c.clone())),
        (None, f) => Ok(f.clone()),
    }
}

fn require<T>(name: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| Error::InvalidInput(format!("missing required parameter `--{name}`")))
}

fn out_dir(common: &CommonOpts, cfg: &ConfigFile) -> Result<PathBuf> {
    Ok(merge("out-dir", &common.out_dir, &cfg.out_dir)?.unwrap_or_else(|| PathBuf::from("out")))
}

fn run_scan(kind: ScanKind, args: &ScanArgs, default_num_m: usize) -> Result<RunOutput> {
    let cfg = load_config(&args.common.config)?;
    let p = ScanParams {
        a: require("a", merge("a", &args.common.a, &cfg.a)?)?,
        b: require("b", merge("b", &args.common.b, &cfg.b)?)?,
        theta: require("theta", merge("theta", &args.theta, &cfg.theta)?)?,
        num_m: merge("num-m", &args.num_m, &cfg.num_m)?.unwrap_or(default_num_m),
        samples: merge("samples", &args.samples, &cfg.samples)?.unwrap_or(48),
        out_dir: out_dir(&args.common, &cfg)?,
    };
    experiments::run_scan(kind, &p)
}

fn run(cli: Cli) -> Result<RunOutput> {
    match &cli.command {
        Command::Envelope(args) => {
            let cfg = load_config(&args.common.config)?;
            let p = EnvelopeParams {
                a: require("a", merge("a", &args.common.a, &cfg.a)?)?,
                b: require("b", merge("b", &args.common.b, &cfg.b)?)?,
                theta: require("theta", merge("theta", &args.theta, &cfg.theta)?)?,
                m_angle: merge("m-angle", &args.m_angle, &cfg.m_angle)?.unwrap_or(0.7),
                samples: merge("samples", &args.samples, &cfg.samples)?.unwrap_or(48),
                out_dir: out_dir(&args.common, &cfg)?,
            };
            experiments::run_envelope(&p)
        }
        Command::AreaScan(args) => run_scan(ScanKind::Area, args, 20),
        Command::Locus(args) => run_scan(ScanKind::Locus, args, 12),
        Command::TangentAngle(args) => run_scan(ScanKind::TangentAngle, args, 10),
        Command::Poncelet(args) => {
            let cfg = load_config(&args.common.config)?;
            let nr = merge("n", &args.n, &cfg.n)?.unwrap_or(NRange { lo: 3, hi: 3 });
            let n = nr.single().ok_or_else(|| {
                Error::InvalidInput(format!("poncelet takes a single period, got range {nr}"))
            })?;
            let p = PonceletParams {
                a: require("a", merge("a", &args.common.a, &cfg.a)?)?,
                b: require("b", merge("b", &args.common.b, &cfg.b)?)?,
                n,
                phases: merge("phases", &args.phases, &cfg.phases)?.unwrap_or(32),
                out_dir: out_dir(&args.common, &cfg)?,
            };
            experiments::run_poncelet(&p)
        }
        Command::Conjecture(args) => {
            let cfg = load_config(&args.common.config)?;
            let nr = merge("n", &args.n, &cfg.n)?.unwrap_or(NRange { lo: 4, hi: 8 });
            let p = ConjectureParams {
                a: require("a", merge("a", &args.common.a, &cfg.a)?)?,
                b: require("b", merge("b", &args.common.b, &cfg.b)?)?,
                n_lo: nr.lo,
                n_hi: nr.hi,
                phases: merge("phases", &args.phases, &cfg.phases)?.unwrap_or(32),
                out_dir: out_dir(&args.common, &cfg)?,
            };
            experiments::run_conjecture(&p)
        }
        Command::Reverse(args) => {
            let cfg = load_config(&args.common.config)?;
            let p = ReverseParams {
                a: require("a", merge("a", &args.common.a, &cfg.a)?)?,
                b: require("b", merge("b", &args.common.b, &cfg.b)?)?,
                n_angle: require("n-angle", merge("n-angle", &args.n_angle, &cfg.n_angle)?)?,
                l_angle: require("l-angle", merge("l-angle", &args.l_angle, &cfg.l_angle)?)?,
                theta: require("theta", merge("theta", &args.theta, &cfg.theta)?)?,
                out_dir: out_dir(&args.common, &cfg)?,
            };
            experiments::run_reverse(&p)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            for note in &out.notes {
                println!("{note}");
            }
            for file in &out.files {
                println!("wrote {}", file.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
