use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cabtorsion::cli::{self, BoundFlags, BoundSource, Caps, Emit, Report};
use cabtorsion::curve::CurveSpec;
use cabtorsion::local::RamificationProfile;
use cabtorsion::{Error, Result};

#[derive(Parser)]
#[command(name = "cabtorsion", version, about = "Torsion points of C_ab curves in their Jacobians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = EmitArg::Text, global = true)]
    emit: EmitArg,
    /// Largest degree of a closed point searched.
    #[arg(long = "ext-cap", global = true)]
    ext_cap: Option<usize>,
    /// Largest power-series precision before giving up.
    #[arg(long = "series-cap", global = true)]
    series_cap: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Text,
    Machine,
}

#[derive(Args)]
struct Levels {
    /// A single level N.
    #[arg(long = "N", conflicts_with = "n_range")]
    n: Option<usize>,
    /// An inclusive range of levels, e.g. 10..15 or 10-15.
    #[arg(long = "N-range")]
    n_range: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Genus, gaps, ramification locus and the Riemann-Hurwitz check.
    Analyze {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Delta_N, truncated minors and leading-coefficient certificates.
    Delta {
        #[arg(long)]
        curve: PathBuf,
        #[command(flatten)]
        levels: Levels,
        /// Restrict to one truncation level r.
        #[arg(long)]
        r: Option<usize>,
    },
    /// X[N] with Frobenius orbits and the bound check.
    Torsion {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long = "N")]
        n: usize,
        /// Frobenius is purely inseparable on the curve (never computed).
        #[arg(long)]
        purely_inseparable: bool,
    },
    /// Every cardinality bound, from a curve or a manual profile.
    Bounds {
        #[arg(long, conflicts_with = "profile", required_unless_present = "profile")]
        curve: Option<PathBuf>,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[command(flatten)]
        levels: Levels,
        #[arg(long)]
        purely_inseparable: bool,
        /// Characteristic, for profile input.
        #[arg(long)]
        p: Option<u64>,
        /// Assert Delta_N != 0, for profile input.
        #[arg(long)]
        delta_nonzero: bool,
    },
    /// Number of points over the degree-m extension.
    Count {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Reproduce every worked example and report one line per criterion.
    PaperSuite,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<CurveSpec> {
    CurveSpec::from_json(&read(path)?)
}

fn parse_range(levels: &Levels) -> Result<RangeInclusive<usize>> {
    if let Some(n) = levels.n {
        return Ok(n..=n);
    }
    let Some(text) = &levels.n_range else {
        return Err(Error::Invalid("give --N or --N-range".into()));
    };
    let (lo, hi) = text
        .split_once("..")
        .or_else(|| text.split_once('-'))
        .ok_or_else(|| Error::Invalid(format!("bad range {text:?}")))?;
    let lo: usize = lo.trim().parse().map_err(|_| Error::Invalid(format!("bad range start {lo:?}")))?;
    let hi: usize =
        hi.trim_start_matches('=').trim().parse().map_err(|_| Error::Invalid(format!("bad range end {hi:?}")))?;
    if lo > hi {
        return Err(Error::Invalid(format!("empty range {text:?}")));
    }
    Ok(lo..=hi)
}

fn run(cli: &Cli) -> Result<Report> {
    let caps = |spec: Option<&CurveSpec>| Caps::resolve(cli.ext_cap, cli.series_cap, spec);
    match &cli.command {
        Command::Analyze { curve } => {
            let spec = load_spec(curve)?;
            cli::cmd_analyze(&spec, caps(Some(&spec))?)
        }
        Command::Delta { curve, levels, r } => {
            let spec = load_spec(curve)?;
            cli::cmd_delta(&spec, parse_range(levels)?, *r, caps(Some(&spec))?)
        }
        Command::Torsion { curve, n, purely_inseparable } => {
            let spec = load_spec(curve)?;
            cli::cmd_torsion(&spec, *n, *purely_inseparable, caps(Some(&spec))?)
        }
        Command::Bounds { curve, profile, levels, purely_inseparable, p, delta_nonzero } => {
            let flags = BoundFlags { purely_inseparable: *purely_inseparable, p: *p, delta_nonzero: *delta_nonzero };
            let (source, c) = match (curve, profile) {
                (Some(path), _) => {
                    let spec = load_spec(path)?;
                    let c = caps(Some(&spec))?;
                    (BoundSource::Curve(spec), c)
                }
                (None, Some(path)) => {
                    (BoundSource::Profile(RamificationProfile::from_json(&read(path)?)?), caps(None)?)
                }
                (None, None) => return Err(Error::Invalid("give --curve or --profile".into())),
            };
            cli::cmd_bounds(&source, parse_range(levels)?, flags, c)
        }
        Command::Count { curve, m } => {
            let spec = load_spec(curve)?;
            cli::cmd_count(&spec, *m, caps(Some(&spec))?)
        }
        Command::PaperSuite => cli::cmd_paper_suite(caps(None)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let emit = match cli.emit {
        EmitArg::Text => Emit::Text,
        EmitArg::Machine => Emit::Machine,
    };
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(emit));
            if emit == Emit::Machine {
                println!();
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
