use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use seqsteer::{Link, Method, SweepVar};

#[derive(Parser, Debug)]
#[command(
    name = "steer",
    version,
    about = "Steering radii, sweeps, sequential chains and sharing regions",
    after_help = "Flags may also come from a flat `key = value` file given with --config; \
                  flags on the command line win. STEER_THREADS caps the worker count."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Radius of one or all links of Alice – Bob – Charlie.
    Radius(RadiusArgs),
    /// Radii over a grid of W, p or θ.
    Sweep(SweepArgs),
    /// Sequential chain Alice – Bob₁ … Bobₙ – Charlie.
    Chain(ChainArgs),
    /// Four-party sharing region or two-way sharing window.
    Region(RegionArgs),
}

#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    /// Visibility of the initial state.
    #[arg(long = "W", alias = "w", default_value_t = 1.0)]
    pub w: f64,
    /// State angle θ (radians unless --deg) [default: π/4].
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Read angles in degrees.
    #[arg(long)]
    pub deg: bool,
}

impl StateArgs {
    pub fn to_radians(&self, x: f64) -> f64 {
        if self.deg {
            x.to_radians()
        } else {
            x
        }
    }

    pub fn theta_rad(&self) -> f64 {
        self.theta.map_or(FRAC_PI_4, |t| self.to_radians(t))
    }
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("strategy").args(["case", "mix"])))]
pub struct StrategyArgs {
    /// Bob's deterministic strategy: 1, 2 or 3.
    #[arg(long)]
    pub case: Option<u32>,
    /// Mixture: a pair such as `1,3` (weight --p on the first case) or
    /// weights such as `1@0.3,2@0.2,3`.
    #[arg(long)]
    pub mix: Option<String>,
    /// Weight of the first case of a pair mixture.
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("method_choice").args(["method", "analytic", "numeric", "both"])))]
pub struct MethodArgs {
    /// Closed forms, the LHS solver, or both with their difference.
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
    /// Same as --method analytic.
    #[arg(long)]
    pub analytic: bool,
    /// Same as --method numeric.
    #[arg(long)]
    pub numeric: bool,
    /// Same as --method both.
    #[arg(long)]
    pub both: bool,
}

impl MethodArgs {
    pub fn resolve(&self, default: Method) -> Method {
        if self.analytic {
            Method::Analytic
        } else if self.numeric {
            Method::Numeric
        } else if self.both {
            Method::Both
        } else {
            self.method.unwrap_or(default)
        }
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: seqsteer::Error| e.to_string())
}

fn parse_link(s: &str) -> Result<Link, String> {
    s.parse().map_err(|e: seqsteer::Error| e.to_string())
}

fn parse_var(s: &str) -> Result<SweepVar, String> {
    s.parse().map_err(|e: seqsteer::Error| e.to_string())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file; stdout when absent. A `<out>.meta.json` sidecar records the run.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format [default: json for a `.json` file, csv otherwise].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat `key = value` file with flag values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        self.format.unwrap_or_else(|| match &self.out {
            Some(p) if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) => Format::Json,
            _ => Format::Csv,
        })
    }
}

#[derive(Args, Debug)]
pub struct RadiusArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub strategy: StrategyArgs,
    /// AB, BA, AC or CA; all four when absent.
    #[arg(long, value_parser = parse_link)]
    pub link: Option<Link>,
    #[command(flatten)]
    pub method: MethodArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Swept variable: W, p or theta.
    #[arg(long, value_parser = parse_var)]
    pub var: SweepVar,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    /// Upper end [default: 1, or π/4 for theta].
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub strategy: StrategyArgs,
    /// Comma-separated links [default: all].
    #[arg(long, value_delimiter = ',', value_parser = parse_link)]
    pub links: Vec<Link>,
    #[command(flatten)]
    pub method: MethodArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Bobs in order: `case3,case3`, `case3 x20`, `mix:1@0.2,3`, or a count
    /// combined with --p1 … / --q1 ….
    #[arg(long, num_args = 1..)]
    pub bobs: Vec<String>,
    /// `N=SPEC`; written as `--bobN SPEC` on the command line.
    #[arg(long = "bob-at", hide = true)]
    pub bob_at: Vec<String>,
    /// `N=P`; written as `--pN P`.
    #[arg(long = "p-at", hide = true)]
    pub p_at: Vec<String>,
    /// `N=Q`; written as `--qN Q`.
    #[arg(long = "q-at", hide = true)]
    pub q_at: Vec<String>,
    /// Bobs announce which strategy branch they used.
    #[arg(long)]
    pub disclosure: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    FourParty,
    Window,
}

#[derive(Args, Debug)]
pub struct RegionArgs {
    #[arg(long, value_enum)]
    pub scenario: Scenario,
    /// Four-party scenario with disclosed strategies.
    #[arg(long)]
    pub disclosure: bool,
    /// Mixture pair of the window scenario [default: 1,3].
    #[arg(long)]
    pub mix: Option<String>,
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub method: MethodArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
