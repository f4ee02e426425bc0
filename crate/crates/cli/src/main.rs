//! `cvbell`: figure tables, single-point evaluations and the oracle
//! verification suite.

mod figures;
mod output;
mod point;
mod verify;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{Format, Table};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Verify(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Verify(n) => write!(f, "verification failed: {n} check(s)"),
        }
    }
}

impl From<cvbell::Error> for CliError {
    fn from(e: cvbell::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// `lo:hi:steps`, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Grid {
    pub const fn new(lo: f64, hi: f64, steps: usize) -> Self {
        Self { lo, hi, steps }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        (0..self.steps)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (self.steps - 1) as f64)
            .collect()
    }

    pub fn describe(&self) -> String {
        format!("{}:{}:{}", output::fmt_num(self.lo), output::fmt_num(self.hi), self.steps)
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected lo:hi:steps".into());
    }
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    let (lo, hi) = (num(parts[0])?, num(parts[1])?);
    let steps: usize = parts[2].trim().parse().map_err(|e| format!("{:?}: {e}", parts[2]))?;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err("need finite lo <= hi".into());
    }
    if steps == 0 || (steps == 1 && lo != hi) {
        return Err("steps must be at least 2 unless lo = hi".into());
    }
    Ok(Grid { lo, hi, steps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Vlb,
    T,
    Twb,
    Conditional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TestKind {
    Dp2,
    Dp3,
    Ps2,
    Ps3,
    Homodyne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    /// dp3 on t: equal displacements, state phases π, π
    Sym,
    /// dp3 on t: optimized displacements, state phases 0, π
    Opt,
    /// dp2 on twb: four-valued displacements
    Improved,
    /// dp2 on twb: unprimed displacements at the origin
    Bw,
    /// ps2 on conditional: f of the clicked state
    F1,
    /// ps2 on conditional: f of the state with mode 3 traced out
    Traced,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RepKind {
    S,
    Pi,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    #[arg(long, global = true, value_enum)]
    pub state: Option<StateKind>,
    #[arg(long, global = true, value_enum)]
    pub test: Option<TestKind>,
    /// Squeezing parameter
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Total mean photon number
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub n: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub n2: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub n3: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi2: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi3: Option<f64>,
    /// Detector efficiency
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Displacement magnitude
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub j: Option<f64>,
    /// Maximize over the displacement magnitude
    #[arg(long, global = true)]
    pub optimize: bool,
    /// Sweep grid lo:hi:steps
    #[arg(long, global = true, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Fock cutoff per mode
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
    /// Series and optimizer tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, value_enum)]
    pub family: Option<FamilyKind>,
    /// Pseudospin representation for ps3
    #[arg(long, global = true, value_enum)]
    pub rep: Option<RepKind>,
}

pub const DEFAULT_CUTOFF: usize = 30;
pub const DEFAULT_TOL: f64 = 1e-8;

impl Opts {
    pub fn tol(&self) -> CliResult<f64> {
        let t = self.tol.unwrap_or(DEFAULT_TOL);
        if !(t > 0.0 && t < 1.0) {
            return usage("--tol must lie in (0, 1)");
        }
        Ok(t)
    }

    pub fn cutoff(&self) -> CliResult<usize> {
        let c = self.cutoff.unwrap_or(DEFAULT_CUTOFF);
        if c < 2 {
            return usage("--cutoff must be at least 2");
        }
        Ok(c)
    }

    /// Names of the physical and selector flags that were given.
    pub fn physical_flags(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let mut add = |set: bool, name| {
            if set {
                v.push(name)
            }
        };
        add(self.state.is_some(), "--state");
        add(self.test.is_some(), "--test");
        add(self.r.is_some(), "--r");
        add(self.n.is_some(), "--n");
        add(self.n2.is_some(), "--n2");
        add(self.n3.is_some(), "--n3");
        add(self.phi2.is_some(), "--phi2");
        add(self.phi3.is_some(), "--phi3");
        add(self.eta.is_some(), "--eta");
        add(self.j.is_some(), "--j");
        add(self.optimize, "--optimize");
        add(self.family.is_some(), "--family");
        add(self.rep.is_some(), "--rep");
        v
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regenerate a figure table: B3DPVLBGen, B3DPT, B3DPN, B3PS, B2DPTWBA, B2PS or E2H
    Figure { id: String },
    /// Evaluate one configuration, or sweep it with --grid
    Point,
    /// Run the oracle-equivalence and invariant suite
    Verify,
}

#[derive(Parser, Debug)]
#[command(name = "cvbell", version, about = "Bell-inequality violations of continuous-variable states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .and_then(|_| so.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn provenance(table: &mut Table, command: String, opts: &Opts) -> CliResult<()> {
    let mut head = vec![format!("cvbell {}", env!("CARGO_PKG_VERSION")), command];
    head.push(format!("tol={} cutoff={}", output::fmt_num(opts.tol()?), opts.cutoff()?));
    head.append(&mut table.provenance);
    table.provenance = head;
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let opts = &cli.opts;
    match cli.command {
        Command::Figure { id } => {
            let id: figures::FigureId = id.parse()?;
            if let Some(flag) = opts.physical_flags().first() {
                return usage(format!("figure tables pin their own parameters; {flag} is not accepted"));
            }
            let mut table = figures::run(id, opts.grid, opts.tol()?)?;
            provenance(&mut table, format!("figure {}", id.name()), opts)?;
            emit(&table.render(opts.format.unwrap_or(Format::Csv)), opts.out.as_ref())
        }
        Command::Point => {
            let (mut table, desc) = point::run(opts)?;
            provenance(&mut table, format!("point {desc}"), opts)?;
            emit(&table.render(opts.format.unwrap_or(Format::Json)), opts.out.as_ref())
        }
        Command::Verify => {
            let allowed = opts.physical_flags().is_empty() && opts.grid.is_none() && opts.tol.is_none() && opts.format.is_none();
            if !allowed {
                return usage("verify pins its own parameters; only --cutoff and --out are accepted");
            }
            let report = verify::run(opts.cutoff()?);
            emit(&report.render(), opts.out.as_ref())?;
            match report.failures() {
                0 => Ok(()),
                n => Err(CliError::Verify(n)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cvbell: {e}");
            ExitCode::from(e.code())
        }
    }
}
