//! Command-line front end: `qpot expand | profile | trajectory | verify | figures`.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::algebra::{expand, to_latex, PolynomialOperator, Representation};
use crate::dynamics::{
    integrate, symplectic_break, write_trajectory_csv, DynamicsError, EffectiveHamiltonian, Phase,
    DEFAULT_DT,
};
use crate::energetics::{decompose_config, decompose_momentum_qho, write_profile_csv};
use crate::figures::{write_figures, LATTICE_DEGREE};
use crate::verify::{self, Suite, DEFAULT_SEED};
use crate::wavefunctions::{
    airy_state, linear_momentum_state, qho_state, Axis, Grid, StateField, Units,
};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const INCOMPATIBLE: i32 = 3;
    pub const NODE_HALT: i32 = 4;
    pub const IO: i32 = 5;
}

/// Parsed invocation.
#[derive(Parser, Debug, Clone)]
#[command(
    name = "qpot",
    version,
    about = "Quantum potentials, energy decompositions and causal trajectories"
)]
pub struct RunConfig {
    /// Physical constants, e.g. `hbar=1,m=1,omega=1`.
    #[arg(long, global = true, default_value = "hbar=1,m=1,omega=1")]
    pub units: Units,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Expand a polynomial operator into quantum and classical parts.
    #[command(
        after_help = "Examples:\n  qpot expand --op \"x^4\" --rep momentum\n  qpot expand --op \"p^2/2\" --rep configuration --format latex\n  qpot expand --op \"x\" --rep momentum"
    )]
    Expand(ExpandArgs),
    /// Tabulate the quantum potential and its dispersion/localisation split.
    #[command(
        after_help = "Examples:\n  qpot profile --state airy --E 0\n  qpot profile --state qho:0\n  qpot profile --state qho:2 --rep momentum --grid=-6,6,1201 --out qho2.csv"
    )]
    Profile(ProfileArgs),
    /// Integrate a causal trajectory of the effective Hamiltonian.
    #[command(
        after_help = "Examples:\n  qpot trajectory --state linear-momentum --p0 1 --t-end 4\n  qpot trajectory --state qho:0 --rep configuration --x0 0.5\n  qpot trajectory --state airy --rep configuration --x0 -2.338 --symplectic report.json"
    )]
    Trajectory(TrajectoryArgs),
    /// Run invariant suites and print a JSON report.
    #[command(
        after_help = "Examples:\n  qpot verify --suite vq4\n  qpot verify --suite oracle --seed 42\n  qpot verify --suite stationarity"
    )]
    Verify(VerifyArgs),
    /// Write the figure tables fig1.csv .. fig6.csv and fig_a.csv.
    #[command(
        after_help = "Examples:\n  qpot figures --out-dir figures\n  qpot figures --out-dir out --lattice-degree 6"
    )]
    Figures(FiguresArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpandFormat {
    Json,
    Latex,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct ExpandArgs {
    /// Polynomial in x or p, e.g. `x^4 - 3/2*x`.
    #[arg(long)]
    pub op: String,
    #[arg(long, value_parser = Representation::from_str)]
    pub rep: Representation,
    #[arg(long, value_enum, default_value = "both")]
    pub format: ExpandFormat,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `airy`, `linear-momentum` or `qho:<n>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateSelector {
    Airy,
    LinearMomentum,
    Qho(usize),
}

impl FromStr for StateSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "airy" => Ok(StateSelector::Airy),
            "linear-momentum" | "linear" => Ok(StateSelector::LinearMomentum),
            _ => match s.strip_prefix("qho:") {
                Some(n) => n
                    .parse()
                    .map(StateSelector::Qho)
                    .map_err(|_| format!("qho index must be a non-negative integer, got `{n}`")),
                None => Err(format!(
                    "unknown state `{s}` (airy | linear-momentum | qho:<n>)"
                )),
            },
        }
    }
}

impl StateSelector {
    fn default_axis(self) -> Axis {
        match self {
            StateSelector::LinearMomentum => Axis::P,
            _ => Axis::X,
        }
    }

    /// Builds the state on `axis`; `None` if the state has no form there.
    pub fn build(self, axis: Axis, energy: f64, units: Units) -> Option<Arc<dyn StateField>> {
        match (self, axis) {
            (StateSelector::Airy, Axis::X) => Some(Arc::new(airy_state(energy, units))),
            (StateSelector::LinearMomentum, Axis::P) => {
                Some(Arc::new(linear_momentum_state(energy, units)))
            }
            (StateSelector::Qho(n), axis) => Some(Arc::new(qho_state(n, axis, units))),
            _ => None,
        }
    }

    /// The same physical system on the other axis.
    fn twin(self) -> StateSelector {
        match self {
            StateSelector::Airy => StateSelector::LinearMomentum,
            StateSelector::LinearMomentum => StateSelector::Airy,
            q => q,
        }
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [min, max, count] = parts[..] else {
        return Err(format!("grid must be `min,max,count`, got `{s}`"));
    };
    let min: f64 = min
        .parse()
        .map_err(|_| format!("invalid grid minimum `{min}`"))?;
    let max: f64 = max
        .parse()
        .map_err(|_| format!("invalid grid maximum `{max}`"))?;
    let count: usize = count
        .parse()
        .map_err(|_| format!("invalid grid count `{count}`"))?;
    Grid::new(min, max, count).map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct StateArgs {
    /// `airy`, `linear-momentum` or `qho:<n>`
    #[arg(long)]
    pub state: StateSelector,
    /// Representation; defaults to the state's natural axis.
    #[arg(long, value_parser = Representation::from_str)]
    pub rep: Option<Representation>,
    /// Energy of the linear-potential states (ignored for the oscillator).
    #[arg(long = "E", default_value_t = 0.0, allow_negative_numbers = true)]
    pub energy: f64,
}

impl StateArgs {
    fn resolve(&self, units: Units) -> Result<Arc<dyn StateField>, Failure> {
        let axis = self
            .rep
            .map(Axis::from)
            .unwrap_or_else(|| self.state.default_axis());
        self.state.build(axis, self.energy, units).ok_or_else(|| {
            Failure::new(
                exit::INCOMPATIBLE,
                format!(
                    "state `{}` has no {} form",
                    self.state_name(),
                    axis.representation()
                ),
            )
        })
    }

    fn state_name(&self) -> String {
        match self.state {
            StateSelector::Airy => "airy".into(),
            StateSelector::LinearMomentum => "linear-momentum".into(),
            StateSelector::Qho(n) => format!("qho:{n}"),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// `min,max,count`; defaults to the state's own grid.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Start position; required in the configuration representation, checked against x = -S'(p) in momentum
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    /// Start momentum; required in the momentum representation, checked against p = S'(x) in configuration
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
    /// Final time
    #[arg(long, default_value_t = 10.0)]
    pub t_end: f64,
    /// Fixed RK4 step
    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also integrate the other representation from the same point and
    /// write the divergence report (JSON) here.
    #[arg(long)]
    pub symplectic: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = Suite::from_str)]
    pub suite: Suite,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output file; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct FiguresArgs {
    #[arg(long, default_value = "figures")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = LATTICE_DEGREE)]
    pub lattice_degree: usize,
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn io(path: Option<&Path>, e: io::Error) -> Self {
        match path {
            Some(p) => Failure::new(exit::IO, format!("{}: {e}", p.display())),
            None => Failure::new(exit::IO, e.to_string()),
        }
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, body: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Failure::io(Some(p), e)),
        None => match out.write_all(body).and_then(|()| out.flush()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::io(None, e)),
            _ => Ok(()),
        },
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("QPOT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            // a second call in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    exit::OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    exit::PARSE
                }
            };
        }
    };
    configure_threads();
    match execute(&config, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(
    config: &RunConfig,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, Failure> {
    let units = config.units;
    match &config.command {
        Command::Expand(a) => cmd_expand(a, stdout, stderr),
        Command::Profile(a) => cmd_profile(a, units, stdout),
        Command::Trajectory(a) => cmd_trajectory(a, units, stdout, stderr),
        Command::Verify(a) => cmd_verify(a, units, stdout, stderr),
        Command::Figures(a) => {
            let written = write_figures(&a.out_dir, units, a.lattice_degree)
                .map_err(|e| Failure::io(Some(&a.out_dir), e))?;
            for p in written {
                writeln!(stdout, "{}", p.display()).map_err(|e| Failure::io(None, e))?;
            }
            Ok(exit::OK)
        }
    }
}

fn cmd_expand(
    a: &ExpandArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, Failure> {
    let op =
        PolynomialOperator::parse(&a.op).map_err(|e| Failure::new(exit::PARSE, e.to_string()))?;
    let exp = expand(&op, a.rep).map_err(|e| Failure::new(exit::INCOMPATIBLE, e.to_string()))?;
    if !exp.has_quantum_potential() {
        let _ = writeln!(stderr, "no quantum potential");
    }
    let body = match a.format {
        ExpandFormat::Json => format!("{}\n", exp.to_json()),
        ExpandFormat::Latex => format!("{}\n", to_latex(&exp)),
        ExpandFormat::Both => format!("{}\n\n{}\n", exp.to_json(), to_latex(&exp)),
    };
    emit(stdout, a.out.as_deref(), body.as_bytes())?;
    Ok(exit::OK)
}

fn cmd_profile(a: &ProfileArgs, units: Units, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let state = a.state.resolve(units)?;
    let grid = a.grid.unwrap_or_else(|| state.default_grid());
    let profile = match state.axis() {
        Axis::X => decompose_config(state.as_ref(), &grid),
        Axis::P => decompose_momentum_qho(state.as_ref(), &grid),
    }
    .map_err(|e| Failure::new(exit::INCOMPATIBLE, e.to_string()))?;
    let mut body = Vec::new();
    match a.format {
        TableFormat::Csv => {
            write_profile_csv(&mut body, &profile).map_err(|e| Failure::io(None, e))?
        }
        TableFormat::Json => {
            body = serde_json::to_vec_pretty(&profile).expect("plain data serializes");
            body.push(b'\n');
        }
    }
    emit(stdout, a.out.as_deref(), &body)?;
    Ok(exit::OK)
}

fn start_point(h: &EffectiveHamiltonian, a: &TrajectoryArgs) -> Result<Phase, Failure> {
    let (own, other, own_name) = match h.representation() {
        Representation::Configuration => (a.x0, a.p0, "--x0"),
        Representation::Momentum => (a.p0, a.x0, "--p0"),
    };
    let v = own.ok_or_else(|| {
        Failure::new(
            exit::PARSE,
            format!(
                "{own_name} is required in the {} representation",
                h.representation()
            ),
        )
    })?;
    let start = h.causal_start_from_axis(v);
    if let Some(o) = other {
        let given = match h.representation() {
            Representation::Configuration => Phase { x: v, p: o },
            Representation::Momentum => Phase { x: o, p: v },
        };
        let violation = h.causal_violation(given);
        if violation > 1e-10 {
            return Err(Failure::new(
                exit::INCOMPATIBLE,
                format!("initial point violates the causal constraint by {violation:e}; omit it to have it computed"),
            ));
        }
    }
    Ok(start)
}

fn cmd_trajectory(
    a: &TrajectoryArgs,
    units: Units,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, Failure> {
    let state = a.state.resolve(units)?;
    let h = EffectiveHamiltonian::for_state(state.clone())
        .map_err(|e| Failure::new(exit::INCOMPATIBLE, e.to_string()))?;
    let start = start_point(&h, a)?;
    let result = integrate(&h, start, a.t_end, a.dt);
    let (record, halt) = match result {
        Ok(r) => (r, None),
        Err(e @ (DynamicsError::NodePoint { .. } | DynamicsError::StepTooLarge { .. })) => (
            e.partial().cloned().expect("halts carry a record"),
            Some(e.to_string()),
        ),
        Err(e) => return Err(Failure::new(exit::INCOMPATIBLE, e.to_string())),
    };
    let symplectic = match (&a.symplectic, &halt) {
        (Some(path), None) => {
            let twin_axis = match state.axis() {
                Axis::X => Axis::P,
                Axis::P => Axis::X,
            };
            let twin_state = a
                .state
                .state
                .twin()
                .build(twin_axis, a.state.energy, units)
                .ok_or_else(|| {
                    Failure::new(
                        exit::INCOMPATIBLE,
                        "state has no counterpart in the other representation",
                    )
                })?;
            let twin = EffectiveHamiltonian::for_state(twin_state)
                .map_err(|e| Failure::new(exit::INCOMPATIBLE, e.to_string()))?;
            let other = integrate(&twin, start, a.t_end, a.dt).map_err(|e| match e {
                DynamicsError::CausalViolation { violation } => Failure::new(
                    exit::INCOMPATIBLE,
                    format!("start point violates the other representation's causal constraint by {violation:e}"),
                ),
                DynamicsError::NodePoint { .. } | DynamicsError::StepTooLarge { .. } => {
                    Failure::new(exit::NODE_HALT, e.to_string())
                }
                e => Failure::new(exit::INCOMPATIBLE, e.to_string()),
            })?;
            let report = match record.representation {
                Representation::Configuration => symplectic_break(&record, &other),
                Representation::Momentum => symplectic_break(&other, &record),
            };
            Some((path, report))
        }
        _ => None,
    };
    let mut body = Vec::new();
    match a.format {
        TableFormat::Csv => {
            write_trajectory_csv(&mut body, &record).map_err(|e| Failure::io(None, e))?;
            if let Some(msg) = &halt {
                body.extend_from_slice(format!("# warning: {msg}\n").as_bytes());
            }
        }
        TableFormat::Json => {
            body = serde_json::to_vec_pretty(&record).expect("plain data serializes");
            body.push(b'\n');
        }
    }
    emit(stdout, a.out.as_deref(), &body)?;
    if let Some(msg) = halt {
        let _ = writeln!(stderr, "warning: {msg}");
        return Ok(exit::NODE_HALT);
    }
    if let Some((path, report)) = symplectic {
        fs::write(path, report.to_json() + "\n").map_err(|e| Failure::io(Some(path), e))?;
    }
    Ok(exit::OK)
}

fn cmd_verify(
    a: &VerifyArgs,
    units: Units,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, Failure> {
    let report = verify::run(a.suite, a.seed, units);
    emit(
        stdout,
        a.out.as_deref(),
        (report.to_json() + "\n").as_bytes(),
    )?;
    match &report.first_failure {
        None => Ok(exit::OK),
        Some(name) => {
            let _ = writeln!(stderr, "verification failed: {name}");
            Ok(exit::VERIFY_FAILED)
        }
    }
}

/// Example invocations listed in each subcommand's help, split into words.
pub fn help_examples() -> Vec<Vec<String>> {
    let cmd = RunConfig::command();
    cmd.get_subcommands()
        .filter_map(|s| s.get_after_help().map(|h| h.to_string()))
        .flat_map(|h| {
            h.lines()
                .map(str::trim)
                .filter(|l| l.starts_with("qpot "))
                .map(split_words)
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Whitespace splitting with double-quoted words.
fn split_words(line: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut current = String::new();
    let mut quoted = false;
    let mut started = false;
    for c in line.chars() {
        match c {
            '"' => {
                quoted = !quoted;
                started = true;
            }
            c if c.is_whitespace() && !quoted => {
                if started {
                    words.push(std::mem::take(&mut current));
                    started = false;
                }
            }
            c => {
                current.push(c);
                started = true;
            }
        }
    }
    if started {
        words.push(current);
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("qpot").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn help_examples_parse() {
        let examples = help_examples();
        assert!(examples.len() >= 12);
        for words in examples {
            RunConfig::try_parse_from(&words).unwrap_or_else(|e| panic!("{words:?}: {e}"));
        }
    }

    #[test]
    fn split_respects_quotes() {
        assert_eq!(
            split_words("qpot expand --op \"x^4 - 1\""),
            ["qpot", "expand", "--op", "x^4 - 1"]
        );
    }

    #[test]
    fn selector_parsing() {
        assert_eq!("qho:2".parse::<StateSelector>(), Ok(StateSelector::Qho(2)));
        assert!("qho:-1".parse::<StateSelector>().is_err());
        assert!("box".parse::<StateSelector>().is_err());
    }

    #[test]
    fn expand_reports_missing_quantum_part() {
        let (code, out, err) = call(&[
            "expand", "--op", "x", "--rep", "momentum", "--format", "json",
        ]);
        assert_eq!(code, exit::OK);
        assert!(err.contains("no quantum potential"));
        assert!(out.contains("\"quantum\": []"));
    }

    #[test]
    fn parse_error_names_token() {
        let (code, _, err) = call(&["expand", "--op", "x^4 + y", "--rep", "momentum"]);
        assert_eq!(code, exit::PARSE);
        assert!(err.contains("`y`"), "{err}");
    }

    #[test]
    fn incompatible_state_axis() {
        let (code, _, _) = call(&["profile", "--state", "airy", "--rep", "momentum"]);
        assert_eq!(code, exit::INCOMPATIBLE);
        let (code, _, _) = call(&[
            "profile",
            "--state",
            "linear-momentum",
            "--rep",
            "configuration",
        ]);
        assert_eq!(code, exit::INCOMPATIBLE);
    }

    #[test]
    fn grid_flag_accepts_negative_minimum() {
        let (code, out, _) = call(&["profile", "--state", "qho:0", "--grid=-2,2,9"]);
        assert_eq!(code, exit::OK);
        assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 10);
    }

    #[test]
    fn units_are_honoured() {
        let (code, out, _) = call(&[
            "profile",
            "--state",
            "qho:0",
            "--units",
            "hbar=2,m=1,omega=1",
            "--grid=-1,1,9",
        ]);
        assert_eq!(code, exit::OK);
        assert!(out.contains("# units: hbar=2,m=1,omega=1"));
        assert!(out.contains("# E: 1.0000000000000000e0"));
    }
}
