//! Command-line front end for the pdemlab laboratory.
//!
//! Subcommands map one-to-one onto the library modules; every invocation
//! writes exactly one table (CSV with a header row, or a JSON object
//! `{"meta": {...}, "rows": [...]}`) to standard output or `--output`.
//! Output is byte-deterministic for a fixed configuration and version.
//!
//! Exit codes: 0 success, 2 argument error (message names the offending
//! flag), 3 numeric failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use pdemlab::classical::{hamiltonianize, integrate_trajectory, DampedSystem, DampingLaw};
use pdemlab::fermigas::{classical_thermo, fermi_t0, finite_t, sommerfeld, GasParams};
use pdemlab::model::{
    Grid, MassProfile, MassProfileConfig, PhysicalConstants, PotentialConfig, PotentialSpec,
};
use pdemlab::morse::{
    eigenfunction_decreasing, eigenfunction_increasing, spectrum_decreasing, spectrum_increasing,
    MorseCaseParams, MorseDirection,
};
use pdemlab::quantum::{box_eigenfunction, box_spectrum, evolve, probability_fields, scatter_step};
use pdemlab::PdemError;

#[derive(Parser)]
#[command(
    name = "pdemlab",
    version,
    about = "Position-dependent-mass laboratory: classical damping equivalence, \
             geometric quantization, Fermi-gas thermodynamics, Morse spectra.\n\
             All quantities are in natural units (hbar = m0 = kB = 1 by default); \
             lengths and energies are dimensionless in those units.",
    propagate_version = true
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write the table to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// JSON config file with tagged records, e.g.
    /// {"mass":{"kind":"exp-dec","eta":1.0},"potential":{"kind":"morse","A":1.0,"alpha":1.0}}.
    /// Command-line flags override file values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Classical PDEM dynamics and the damping equivalence.
    Classical {
        #[command(subcommand)]
        cmd: ClassicalCmd,
    },
    /// Geometric quantization: spectra, densities, scattering, evolution.
    Quantum {
        #[command(subcommand)]
        cmd: QuantumCmd,
    },
    /// Ideal-gas thermodynamics of damped-antidamped particles.
    Thermo {
        #[command(subcommand)]
        cmd: ThermoCmd,
    },
    /// Morse-potential bound states under the resonance condition eta/m0 = alpha.
    Morse {
        #[command(subcommand)]
        cmd: MorseCmd,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MassKind {
    /// M = e^{+2 eta q / m0}.
    ExpInc,
    /// M = e^{-2 eta q / m0}.
    ExpDec,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MorseCase {
    Increasing,
    Decreasing,
}

#[derive(Subcommand)]
enum ClassicalCmd {
    /// Integrate a trajectory of the equivalent constant-mass equation of
    /// motion; columns t,q,qdot,C (C is the conserved first integral).
    Simulate(SimulateArgs),
    /// Map a constant-phi damping law to its PDEM system; columns q,mass,Ueff.
    Hamiltonianize(HamiltonianizeArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SimulateArgs {
    /// Mass decay constant eta (1/length in natural units); overrides --config.
    #[arg(long)]
    eta: Option<f64>,

    /// Mass profile kind used with --eta.
    #[arg(long, value_enum, default_value_t = MassKind::ExpDec)]
    mass: MassKind,

    /// Morse well depth A (energy); together with --alpha overrides --config.
    #[arg(long = "A")]
    a_depth: Option<f64>,

    /// Morse range parameter alpha (1/length).
    #[arg(long)]
    alpha: Option<f64>,

    /// Initial position (length).
    #[arg(long, default_value_t = 0.0)]
    q0: f64,

    /// Initial velocity (length/time).
    #[arg(long, default_value_t = 1.0)]
    qdot0: f64,

    /// Final time (time); samples are uniform on [0, tmax].
    #[arg(long, default_value_t = 10.0)]
    tmax: f64,

    /// Number of samples after t = 0.
    #[arg(long, default_value_t = 200)]
    nsamples: usize,

    /// Integrator tolerance (scaled x100 under PDEMLAB_PRECISION=fast).
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct HamiltonianizeArgs {
    /// Constant damping coefficient phi = eta (mass/length).
    #[arg(long)]
    eta: f64,

    /// Morse well depth A (energy); together with --alpha overrides --config.
    #[arg(long = "A")]
    a_depth: Option<f64>,

    /// Morse range parameter alpha (1/length); also the law parameter.
    #[arg(long)]
    alpha: Option<f64>,

    /// Left edge of the output grid (length).
    #[arg(long, default_value_t = -2.0)]
    qmin: f64,

    /// Right edge of the output grid (length).
    #[arg(long, default_value_t = 2.0)]
    qmax: f64,

    /// Number of grid points.
    #[arg(long, default_value_t = 401)]
    npoints: usize,
}

#[derive(Subcommand)]
enum QuantumCmd {
    /// Box levels E_n for M = e^{-2 eta q/m0}, hard walls at +-L; columns n,E.
    Spectrum(SpectrumArgs),
    /// Measure-weighted density of a box eigenstate; columns q,rho,psi_re,psi_im.
    Density(DensityArgs),
    /// Step scattering R and T; single row E,U0,R,T.
    Scatter(ScatterArgs),
    /// Crank-Nicolson evolution of a box eigenstate; columns step,norm.
    Evolve(EvolveArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SpectrumArgs {
    /// Mass decay constant eta (mass/length).
    #[arg(long)]
    eta: f64,

    /// Box half-length L (length).
    #[arg(long = "L")]
    l: f64,

    /// Largest quantum number to report.
    #[arg(long, default_value_t = 10)]
    nmax: u32,

    /// Spatial dimensions (1 or 3; 3 reports separable triples).
    #[arg(long, default_value_t = 1)]
    dims: u8,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct DensityArgs {
    /// Mass decay constant eta (mass/length).
    #[arg(long)]
    eta: f64,

    /// Box half-length L (length).
    #[arg(long = "L")]
    l: f64,

    /// Quantum number n >= 1.
    #[arg(long, default_value_t = 1)]
    n: u32,

    /// Number of grid points on [-L, L].
    #[arg(long, default_value_t = 1001)]
    npoints: usize,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ScatterArgs {
    /// Incident energy E > 0 (energy).
    #[arg(long = "E")]
    e: f64,

    /// Step height U0 > 0 (energy).
    #[arg(long = "U0")]
    u0: f64,

    /// Step position a (length).
    #[arg(long, default_value_t = 0.0)]
    a: f64,

    /// Mass decay constant left of the step (mass/length).
    #[arg(long, default_value_t = 0.0)]
    eta1: f64,

    /// Mass decay constant right of the step (mass/length).
    #[arg(long, default_value_t = 0.0)]
    eta2: f64,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct EvolveArgs {
    /// Mass decay constant eta (mass/length).
    #[arg(long)]
    eta: f64,

    /// Box half-length L (length).
    #[arg(long = "L")]
    l: f64,

    /// Quantum number of the initial eigenstate.
    #[arg(long, default_value_t = 1)]
    n: u32,

    /// Number of grid points on [-L, L].
    #[arg(long, default_value_t = 1001)]
    npoints: usize,

    /// Time step (time).
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,

    /// Number of Crank-Nicolson steps.
    #[arg(long, default_value_t = 100)]
    nsteps: usize,
}

#[derive(Subcommand)]
enum ThermoCmd {
    /// Classical ideal gas from the partition function (T > 0).
    Classical(ThermoArgs),
    /// Degenerate Fermi gas at T = 0.
    T0(ThermoT0Args),
    /// Exact finite-temperature Fermi gas via polylogarithms (T > 0).
    FiniteT(ThermoArgs),
    /// Low-temperature Sommerfeld expansion (T > 0).
    Sommerfeld(ThermoArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ThermoArgs {
    /// Particle count N.
    #[arg(long = "N")]
    n: u64,

    /// Cube half-length L (length).
    #[arg(long = "L")]
    l: f64,

    /// Per-axis mass decay constant eta (mass/length).
    #[arg(long)]
    eta: f64,

    /// Temperature T > 0 (energy/kB).
    #[arg(long = "T")]
    t: f64,

    /// Orbital degeneracy g (2 for spin-1/2).
    #[arg(long = "g", default_value_t = 2)]
    gdeg: u32,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ThermoT0Args {
    /// Particle count N.
    #[arg(long = "N")]
    n: u64,

    /// Cube half-length L (length).
    #[arg(long = "L")]
    l: f64,

    /// Per-axis mass decay constant eta (mass/length).
    #[arg(long)]
    eta: f64,

    /// Orbital degeneracy g (2 for spin-1/2).
    #[arg(long = "g", default_value_t = 2)]
    gdeg: u32,
}

#[derive(Subcommand)]
enum MorseCmd {
    /// Bound levels; columns n,E,admissible,residual (residual only for the
    /// decreasing case).
    Spectrum(MorseSpectrumArgs),
    /// Sampled bound eigenfunction; columns q,psi,rho.
    Wavefunction(MorseWavefunctionArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct MorseSpectrumArgs {
    /// Mass direction (M = e^{+-2 eta q/m0}) under eta/m0 = alpha.
    #[arg(long = "case", value_enum)]
    case: MorseCase,

    /// Morse well depth A > 0 (energy).
    #[arg(long = "A")]
    a_depth: f64,

    /// Morse range parameter alpha > 0 (1/length).
    #[arg(long)]
    alpha: f64,

    /// Largest quantum number to report.
    #[arg(long, default_value_t = 20)]
    nmax: u32,

    /// Hermite-condition residual tolerance for the decreasing case
    /// (scaled x100 under PDEMLAB_PRECISION=fast).
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct MorseWavefunctionArgs {
    /// Mass direction (M = e^{+-2 eta q/m0}) under eta/m0 = alpha.
    #[arg(long = "case", value_enum)]
    case: MorseCase,

    /// Morse well depth A > 0 (energy).
    #[arg(long = "A")]
    a_depth: f64,

    /// Morse range parameter alpha > 0 (1/length).
    #[arg(long)]
    alpha: f64,

    /// Quantum number n >= 0.
    #[arg(long)]
    n: u32,

    /// Left edge of the output grid (length).
    #[arg(long, default_value_t = -12.0)]
    qmin: f64,

    /// Right edge of the output grid (length).
    #[arg(long, default_value_t = 12.0)]
    qmax: f64,

    /// Number of grid points.
    #[arg(long, default_value_t = 1001)]
    npoints: usize,
}

/// Config-file counterpart of the flag set; flags override these values.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    mass: Option<MassProfileConfig>,
    potential: Option<PotentialConfig>,
    constants: Option<PhysicalConstants>,
}

enum CliError {
    /// Exit 2: bad argument; the message names the offending flag.
    Arg(String),
    /// Exit 3: numeric failure with diagnostic.
    Numeric(String),
}

impl From<PdemError> for CliError {
    fn from(e: PdemError) -> Self {
        match e {
            PdemError::Domain(m) => CliError::Arg(m),
            PdemError::Numeric(m) | PdemError::Grid(m) => CliError::Numeric(m),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn arg_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Arg(msg.into()))
}

// ---------------------------------------------------------------------------
// Table serialization
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq)]
enum Cell {
    UInt(u64),
    Float(f64),
    Bool(bool),
    Str(String),
    Empty,
}

struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
    /// Resolved parameters for the JSON meta block, in insertion order.
    meta: Vec<(&'static str, serde_json::Value)>,
}

impl Cell {
    fn write_csv(&self, out: &mut String) {
        match self {
            Cell::UInt(v) => {
                let _ = write!(out, "{v}");
            }
            // Display for f64 is the shortest string that round-trips
            Cell::Float(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Bool(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Str(v) => out.push_str(v),
            Cell::Empty => {}
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::UInt(v) => serde_json::Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Cell::Bool(v) => serde_json::Value::from(*v),
            Cell::Str(v) => serde_json::Value::from(v.as_str()),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

impl Table {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    for (i, cell) in row.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        cell.write_csv(&mut out);
                    }
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let mut meta = serde_json::Map::new();
                for (k, v) in &self.meta {
                    meta.insert((*k).to_string(), v.clone());
                }
                meta.insert(
                    "version".to_string(),
                    serde_json::Value::from(env!("CARGO_PKG_VERSION")),
                );
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        for (col, cell) in self.columns.iter().zip(row) {
                            obj.insert((*col).to_string(), cell.to_json());
                        }
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let mut root = serde_json::Map::new();
                root.insert("meta".to_string(), serde_json::Value::Object(meta));
                root.insert("rows".to_string(), serde_json::Value::Array(rows));
                let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(root))
                    .expect("JSON serialization cannot fail");
                s.push('\n');
                s
            }
        }
    }
}

fn meta_f(k: &'static str, v: f64) -> (&'static str, serde_json::Value) {
    (
        k,
        serde_json::Number::from_f64(v)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null),
    )
}

fn meta_u(k: &'static str, v: u64) -> (&'static str, serde_json::Value) {
    (k, serde_json::Value::from(v))
}

fn meta_s(k: &'static str, v: &str) -> (&'static str, serde_json::Value) {
    (k, serde_json::Value::from(v))
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

/// PDEMLAB_PRECISION=fast loosens CLI-level tolerances by 1e2; strict (the
/// default) leaves them as given.
fn precision_factor() -> CliResult<f64> {
    match std::env::var("PDEMLAB_PRECISION") {
        Err(_) => Ok(1.0),
        Ok(v) if v == "strict" => Ok(1.0),
        Ok(v) if v == "fast" => Ok(1e2),
        Ok(v) => arg_err(format!(
            "PDEMLAB_PRECISION must be \"fast\" or \"strict\", got \"{v}\""
        )),
    }
}

fn load_config(path: &Option<PathBuf>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Arg(format!("--config: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Arg(format!("--config: invalid config file: {e}")))
}

fn resolve_constants(config: &FileConfig) -> PhysicalConstants {
    config.constants.unwrap_or_default()
}

/// Mass profile from `--eta`/`--mass`, falling back to the config file.
fn resolve_mass(
    eta: Option<f64>,
    kind: MassKind,
    config: &FileConfig,
) -> CliResult<(MassProfile, f64)> {
    if let Some(eta) = eta {
        if !(eta > 0.0) {
            return arg_err(format!("--eta must be positive, got {eta}"));
        }
        let profile = match kind {
            MassKind::ExpInc => MassProfile::exp_increasing(eta)?,
            MassKind::ExpDec => MassProfile::exp_decreasing(eta)?,
        };
        return Ok((profile, eta));
    }
    match &config.mass {
        Some(rec) => {
            let eta = match rec {
                MassProfileConfig::ExpIncreasing { eta }
                | MassProfileConfig::ExpDecreasing { eta } => *eta,
                MassProfileConfig::PiecewiseExp { eta1, .. } => *eta1,
            };
            Ok((rec.build()?, eta))
        }
        None => arg_err("--eta is required when the config file supplies no mass record"),
    }
}

/// Potential from `--A`/`--alpha` (Morse), falling back to the config file
/// and then to zero.
fn resolve_potential(
    a_depth: Option<f64>,
    alpha: Option<f64>,
    config: &FileConfig,
) -> CliResult<PotentialSpec> {
    match (a_depth, alpha) {
        (Some(a), Some(al)) => {
            if !(a > 0.0) {
                return arg_err(format!("--A must be positive, got {a}"));
            }
            if !(al > 0.0) {
                return arg_err(format!("--alpha must be positive, got {al}"));
            }
            Ok(PotentialSpec::morse(a, al)?)
        }
        (Some(_), None) => arg_err("--A requires --alpha (Morse potential needs both)"),
        (None, Some(_)) => arg_err("--alpha requires --A (Morse potential needs both)"),
        (None, None) => match &config.potential {
            Some(rec) => Ok(rec.build()?),
            None => Ok(PotentialSpec::Zero),
        },
    }
}

fn check_positive(name: &str, v: f64) -> CliResult<()> {
    if !(v > 0.0) {
        return arg_err(format!("{name} must be positive, got {v}"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

fn run_simulate(args: &SimulateArgs, config: &FileConfig, prec: f64) -> CliResult<Table> {
    check_positive("--tmax", args.tmax)?;
    if args.nsamples == 0 {
        return arg_err("--nsamples must be at least 1, got 0");
    }
    let tol = args.tol * prec;
    if !(1e-13..=1e-3).contains(&tol) {
        return arg_err(format!(
            "--tol (after precision scaling) must lie in [1e-13, 1e-3], got {tol}"
        ));
    }
    let consts = resolve_constants(config);
    let (profile, eta) = resolve_mass(args.eta, args.mass, config)?;
    let potential = resolve_potential(args.a_depth, args.alpha, config)?;
    let times: Vec<f64> = (0..=args.nsamples)
        .map(|i| args.tmax * i as f64 / args.nsamples as f64)
        .collect();
    let system = DampedSystem::Pdem {
        profile: &profile,
        potential: &potential,
    };
    let traj = integrate_trajectory(&system, &consts, args.q0, args.qdot0, &times, tol)?;
    let rows = traj
        .times
        .iter()
        .zip(&traj.q)
        .zip(&traj.qdot)
        .zip(&traj.first_integral)
        .map(|(((t, q), qd), c)| {
            vec![
                Cell::Float(*t),
                Cell::Float(*q),
                Cell::Float(*qd),
                Cell::Float(*c),
            ]
        })
        .collect();
    Ok(Table {
        columns: &["t", "q", "qdot", "C"],
        rows,
        meta: vec![
            meta_s("command", "classical simulate"),
            meta_f("eta", eta),
            meta_f("q0", args.q0),
            meta_f("qdot0", args.qdot0),
            meta_f("tmax", args.tmax),
            meta_u("nsamples", args.nsamples as u64),
            meta_f("tol", tol),
            ("truncated", serde_json::Value::from(traj.truncated)),
        ],
    })
}

fn run_hamiltonianize(args: &HamiltonianizeArgs, config: &FileConfig) -> CliResult<Table> {
    check_positive("--eta", args.eta)?;
    if !(args.qmin < args.qmax) {
        return arg_err(format!(
            "--qmin must be below --qmax, got {} and {}",
            args.qmin, args.qmax
        ));
    }
    if args.npoints < 2 {
        return arg_err(format!(
            "--npoints must be at least 2, got {}",
            args.npoints
        ));
    }
    let consts = resolve_constants(config);
    let potential = resolve_potential(args.a_depth, args.alpha, config)?;
    let law = DampingLaw::constant_phi(args.eta, potential, args.alpha.unwrap_or(0.0));
    let grid = Grid::new(args.qmin, args.qmax, args.npoints)?;
    let out = hamiltonianize(&law, &consts, &grid)?;
    let mass = out.table.mass_out.as_deref().unwrap_or(&[]);
    let rows = grid
        .points()
        .zip(mass)
        .zip(&out.table.ueff)
        .map(|((q, m), u)| vec![Cell::Float(q), Cell::Float(*m), Cell::Float(*u)])
        .collect();
    Ok(Table {
        columns: &["q", "mass", "Ueff"],
        rows,
        meta: vec![
            meta_s("command", "classical hamiltonianize"),
            meta_f("eta", args.eta),
            meta_f("qmin", args.qmin),
            meta_f("qmax", args.qmax),
            meta_u("npoints", args.npoints as u64),
        ],
    })
}

fn run_spectrum(args: &SpectrumArgs, config: &FileConfig) -> CliResult<Table> {
    check_positive("--eta", args.eta)?;
    check_positive("--L", args.l)?;
    if args.nmax < 1 {
        return arg_err("--nmax must be at least 1, got 0");
    }
    if args.dims != 1 && args.dims != 3 {
        return arg_err(format!("--dims must be 1 or 3, got {}", args.dims));
    }
    let consts = resolve_constants(config);
    let spec = box_spectrum(args.eta, args.l, args.nmax, &consts, args.dims)?;
    let rows = spec
        .entries
        .iter()
        .map(|entry| {
            let n = if entry.n.len() == 1 {
                Cell::UInt(entry.n[0] as u64)
            } else {
                let joined: Vec<String> = entry.n.iter().map(|v| v.to_string()).collect();
                Cell::Str(joined.join("-"))
            };
            vec![n, Cell::Float(entry.e)]
        })
        .collect();
    Ok(Table {
        columns: &["n", "E"],
        rows,
        meta: vec![
            meta_s("command", "quantum spectrum"),
            meta_f("eta", args.eta),
            meta_f("L", args.l),
            meta_u("nmax", args.nmax as u64),
            meta_u("dims", args.dims as u64),
        ],
    })
}

fn run_density(args: &DensityArgs, config: &FileConfig) -> CliResult<Table> {
    check_positive("--eta", args.eta)?;
    check_positive("--L", args.l)?;
    if args.n < 1 {
        return arg_err("--n must be at least 1, got 0");
    }
    if args.npoints < 5 {
        return arg_err(format!(
            "--npoints must be at least 5, got {}",
            args.npoints
        ));
    }
    let consts = resolve_constants(config);
    let grid = Grid::new(-args.l, args.l, args.npoints)?;
    let eigen = box_eigenfunction(args.n, args.eta, args.l, &consts, &grid)?;
    let profile = MassProfile::exp_decreasing(args.eta)?;
    let fields = probability_fields(&eigen.psi, &profile, &consts)?;
    let rows = grid
        .points()
        .enumerate()
        .map(|(i, q)| {
            vec![
                Cell::Float(q),
                Cell::Float(fields.rho_tilde[i]),
                Cell::Float(eigen.psi.values[i].re),
                Cell::Float(eigen.psi.values[i].im),
            ]
        })
        .collect();
    Ok(Table {
        columns: &["q", "rho", "psi_re", "psi_im"],
        rows,
        meta: vec![
            meta_s("command", "quantum density"),
            meta_f("eta", args.eta),
            meta_f("L", args.l),
            meta_u("n", args.n as u64),
            meta_u("npoints", args.npoints as u64),
            meta_f("E", eigen.psi.energy.unwrap_or(f64::NAN)),
            meta_f("Cn", eigen.cn),
            meta_f("Pn", eigen.pn),
        ],
    })
}

fn run_scatter(args: &ScatterArgs, config: &FileConfig) -> CliResult<Table> {
    check_positive("--E", args.e)?;
    check_positive("--U0", args.u0)?;
    if args.eta1 < 0.0 {
        return arg_err(format!("--eta1 must be non-negative, got {}", args.eta1));
    }
    if args.eta2 < 0.0 {
        return arg_err(format!("--eta2 must be non-negative, got {}", args.eta2));
    }
    let consts = resolve_constants(config);
    let res = scatter_step(args.e, args.u0, args.a, args.eta1, args.eta2, &consts)?;
    Ok(Table {
        columns: &["E", "U0", "R", "T"],
        rows: vec![vec![
            Cell::Float(res.e),
            Cell::Float(res.u0),
            Cell::Float(res.r),
            Cell::Float(res.t),
        ]],
        meta: vec![
            meta_s("command", "quantum scatter"),
            meta_f("E", args.e),
            meta_f("U0", args.u0),
            meta_f("a", args.a),
            meta_f("eta1", args.eta1),
            meta_f("eta2", args.eta2),
        ],
    })
}

fn run_evolve(args: &EvolveArgs, config: &FileConfig) -> CliResult<Table> {
    check_positive("--eta", args.eta)?;
    check_positive("--L", args.l)?;
    check_positive("--dt", args.dt)?;
    if args.n < 1 {
        return arg_err("--n must be at least 1, got 0");
    }
    if args.nsteps == 0 {
        return arg_err("--nsteps must be at least 1, got 0");
    }
    if args.npoints < 5 {
        return arg_err(format!(
            "--npoints must be at least 5, got {}",
            args.npoints
        ));
    }
    let consts = resolve_constants(config);
    let grid = Grid::new(-args.l, args.l, args.npoints)?;
    let eigen = box_eigenfunction(args.n, args.eta, args.l, &consts, &grid)?;
    let profile = MassProfile::exp_decreasing(args.eta)?;
    let result = evolve(
        &eigen.psi,
        &profile,
        &PotentialSpec::Zero,
        args.dt,
        args.nsteps,
        &consts,
    )?;
    let rows = result
        .norm_history
        .iter()
        .enumerate()
        .map(|(step, n2)| vec![Cell::UInt(step as u64), Cell::Float(n2.sqrt())])
        .collect();
    Ok(Table {
        columns: &["step", "norm"],
        rows,
        meta: vec![
            meta_s("command", "quantum evolve"),
            meta_f("eta", args.eta),
            meta_f("L", args.l),
            meta_u("n", args.n as u64),
            meta_u("npoints", args.npoints as u64),
            meta_f("dt", args.dt),
            meta_u("nsteps", args.nsteps as u64),
        ],
    })
}

fn thermo_table(
    command: &'static str,
    params: &GasParams,
    report: pdemlab::fermigas::ThermoReport,
) -> Table {
    let eps_f = match report.eps_f {
        Some(v) => Cell::Float(v),
        None => Cell::Empty,
    };
    Table {
        columns: &[
            "N", "L", "eta", "T", "Veta", "P", "mu", "U", "Cv", "epsF", "regime",
        ],
        rows: vec![vec![
            Cell::UInt(params.n),
            Cell::Float(params.l[0]),
            Cell::Float(params.eta),
            Cell::Float(params.t),
            Cell::Float(report.veta),
            Cell::Float(report.p),
            Cell::Float(report.mu),
            Cell::Float(report.u),
            Cell::Float(report.cv),
            eps_f,
            Cell::Str(report.regime.as_str().to_string()),
        ]],
        meta: vec![
            meta_s("command", command),
            meta_u("N", params.n),
            meta_f("L", params.l[0]),
            meta_f("eta", params.eta),
            meta_f("T", params.t),
            meta_u("g", params.gdeg as u64),
        ],
    }
}

fn gas_params(
    n: u64,
    l: f64,
    eta: f64,
    gdeg: u32,
    t: f64,
    config: &FileConfig,
) -> CliResult<GasParams> {
    if n == 0 {
        return arg_err("--N must be at least 1, got 0");
    }
    check_positive("--L", l)?;
    if eta < 0.0 {
        return arg_err(format!("--eta must be non-negative, got {eta}"));
    }
    if gdeg == 0 {
        return arg_err("--g must be at least 1, got 0");
    }
    Ok(GasParams::cube(
        n,
        l,
        eta,
        gdeg,
        t,
        resolve_constants(config),
    )?)
}

fn run_thermo(cmd: &ThermoCmd, config: &FileConfig) -> CliResult<Table> {
    match cmd {
        ThermoCmd::Classical(a) => {
            check_positive("--T", a.t)?;
            let p = gas_params(a.n, a.l, a.eta, a.gdeg, a.t, config)?;
            Ok(thermo_table("thermo classical", &p, classical_thermo(&p)?))
        }
        ThermoCmd::T0(a) => {
            let p = gas_params(a.n, a.l, a.eta, a.gdeg, 0.0, config)?;
            Ok(thermo_table("thermo t0", &p, fermi_t0(&p)?))
        }
        ThermoCmd::FiniteT(a) => {
            check_positive("--T", a.t)?;
            let p = gas_params(a.n, a.l, a.eta, a.gdeg, a.t, config)?;
            Ok(thermo_table("thermo finite-t", &p, finite_t(&p)?))
        }
        ThermoCmd::Sommerfeld(a) => {
            check_positive("--T", a.t)?;
            let p = gas_params(a.n, a.l, a.eta, a.gdeg, a.t, config)?;
            Ok(thermo_table("thermo sommerfeld", &p, sommerfeld(&p)?))
        }
    }
}

fn morse_params(
    case: MorseCase,
    a_depth: f64,
    alpha: f64,
    config: &FileConfig,
) -> CliResult<MorseCaseParams> {
    check_positive("--A", a_depth)?;
    check_positive("--alpha", alpha)?;
    let direction = match case {
        MorseCase::Increasing => MorseDirection::Increasing,
        MorseCase::Decreasing => MorseDirection::Decreasing,
    };
    Ok(MorseCaseParams::new(
        a_depth,
        alpha,
        direction,
        resolve_constants(config),
    )?)
}

fn run_morse_spectrum(
    args: &MorseSpectrumArgs,
    config: &FileConfig,
    prec: f64,
) -> CliResult<Table> {
    let tol = args.tol * prec;
    if !(tol > 0.0) {
        return arg_err(format!("--tol must be positive, got {}", args.tol));
    }
    let p = morse_params(args.case, args.a_depth, args.alpha, config)?;
    let spectrum = match args.case {
        MorseCase::Increasing => spectrum_increasing(&p, args.nmax)?,
        MorseCase::Decreasing => spectrum_decreasing(&p, args.nmax, tol)?,
    };
    let rows = spectrum
        .entries
        .iter()
        .map(|entry| {
            let residual = match entry.hermite_residual {
                Some(r) => Cell::Float(r),
                None => Cell::Empty,
            };
            vec![
                Cell::UInt(entry.n as u64),
                Cell::Float(entry.e),
                Cell::Bool(entry.admissible),
                residual,
            ]
        })
        .collect();
    let case_name = match args.case {
        MorseCase::Increasing => "increasing",
        MorseCase::Decreasing => "decreasing",
    };
    Ok(Table {
        columns: &["n", "E", "admissible", "residual"],
        rows,
        meta: vec![
            meta_s("command", "morse spectrum"),
            meta_s("case", case_name),
            meta_f("A", args.a_depth),
            meta_f("alpha", args.alpha),
            meta_u("nmax", args.nmax as u64),
            meta_f("tol", tol),
        ],
    })
}

fn run_morse_wavefunction(args: &MorseWavefunctionArgs, config: &FileConfig) -> CliResult<Table> {
    if !(args.qmin < args.qmax) {
        return arg_err(format!(
            "--qmin must be below --qmax, got {} and {}",
            args.qmin, args.qmax
        ));
    }
    if args.npoints < 5 {
        return arg_err(format!(
            "--npoints must be at least 5, got {}",
            args.npoints
        ));
    }
    let p = morse_params(args.case, args.a_depth, args.alpha, config)?;
    let grid = Grid::new(args.qmin, args.qmax, args.npoints)?;
    let psi = match args.case {
        MorseCase::Increasing => eigenfunction_increasing(&p, args.n, &grid)?,
        MorseCase::Decreasing => eigenfunction_decreasing(&p, args.n, &grid)?,
    };
    let profile = p.mass_profile()?;
    let consts = resolve_constants(config);
    let fields = probability_fields(&psi, &profile, &consts)?;
    let rows = grid
        .points()
        .enumerate()
        .map(|(i, q)| {
            vec![
                Cell::Float(q),
                Cell::Float(psi.values[i].re),
                Cell::Float(fields.rho_tilde[i]),
            ]
        })
        .collect();
    let case_name = match args.case {
        MorseCase::Increasing => "increasing",
        MorseCase::Decreasing => "decreasing",
    };
    Ok(Table {
        columns: &["q", "psi", "rho"],
        rows,
        meta: vec![
            meta_s("command", "morse wavefunction"),
            meta_s("case", case_name),
            meta_f("A", args.a_depth),
            meta_f("alpha", args.alpha),
            meta_u("n", args.n as u64),
            meta_f("qmin", args.qmin),
            meta_f("qmax", args.qmax),
            meta_u("npoints", args.npoints as u64),
            meta_f("E", psi.energy.unwrap_or(f64::NAN)),
        ],
    })
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn run(cli: &Cli) -> CliResult<Table> {
    let prec = precision_factor()?;
    let config = load_config(&cli.config)?;
    match &cli.command {
        Command::Classical { cmd } => match cmd {
            ClassicalCmd::Simulate(a) => run_simulate(a, &config, prec),
            ClassicalCmd::Hamiltonianize(a) => run_hamiltonianize(a, &config),
        },
        Command::Quantum { cmd } => match cmd {
            QuantumCmd::Spectrum(a) => run_spectrum(a, &config),
            QuantumCmd::Density(a) => run_density(a, &config),
            QuantumCmd::Scatter(a) => run_scatter(a, &config),
            QuantumCmd::Evolve(a) => run_evolve(a, &config),
        },
        Command::Thermo { cmd } => run_thermo(cmd, &config),
        Command::Morse { cmd } => match cmd {
            MorseCmd::Spectrum(a) => run_morse_spectrum(a, &config, prec),
            MorseCmd::Wavefunction(a) => run_morse_wavefunction(a, &config),
        },
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on parse errors, matching the argument-error
    // contract; its messages name the offending flag.
    let cli = Cli::parse();
    match run(&cli) {
        Ok(table) => {
            let rendered = table.render(cli.format);
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered) {
                        eprintln!("error: --output: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{rendered}"),
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Arg(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
