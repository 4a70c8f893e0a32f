//! `qwitness` command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 witness undefined or vacuum
//! state, 4 internal numerical failure. Errors print a single stderr line
//! `error[<tag>]: <message>`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qwitness::format::to_json;
use qwitness::jsmap::{lift_operator, two_mode_witness, FockLabel, JsError, SectorOperatorJson, TwoModeWitnessJson};
use qwitness::qstate::{
    density_from_json, density_to_json, diagonalize, matrix_from_json, purity, random_density, random_pure,
    StateError, MAX_DIM,
};
use qwitness::spin::{Spin, SpinError};
use qwitness::su2::{default_orders, quadrature_grid, Su2Error};
use qwitness::tomography::{
    build_reconstruction_map, dual_symbol, pair_average, reconstruct, tomogram_sample, Tomogram, TomographyError,
};
use qwitness::witness::{
    closed_form_expectation, max_witness_csv, max_witness_scan, qutrit_csv, qutrit_scan, violation_bound,
    witness_expectation, witness_expectation_tomographic, witness_report, WitnessError, WitnessJson,
};
use qwitness::DensityMatrix;

/// Largest dimension for which `witness eval` also reports the
/// grid-pairing route (the reconstruction kernel grows like N^5).
const PAIRING_MAX_DIM: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "qwitness", version, about = "Spin tomograms and quantumness witnesses for qudits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Density-matrix validation and random states
    #[command(subcommand)]
    State(StateCmd),
    /// Tomogram sampling and reconstruction
    #[command(subcommand)]
    Tomogram(TomogramCmd),
    /// Witness construction and evaluation
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Simplex and dimension scans
    #[command(subcommand)]
    Scan(ScanCmd),
    /// Jordan-Schwinger lifting to two-mode states
    #[command(subcommand)]
    Js(JsCmd),
}

#[derive(Args, Debug)]
struct Io {
    /// Input file
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    out: Out,
}

#[derive(Args, Debug)]
struct Out {
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GridOrders {
    #[arg(long)]
    nbeta: Option<usize>,
    #[arg(long)]
    nalpha: Option<usize>,
    #[arg(long)]
    ngamma: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum StateCmd {
    /// Certify a density matrix and report its spectrum
    Validate(Io),
    /// Seeded Hilbert-Schmidt (or pure) random state
    Random {
        /// Spin, e.g. 1/2, 1, 3/2
        #[arg(long)]
        j: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        pure: bool,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand, Debug)]
enum TomogramCmd {
    /// Sample the tomogram of a state on an Euler-angle grid (CSV)
    Sample {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        grid: GridOrders,
    },
    /// Rebuild the density matrix from a tomogram CSV
    Reconstruct(Io),
}

#[derive(Subcommand, Debug)]
enum WitnessCmd {
    /// Build the witness for a state (JSON)
    Build(Io),
    /// Evaluate a witness on a state by every available route
    Eval {
        #[command(flatten)]
        io: Io,
        /// Witness JSON to evaluate instead of the state's own witness
        #[arg(long)]
        witness: Option<PathBuf>,
        #[command(flatten)]
        grid: GridOrders,
    },
}

#[derive(Subcommand, Debug)]
enum ScanCmd {
    /// Witness mean over the qutrit simplex (CSV r1,r2,value)
    Qutrit {
        #[arg(long, default_value_t = 0.02)]
        step: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Pure-state and sampled witness means per dimension (CSV)
    Maxwitness {
        #[arg(long, default_value_t = 30)]
        nmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand, Debug)]
enum JsCmd {
    /// Lift a qudit operator (matrix JSON) onto its photon-number sector
    Lift(Io),
    /// Witness for the two-mode number state |na, nb>
    Witness {
        #[arg(long)]
        na: u32,
        #[arg(long)]
        nb: u32,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Debug)]
struct CliError {
    code: u8,
    tag: &'static str,
    message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError { code: 2, tag: "invalid-input", message: message.into() }
    }

    fn numerical(message: impl Into<String>) -> Self {
        CliError { code: 4, tag: "numerical-failure", message: message.into() }
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::ConvergenceFailure { .. } => CliError::numerical(e.to_string()),
            _ => CliError::invalid(e.to_string()),
        }
    }
}

impl From<SpinError> for CliError {
    fn from(e: SpinError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<Su2Error> for CliError {
    fn from(e: Su2Error) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<TomographyError> for CliError {
    fn from(e: TomographyError) -> Self {
        match e {
            TomographyError::State(s) => s.into(),
            TomographyError::RankDeficient { .. } | TomographyError::Normalization(_) => {
                CliError::numerical(e.to_string())
            }
            _ => CliError::invalid(e.to_string()),
        }
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::WitnessUndefined { .. } => CliError { code: 3, tag: "witness-undefined", message: e.to_string() },
            WitnessError::Internal(_) => CliError::numerical(e.to_string()),
            WitnessError::State(s) => s.into(),
            WitnessError::Tomography(t) => t.into(),
            _ => CliError::invalid(e.to_string()),
        }
    }
}

impl From<JsError> for CliError {
    fn from(e: JsError) -> Self {
        match e {
            JsError::VacuumUndetectable => CliError { code: 3, tag: "vacuum-undetectable", message: e.to_string() },
            JsError::Witness(w) => w.into(),
            _ => CliError::invalid(e.to_string()),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &Out, text: &str) -> Result<(), CliError> {
    match &out.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError { code: 2, tag: "io", message: format!("cannot write {}: {e}", path.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn grid_for(spin: Spin, orders: &GridOrders) -> Result<Arc<qwitness::su2::QuadratureGrid>, CliError> {
    let (b, a, g) = default_orders(spin);
    let grid = quadrature_grid(spin, orders.nbeta.unwrap_or(b), orders.nalpha.unwrap_or(a), orders.ngamma.unwrap_or(g))?;
    Ok(Arc::new(grid))
}

fn state_validate(io: &Io) -> Result<(), CliError> {
    let rho = density_from_json(&read(&io.input)?)?;
    let spectrum = diagonalize(&rho)?;
    let report = json!({
        "valid": true,
        "dim": rho.dim(),
        "j": rho.spin().value(),
        "trace": rho.matrix().trace().re,
        "purity": purity(&rho),
        "eigenvalues": spectrum.eigenvalues,
        "min_eigenvalue": spectrum.eigenvalues.last().copied().unwrap_or(0.0),
    });
    emit(&io.out, &to_json(&report))
}

fn state_random(j: &str, seed: u64, pure: bool, out: &Out) -> Result<(), CliError> {
    let spin: Spin = j.parse()?;
    if spin.dim() > MAX_DIM {
        return Err(CliError::invalid(format!("j={spin} exceeds the supported dimension {MAX_DIM}")));
    }
    let rho = if pure { random_pure(spin.dim(), seed) } else { random_density(spin.dim(), seed) };
    emit(out, &density_to_json(&rho))
}

fn tomogram_sample_cmd(io: &Io, orders: &GridOrders) -> Result<(), CliError> {
    let rho = density_from_json(&read(&io.input)?)?;
    let grid = grid_for(rho.spin(), orders)?;
    let t = tomogram_sample(&rho, &grid)?;
    t.check_normalization()?;
    emit(&io.out, &t.to_csv())
}

fn tomogram_reconstruct_cmd(io: &Io) -> Result<(), CliError> {
    let t = Tomogram::from_csv(&read(&io.input)?)?;
    let map = build_reconstruction_map(t.grid())?;
    let rho = reconstruct(&t, &map)?;
    emit(&io.out, &density_to_json(&rho))
}

fn witness_build(io: &Io) -> Result<(), CliError> {
    let rho = density_from_json(&read(&io.input)?)?;
    let (_, report) = witness_report(&rho)?;
    emit(&io.out, &to_json(&report))
}

fn witness_eval(io: &Io, witness: Option<&PathBuf>, orders: &GridOrders) -> Result<(), CliError> {
    let rho: DensityMatrix = density_from_json(&read(&io.input)?)?;
    let (pair, own) = match witness {
        Some(path) => {
            let parsed: WitnessJson = serde_json::from_str(&read(path)?)
                .map_err(|e| CliError::invalid(format!("witness JSON: {e}")))?;
            (parsed.to_pair()?, false)
        }
        None => (witness_report(&rho)?.0, true),
    };
    if pair.dim() != rho.dim() {
        return Err(CliError::invalid(format!("witness has dimension {}, state {}", pair.dim(), rho.dim())));
    }
    let trace = witness_expectation(&rho, &pair)?;
    let tomographic = witness_expectation_tomographic(&rho, &pair)?;
    let closed_form = match (&pair.source, own) {
        (Some(r), true) => Value::from(closed_form_expectation(r)?),
        _ => Value::Null,
    };
    let pairing = if rho.dim() <= PAIRING_MAX_DIM {
        let grid = grid_for(rho.spin(), orders)?;
        let map = build_reconstruction_map(&grid)?;
        let t = tomogram_sample(&rho, &grid)?;
        Value::from(pair_average(&t, &dual_symbol(&pair.w, &map)?)?)
    } else {
        Value::Null
    };
    let bound = violation_bound(rho.dim());
    let report = json!({
        "dim": rho.dim(),
        "expectation": trace,
        "expectation_tomographic": tomographic,
        "expectation_closed_form": closed_form,
        "expectation_pairing": pairing,
        "bound": bound,
        "negative": trace < 0.0,
        "below_bound": trace < bound,
    });
    emit(&io.out, &to_json(&report))
}

fn js_lift(io: &Io) -> Result<(), CliError> {
    let op = matrix_from_json(&read(&io.input)?)?;
    let spin = Spin::from_dim(op.dim())?;
    let lifted = lift_operator(spin, &op)?;
    emit(&io.out, &to_json(&SectorOperatorJson::new(&lifted)))
}

fn js_witness(na: u32, nb: u32, out: &Out) -> Result<(), CliError> {
    let t = two_mode_witness(FockLabel::new(na, nb))?;
    emit(out, &to_json(&TwoModeWitnessJson::new(&t)?))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::State(StateCmd::Validate(io)) => state_validate(&io),
        Command::State(StateCmd::Random { j, seed, pure, out }) => state_random(&j, seed, pure, &out),
        Command::Tomogram(TomogramCmd::Sample { io, grid }) => tomogram_sample_cmd(&io, &grid),
        Command::Tomogram(TomogramCmd::Reconstruct(io)) => tomogram_reconstruct_cmd(&io),
        Command::Witness(WitnessCmd::Build(io)) => witness_build(&io),
        Command::Witness(WitnessCmd::Eval { io, witness, grid }) => witness_eval(&io, witness.as_ref(), &grid),
        Command::Scan(ScanCmd::Qutrit { step, out }) => emit(&out, &qutrit_csv(&qutrit_scan(step)?)),
        Command::Scan(ScanCmd::Maxwitness { nmax, seed, out }) => {
            emit(&out, &max_witness_csv(&max_witness_scan(nmax, seed)?))
        }
        Command::Js(JsCmd::Lift(io)) => js_lift(&io),
        Command::Js(JsCmd::Witness { na, nb, out }) => js_witness(na, nb, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {}", e.tag, e.message.replace('\n', " "));
            ExitCode::from(e.code)
        }
    }
}
