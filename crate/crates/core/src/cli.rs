//! `invosc` command line: `eval`, `propagate`, `verify` and `gas`.
//!
//! Exit codes: 0 success (or all checks pass), 1 invalid input, 2 a
//! verification check failed, 3 I/O error.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;

use crate::analytic::{
    box_length, psi1_eval, psi2_eval, BoxConfig, ConfinedMode, OscillatorParams, PhaseConvention,
    ScatteringMode,
};
use crate::csvfmt::sig15;
use crate::error::Error;
use crate::exec::Execution;
use crate::propagator::{self, init_mode_superposition, lab_frame, propagate_to};
use crate::quadrature::{simpson_integrate, Grid1D, SampledField};
use crate::statmech::{cooling_curve, gibbs_occupations};
use crate::verifier::{self, propagation_error, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "invosc",
    version,
    about = "Confined inverted harmonic oscillator: exact solutions, propagation and checks"
)]
#[command(args_conflicts_with_subcommands = true, allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an exact solution on [0, L(t)] as CSV rows `t,x,re,im,abs2`.
    Eval(EvalArgs),
    /// Crank–Nicolson propagation of box modes; writes the final lab-frame field.
    Propagate(PropagateArgs),
    /// Run every check and write the report CSV.
    Verify(VerifyArgs),
    /// Cooling curve `t,L,U,T,TL2` of the frozen-occupation gas.
    Gas(GasArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Convention {
    Corrected,
    AsPrinted,
}

impl From<Convention> for PhaseConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Corrected => PhaseConvention::Corrected,
            Convention::AsPrinted => PhaseConvention::AsPrinted,
        }
    }
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct EvalArgs {
    /// Oscillator frequency ω.
    #[arg(long, default_value_t = 0.5)]
    omega: f64,
    /// Initial box length.
    #[arg(long, default_value_t = PI)]
    l0: f64,
    /// Confined mode number (n >= 1).
    #[arg(long, conflicts_with = "k", required_unless_present = "k")]
    n: Option<i64>,
    /// Plane-wave wavenumber.
    #[arg(long)]
    k: Option<f64>,
    /// Comma-separated sample times.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    t: Vec<f64>,
    /// Intervals per time slice (even, >= 8).
    #[arg(long, default_value_t = 256)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = Convention::Corrected)]
    phase_convention: Convention,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct PropagateArgs {
    #[arg(long, default_value_t = 0.25)]
    omega: f64,
    #[arg(long, default_value_t = PI)]
    l0: f64,
    /// Single starting mode.
    #[arg(long, default_value_t = 1, conflicts_with = "coeffs")]
    n: i64,
    /// Superposition `n:re[:im],...`; normalized to unit norm before use.
    #[arg(long)]
    coeffs: Option<String>,
    /// Final lab time.
    #[arg(long, default_value_t = 0.5)]
    t_max: f64,
    /// Crank–Nicolson steps.
    #[arg(long, default_value_t = propagator::DEFAULT_STEPS)]
    steps: usize,
    /// Comoving grid intervals.
    #[arg(long, default_value_t = propagator::DEFAULT_INTERVALS)]
    grid: usize,
    /// Convention of the analytic reference solution.
    #[arg(long, value_enum, default_value_t = Convention::Corrected)]
    phase_convention: Convention,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0.5)]
    omega: f64,
    #[arg(long, default_value_t = PI)]
    l0: f64,
    /// Highest mode in the Gram and symmetry checks.
    #[arg(long, default_value_t = 5)]
    n_max: usize,
    /// Quadrature intervals for norms and energies.
    #[arg(long, default_value_t = 8192)]
    grid: usize,
    /// Crank–Nicolson steps for the propagation checks.
    #[arg(long, default_value_t = propagator::DEFAULT_STEPS)]
    steps: usize,
    /// Inverse temperature of the gas checks.
    #[arg(long, default_value_t = 1.0)]
    beta0: f64,
    /// Convention treated as the exact solution.
    #[arg(long, value_enum, default_value_t = Convention::Corrected)]
    phase_convention: Convention,
    /// Run all checks on the calling thread.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct GasArgs {
    #[arg(long, default_value_t = 0.5)]
    omega: f64,
    #[arg(long, default_value_t = PI)]
    l0: f64,
    /// Initial inverse temperature.
    #[arg(long, default_value_t = 1.0)]
    beta0: f64,
    /// Starting level cutoff (extended automatically).
    #[arg(long, default_value_t = 20)]
    n_max: usize,
    /// Explicit comma-separated times; overrides --t-max/--steps.
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<f64>>,
    /// End of the uniform schedule.
    #[arg(long, default_value_t = 2.0)]
    t_max: f64,
    /// Intervals of the uniform schedule.
    #[arg(long, default_value_t = 8)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Validation { flag: &'static str, message: String },
    Io(std::io::Error),
    Checks,
}

impl Failure {
    fn invalid(flag: &'static str, message: impl Into<String>) -> Self {
        Failure::Validation {
            flag,
            message: message.into(),
        }
    }

    fn code(&self) -> i32 {
        match self {
            Failure::Validation { .. } => EXIT_VALIDATION,
            Failure::Checks => EXIT_VERIFICATION,
            Failure::Io(_) => EXIT_IO,
        }
    }
}

/// Flag most directly responsible for a library error.
fn flag_for(err: &Error) -> &'static str {
    match err {
        Error::InvalidQuantumNumber(_) => "--n",
        Error::InvalidBox(_) => "--l0",
        Error::NonFinite("k") => "--k",
        Error::NonFinite(_) | Error::UndefinedPhase => "--omega",
        Error::InvalidGrid(_) | Error::IncompatibleGrids => "--grid",
        Error::InvalidSuperposition(_) => "--coeffs",
        Error::InvalidTargetTime { .. } => "--t-max",
        Error::InvalidSteps(_) => "--steps",
        Error::InvalidFit(_) | Error::InvalidSchedule(_) => "--t",
        Error::InvalidTemperature(_) => "--beta0",
        Error::InvalidCutoff(_) | Error::CutoffInsufficient { .. } => "--n-max",
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::invalid(flag_for(&err), err.to_string())
    }
}

fn at(flag: &'static str) -> impl Fn(Error) -> Failure {
    move |err| Failure::invalid(flag, err.to_string())
}

fn finite(flag: &'static str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::invalid(
            flag,
            format!("{v} is not a finite number"),
        ))
    }
}

fn box_from(omega: f64, l0: f64) -> Result<BoxConfig, Failure> {
    let params = OscillatorParams::new(finite("--omega", omega)?).map_err(at("--omega"))?;
    BoxConfig::new(l0, params).map_err(at("--l0"))
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(Failure::Io),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(Failure::Io)
        }
    }
}

fn push_row(csv: &mut String, fields: &[f64]) {
    let row: Vec<String> = fields.iter().map(|v| sig15(*v)).collect();
    let _ = writeln!(csv, "{}", row.join(","));
}

fn cmd_eval(args: &EvalArgs) -> Result<(), Failure> {
    let boxed = box_from(args.omega, args.l0)?;
    let conv = args.phase_convention.into();
    for &t in &args.t {
        finite("--t", t)?;
    }
    if args.t.is_empty() {
        return Err(Failure::invalid("--t", "at least one time is required"));
    }
    // validate the grid once, independent of t
    Grid1D::new(0.0, 1.0, args.grid).map_err(at("--grid"))?;
    let evaluator: Box<dyn Fn(f64, f64) -> C64> = match (args.n, args.k) {
        (Some(n), _) => {
            let mode = ConfinedMode::new(n, boxed).map_err(at("--n"))?;
            Box::new(move |x, t| psi1_eval(&mode, x, t, conv))
        }
        (None, Some(k)) => {
            let mode = ScatteringMode::new(k, boxed.params()).map_err(at("--k"))?;
            if boxed.omega() == 0.0 {
                return Err(Failure::invalid(
                    "--omega",
                    Error::UndefinedPhase.to_string(),
                ));
            }
            Box::new(move |x, t| psi2_eval(&mode, x, t).expect("omega checked nonzero"))
        }
        (None, None) => return Err(Failure::invalid("--n", "one of --n or --k is required")),
    };
    let mut csv = String::from("t,x,re,im,abs2\n");
    for &t in &args.t {
        let grid = Grid1D::new(0.0, box_length(&boxed, t), args.grid).map_err(at("--t"))?;
        for x in grid.coordinates() {
            let z = evaluator(x, t);
            push_row(&mut csv, &[t, x, z.re, z.im, z.norm_sqr()]);
        }
    }
    emit(&args.out, &csv)
}

fn parse_coeffs(list: &str) -> Result<Vec<(i64, C64)>, Failure> {
    let bad = |item: &str, why: &str| {
        Failure::invalid(
            "--coeffs",
            format!("`{item}`: {why}; expected n:re or n:re:im"),
        )
    };
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(bad(item, "wrong number of fields"));
        }
        let n: i64 = parts[0]
            .parse()
            .map_err(|_| bad(item, "mode number is not an integer"))?;
        let re: f64 = parts[1]
            .parse()
            .map_err(|_| bad(item, "real part is not a number"))?;
        let im: f64 = match parts.get(2) {
            Some(s) => s
                .parse()
                .map_err(|_| bad(item, "imaginary part is not a number"))?,
            None => 0.0,
        };
        out.push((n, C64::new(re, im)));
    }
    let total: f64 = out.iter().map(|(_, c)| c.norm_sqr()).sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Failure::invalid(
            "--coeffs",
            "need at least one nonzero finite coefficient",
        ));
    }
    let scale = total.sqrt().recip();
    Ok(out.into_iter().map(|(n, c)| (n, c * scale)).collect())
}

fn cmd_propagate(args: &PropagateArgs) -> Result<(), Failure> {
    let boxed = box_from(args.omega, args.l0)?;
    let t_max = finite("--t-max", args.t_max)?;
    if t_max <= 0.0 {
        return Err(Failure::invalid(
            "--t-max",
            format!("must be positive (got {t_max})"),
        ));
    }
    if args.steps == 0 {
        return Err(Failure::invalid("--steps", "need at least one step"));
    }
    let (coeffs, single) = match &args.coeffs {
        Some(list) => (parse_coeffs(list)?, None),
        None => {
            let mode = ConfinedMode::new(args.n, boxed).map_err(at("--n"))?;
            (vec![(args.n, C64::new(1.0, 0.0))], Some(mode))
        }
    };
    let start = init_mode_superposition(boxed, args.grid, &coeffs)?;
    let end = propagate_to(&start, t_max, args.steps)?;
    let lab = lab_frame(&end);

    let mut csv = String::from("t,x,re,im,abs2\n");
    for (x, z) in lab.grid().coordinates().into_iter().zip(lab.values()) {
        push_row(&mut csv, &[t_max, x, z.re, z.im, z.norm_sqr()]);
    }
    let density = SampledField::new(
        *lab.grid(),
        lab.values()
            .iter()
            .map(|z| C64::new(z.norm_sqr(), 0.0))
            .collect(),
    )?;
    let mut summary = String::new();
    if let Some(mode) = single {
        let err = propagation_error(&lab, &mode, args.phase_convention.into())?;
        let _ = writeln!(summary, "l2_error,{}", sig15(err));
    }
    let _ = writeln!(summary, "norm,{}", sig15(simpson_integrate(&density).re));
    emit(&args.out, &csv)?;
    if args.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

fn verify_config(args: &VerifyArgs) -> Result<VerifyConfig, Failure> {
    let boxed = box_from(args.omega, args.l0)?;
    if args.n_max < 2 {
        return Err(Failure::invalid(
            "--n-max",
            format!("need at least 2 modes (got {})", args.n_max),
        ));
    }
    Grid1D::new(0.0, 1.0, args.grid).map_err(at("--grid"))?;
    if args.grid < 16 {
        return Err(Failure::invalid("--grid", "need at least 16 intervals"));
    }
    if args.steps == 0 {
        return Err(Failure::invalid("--steps", "need at least one step"));
    }
    if !(args.beta0.is_finite() && args.beta0 > 0.0) {
        return Err(Failure::from(Error::InvalidTemperature(args.beta0)));
    }
    Ok(VerifyConfig {
        l0: boxed.l0(),
        omega: boxed.omega(),
        n_max: args.n_max,
        grid: args.grid,
        propagation_steps: args.steps,
        beta0: args.beta0,
        convention: args.phase_convention.into(),
        exec: if args.sequential {
            Execution::Sequential
        } else {
            Execution::default()
        },
        ..VerifyConfig::default()
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let config = verify_config(args)?;
    let report = verifier::run_full_report(&config);
    emit(&args.out, &report.to_csv())?;
    if report.all_pass() {
        Ok(())
    } else {
        for r in report.results().iter().filter(|r| !r.pass) {
            eprintln!(
                "FAIL {} ({}): value {} vs tolerance {}",
                r.name,
                r.params,
                sig15(r.value),
                sig15(r.tolerance)
            );
        }
        Err(Failure::Checks)
    }
}

fn gas_schedule(args: &GasArgs) -> Result<Vec<f64>, Failure> {
    if let Some(ts) = &args.t {
        return Ok(ts.clone());
    }
    let t_max = finite("--t-max", args.t_max)?;
    if t_max < 0.0 {
        return Err(Failure::invalid("--t-max", "must not be negative"));
    }
    if args.steps == 0 {
        return Err(Failure::invalid(
            "--steps",
            "need at least one schedule interval",
        ));
    }
    Ok((0..=args.steps)
        .map(|i| t_max * i as f64 / args.steps as f64)
        .collect())
}

fn cmd_gas(args: &GasArgs) -> Result<(), Failure> {
    let boxed = box_from(args.omega, args.l0)?;
    let gas = gibbs_occupations(boxed, args.beta0, args.n_max)?;
    let rows = cooling_curve(&gas, &gas_schedule(args)?)?;
    let mut csv = String::from("t,L,U,T,TL2\n");
    for r in rows {
        push_row(
            &mut csv,
            &[r.t, r.length, r.energy, r.temperature, r.adiabatic],
        );
    }
    emit(&args.out, &csv)
}

/// Parses `args` (including the program name) and runs the selected command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
        }
    };
    let outcome = match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Propagate(a) => cmd_propagate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Gas(a) => cmd_gas(a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            match &failure {
                Failure::Validation { flag, message } => {
                    eprintln!("error: invalid value for {flag}: {message}")
                }
                Failure::Io(e) => eprintln!("error: {e}"),
                Failure::Checks => eprintln!("verification failed"),
            }
            failure.code()
        }
    }
}
