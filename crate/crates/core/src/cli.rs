//! Command-line front end.
//!
//! Exit codes: 0 success (and, for `solve`, a satisfying best state),
//! 1 usage or input error, 2 resource limit, 3 ran to completion but the
//! result failed (unsatisfied best state, or a failed `--verify`/`--check`/oracle
//! tolerance).
//!
//! Every numeric flag can also be set from an `ADIASAT_*` environment variable.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::circuit::{compile_adiabatic_circuit, export_qasm, simulate_circuit};
use crate::evolve::{
    build_spectrum, dense_evolution_oracle, run_adiabatic, trotter_error, DenseOperator, Schedule,
    MAX_DENSE_QUBITS, MAX_STATE_QUBITS,
};
use crate::formula::{parse_dimacs, BasisIndex, CnfFormula, EXHAUSTIVE_BOUND};
use crate::pauli::formula_to_hamiltonian;
use crate::report::{solve, write_histogram_csv, write_report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

pub const ORACLE_TOLERANCE: f64 = 1e-8;
pub const CHECK_TOLERANCE: f64 = 1e-6;
pub const SPECTRUM_TOLERANCE: f64 = 1e-9;
pub const TROTTER_STEPS: [u32; 4] = [8, 16, 32, 64];
pub const TROTTER_RATIO_RANGE: (f64, f64) = (0.35, 0.65);

#[derive(Debug, Parser)]
#[command(
    name = "adiasat",
    version,
    about = "Simulated adiabatic optimization for SAT / Max-SAT"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the adiabatic schedule and report the most likely assignment.
    Solve(SolveArgs),
    /// Print the problem Hamiltonian and optionally its diagonal.
    Spectrum(SpectrumArgs),
    /// Emit the OpenQASM 2.0 circuit for the schedule.
    Compile(CompileArgs),
    /// Cross-check the statevector engine against dense matrix exponentials.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// DIMACS CNF file, or `-` for stdin.
    pub input: PathBuf,
    /// Write output here instead of stdout.
    #[arg(long, env = "ADIASAT_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StepsArg {
    /// Schedule step count T (the loop runs T + 1 steps).
    #[arg(short = 'T', long, default_value_t = 100, env = "ADIASAT_STEPS")]
    pub steps: u32,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub steps: StepsArg,
    /// Measurement shots to sample on top of the exact distribution (0 = none).
    #[arg(long, default_value_t = 0, env = "ADIASAT_SHOTS")]
    pub shots: u64,
    #[arg(long, default_value_t = 0, env = "ADIASAT_SEED")]
    pub seed: u64,
    /// `csv` writes the shot histogram and needs `--shots`.
    #[arg(long, value_enum, default_value_t = Format::Json, env = "ADIASAT_FORMAT")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    /// Also print every basis energy next to its brute-force unsat count.
    #[arg(long)]
    pub diagonal: bool,
    /// Fail unless every basis energy equals the brute-force unsat count.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub steps: StepsArg,
    /// Simulate the circuit and compare with the statevector engine (at most 3 qubits).
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub steps: StepsArg,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(m: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: m.to_string(),
        }
    }

    fn resource(m: impl ToString) -> Self {
        Failure {
            code: EXIT_RESOURCE,
            message: m.to_string(),
        }
    }
}

type CmdResult = Result<i32, Failure>;

/// I/O handles for one invocation.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(io.stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match &cli.command {
        Command::Solve(a) => cmd_solve(a, io),
        Command::Spectrum(a) => cmd_spectrum(a, io),
        Command::Compile(a) => cmd_compile(a, io),
        Command::Oracle(a) => cmd_oracle(a, io),
    }
}

fn read_formula(c: &Common, io: &mut Io<'_>) -> Result<CnfFormula, Failure> {
    let text = if c.input.as_os_str() == "-" {
        let mut s = String::new();
        io.stdin.read_to_string(&mut s).map_err(Failure::usage)?;
        s
    } else {
        fs::read_to_string(&c.input)
            .map_err(|e| Failure::usage(format!("{}: {e}", c.input.display())))?
    };
    parse_dimacs(&text).map_err(Failure::usage)
}

fn emit(c: &Common, text: &str, io: &mut Io<'_>) -> Result<(), Failure> {
    match &c.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
        None => io.stdout.write_all(text.as_bytes()).map_err(Failure::usage),
    }
}

fn schedule(s: &StepsArg) -> Result<Schedule, Failure> {
    Schedule::linear(s.steps).map_err(Failure::usage)
}

fn check_state_width(f: &CnfFormula, max: usize) -> Result<(), Failure> {
    if f.num_vars() > max {
        return Err(Failure::resource(format!(
            "{} variables exceed the limit of {max}",
            f.num_vars()
        )));
    }
    Ok(())
}

pub fn cmd_solve(a: &SolveArgs, io: &mut Io<'_>) -> i32 {
    finish(solve_inner(a, io), io)
}

fn solve_inner(a: &SolveArgs, io: &mut Io<'_>) -> CmdResult {
    let f = read_formula(&a.common, io)?;
    let sched = schedule(&a.steps)?;
    if a.format == Format::Csv && a.shots == 0 {
        return Err(Failure::usage("--format csv needs --shots > 0"));
    }
    check_state_width(&f, MAX_STATE_QUBITS)?;
    let outcome = solve(&f, &sched, a.shots, a.seed).map_err(Failure::resource)?;
    let text = match (a.format, &outcome.histogram) {
        (Format::Csv, Some(h)) => write_histogram_csv(h),
        _ => write_report(&outcome.report),
    };
    emit(&a.common, &text, io)?;
    Ok(if outcome.report.satisfied {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

pub fn cmd_spectrum(a: &SpectrumArgs, io: &mut Io<'_>) -> i32 {
    finish(spectrum_inner(a, io), io)
}

fn spectrum_inner(a: &SpectrumArgs, io: &mut Io<'_>) -> CmdResult {
    let f = read_formula(&a.common, io)?;
    let h = formula_to_hamiltonian(&f).map_err(Failure::resource)?;
    let mut text = format!("H = {h}\n# coefficient term\n");
    for (t, c) in h.sorted_terms() {
        let name = if t.mask() == 0 {
            "Id".to_string()
        } else {
            t.qubits()
                .iter()
                .map(|q| format!("Z{q}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        text.push_str(&format!("{c:+} {name}\n"));
    }
    let mut code = EXIT_OK;
    if a.diagonal || a.verify {
        check_state_width(&f, EXHAUSTIVE_BOUND)?;
        let spec = build_spectrum(&h).map_err(Failure::resource)?;
        let n = f.num_vars();
        let mut mismatches = 0usize;
        if a.diagonal {
            text.push_str("# state energy unsat\n");
        }
        for (k, &e) in spec.energies.iter().enumerate() {
            let unsat = f.unsat_count_at(BasisIndex(k)).map_err(Failure::usage)?;
            if (e - unsat as f64).abs() > SPECTRUM_TOLERANCE {
                mismatches += 1;
            }
            if a.diagonal {
                text.push_str(&format!("{} {} {}\n", BasisIndex(k).bitstring(n), e, unsat));
            }
        }
        if a.verify {
            if mismatches == 0 {
                text.push_str(&format!("verify: ok ({} states)\n", spec.energies.len()));
            } else {
                text.push_str(&format!(
                    "verify: FAILED ({mismatches} mismatching states)\n"
                ));
                code = EXIT_FAILED;
            }
        }
    }
    emit(&a.common, &text, io)?;
    Ok(code)
}

pub fn cmd_compile(a: &CompileArgs, io: &mut Io<'_>) -> i32 {
    finish(compile_inner(a, io), io)
}

fn compile_inner(a: &CompileArgs, io: &mut Io<'_>) -> CmdResult {
    let f = read_formula(&a.common, io)?;
    let sched = schedule(&a.steps)?;
    if a.check {
        check_state_width(&f, MAX_DENSE_QUBITS)?;
    }
    let h = formula_to_hamiltonian(&f).map_err(Failure::resource)?;
    let circuit = compile_adiabatic_circuit(&h, &sched);
    emit(&a.common, &export_qasm(&circuit), io)?;
    if !a.check {
        return Ok(EXIT_OK);
    }
    let simulated = simulate_circuit(&circuit).map_err(Failure::resource)?;
    let reference = run_adiabatic(&h, &sched).map_err(Failure::resource)?;
    let fid = simulated.fidelity(&reference).map_err(Failure::resource)?;
    let ok = fid >= 1.0 - CHECK_TOLERANCE;
    let _ = writeln!(
        io.stderr,
        "check: gates={} cx={} fidelity={fid:.15} {}",
        circuit.len(),
        circuit.cx_count(),
        if ok { "ok" } else { "FAILED" }
    );
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

pub fn cmd_oracle(a: &OracleArgs, io: &mut Io<'_>) -> i32 {
    finish(oracle_inner(a, io), io)
}

fn oracle_inner(a: &OracleArgs, io: &mut Io<'_>) -> CmdResult {
    let f = read_formula(&a.common, io)?;
    let sched = schedule(&a.steps)?;
    check_state_width(&f, MAX_DENSE_QUBITS)?;
    let h = formula_to_hamiltonian(&f).map_err(Failure::resource)?;
    let fast = run_adiabatic(&h, &sched).map_err(Failure::resource)?;
    let dense = dense_evolution_oracle(&h, &sched).map_err(Failure::resource)?;
    let deviation = fast.max_deviation(&dense).map_err(Failure::resource)?;
    let evolution_ok = deviation <= ORACLE_TOLERANCE;
    let mut text = format!(
        "evolution: steps={} max_amplitude_deviation={deviation:.3e} {}\n",
        sched.steps(),
        if evolution_ok { "ok" } else { "FAILED" }
    );

    let hd = DenseOperator::driver(f.num_vars()).map_err(Failure::resource)?;
    let hp = DenseOperator::from_polynomial(&h).map_err(Failure::resource)?;
    text.push_str("# m trotter_error ratio\n");
    let mut errors = Vec::new();
    for m in TROTTER_STEPS {
        let e = trotter_error(&hd, &hp, m).map_err(Failure::resource)?;
        let ratio = errors.last().map(|&prev: &f64| e / prev);
        match ratio {
            Some(r) => text.push_str(&format!("{m} {e:.6e} {r:.4}\n")),
            None => text.push_str(&format!("{m} {e:.6e} -\n")),
        }
        errors.push(e);
    }
    let (e32, e64) = (errors[2], errors[3]);
    // Commuting pairs split exactly; there is no error to scale.
    let trotter_ok = if e32 < 1e-12 {
        e64 < 1e-12
    } else {
        let r = e64 / e32;
        r >= TROTTER_RATIO_RANGE.0 && r <= TROTTER_RATIO_RANGE.1
    };
    text.push_str(&format!(
        "trotter: {}\n",
        if trotter_ok { "ok" } else { "FAILED" }
    ));
    emit(&a.common, &text, io)?;
    Ok(if evolution_ok && trotter_ok {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn finish(r: CmdResult, io: &mut Io<'_>) -> i32 {
    match r {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.stderr, "error: {}", f.message);
            f.code
        }
    }
}
