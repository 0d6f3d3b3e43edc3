//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or precondition
//! error, 3 I/O or parse error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::document::{plan_from_json, plan_to_json};
use crate::error::Error;
use crate::exec;
use crate::fock::{circuit_operator, MAX_OPERATOR_MODES};
use crate::physics::{spectrum_via_dst, HoppingHamiltonian};
use crate::planner::{
    closed_form_c1, closed_form_c3, closed_form_dft_butterflies, closed_form_dft_twiddles,
    compose_dense, gate_census, Plan, PlanKind, MAX_DENSE_SIZE,
};
use crate::reference::second_quantize_dense;

/// Deviation below which a verification passes.
pub const VERIFY_TOL: f64 = 1e-10;

/// Largest level accepted by `count`.
pub const MAX_COUNT_LEVEL: u32 = 20;

/// Largest level accepted by `spectrum`.
pub const MAX_SPECTRUM_LEVEL: u32 = 12;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "dstnet", version, about = "Orthogonal DST-I/DST-III/FFT gate networks and their fermionic circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a plan and write it as a JSON document.
    Plan {
        #[arg(long)]
        kind: PlanKind,
        #[arg(long)]
        level: u32,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transform a vector file.
    Apply {
        #[command(flatten)]
        source: PlanSource,
        #[arg(long, requires = "kind")]
        level: Option<u32>,
        #[arg(long)]
        input: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Apply the inverse transform.
        #[arg(long)]
        inverse: bool,
    },
    /// Compare a plan against the dense reference (and the Slater oracle with --fock).
    Verify {
        #[arg(long)]
        kind: PlanKind,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        fock: bool,
    },
    /// Tabulate gate counts against the closed forms.
    Count {
        #[arg(long)]
        kind: PlanKind,
        /// A single level `k` or an inclusive range `a..b`.
        #[arg(long)]
        level: String,
    },
    /// Spectrum of the open hopping chain with 2^level - 1 sites.
    Spectrum {
        #[arg(long)]
        level: u32,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct PlanSource {
    #[arg(long, requires = "level")]
    kind: Option<PlanKind>,
    /// Plan document to apply instead of --kind/--level.
    #[arg(long)]
    plan: Option<PathBuf>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Plan { kind, level, out: path } => cmd_plan(kind, level, path.as_deref(), out),
        Command::Apply {
            source,
            level,
            input,
            output,
            inverse,
        } => cmd_apply(&source, level, &input, output.as_deref(), inverse, out),
        Command::Verify { kind, level, fock } => cmd_verify(kind, level, fock, out),
        Command::Count { kind, level } => cmd_count(kind, &level, out),
        Command::Spectrum { level } => cmd_spectrum(level, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::io(format!("cannot write output: {e}"))),
    }
}

fn cmd_plan(kind: PlanKind, level: u32, path: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let plan = kind.plan(level)?;
    let mut json = plan_to_json(&plan);
    json.push('\n');
    emit(&json, path, out)?;
    Ok(EXIT_OK)
}

/// Shortest representation that reads back to the same `f64`.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Parses a vector file: one value per line, or `re,im` for complex data.
/// Blank lines and lines starting with `#` are skipped. Returns the values
/// and whether any line was complex.
pub fn parse_vector(text: &str) -> Result<(Vec<Complex64>, bool), String> {
    let mut values = Vec::new();
    let mut complex = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| format!("line {}: cannot parse {:?} as a number", lineno + 1, s.trim()))
        };
        let z = match line.split_once(',') {
            Some((re, im)) => {
                complex = true;
                Complex64::new(num(re)?, num(im)?)
            }
            None => Complex64::new(num(line)?, 0.0),
        };
        values.push(z);
    }
    Ok((values, complex))
}

fn load_plan(source: &PlanSource, level: Option<u32>) -> Result<Plan, Failure> {
    match (&source.plan, source.kind, level) {
        (Some(path), _, _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
            plan_from_json(&text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
        }
        (None, Some(kind), Some(level)) => Ok(kind.plan(level)?),
        _ => Err(Failure::usage("either --plan or both --kind and --level are required")),
    }
}

fn cmd_apply(
    source: &PlanSource,
    level: Option<u32>,
    input: &Path,
    output: Option<&Path>,
    inverse: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let plan = load_plan(source, level)?;
    let text = fs::read_to_string(input)
        .map_err(|e| Failure::io(format!("cannot read {}: {e}", input.display())))?;
    let (values, complex) = parse_vector(&text).map_err(Failure::io)?;
    if values.len() != plan.n() {
        return Err(Failure::usage(format!(
            "input has {} values but the {} plan has size {}",
            values.len(),
            plan.kind(),
            plan.n()
        )));
    }
    let mut body = String::new();
    if plan.is_real() {
        if complex {
            return Err(Failure::usage(format!(
                "{} is a real transform; complex input is not accepted",
                plan.kind()
            )));
        }
        let mut v: Vec<f64> = values.iter().map(|z| z.re).collect();
        if inverse {
            exec::apply_real_inverse_in_place(&plan, &mut v)?;
        } else {
            exec::apply_real_in_place(&plan, &mut v)?;
        }
        for x in v {
            let _ = writeln!(body, "{}", format_number(x));
        }
    } else {
        let mut v = values;
        if inverse {
            exec::apply_inverse_in_place(&plan, &mut v)?;
        } else {
            exec::apply_in_place(&plan, &mut v)?;
        }
        for z in v {
            let _ = writeln!(body, "{},{}", format_number(z.re), format_number(z.im));
        }
    }
    emit(&body, output, out)?;
    Ok(EXIT_OK)
}

fn verdict(dev: f64) -> &'static str {
    if dev < VERIFY_TOL {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_verify(kind: PlanKind, level: u32, fock: bool, out: &mut dyn Write) -> CmdResult {
    let n = kind.size_at(level)?;
    if n > MAX_DENSE_SIZE {
        return Err(Failure::usage(format!(
            "size {n} exceeds the dense verification limit of {MAX_DENSE_SIZE}"
        )));
    }
    if fock && n > MAX_OPERATOR_MODES {
        return Err(Failure::usage(format!(
            "size {n} exceeds the Fock verification limit of {MAX_OPERATOR_MODES} modes"
        )));
    }
    let plan = kind.plan(level)?;
    let dense = kind.dense(n)?;
    let composed = compose_dense(&plan)?;
    let dense_dev = composed.max_abs_diff(&dense);
    let mut report = format!("kind={kind} level={level} n={n}\n");
    let _ = writeln!(report, "dense max_abs_dev={} {}", format_number(dense_dev), verdict(dense_dev));
    let mut worst = dense_dev;
    if fock {
        let dev = circuit_operator(&plan)?.max_abs_diff(&second_quantize_dense(&dense)?);
        let _ = writeln!(report, "fock max_abs_dev={} {}", format_number(dev), verdict(dev));
        worst = worst.max(dev);
    }
    let _ = writeln!(report, "result {}", verdict(worst));
    emit(&report, None, out)?;
    Ok(if worst < VERIFY_TOL { EXIT_OK } else { EXIT_VERIFY })
}

fn parse_level_range(s: &str) -> Result<(u32, u32), Failure> {
    let bad = || Failure::usage(format!("invalid level range {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let k = s.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo == 0 || lo > hi || hi > MAX_COUNT_LEVEL {
        return Err(Failure::usage(format!(
            "invalid level range {s:?}: need 1 <= a <= b <= {MAX_COUNT_LEVEL}"
        )));
    }
    Ok((lo, hi))
}

fn cmd_count(kind: PlanKind, levels: &str, out: &mut dyn Write) -> CmdResult {
    let (lo, hi) = parse_level_range(levels)?;
    let mut table = format!("kind={kind}\n");
    let _ = writeln!(
        table,
        "{:>5} {:>9} {:>10} {:>11} {:>9} {:>9} {:>9} {:>9} {:>6} {:>13} {:>10}",
        "level", "n", "measured", "closed_form", "fhat", "ghat", "rot", "scalar", "perms", "swaps", "swaps/n^2"
    );
    let mut mismatch = false;
    let mut last_constant = None;
    for level in lo..=hi {
        let plan = kind.plan(level)?;
        let n = plan.n();
        let c = gate_census(&plan);
        let closed = match kind {
            PlanKind::Dst1 => closed_form_c1(n)?,
            PlanKind::Dst3 => closed_form_c3(n)?,
            PlanKind::Dft => closed_form_dft_butterflies(n)? + closed_form_dft_twiddles(n)?,
        };
        mismatch |= c.elementary() != closed;
        if kind == PlanKind::Dft {
            mismatch |= c.scalar != closed_form_dft_twiddles(n)?;
        }
        let constant = c.adjacent_swaps as f64 / (n * n) as f64;
        last_constant = Some((n, constant));
        let _ = writeln!(
            table,
            "{:>5} {:>9} {:>10} {:>11} {:>9} {:>9} {:>9} {:>9} {:>6} {:>13} {:>10.4}",
            level, n, c.elementary(), closed, c.fhat, c.ghat, c.rot, c.scalar, c.perm, c.adjacent_swaps, constant
        );
    }
    if let Some((n, constant)) = last_constant {
        let _ = writeln!(
            table,
            "adjacent swaps per n^2 at n={n}: {constant:.4} (naive estimate 7/6 = {:.4})",
            7.0 / 6.0
        );
    }
    let _ = writeln!(table, "result {}", if mismatch { "MISMATCH" } else { "MATCH" });
    emit(&table, None, out)?;
    Ok(if mismatch { EXIT_VERIFY } else { EXIT_OK })
}

fn cmd_spectrum(level: u32, out: &mut dyn Write) -> CmdResult {
    if level > MAX_SPECTRUM_LEVEL {
        return Err(Failure::usage(format!(
            "level {level} exceeds the spectrum limit of {MAX_SPECTRUM_LEVEL}"
        )));
    }
    let n = PlanKind::Dst1.size_at(level)?;
    let s = spectrum_via_dst(&HoppingHamiltonian::new(n))?;
    let mut text = format!("n={n} t=1\n");
    for (b, e) in s.eigenvalues.iter().enumerate() {
        let _ = writeln!(text, "{b} {}", format_number(*e));
    }
    let _ = writeln!(text, "off_diagonal_residual={}", format_number(s.off_diagonal_residual));
    emit(&text, None, out)?;
    Ok(EXIT_OK)
}
