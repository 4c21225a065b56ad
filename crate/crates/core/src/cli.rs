//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 schema or validation failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::braid::{check_braid_relations, check_quasitriangular, check_ybe, StrandRep};
use crate::class_ops::ClassKind;
use crate::concurrence::{classify, DEFAULT_TOL};
use crate::entangler::{apply_entangler, build_r, check_unitary, decompose, proposition_check, EvaluationTarget};
use crate::io::{self, FileError};
use crate::oracle::oracle_classify;
use crate::state::uniform_input;

pub const TOL_ENV: &str = "ENTANGLER_LAB_TOL";

#[derive(Debug, Parser)]
#[command(name = "entangler-lab", version, about = "Entangler construction, class conditions and braid checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every EPR and GHZ class condition of a state file.
    Classify {
        file: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Build the entangler of a parameter file and evaluate it.
    Entangler {
        file: PathBuf,
        #[arg(long)]
        check_unitary: bool,
        #[arg(long)]
        apply_uniform: bool,
        /// Yang-Baxter residual (m = 2 only).
        #[arg(long)]
        check_ybe: bool,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Yang-Baxter, braid relation and universal R-matrix residuals.
    Braid {
        #[arg(long)]
        r_file: PathBuf,
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
}

fn tolerance(flag: Option<f64>) -> Result<f64, FileError> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| FileError::Schema(format!("{TOL_ENV}: cannot parse {s:?} as a number")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(FileError::Schema(format!("tol: must be positive and finite, got {tol}")));
    }
    Ok(tol)
}

/// Parses `args` (including the program name) and runs the command, writing
/// the report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Classify { file, tol, json } => cmd_classify(&file, tol, json),
        Command::Entangler {
            file,
            check_unitary,
            apply_uniform,
            check_ybe,
            tol,
            json,
        } => cmd_entangler(&file, check_unitary, apply_uniform, check_ybe, tol, json),
        Command::Braid {
            r_file,
            strands,
            tol,
            json,
        } => cmd_braid(&r_file, strands, tol, json),
    };
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn cmd_classify(file: &std::path::Path, tol: Option<f64>, as_json: bool) -> Result<String, FileError> {
    let tol = tolerance(tol)?;
    let (state, label) = io::load_state(file)?;
    let mut report = classify(&state, tol)?;
    report.description = label;
    let oracle = oracle_classify(&state, tol).ok();
    Ok(if as_json {
        io::render(&io::classify_json(&report, oracle.as_ref()))
    } else {
        io::classify_text(&report, oracle.as_ref())
    })
}

fn cmd_entangler(
    file: &std::path::Path,
    want_unitary: bool,
    want_apply: bool,
    want_ybe: bool,
    tol: Option<f64>,
    as_json: bool,
) -> Result<String, FileError> {
    let tol = tolerance(tol)?;
    let spec = io::load_entangler(file)?;
    if want_ybe && spec.m() != 2 {
        return Err(FileError::Schema(format!(
            "--check-ybe needs a two-subsystem entangler, file has m = {}",
            spec.m()
        )));
    }
    let r = build_r(&spec);
    let unitarity = want_unitary.then(|| check_unitary(&r, tol));
    let output = if want_apply {
        Some(apply_entangler(&spec, &uniform_input(spec.m(), spec.n())?)?)
    } else {
        None
    };
    let ybe = if want_ybe { Some(check_ybe(&r, tol)?) } else { None };
    let decomposition = decompose(&spec);
    let checks = |target| -> Result<_, FileError> {
        Ok((
            proposition_check(&spec, ClassKind::Epr, target, tol)?,
            proposition_check(&spec, ClassKind::Ghz, target, tol)?,
        ))
    };
    let coefficients = checks(EvaluationTarget::Coefficients)?;
    let produced = checks(EvaluationTarget::Output)?;

    if as_json {
        let v = json!({
            "schema_version": io::SCHEMA_VERSION,
            "command": "entangler",
            "m": spec.m(),
            "N": spec.n(),
            "tolerance": io::num(tol),
            "max_modulus_defect": io::num(spec.max_modulus_defect()),
            "unitarity": unitarity.as_ref().map(io::unitarity_json),
            "decomposition": {
                "swap_r_diagonal": decomposition.swap_r.is_exactly_diagonal(),
                "r_swap_diagonal": decomposition.r_swap.is_exactly_diagonal(),
                "ordering": decomposition.ordering,
            },
            "output_state": output.as_ref().map(|s| s.amps().iter().map(|&z| io::complex(z)).collect::<Vec<_>>()),
            "conditions": {
                "coefficients": io::proposition_json(&coefficients.0, &coefficients.1),
                "output": io::proposition_json(&produced.0, &produced.1),
            },
            "ybe": ybe.as_ref().map(io::residual_json),
        });
        return Ok(io::render(&v));
    }

    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = writeln!(s, "entangler: m = {}, N = {}", spec.m(), spec.n());
    let _ = writeln!(s, "max ||alpha| - 1|: {}", io::sci(spec.max_modulus_defect()));
    if let Some(u) = unitarity {
        let _ = writeln!(
            s,
            "unitarity: max |RR^dag - I| = {}  {}",
            io::sci(u.deviation),
            if u.unitary { "UNITARY" } else { "NOT UNITARY" }
        );
    }
    let _ = writeln!(
        s,
        "phase/swap: P.R diagonal {}, R.P diagonal {}, alpha order matches {:?}",
        decomposition.swap_r.is_exactly_diagonal(),
        decomposition.r_swap.is_exactly_diagonal(),
        decomposition.ordering
    );
    if let Some(o) = &output {
        let amps: Vec<String> = o.amps().iter().map(|z| format!("({}, {})", io::sci(z.re), io::sci(z.im))).collect();
        let _ = writeln!(s, "output on uniform input: [{}]", amps.join(", "));
    }
    for (name, (epr, ghz)) in [("coefficients", &coefficients), ("output", &produced)] {
        let _ = writeln!(s, "--- conditions on {name} ---");
        s.push_str(&io::classify_text(&ghz.report, Some(&ghz.oracle)));
        for p in [epr, ghz] {
            if let Some(e) = &p.expansions {
                let vals: Vec<String> = e.iter().map(|(q, v)| format!("{q} {}", io::sci_c(*v))).collect();
                let _ = writeln!(s, "{} expansions: {}", p.kind, vals.join(", "));
            }
        }
    }
    if let Some(y) = ybe {
        let _ = writeln!(s, "yang-baxter residual: {}  {}", io::sci(y.residual), if y.holds { "HOLDS" } else { "FAILS" });
    }
    Ok(s)
}

fn cmd_braid(file: &std::path::Path, strands: usize, tol: Option<f64>, as_json: bool) -> Result<String, FileError> {
    let tol = tolerance(tol)?;
    let r = io::load_matrix(file)?;
    let d = crate::braid::strand_dim(&r)?;
    let r = r.retag(&[d, d])?;
    let ybe = check_ybe(&r, tol)?;
    let qt = check_quasitriangular(&r, tol)?;
    let rep = StrandRep::new(r, strands)?;
    let braid = check_braid_relations(&rep, tol)?;
    if as_json {
        return Ok(io::render(&io::braid_json(&ybe, &braid, &qt, tol)));
    }
    use std::fmt::Write as _;
    let mut s = String::new();
    let _ = writeln!(s, "strand dimension: {d}  strands: {strands}");
    let _ = writeln!(s, "yang-baxter residual: {}", io::sci(ybe.residual));
    for r in &braid.far_commutation {
        let _ = writeln!(s, "relation (i)  b{} b{}: {}", r.i, r.j, io::sci(r.residual));
    }
    for r in &braid.adjacent {
        let _ = writeln!(s, "relation (ii) b{} b{}: {}", r.i, r.j, io::sci(r.residual));
    }
    let _ = writeln!(s, "universal R-matrix relation residual: {}", io::sci(qt.relation.residual));
    let _ = writeln!(s, "yang-baxter residual of swap.R: {}", io::sci(qt.braided_ybe.residual));
    Ok(s)
}
