//! Command-line front end: run verification suites, analyse field
//! expressions, and report event-state observables.
//!
//! Exit codes: 0 when every case passes, 1 when any case or state check
//! fails, 2 on usage errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use confray::event::EventState;
use confray::parser::{parse_vector_field, render_vector_field};
use confray::scalar::Scalar;
use confray::suites::{
    emit_report, run_suite, EngineMode, ReportFormat, StructureFault, SuiteConfig, SuiteError,
    SuiteName,
};
use confray::vecfield::{conformal_factor, decompose_in_basis, GeneratorKind};

/// Verification front end for the conformal light-ray engine.
#[derive(Parser, Debug)]
#[command(name = "confray", version, disable_help_subcommand = true)]
struct Cli {
    /// Suite to run: algebra, killing, rays, canonical, event, shifts,
    /// consistency, conformal-factor, or all
    #[arg(long, value_name = "NAME")]
    suite: Option<String>,

    /// Seed for the pseudo-random case generators
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,

    /// Number of sampled cases in the randomised suites
    #[arg(long, value_name = "N", default_value_t = 1000)]
    count: usize,

    /// Casimir parameter as a rational, e.g. 1 or 7/3
    #[arg(long, value_name = "p/q", default_value = "1")]
    alpha: String,

    /// Arithmetic mode: exact or float
    #[arg(long, value_name = "MODE", default_value = "exact")]
    mode: String,

    /// Report format: text or json
    #[arg(long, value_name = "FORMAT", default_value = "text")]
    format: String,

    /// Parse a vector-field expression (or generator keyword) and report
    /// its canonical form, conformal factor, and basis decomposition
    #[arg(long, value_name = "EXPR")]
    field: Option<String>,

    /// Load a state file (JSON: {"alpha": "p/q", "rays": [...]}) and report
    /// its observables
    #[arg(long, value_name = "FILE")]
    state: Option<PathBuf>,
}

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    let format = match cli.format.parse::<ReportFormat>() {
        Ok(format) => format,
        Err(err) => return usage_error(&err),
    };
    let alpha = match cli.alpha.parse::<Scalar>() {
        Ok(alpha) if !alpha.is_negative() => alpha,
        Ok(alpha) => {
            return usage_error(&SuiteError::Config {
                message: format!("alpha must be nonnegative, got {alpha}"),
            })
        }
        Err(err) => {
            return usage_error(&SuiteError::Config {
                message: format!("bad --alpha: {err}"),
            })
        }
    };

    let actions = [
        cli.suite.is_some(),
        cli.field.is_some(),
        cli.state.is_some(),
    ];
    if actions.iter().filter(|&&on| on).count() != 1 {
        eprintln!("confray: pass exactly one of --suite, --field, or --state (see --help)");
        return EXIT_USAGE;
    }

    if let Some(name) = &cli.suite {
        return run_suite_action(&cli, name, alpha, format);
    }
    if let Some(expr) = &cli.field {
        return field_action(expr, format);
    }
    let path = cli.state.as_ref().expect("state is the remaining action");
    state_action(path, format)
}

fn usage_error(err: &dyn std::fmt::Display) -> u8 {
    eprintln!("confray: {err}");
    EXIT_USAGE
}

fn run_suite_action(cli: &Cli, name: &str, alpha: Scalar, format: ReportFormat) -> u8 {
    let suite = match name.parse::<SuiteName>() {
        Ok(suite) => suite,
        Err(err) => return usage_error(&err),
    };
    let mode = match cli.mode.parse::<EngineMode>() {
        Ok(mode) => mode,
        Err(err) => return usage_error(&err),
    };
    let fault = match structure_fault_from_env() {
        Ok(fault) => fault,
        Err(message) => return usage_error(&message),
    };
    let config = SuiteConfig {
        seed: cli.seed,
        count: cli.count,
        alpha,
        mode,
        fault,
        ..SuiteConfig::default()
    };
    let result = match run_suite(suite, &config) {
        Ok(result) => result,
        Err(err) => return usage_error(&err),
    };
    print!("{}", emit_report(&result, format));
    if format == ReportFormat::Json {
        println!();
    }
    if let Some(wall) = result.wall {
        eprintln!("# wall time: {wall:?}");
    }
    if result.passed() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

/// CONFRAY_INJECT_FAULT="A,B" perturbs the expected structure constant of
/// the basis pair (A, B) in the algebra suite, forcing a reported failure.
/// Exists so the failure path can be exercised end to end.
fn structure_fault_from_env() -> Result<Option<StructureFault>, String> {
    let Ok(pair) = std::env::var("CONFRAY_INJECT_FAULT") else {
        return Ok(None);
    };
    let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
    let parsed = if parts.len() == 2 {
        GeneratorKind::from_name(parts[0]).zip(GeneratorKind::from_name(parts[1]))
    } else {
        None
    };
    match parsed {
        Some((a, b)) => Ok(Some(StructureFault { a, b })),
        None => Err(format!(
            "CONFRAY_INJECT_FAULT must be two generator names like \"C1,P2\", got {pair:?}"
        )),
    }
}

fn field_action(expr: &str, format: ReportFormat) -> u8 {
    let parsed = match parse_vector_field(expr) {
        Ok(parsed) => parsed,
        Err(err) => {
            eprintln!("confray: {err}");
            return EXIT_USAGE;
        }
    };
    for warning in &parsed.warnings {
        eprintln!("# warning: {warning}");
    }
    let field = &parsed.field;
    let factor = conformal_factor(field);
    let decomposition = decompose_in_basis(field);

    match format {
        ReportFormat::Json => {
            let coefficients = decomposition.as_ref().ok().map(|coeffs| {
                let mut map = serde_json::Map::new();
                for (k, coeff) in coeffs.iter().enumerate() {
                    if !coeff.is_zero() {
                        map.insert(
                            GeneratorKind::ALL[k].name().to_owned(),
                            serde_json::to_value(coeff).unwrap(),
                        );
                    }
                }
                map
            });
            let doc = serde_json::json!({
                "render": render_vector_field(field),
                "degree": field.total_degree(),
                "conformal": factor.is_ok(),
                "conformal_factor": factor.as_ref().ok().map(|l| l.to_string()),
                "conformal_residual": factor.as_ref().err().map(|e| e.residual.to_string()),
                "in_basis_span": decomposition.is_ok(),
                "basis_decomposition": coefficients,
                "warnings": parsed.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        ReportFormat::Text => {
            println!("field:  {}", render_vector_field(field));
            match field.total_degree() {
                Some(degree) => println!("degree: {degree}"),
                None => println!("degree: (zero field)"),
            }
            match &factor {
                Ok(lambda) => println!("conformal factor: {lambda}"),
                Err(err) => println!("not conformal; residual: {}", err.residual),
            }
            match &decomposition {
                Ok(coeffs) => {
                    let mut line = String::new();
                    for (k, coeff) in coeffs.iter().enumerate() {
                        if !coeff.is_zero() {
                            let _ = write!(line, "{}·{} ", coeff, GeneratorKind::ALL[k]);
                        }
                    }
                    if line.is_empty() {
                        line.push('0');
                    }
                    println!("basis decomposition: {}", line.trim_end());
                }
                Err(_) => println!("basis decomposition: outside the 15-generator span"),
            }
        }
    }
    EXIT_OK
}

fn state_action(path: &PathBuf, format: ReportFormat) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("confray: cannot read {}: {err}", path.display());
            return EXIT_FAIL;
        }
    };
    let state: EventState = match serde_json::from_str(&text) {
        Ok(state) => state,
        Err(err) => {
            eprintln!("confray: invalid state file {}: {err}", path.display());
            return EXIT_FAIL;
        }
    };
    let report = state.report();
    match format {
        ReportFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
        ReportFormat::Text => {
            println!("momentum total (lower): {}", report.momentum_total);
            println!("mass squared:           {}", report.mass_squared);
            println!("position:               {}", report.position);
            println!("dilatation total:       {}", report.dilatation_total);
            println!("intersection residual:  {}", report.intersection_residual);
            println!("quantum correction:     {}", report.quantum_correction);
            println!(
                "correction form:        {}",
                if report.correction_form_exact {
                    "exact (two intersecting rays)"
                } else {
                    "applied as a flagged approximation"
                }
            );
        }
    }
    EXIT_OK
}
