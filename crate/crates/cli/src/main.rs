//! `covpic`: Picard groups of stacks of pointed smooth cyclic covers of the
//! line, with verification suites for the underlying computer algebra.
//!
//! Exit codes: 0 on success, 1 on domain errors (or failed verification),
//! 2 on usage errors. With `--json`, results and errors are emitted as JSON
//! on standard output; all numeric fields are exact (rationals as "p/q"
//! strings). Identical invocations produce identical bytes.

use clap::{Args, Parser, Subcommand};
use covpic_core::binary::{discriminant, BinaryForm, FormError};
use covpic_core::elimination::build_elimination;
use covpic_core::lattice::{smith_normal_form, AbelianGroup};
use covpic_core::num_traits::One;
use covpic_core::picard::{divisor_relation_matrix, picard_group, CoverParams, PicardError};
use covpic_core::rat::{parse_rational, rational_to_string};
use covpic_core::report::{discriminant_report, elimination_report, lattice_report, Report};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "covpic",
    version,
    about = "Picard groups of stacks of pointed smooth cyclic covers of the line",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Shared (r, g | d) parameter flags; g and d are mutually derivable and
/// supplying both is an error unless consistent.
#[derive(Args, Clone)]
struct ParamArgs {
    /// Degree of the cyclic cover (r >= 2).
    #[arg(long)]
    r: u32,
    /// Genus of the covering curve (g >= 2).
    #[arg(long)]
    g: Option<u32>,
    /// Degree of the branch divisor; derivable from g and vice versa.
    #[arg(long)]
    d: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Pic of the stack of n-pointed covers.
    Picgroup {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of marked points.
        #[arg(long)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Emit the solved coefficient functions phi/lambda/psi for (r, d, n).
    Phi {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of marked points (3 <= n <= rd+1).
        #[arg(long)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Discriminant of a binary form given by its coefficients.
    Disc {
        /// Comma-separated coefficients a_0,...,a_m (rationals, `p/q` allowed).
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        json: bool,
    },
    /// The divisor-relation lattice for (r, n).
    Relations {
        #[command(flatten)]
        params: ParamArgs,
        /// Number of marked points (n >= 2).
        #[arg(long)]
        n: u32,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: VerifyCommand,
    },
}

#[derive(Args, Clone)]
struct VerifyArgs {
    /// Degree of the cyclic cover.
    #[arg(long, default_value_t = 2)]
    r: u32,
    /// Genus (derivable from d).
    #[arg(long)]
    g: Option<u32>,
    /// Branch degree (derivable from g).
    #[arg(long)]
    d: Option<u32>,
    /// Number of marked points; omitted means every valid n.
    #[arg(long)]
    n: Option<u32>,
    /// Number of random trials per randomized check.
    #[arg(long, default_value_t = 20)]
    trials: u32,
    /// Seed for the deterministic random generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Round trips, homogeneity, and the lambda structure of the elimination.
    Elimination(VerifyArgs),
    /// Discriminant homogeneity, equivariance, and vanishing.
    Discriminant(VerifyArgs),
    /// Smith normal form contract and lattice quotient checks.
    Lattice(VerifyArgs),
    /// Everything above.
    All(VerifyArgs),
}

/// A domain-level failure: message plus a machine-readable code.
struct DomainError {
    code: &'static str,
    message: String,
}

impl From<PicardError> for DomainError {
    fn from(e: PicardError) -> Self {
        let code = match e {
            PicardError::EmptyStack { .. } => "empty_stack",
            PicardError::InvalidParams { .. } => "invalid_params",
            PicardError::InternalInconsistency(_) => "internal_inconsistency",
        };
        DomainError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<covpic_core::elimination::ElimError> for DomainError {
    fn from(e: covpic_core::elimination::ElimError) -> Self {
        DomainError {
            code: "elimination_error",
            message: e.to_string(),
        }
    }
}

impl From<FormError> for DomainError {
    fn from(e: FormError) -> Self {
        let code = match e {
            FormError::DegreeMismatch { .. } => "degree_mismatch",
            FormError::DegreeTooSmall { .. } => "degree_too_small",
            FormError::SingularMatrix => "singular_matrix",
        };
        DomainError {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (json, outcome) = run(cli.command);
    match outcome {
        Ok(success) => {
            if success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string(&json!({
                        "error": err.message,
                        "code": err.code,
                    }))
                    .expect("serializable")
                );
            } else {
                eprintln!("error: {}", err.message);
            }
            ExitCode::from(1)
        }
    }
}

/// Returns (json-mode, result); Ok(false) means "completed but checks
/// failed" (exit 1 without an error payload).
fn run(command: Command) -> (bool, Result<bool, DomainError>) {
    match command {
        Command::Picgroup { params, n, json } => (json, run_picgroup(params, n, json)),
        Command::Phi { params, n, json } => (json, run_phi(params, n, json)),
        Command::Disc { coeffs, json } => (json, run_disc(&coeffs, json)),
        Command::Relations { params, n, json } => (json, run_relations(params, n, json)),
        Command::Verify { suite } => {
            let json = match &suite {
                VerifyCommand::Elimination(a)
                | VerifyCommand::Discriminant(a)
                | VerifyCommand::Lattice(a)
                | VerifyCommand::All(a) => a.json,
            };
            (json, run_verify(suite))
        }
    }
}

/// Resolves (r, g?, d?) into validated parameters; both g and d present must
/// be consistent (usage error otherwise, reported by clap-style exit 2).
fn resolve_params(args: &ParamArgs, n: u32) -> Result<CoverParams, DomainError> {
    match (args.g, args.d) {
        (Some(g), Some(d)) => {
            let params = CoverParams::new(args.r, g, n)?;
            if params.d() != d {
                // Inconsistent flags are a usage error.
                clap::Error::raw(
                    clap::error::ErrorKind::ArgumentConflict,
                    format!(
                        "--g {g} and --d {d} are inconsistent for --r {}: r(r-1)d = 2g-2+2r forces d = {}\n",
                        args.r,
                        params.d()
                    ),
                )
                .exit();
            }
            Ok(params)
        }
        (Some(g), None) => Ok(CoverParams::new(args.r, g, n)?),
        (None, Some(d)) => Ok(CoverParams::from_degree(args.r, d, n)?),
        (None, None) => {
            clap::Error::raw(
                clap::error::ErrorKind::MissingRequiredArgument,
                "one of --g or --d is required\n",
            )
            .exit();
        }
    }
}

fn group_json(g: &AbelianGroup) -> Value {
    json!({
        "free_rank": g.free_rank,
        "torsion": g.torsion.iter().map(|t| t.to_string().parse::<u64>().map(Value::from).unwrap_or_else(|_| Value::from(t.to_string()))).collect::<Vec<_>>(),
    })
}

fn run_picgroup(args: ParamArgs, n: u32, json: bool) -> Result<bool, DomainError> {
    let params = resolve_params(&args, n)?;
    let result = picard_group(&params)?;
    if json {
        let value = json!({
            "r": params.r(),
            "g": params.g(),
            "n": params.n(),
            "d": params.d(),
            "free_rank": result.group.free_rank,
            "torsion": result.group.torsion.iter().map(|t| t.to_string().parse::<u64>().map(Value::from).unwrap_or_else(|_| Value::from(t.to_string()))).collect::<Vec<_>>(),
            "far": group_json(&result.far_group),
            "free_basis": result.free_basis,
            "torsion_origin": result.torsion_origin.as_str(),
        });
        println!("{}", serde_json::to_string(&value).expect("serializable"));
    } else {
        println!(
            "Pic(H(r={}, g={}, n={})) = {}",
            params.r(),
            params.g(),
            params.n(),
            result.group.render()
        );
        println!("d: {}", params.d());
        println!("far: {}", result.far_group.render());
        if result.free_basis.is_empty() {
            println!("free basis: (none)");
        } else {
            println!("free basis: {}", result.free_basis.join(", "));
        }
        println!("torsion origin: {}", result.torsion_origin.as_str());
    }
    Ok(true)
}

fn run_phi(args: ParamArgs, n: u32, json: bool) -> Result<bool, DomainError> {
    let params = resolve_params(&args, n)?;
    let data = build_elimination(params.r(), params.d(), n)?;
    let top = data.phi().len();
    if json {
        let collect = |seq: &[covpic_core::fraction::FactoredRational]| -> Vec<String> {
            (0..top).rev().map(|i| seq[i].to_string()).collect()
        };
        let value = json!({
            "r": params.r(),
            "d": params.d(),
            "n": n,
            "phi": collect(data.phi()),
            "lambda": collect(data.lambda()),
            "psi": collect(data.psi()),
        });
        println!("{}", serde_json::to_string(&value).expect("serializable"));
    } else {
        for i in (0..top).rev() {
            println!("phi[{i}]={}", data.phi()[i]);
        }
        for i in (0..top).rev() {
            println!("lambda[{i}]={}", data.lambda()[i]);
        }
        for i in (0..top).rev() {
            println!("psi[{i}]={}", data.psi()[i]);
        }
    }
    Ok(true)
}

fn run_disc(coeffs: &str, json: bool) -> Result<bool, DomainError> {
    let parsed: Result<Vec<_>, String> = coeffs.split(',').map(parse_rational).collect();
    let coefficients = parsed.map_err(|message| DomainError {
        code: "bad_coefficients",
        message,
    })?;
    if coefficients.is_empty() {
        return Err(DomainError {
            code: "bad_coefficients",
            message: "need at least one coefficient".into(),
        });
    }
    let form = BinaryForm::new(coefficients.clone());
    let value = discriminant(&form)?;
    if json {
        let out = json!({
            "degree": form.degree(),
            "coefficients": coefficients.iter().map(rational_to_string).collect::<Vec<_>>(),
            "discriminant": rational_to_string(&value),
        });
        println!("{}", serde_json::to_string(&out).expect("serializable"));
    } else {
        println!("degree: {}", form.degree());
        println!("discriminant: {}", rational_to_string(&value));
    }
    Ok(true)
}

fn run_relations(args: ParamArgs, n: u32, json: bool) -> Result<bool, DomainError> {
    if n < 2 {
        return Err(DomainError {
            code: "invalid_params",
            message: format!("relations need n >= 2, got {n}"),
        });
    }
    // g/d are accepted for symmetry and validated when present.
    if args.g.is_some() || args.d.is_some() {
        resolve_params(&args, n)?;
    } else if args.r < 2 {
        return Err(DomainError {
            code: "invalid_params",
            message: format!("need r >= 2, got {}", args.r),
        });
    }
    let matrix = divisor_relation_matrix(args.r, n);
    let snf = smith_normal_form(&matrix);
    let rank = snf.rank();
    let torsion_free = snf.invariant_factors().iter().all(|f| f.is_one());
    let quotient_rank = matrix.ncols() - rank;
    if json {
        let value = json!({
            "r": args.r,
            "n": n,
            "columns": matrix.ncols(),
            "rows": matrix.nrows(),
            "rank": rank,
            "quotient_free_rank": quotient_rank,
            "quotient_torsion_free": torsion_free,
        });
        println!("{}", serde_json::to_string(&value).expect("serializable"));
    } else {
        println!("divisor classes: {}", matrix.ncols());
        println!("relation rows: {}", matrix.nrows());
        println!("relation rank: {rank}");
        println!(
            "quotient: {}{}",
            AbelianGroup::free(quotient_rank).render(),
            if torsion_free { "" } else { " (torsion!)" }
        );
    }
    Ok(true)
}

fn run_verify(suite: VerifyCommand) -> Result<bool, DomainError> {
    match suite {
        VerifyCommand::Elimination(args) => {
            let reports = elimination_reports(&args)?;
            Ok(emit_reports(&reports, &args))
        }
        VerifyCommand::Discriminant(args) => {
            let rd = resolve_rd(&args)?;
            let report = discriminant_report(rd as usize, args.trials, args.seed);
            Ok(emit_reports(&[report], &args))
        }
        VerifyCommand::Lattice(args) => {
            let report = lattice_report(args.trials.max(30), args.seed);
            Ok(emit_reports(&[report], &args))
        }
        VerifyCommand::All(args) => {
            let mut reports = elimination_reports(&args)?;
            let rd = resolve_rd(&args)?;
            reports.push(discriminant_report(rd as usize, args.trials, args.seed));
            reports.push(lattice_report(args.trials.max(30), args.seed));
            Ok(emit_reports(&reports, &args))
        }
    }
}

fn resolve_rd(args: &VerifyArgs) -> Result<u32, DomainError> {
    let params = resolve_params(
        &ParamArgs {
            r: args.r,
            g: args.g,
            d: args.d,
        },
        0,
    )?;
    Ok(params.rd())
}

fn elimination_reports(args: &VerifyArgs) -> Result<Vec<Report>, DomainError> {
    let params = resolve_params(
        &ParamArgs {
            r: args.r,
            g: args.g,
            d: args.d,
        },
        0,
    )?;
    let rd = params.rd();
    let ns: Vec<u32> = match args.n {
        Some(n) => vec![n],
        None => (3..=rd + 1).collect(),
    };
    let mut reports = Vec::new();
    for n in ns {
        reports.push(elimination_report(
            params.r(),
            params.d(),
            n,
            args.trials,
            args.seed,
        )?);
    }
    Ok(reports)
}

/// Prints reports deterministically (ordered by case, not completion) and
/// returns whether everything passed.
fn emit_reports(reports: &[Report], args: &VerifyArgs) -> bool {
    let all_passed = reports.iter().all(Report::all_passed);
    if args.json {
        let value = json!({
            "seed": args.seed,
            "trials": args.trials,
            "all_passed": all_passed,
            "reports": reports.iter().map(|r| json!({
                "suite": r.title,
                "checks": r.checks.iter().map(|c| json!({
                    "name": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string(&value).expect("serializable"));
    } else {
        println!("seed: {}", args.seed);
        println!("trials: {}", args.trials);
        for report in reports {
            println!("suite: {}", report.title);
            for check in &report.checks {
                println!("  {check}");
            }
        }
        if all_passed {
            println!("ALL CHECKS PASSED");
        } else {
            println!("CHECKS FAILED");
        }
    }
    all_passed
}
