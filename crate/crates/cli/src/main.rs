//! `weylq`: exact computation in Weyl algebras from the command line.
//!
//! Subcommands cover normal-form evaluation (`eval`), products (`mul`),
//! filtration degrees (`deg`), syzygies (`syz`), common multiples (`clm`),
//! left quasi-inverses (`qinv`), linear-system solving over Ore fraction
//! algebras (`solve`), and Hilbert-function analysis of finitely presented
//! modules (`hk`, `bezout`).
//!
//! Exit codes: 0 on success (including `SOLVED` and satisfied bounds),
//! 2 for a certified negative verdict (`UNSOLVABLE`, singular input, a
//! violated bound, or a certified absence of a syzygy), 3 when a search was
//! inconclusive within its cap (`UNDECIDED_AT_CAP`, unstabilized Hilbert
//! values), and 1 for usage, parse, or input errors.

mod files;
mod parse;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use weylq_core::bounds;
use weylq_core::hilbert::{self, HilbertError};
use weylq_core::matrix::{left_quasi_inverse, MatrixError};
use weylq_core::ore::{common_multiple, syzygy_search, OreError, Side};
use weylq_core::scalar::parse_field_tag;
use weylq_core::solve::{ansatz_solve, decide_solve, default_schedule, StageCertificate};
use weylq_core::{
    DegreeKind, FieldTag, OreFraction, SolveBudget, SolveStatus, VarSet, WeylOp,
};

use crate::files::{load_operator_lines, load_system};
use crate::parse::parse_operator;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_NEGATIVE: i32 = 2;
const EXIT_UNDECIDED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "weylq",
    version,
    about = "Exact computation in Weyl algebras and their Ore fraction algebras"
)]
struct Cli {
    /// Coefficient field for expression commands: "q" or "fp:<prime>".
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Seed for randomized searches (also read from ORE_SEED).
    #[arg(long, global = true, env = "ORE_SEED", default_value_t = 0)]
    seed: u64,
    /// Emit one line of JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Degree cap for bounded searches (syz; solve).
    #[arg(long, global = true)]
    max_degree: Option<i64>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the normal form of each expression.
    Eval {
        /// Number of variables of the ambient algebra.
        #[arg(long)]
        m: usize,
        /// Expressions in the CLI grammar.
        exprs: Vec<String>,
        /// Read one expression per line from this file instead.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Multiply expressions left to right and print the normal form.
    Mul {
        #[arg(long)]
        m: usize,
        exprs: Vec<String>,
        /// Read one expression per line from this file instead.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Print filtration degrees of an expression.
    Deg {
        #[arg(long)]
        m: usize,
        expr: String,
        /// Comma-separated derivation indices; adds the K-relative degrees.
        #[arg(long)]
        k: Option<String>,
    },
    /// Find cofactors over A^(K) combining the given operators to zero.
    Syz {
        #[arg(long)]
        m: usize,
        /// Comma-separated derivation indices of K (default: all).
        #[arg(long)]
        k: Option<String>,
        /// Side the cofactors multiply on.
        #[arg(long, default_value = "right", value_parser = ["right", "left"])]
        side: String,
        exprs: Vec<String>,
    },
    /// Find a common multiple of the given operators, with cofactors.
    Clm {
        #[arg(long)]
        m: usize,
        /// Comma-separated derivation indices of K (default: all).
        #[arg(long)]
        k: Option<String>,
        /// "right": value = b[i]*c[i]; "left": value = c[i]*b[i].
        #[arg(long, default_value = "right", value_parser = ["right", "left"])]
        side: String,
        exprs: Vec<String>,
    },
    /// Left quasi-inverse of the square matrix in a system file.
    Qinv {
        /// JSON system file; K_den is the subalgebra of the cofactors.
        #[arg(long)]
        file: PathBuf,
    },
    /// Decide solvability of the linear system in a file and solve it.
    Solve {
        /// JSON system file.
        #[arg(long)]
        file: PathBuf,
        /// "elim": complete decision; "ansatz": bounded search.
        #[arg(long, default_value = "elim", value_parser = ["elim", "ansatz"])]
        method: String,
    },
    /// Hilbert function of the module presented by a file, with its
    /// polynomial fit.
    Hk {
        /// JSON system file; rows of A are the generators.
        #[arg(long)]
        file: PathBuf,
        /// Largest order computed.
        #[arg(long, default_value_t = 8)]
        zmax: u64,
    },
    /// Hilbert analysis plus leading-coefficient bound verdicts.
    Bezout {
        /// JSON system file; rows of A are the generators.
        #[arg(long)]
        file: PathBuf,
        /// Largest order computed.
        #[arg(long, default_value_t = 8)]
        zmax: u64,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(EXIT_USAGE);
        }
    }
}

fn run(cli: &Cli) -> Result<i32, String> {
    match &cli.command {
        Cmd::Eval { m, exprs, file } => cmd_eval(cli, *m, exprs, file.as_deref(), false),
        Cmd::Mul { m, exprs, file } => cmd_eval(cli, *m, exprs, file.as_deref(), true),
        Cmd::Deg { m, expr, k } => cmd_deg(cli, *m, expr, k.as_deref()),
        Cmd::Syz { m, k, side, exprs } => cmd_syz(cli, *m, k.as_deref(), side, exprs),
        Cmd::Clm { m, k, side, exprs } => cmd_clm(cli, *m, k.as_deref(), side, exprs),
        Cmd::Qinv { file } => cmd_qinv(cli, file),
        Cmd::Solve { file, method } => cmd_solve(cli, file, method),
        Cmd::Hk { file, zmax } => cmd_hk(cli, file, *zmax, false),
        Cmd::Bezout { file, zmax } => cmd_hk(cli, file, *zmax, true),
    }
}

/// Parses the global field flag.
fn field_of(cli: &Cli) -> Result<FieldTag, String> {
    parse_field_tag(&cli.field)
        .map_err(|_| format!("invalid field {:?} (expected \"q\" or \"fp:<prime>\")", cli.field))
}

/// Parses a comma-separated list of 1-based derivation indices. `None`
/// means the full set, an empty string the empty set.
fn parse_k(spec: Option<&str>, m: usize) -> Result<VarSet, String> {
    match spec {
        None => Ok(VarSet::full(m)),
        Some(s) if s.trim().is_empty() => Ok(VarSet::empty(m)),
        Some(s) => {
            let mut indices = Vec::new();
            for part in s.split(',') {
                let i: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad K index {:?}", part.trim()))?;
                if i == 0 || i > m {
                    return Err(format!("K index {i} is not in 1..={m}"));
                }
                indices.push(i);
            }
            Ok(VarSet::from_indices(m, &indices))
        }
    }
}

fn parse_side(side: &str) -> Side {
    if side == "left" {
        Side::Left
    } else {
        Side::Right
    }
}

/// Renders a fraction as `num * (den)^-1`, or just `num` for unit
/// denominators.
fn frac_str(f: &OreFraction, m: usize, field: FieldTag) -> String {
    if *f.den() == WeylOp::one(m, field) {
        f.num().to_string()
    } else {
        format!("{} * ({})^-1", f.num(), f.den())
    }
}

fn certificate_values(certs: &[StageCertificate]) -> Value {
    Value::Array(
        certs
            .iter()
            .map(|c| {
                json!({
                    "detail": c.detail,
                    "equations": c.equations,
                    "max_entry_degree": c.max_entry_degree,
                    "stage": c.stage,
                    "unknowns": c.unknowns,
                })
            })
            .collect(),
    )
}

fn cmd_eval(
    cli: &Cli,
    m: usize,
    exprs: &[String],
    file: Option<&std::path::Path>,
    multiply: bool,
) -> Result<i32, String> {
    let field = field_of(cli)?;
    let ops: Vec<WeylOp> = match (exprs.is_empty(), file) {
        (false, None) => exprs
            .iter()
            .map(|s| parse_operator(s, m, field))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?,
        (true, Some(path)) => load_operator_lines(path, m, field)?,
        (true, None) => return Err("give expressions as arguments or via --file".to_string()),
        (false, Some(_)) => {
            return Err("give expressions as arguments or via --file, not both".to_string())
        }
    };
    if multiply {
        let product = ops
            .iter()
            .skip(1)
            .fold(ops[0].clone(), |acc, op| acc.mul(op));
        if cli.json {
            println!("{}", json!({ "result": product.to_string(), "status": "OK" }));
        } else {
            println!("{product}");
        }
    } else {
        let rendered: Vec<String> = ops.iter().map(WeylOp::to_string).collect();
        if cli.json {
            println!("{}", json!({ "results": rendered, "status": "OK" }));
        } else {
            for line in &rendered {
                println!("{line}");
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_deg(cli: &Cli, m: usize, expr: &str, kspec: Option<&str>) -> Result<i32, String> {
    let field = field_of(cli)?;
    let op = parse_operator(expr, m, field).map_err(|e| e.to_string())?;
    let bernstein = op.degree(&DegreeKind::Bernstein);
    let ord = op.degree(&DegreeKind::OrdD);
    let relative = match kspec {
        Some(spec) => {
            let k = parse_k(Some(spec), m)?;
            Some((
                op.degree(&DegreeKind::OrdOutside(k)),
                op.degree(&DegreeKind::DegWith(k)),
            ))
        }
        None => None,
    };
    if cli.json {
        println!(
            "{}",
            json!({
                "bernstein": bernstein,
                "deg_with": relative.map(|r| r.1),
                "ord": ord,
                "ord_outside": relative.map(|r| r.0),
                "status": "OK",
            })
        );
    } else {
        println!("bernstein = {bernstein}");
        println!("ord = {ord}");
        if let Some((outside, with)) = relative {
            println!("ord_outside = {outside}");
            println!("deg_with = {with}");
        }
    }
    Ok(EXIT_OK)
}

fn parse_family(exprs: &[String], m: usize, field: FieldTag) -> Result<Vec<WeylOp>, String> {
    if exprs.is_empty() {
        return Err("give at least one expression".to_string());
    }
    exprs
        .iter()
        .map(|s| parse_operator(s, m, field))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())
}

fn cmd_syz(
    cli: &Cli,
    m: usize,
    kspec: Option<&str>,
    side: &str,
    exprs: &[String],
) -> Result<i32, String> {
    let field = field_of(cli)?;
    let k = parse_k(kspec, m)?;
    let elems = parse_family(exprs, m, field)?;
    let d = elems
        .iter()
        .map(|b| b.degree(&DegreeKind::DegWith(k)).max(0) as u64)
        .max()
        .unwrap_or(0);
    let full_cap = bounds::clamp_degree(&bounds::syzygy_degree_bound(m, k.len(), elems.len(), d));
    let user_capped = cli.max_degree.is_some_and(|u| u < full_cap);
    match syzygy_search(&elems, &k, parse_side(side), cli.max_degree) {
        Some((cofactors, degree)) => {
            let rendered: Vec<String> = cofactors.iter().map(WeylOp::to_string).collect();
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "cofactors": rendered,
                        "degree": degree,
                        "side": side,
                        "status": "OK",
                    })
                );
            } else {
                println!("status: OK");
                for (i, c) in rendered.iter().enumerate() {
                    println!("c{} = {c}", i + 1);
                }
                println!("degree = {degree}");
            }
            Ok(EXIT_OK)
        }
        None => {
            let status = if user_capped { "UNDECIDED_AT_CAP" } else { "NONE" };
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "cofactors": Value::Null,
                        "degree": Value::Null,
                        "side": side,
                        "status": status,
                    })
                );
            } else {
                println!("status: {status}");
            }
            Ok(if user_capped { EXIT_UNDECIDED } else { EXIT_NEGATIVE })
        }
    }
}

fn cmd_clm(
    cli: &Cli,
    m: usize,
    kspec: Option<&str>,
    side: &str,
    exprs: &[String],
) -> Result<i32, String> {
    let field = field_of(cli)?;
    let k = parse_k(kspec, m)?;
    let elems = parse_family(exprs, m, field)?;
    match common_multiple(&elems, &k, parse_side(side)) {
        Ok((cofactors, value)) => {
            let rendered: Vec<String> = cofactors.iter().map(WeylOp::to_string).collect();
            let equation = if side == "left" {
                "value = c[i] * b[i]"
            } else {
                "value = b[i] * c[i]"
            };
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "cofactors": rendered,
                        "equation": equation,
                        "side": side,
                        "status": "OK",
                        "value": value.to_string(),
                    })
                );
            } else {
                println!("status: OK");
                for (i, c) in rendered.iter().enumerate() {
                    println!("c{} = {c}", i + 1);
                }
                println!("value = {value}");
                println!("equation: {equation}");
            }
            Ok(EXIT_OK)
        }
        Err(OreError::SearchExhausted { .. }) | Err(OreError::UndecidedAtCap { .. }) => {
            if cli.json {
                println!("{}", json!({ "status": "UNDECIDED_AT_CAP" }));
            } else {
                println!("status: UNDECIDED_AT_CAP");
            }
            Ok(EXIT_UNDECIDED)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_qinv(cli: &Cli, file: &PathBuf) -> Result<i32, String> {
    let sysf = load_system(file)?;
    let b = sysf.op_matrix()?;
    if b.rows() != b.cols() {
        return Err(format!(
            "quasi-inverse needs a square matrix, got {}x{}",
            b.rows(),
            b.cols()
        ));
    }
    match left_quasi_inverse(&b, &sysf.k_den) {
        Ok((c, diag)) => {
            let rows: Vec<Vec<String>> = (0..c.rows())
                .map(|i| c.row(i).iter().map(WeylOp::to_string).collect())
                .collect();
            let diag_rendered: Vec<String> = diag.iter().map(WeylOp::to_string).collect();
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "diagonal": diag_rendered,
                        "quasi_inverse": rows,
                        "status": "OK",
                    })
                );
            } else {
                println!("status: OK");
                for (i, row) in rows.iter().enumerate() {
                    println!("C[{}] = [{}]", i + 1, row.join(", "));
                }
                for (i, t) in diag_rendered.iter().enumerate() {
                    println!("t{} = {t}", i + 1);
                }
            }
            Ok(EXIT_OK)
        }
        Err(MatrixError::SingularInput) => {
            if cli.json {
                println!("{}", json!({ "status": "SINGULAR" }));
            } else {
                println!("status: SINGULAR");
            }
            Ok(EXIT_NEGATIVE)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_solve(cli: &Cli, file: &PathBuf, method: &str) -> Result<i32, String> {
    let sysf = load_system(file)?;
    let sys = sysf.linear_system()?;
    let outcome = if method == "ansatz" {
        let schedule: Vec<i64> = match cli.max_degree {
            Some(cap) => (0..=cap.max(0)).collect(),
            None => default_schedule(),
        };
        ansatz_solve(&sys, &schedule).map_err(|e| e.to_string())?
    } else {
        let mut budget = SolveBudget::default();
        if let Some(cap) = cli.max_degree {
            budget.max_entry_degree = cap;
        }
        decide_solve(&sys, cli.seed, &budget).map_err(|e| e.to_string())?
    };
    let (status, code) = match outcome.status {
        SolveStatus::Solved => ("SOLVED", EXIT_OK),
        SolveStatus::Unsolvable => ("UNSOLVABLE", EXIT_NEGATIVE),
        SolveStatus::UndecidedAtCap => ("UNDECIDED_AT_CAP", EXIT_UNDECIDED),
    };
    let solution: Option<Vec<String>> = outcome
        .solution
        .as_ref()
        .map(|v| v.iter().map(|f| frac_str(f, sysf.m, sysf.field)).collect());
    if cli.json {
        println!(
            "{}",
            json!({
                "certificates": certificate_values(&outcome.certificates),
                "solution": solution,
                "status": status,
            })
        );
    } else {
        println!("status: {status}");
        if let Some(sol) = &solution {
            for (i, s) in sol.iter().enumerate() {
                println!("V{} = {s}", i + 1);
            }
        }
        for c in &outcome.certificates {
            println!(
                "stage {}: equations={} unknowns={} max_entry_degree={} — {}",
                c.stage, c.equations, c.unknowns, c.max_entry_degree, c.detail
            );
        }
    }
    Ok(code)
}

fn cmd_hk(cli: &Cli, file: &PathBuf, zmax: u64, with_bounds: bool) -> Result<i32, String> {
    let sysf = load_system(file)?;
    let l = sysf.presentation()?;
    let report = match hilbert::bezout_check(&l, zmax, cli.seed) {
        Ok(report) => report,
        Err(HilbertError::NotStabilized(detail)) => {
            if cli.json {
                println!("{}", json!({ "detail": detail, "status": "NOT_STABILIZED" }));
            } else {
                println!("status: NOT_STABILIZED");
                println!("detail: {detail}");
            }
            return Ok(EXIT_UNDECIDED);
        }
        Err(e) => return Err(e.to_string()),
    };
    let (status, code) = if !with_bounds {
        ("OK", EXIT_OK)
    } else if report.bounds.satisfied {
        ("BOUND_SATISFIED", EXIT_OK)
    } else {
        ("BOUND_VIOLATED", EXIT_NEGATIVE)
    };
    let hf: Vec<Value> = report.hf.iter().map(|(z, v)| json!([z, v])).collect();
    let poly: Vec<String> = report.poly.iter().map(|c| c.to_string()).collect();
    if cli.json {
        let mut out = json!({
            "hf": hf,
            "l": report.l.to_string(),
            "monte_carlo": report.monte_carlo,
            "poly": poly,
            "status": status,
            "t": report.t,
        });
        if with_bounds {
            out["bounds"] = json!({
                "bezout": report.bounds.bezout.to_string(),
                "kolchin_sum": report.bounds.kolchin_sum,
                "satisfied": report.bounds.satisfied,
            });
        }
        println!("{out}");
    } else {
        println!("status: {status}");
        for (z, v) in &report.hf {
            println!("HF({z}) = {v}");
        }
        println!("t = {}", report.t);
        println!("l = {}", report.l);
        println!("poly = [{}]", poly.join(", "));
        println!("monte_carlo = {}", report.monte_carlo);
        if with_bounds {
            println!("bezout_bound = {}", report.bounds.bezout);
            match report.bounds.kolchin_sum {
                Some(s) => println!("kolchin_sum = {s}"),
                None => println!("kolchin_sum = n/a"),
            }
            println!("satisfied = {}", report.bounds.satisfied);
        }
    }
    Ok(code)
}
