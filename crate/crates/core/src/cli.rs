//! Command-line front end.
//!
//! Exit codes: 0 success, 2 parse or usage error, 3 a checked statement
//! failed (or the input is not a Lie algebra), 4 enumeration budget
//! exceeded, 1 internal error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::bounds::{
    admissible_depth, below_log2, bound_polynomial, bound_table, check_degree_theorem, check_solvability_theorem,
    TheoremCheckReport,
};
use crate::campaign::{self, Suite};
use crate::constructions::{catalog, jacobson};
use crate::derivation::{ad, d_closure, derivation_algebra, DerivationMap};
use crate::error::{Error, Result};
use crate::format::{parse_algebra_unvalidated, parse_matrix};
use crate::liealg::{IdealHandle, LieAlgebra};
use crate::linalg::{Matrix, Subspace};
use crate::radical::{self, is_characteristic, radical_bruteforce, solvable_radical, verify_witness, Witness};
use crate::report::{ReportDocument, Status};
use crate::scalar::{FieldSpec, Scalar};

/// Environment variable holding the default enumeration budget.
pub const BUDGET_ENV: &str = "LIEDER_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "lieder",
    version,
    about = "Exact computations with finite-dimensional Lie algebras"
)]
pub struct Cli {
    /// Print the JSON report document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report document to this file.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct AlgebraArgs {
    /// Algebra file, or a catalog name such as sl2, heisenberg, affine,
    /// abelian:3, borel:3, jacobson:5, or sums like sl2+heisenberg.
    algebra: String,
    /// Field for catalog names: Q or GF(p). Defaults to Q (GF(p) for
    /// jacobson:p).
    #[arg(long)]
    field: Option<FieldSpec>,
}

#[derive(Debug, clap::Args)]
struct BudgetArg {
    /// Maximum number of vectors to enumerate over GF(p); defaults to
    /// $LIEDER_BUDGET or 1000000.
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check antisymmetry and the Jacobi identity.
    Validate(AlgebraArgs),
    /// Derived series of an ideal.
    Series {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// full, derived:k, span:i,j,... (1-based, must be an ideal) or radical.
        #[arg(long, default_value = "full")]
        ideal: String,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Basis and dimension of the derivation algebra.
    Der(AlgebraArgs),
    /// The solvable radical.
    Radical {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Whether the solvable radical is invariant under all derivations.
    Characteristic {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// The ideals J_m = I + D(I) + ... + D^m(I) for m <= k.
    Dclosure {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Derivation file, ad:i (inner derivation of e_i) or der:i
        /// (i-th basis element of Der(L)), 1-based.
        #[arg(long)]
        derivation: String,
        #[arg(long, default_value = "full")]
        ideal: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Table of the derived-length bound f_n(k).
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        kmax: usize,
    },
    /// The characteristic-p algebra sl2 ⊗ F[t]/(t^p) whose radical is not
    /// characteristic.
    Counterexample {
        #[arg(long)]
        p: u64,
        /// Also recompute the radical by enumeration.
        #[arg(long)]
        bruteforce: bool,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Run a seeded randomized campaign.
    Check {
        /// solvability, degree, lemma2 or key.
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of instances (per field family for solvability).
        #[arg(long)]
        count: Option<usize>,
    },
}

/// Result of a command before rendering.
struct Outcome {
    command: &'static str,
    inputs: Vec<String>,
    violation: bool,
    results: serde_json::Value,
    text: String,
}

/// Runs the CLI on `args` (including the program name), writing to
/// stdout and stderr, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let command = command_name(&cli.command);
    match execute(&cli.command) {
        Ok(outcome) => {
            let status = if outcome.violation {
                Status::Violation
            } else {
                Status::Ok
            };
            let doc = ReportDocument::new(outcome.command, &outcome.inputs, status, outcome.results);
            if let Err(code) = emit(&cli, &doc, &outcome.text) {
                return code;
            }
            if outcome.violation {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            }
        }
        Err(err) => {
            let code = exit_code(&err);
            eprintln!("error: {err}");
            let results = json!({ "error": err.to_string(), "exit_code": code });
            let doc = ReportDocument::new(command, &[], Status::Error, results);
            if cli.json {
                print!("{}", doc.to_json());
            }
            if let Some(path) = &cli.out {
                let _ = std::fs::write(path, doc.to_json());
            }
            code
        }
    }
}

fn emit(cli: &Cli, doc: &ReportDocument, text: &str) -> std::result::Result<(), i32> {
    if cli.json {
        print!("{}", doc.to_json());
    } else {
        print!("{text}");
    }
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, doc.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return Err(EXIT_USAGE);
        }
    }
    Ok(())
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::InvalidAlgebra(_) => EXIT_VIOLATION,
        Error::Inconsistent(_) | Error::DivisionByZero | Error::Singular => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Validate(_) => "validate",
        Command::Series { .. } => "series",
        Command::Der(_) => "der",
        Command::Radical { .. } => "radical",
        Command::Characteristic { .. } => "characteristic",
        Command::Dclosure { .. } => "dclosure",
        Command::Bounds { .. } => "bounds",
        Command::Counterexample { .. } => "counterexample",
        Command::Check { .. } => "check",
    }
}

fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Validate(a) => cmd_validate(a),
        Command::Series { algebra, ideal, budget } => cmd_series(algebra, ideal, budget),
        Command::Der(a) => cmd_der(a),
        Command::Radical { algebra, budget } => cmd_radical(algebra, budget),
        Command::Characteristic { algebra, budget } => cmd_characteristic(algebra, budget),
        Command::Dclosure {
            algebra,
            derivation,
            ideal,
            k,
            budget,
        } => cmd_dclosure(algebra, derivation, ideal, *k, budget),
        Command::Bounds { n, kmax } => cmd_bounds(*n, *kmax),
        Command::Counterexample { p, bruteforce, budget } => cmd_counterexample(*p, *bruteforce, budget),
        Command::Check { suite, seed, count } => cmd_check(*suite, *seed, *count),
    }
}

impl BudgetArg {
    fn resolve(&self) -> Result<u128> {
        if let Some(b) = self.budget {
            return Ok(b);
        }
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("{BUDGET_ENV}=`{v}` is not a number"))),
            Err(_) => Ok(radical::DEFAULT_BUDGET),
        }
    }
}

/// Reads an algebra file or builds a catalog algebra, returning it with
/// a description of the input for the report digest.
fn load_unvalidated(args: &AlgebraArgs) -> Result<(LieAlgebra, String)> {
    let path = Path::new(&args.algebra);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        let algebra = parse_algebra_unvalidated(&text)?;
        if let Some(f) = args.field {
            if f != algebra.field() {
                return Err(Error::FieldMismatch {
                    left: f,
                    right: algebra.field(),
                });
            }
        }
        let label = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok((algebra.with_label(label), format!("file:{text}")))
    } else {
        let field = args.field.unwrap_or(FieldSpec::RATIONALS);
        let algebra = catalog(&args.algebra, field)?.with_label(args.algebra.clone());
        let field = algebra.field();
        Ok((algebra, format!("catalog:{} {field}", args.algebra)))
    }
}

fn load(args: &AlgebraArgs) -> Result<(Arc<LieAlgebra>, String)> {
    let (algebra, input) = load_unvalidated(args)?;
    algebra.validate().map_err(Error::InvalidAlgebra)?;
    Ok((Arc::new(algebra), input))
}

fn parse_indices(list: &str, dim: usize) -> Result<Vec<usize>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| match s.trim().parse::<usize>() {
            Ok(i) if (1..=dim).contains(&i) => Ok(i - 1),
            _ => Err(Error::InvalidParameter(format!(
                "basis index `{s}` is not in 1..={dim}"
            ))),
        })
        .collect()
}

fn select_ideal(algebra: &Arc<LieAlgebra>, selector: &str, budget: &BudgetArg) -> Result<IdealHandle> {
    let (kind, arg) = selector.split_once(':').unwrap_or((selector, ""));
    match (kind, arg) {
        ("full", "") => Ok(IdealHandle::full(algebra)),
        ("radical", "") => Ok(solvable_radical(algebra, budget.resolve()?)?.0),
        ("derived", k) => {
            let k = k
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad selector `{selector}`")))?;
            Ok(IdealHandle::full(algebra).derived_term(k))
        }
        ("span", list) => {
            let indices = parse_indices(list, algebra.dim())?;
            IdealHandle::new(algebra, Subspace::coordinate(algebra.field(), algebra.dim(), &indices)?)
        }
        _ => Err(Error::InvalidParameter(format!(
            "unknown ideal selector `{selector}` (expected full, derived:k, span:i,j,... or radical)"
        ))),
    }
}

fn select_derivation(algebra: &Arc<LieAlgebra>, source: &str) -> Result<(DerivationMap, String)> {
    let dim = algebra.dim();
    let one_index = |arg: &str| -> Result<usize> {
        match arg.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(Error::InvalidParameter(format!(
                "expected one index >= 1 in `{source}`"
            ))),
        }
    };
    if let Some(arg) = source.strip_prefix("ad:") {
        let i = one_index(arg)?;
        if i >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {} is not in 1..={dim}",
                i + 1
            )));
        }
        return Ok((ad(algebra, &algebra.basis_vector(i))?, source.to_string()));
    }
    if let Some(arg) = source.strip_prefix("der:") {
        let i = one_index(arg)?;
        let basis = derivation_algebra(algebra);
        let m = basis.get(i).cloned().ok_or_else(|| {
            Error::InvalidParameter(format!("Der(L) has dimension {}, no element {}", basis.len(), i + 1))
        })?;
        return Ok((DerivationMap::new(algebra, m)?, source.to_string()));
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| Error::InvalidParameter(format!("cannot read derivation {source}: {e}")))?;
    let m = parse_matrix(&text, algebra.field(), dim)?;
    Ok((DerivationMap::new(algebra, m)?, format!("file:{text}")))
}

fn fmt_vector(v: &[Scalar]) -> String {
    let cells: Vec<String> = v.iter().map(Scalar::to_string).collect();
    format!("[{}]", cells.join(" "))
}

fn fmt_space(out: &mut String, indent: &str, space: &Subspace) {
    if space.is_zero() {
        let _ = writeln!(out, "{indent}(zero)");
    }
    for row in space.basis() {
        let _ = writeln!(out, "{indent}{}", fmt_vector(row));
    }
}

fn fmt_matrix(out: &mut String, indent: &str, m: &Matrix) {
    for r in 0..m.rows() {
        let _ = writeln!(out, "{indent}{}", fmt_vector(m.row(r)));
    }
}

fn fmt_length(len: Option<usize>) -> String {
    len.map_or_else(|| "not solvable".to_string(), |n| n.to_string())
}

fn header(out: &mut String, algebra: &LieAlgebra) {
    let _ = writeln!(
        out,
        "algebra: {} over {}, dim {}",
        algebra.label(),
        algebra.field(),
        algebra.dim()
    );
}

fn cmd_validate(args: &AlgebraArgs) -> Result<Outcome> {
    let (algebra, input) = load_unvalidated(args)?;
    let violation = algebra.validate().err();
    let mut text = String::new();
    header(&mut text, &algebra);
    match &violation {
        None => text.push_str("valid: yes\n"),
        Some(v) => {
            let _ = writeln!(text, "valid: no\nviolation: {v}");
        }
    }
    Ok(Outcome {
        command: "validate",
        inputs: vec![input],
        violation: violation.is_some(),
        results: json!({
            "algebra": algebra.label(),
            "field": algebra.field(),
            "dim": algebra.dim(),
            "valid": violation.is_none(),
            "violation": violation,
        }),
        text,
    })
}

fn cmd_series(args: &AlgebraArgs, selector: &str, budget: &BudgetArg) -> Result<Outcome> {
    let (algebra, input) = load(args)?;
    let ideal = select_ideal(&algebra, selector, budget)?;
    let series = ideal.derived_series();
    let dims: Vec<usize> = series.iter().map(IdealHandle::dim).collect();
    let length = ideal.derived_length();
    let mut text = String::new();
    header(&mut text, &algebra);
    let _ = writeln!(text, "ideal: {selector} (dim {})", ideal.dim());
    let dims_text: Vec<String> = dims.iter().map(usize::to_string).collect();
    let _ = writeln!(text, "derived series dims: {}", dims_text.join(" -> "));
    let _ = writeln!(text, "derived length: {}", fmt_length(length));
    for (k, term) in series.iter().enumerate() {
        let _ = writeln!(text, "I^({k}):");
        fmt_space(&mut text, "  ", term.space());
    }
    Ok(Outcome {
        command: "series",
        inputs: vec![input, format!("ideal={selector}")],
        violation: false,
        results: json!({
            "ideal": selector,
            "ideal_dim": ideal.dim(),
            "series_dims": dims,
            "derived_length": length,
            "solvable": length.is_some(),
            "series": series.iter().map(IdealHandle::space).collect::<Vec<_>>(),
        }),
        text,
    })
}

fn cmd_der(args: &AlgebraArgs) -> Result<Outcome> {
    let (algebra, input) = load(args)?;
    let basis = derivation_algebra(&algebra);
    let inner = algebra.dim() - algebra.center().dim();
    let mut text = String::new();
    header(&mut text, &algebra);
    let _ = writeln!(text, "Der(L): dim {}", basis.len());
    let _ = writeln!(text, "inner derivations: dim {inner}");
    for (i, m) in basis.iter().enumerate() {
        let _ = writeln!(text, "D{}:", i + 1);
        fmt_matrix(&mut text, "  ", m);
    }
    Ok(Outcome {
        command: "der",
        inputs: vec![input],
        violation: false,
        results: json!({
            "dim": basis.len(),
            "inner_dim": inner,
            "basis": basis,
        }),
        text,
    })
}

fn cmd_radical(args: &AlgebraArgs, budget: &BudgetArg) -> Result<Outcome> {
    let (algebra, input) = load(args)?;
    let (radical, method) = solvable_radical(&algebra, budget.resolve()?)?;
    let length = radical.derived_length();
    let mut text = String::new();
    header(&mut text, &algebra);
    let _ = writeln!(text, "method: {method:?}");
    let _ = writeln!(text, "radical: dim {}", radical.dim());
    let _ = writeln!(text, "derived length: {}", fmt_length(length));
    fmt_space(&mut text, "  ", radical.space());
    Ok(Outcome {
        command: "radical",
        inputs: vec![input],
        violation: false,
        results: json!({
            "method": method,
            "dim": radical.dim(),
            "derived_length": length,
            "radical": radical.space(),
        }),
        text,
    })
}

#[derive(Serialize)]
struct WitnessReport<'a> {
    /// 1-based index into the Der(L) basis.
    derivation: usize,
    matrix: &'a Matrix,
    vector: &'a [Scalar],
    image: &'a [Scalar],
    verified: bool,
}

fn witness_report<'a>(w: &'a Witness, verified: bool) -> WitnessReport<'a> {
    WitnessReport {
        derivation: w.derivation_index + 1,
        matrix: &w.derivation,
        vector: &w.vector,
        image: &w.image,
        verified,
    }
}

fn fmt_witness(text: &mut String, w: &Witness, verified: bool) {
    let _ = writeln!(text, "witness: D{} of the Der(L) basis", w.derivation_index + 1);
    let _ = writeln!(text, "  v   = {}", fmt_vector(&w.vector));
    let _ = writeln!(text, "  D v = {} (outside the radical)", fmt_vector(&w.image));
    let _ = writeln!(text, "  verified: {}", if verified { "yes" } else { "no" });
}

fn cmd_characteristic(args: &AlgebraArgs, budget: &BudgetArg) -> Result<Outcome> {
    let (algebra, input) = load(args)?;
    let (radical, method) = solvable_radical(&algebra, budget.resolve()?)?;
    let length = radical
        .derived_length()
        .ok_or_else(|| Error::Inconsistent("radical is not solvable".into()))?;
    let verdict = is_characteristic(&radical);
    let verified = match &verdict.witness {
        Some(w) => verify_witness(&radical, w)?,
        None => false,
    };
    // S(L) is characteristic in characteristic 0, and over GF(p) when its
    // derived length is below log2 p.
    let hypotheses_met = below_log2(length, algebra.field().characteristic());
    let violation = hypotheses_met && !verdict.characteristic;
    let mut text = String::new();
    header(&mut text, &algebra);
    let _ = writeln!(
        text,
        "radical: dim {} ({method:?}), derived length {length}",
        radical.dim()
    );
    let _ = writeln!(text, "Der(L): dim {}", verdict.der_dim);
    let _ = writeln!(text, "characteristic: {}", verdict.characteristic);
    let _ = writeln!(
        text,
        "theorem hypotheses (char 0 or derived length < log2 p): {}",
        if hypotheses_met { "met" } else { "not met" }
    );
    if let Some(w) = &verdict.witness {
        fmt_witness(&mut text, w, verified);
    }
    Ok(Outcome {
        command: "characteristic",
        inputs: vec![input],
        violation,
        results: json!({
            "method": method,
            "radical": radical.space(),
            "radical_dim": radical.dim(),
            "derived_length": length,
            "der_dim": verdict.der_dim,
            "characteristic": verdict.characteristic,
            "hypotheses_met": hypotheses_met,
            "witness": verdict.witness.as_ref().map(|w| witness_report(w, verified)),
        }),
        text,
    })
}

fn fmt_check(text: &mut String, r: &TheoremCheckReport) {
    let _ = writeln!(
        text,
        "  {:?} k={}: observed {} vs bound {} ({}) -> {}",
        r.theorem,
        r.context.k,
        fmt_length(r.observed),
        r.bound,
        if r.hypotheses_met {
            "hypotheses met"
        } else {
            "hypotheses not met"
        },
        if r.holds { "holds" } else { "fails" }
    );
}

fn cmd_dclosure(args: &AlgebraArgs, derivation: &str, selector: &str, k: usize, budget: &BudgetArg) -> Result<Outcome> {
    let (algebra, input) = load(args)?;
    let (d, d_input) = select_derivation(&algebra, derivation)?;
    let ideal = select_ideal(&algebra, selector, budget)?;
    let closure = d_closure(&ideal, &d, k)?;
    let chain: Vec<serde_json::Value> = (0..=k)
        .map(|m| {
            let term = closure.term(m);
            json!({ "m": m, "dim": term.dim(), "derived_length": term.derived_length() })
        })
        .collect();
    let mut checks = Vec::new();
    if ideal.derived_length().is_some() {
        checks.push(check_solvability_theorem(&ideal, &d)?);
        if algebra.field().is_rationals() {
            checks.extend(check_degree_theorem(&ideal, &d, k)?);
        }
    }
    let violation = checks.iter().any(TheoremCheckReport::is_violation);
    let mut text = String::new();
    header(&mut text, &algebra);
    let _ = writeln!(
        text,
        "ideal: {selector} (dim {}), derivation: {derivation}",
        ideal.dim()
    );
    for m in 0..=k {
        let term = closure.term(m);
        let _ = writeln!(
            text,
            "J_{m}: dim {}, derived length {}",
            term.dim(),
            fmt_length(term.derived_length())
        );
    }
    match closure.stabilized_at {
        Some(m) => {
            let _ = writeln!(text, "stabilized at J_{m}");
        }
        None => text.push_str("not stabilized within k\n"),
    }
    if !checks.is_empty() {
        text.push_str("bound checks:\n");
        checks.iter().for_each(|r| fmt_check(&mut text, r));
    }
    Ok(Outcome {
        command: "dclosure",
        inputs: vec![input, d_input, format!("ideal={selector}"), format!("k={k}")],
        violation,
        results: json!({
            "ideal": selector,
            "ideal_dim": ideal.dim(),
            "ideal_length": ideal.derived_length(),
            "k": k,
            "chain": chain,
            "closure": closure.ideal().space(),
            "stabilized_at": closure.stabilized_at,
            "checks": checks,
        }),
        text,
    })
}

fn cmd_bounds(n: usize, kmax: usize) -> Result<Outcome> {
    let table = bound_table(n, kmax)?;
    let coeffs: Vec<String> = bound_polynomial(n)?.iter().map(ToString::to_string).collect();
    let mut text = format!("f_{n}(k), {}\n", table.base_rule);
    text.push_str("k\tf_n(k)\n");
    for row in &table.rows {
        let _ = writeln!(text, "{}\t{}", row.k, row.bound);
    }
    let _ = writeln!(
        text,
        "polynomial coefficients (constant term first): {}",
        coeffs.join(" ")
    );
    Ok(Outcome {
        command: "bounds",
        inputs: vec![format!("n={n}"), format!("kmax={kmax}")],
        violation: false,
        results: json!({ "table": table, "polynomial": coeffs }),
        text,
    })
}

fn floor_log2(p: u64) -> usize {
    (u64::BITS - 1 - p.leading_zeros()) as usize
}

fn cmd_counterexample(p: u64, bruteforce: bool, budget: &BudgetArg) -> Result<Outcome> {
    let c = jacobson(p)?;
    let algebra = &c.algebra;
    let radical = &c.radical;
    let length = radical.derived_length();
    let expected_length = floor_log2(p) + 1;
    let expected_dim = 3 * (p as usize - 1);
    let verdict = is_characteristic(radical);
    let verified = match &verdict.witness {
        Some(w) => verify_witness(radical, w)?,
        None => false,
    };
    let canonical_image = c.derivation.apply(&algebra.basis_vector(3))?;
    let canonical_escapes = !radical.space().contains(&canonical_image)?;
    let depth = admissible_depth(p)?;
    let solvability = check_solvability_theorem(radical, &c.derivation)?;
    let bruteforce_agrees = if bruteforce {
        Some(radical_bruteforce(algebra, budget.resolve()?)? == *radical)
    } else {
        None
    };
    let holds = radical.dim() == expected_dim
        && length == Some(expected_length)
        && !verdict.characteristic
        && verified
        && canonical_escapes
        && bruteforce_agrees != Some(false);

    let mut text = String::new();
    header(&mut text, algebra);
    let _ = writeln!(
        text,
        "radical: dim {} of {} (expected {expected_dim})",
        radical.dim(),
        algebra.dim()
    );
    let _ = writeln!(
        text,
        "radical derived length: {} (expected floor(log2 {p}) + 1 = {expected_length})",
        fmt_length(length)
    );
    let _ = writeln!(text, "characteristic: {}", verdict.characteristic);
    if let Some(w) = &verdict.witness {
        fmt_witness(&mut text, w, verified);
    }
    let _ = writeln!(
        text,
        "D = id ⊗ d/dt sends e⊗t to {} (outside the radical: {canonical_escapes})",
        fmt_vector(&canonical_image)
    );
    let _ = writeln!(
        text,
        "binomial threshold: {p} divides none of C(2^k, 2^(k-1)) for k <= {depth}; the radical has length {}",
        fmt_length(length)
    );
    let _ = writeln!(
        text,
        "s(I + D(I)) for I = radical, D = d/dt: {} (bound 2n = {}, hypotheses {})",
        fmt_length(solvability.observed),
        solvability.bound,
        if solvability.hypotheses_met { "met" } else { "not met" }
    );
    if let Some(agrees) = bruteforce_agrees {
        let _ = writeln!(text, "enumerated radical agrees: {agrees}");
    }
    let _ = writeln!(text, "result: {}", if holds { "reproduced" } else { "NOT reproduced" });
    Ok(Outcome {
        command: "counterexample",
        inputs: vec![format!("p={p}"), format!("bruteforce={bruteforce}")],
        violation: !holds,
        results: json!({
            "p": p,
            "dim": algebra.dim(),
            "radical_dim": radical.dim(),
            "radical": radical.space(),
            "derived_length": length,
            "expected_derived_length": expected_length,
            "characteristic": verdict.characteristic,
            "der_dim": verdict.der_dim,
            "witness": verdict.witness.as_ref().map(|w| witness_report(w, verified)),
            "canonical_derivation_escapes": canonical_escapes,
            "admissible_depth": depth,
            "solvability_check": solvability,
            "bruteforce_agrees": bruteforce_agrees,
            "reproduced": holds,
        }),
        text,
    })
}

fn default_count(suite: Suite) -> usize {
    match suite {
        Suite::Solvability => 500,
        Suite::Degree => 200,
        Suite::Lemma2 | Suite::Key => 300,
    }
}

fn cmd_check(suite: Suite, seed: u64, count: Option<usize>) -> Result<Outcome> {
    let count = count.unwrap_or_else(|| default_count(suite));
    let summary = campaign::run(suite, seed, count)?;
    let mut text = String::new();
    let _ = writeln!(text, "suite: {suite}, seed {seed}");
    let fields: Vec<String> = summary.fields.iter().map(|(f, n)| format!("{f}: {n}")).collect();
    let _ = writeln!(text, "instances: {} ({})", summary.instances, fields.join(", "));
    let _ = writeln!(
        text,
        "checks: {} ({} with hypotheses met)",
        summary.checks, summary.hypotheses_met
    );
    let _ = writeln!(text, "violations: {}", summary.violations);
    let _ = writeln!(
        text,
        "failures outside hypotheses: {}",
        summary.failures_outside_hypotheses
    );
    let _ = writeln!(text, "digest: {}", summary.digest);
    for r in summary.violating_records() {
        let _ = writeln!(
            text,
            "violation in instance {} (seed {}, {})",
            r.index, r.seed, r.algebra
        );
    }
    Ok(Outcome {
        command: "check",
        inputs: vec![
            format!("suite={suite}"),
            format!("seed={seed}"),
            format!("count={count}"),
        ],
        violation: !summary.passed(),
        results: serde_json::to_value(&summary).expect("summary serializes"),
        text,
    })
}
