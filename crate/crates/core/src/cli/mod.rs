//! Command-line front end.
//!
//! Exit codes: 0 success or verified, 1 definite negative verdict, 2
//! inconclusive (budget exhausted or check skipped), 3 input error.

mod input;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use input::{parse_input, read_input, InputSpec, SystemKind};

use crate::analysis::{self, Holonomicity, RankVerdict};
use crate::error::{Error, Result};
use crate::exactlin::format_rational;
use crate::groebner::DEFAULT_BUDGET;
use crate::restriction::{self, EqualityVerdict};
use crate::systems::{verify_solution_correspondence, CorrespondenceVerdict, DIdeal, HornData};

/// Default number of series coefficients checked per variable.
pub const DEFAULT_TRUNC: u32 = 12;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "horn-dmod", version, about = "Exact analysis of Horn and lattice basis hypergeometric systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonOpts {
    /// Input JSON files; several files are processed independently.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// S-pair budget per Groebner basis computation.
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(usize))]
    pub budget: usize,
    /// Truncation order for series checks.
    #[arg(long, default_value_t = DEFAULT_TRUNC)]
    pub trunc: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Number of input files processed in parallel.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
    /// System to analyse; overrides the "system" key of the input.
    #[arg(long, value_enum)]
    pub system: Option<SystemKind>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hypothesis flags, Gale dual and beta = A kappa.
    Validate(CommonOpts),
    /// Print the Horn, normalized Horn and lattice basis generators.
    Construct(CommonOpts),
    /// Holonomic rank over rational-function coefficients.
    Rank(CommonOpts),
    /// Characteristic variety dimension and holonomicity.
    Holonomic(CommonOpts),
    /// Column sums of B vanish (regularity criterion for holonomic modules).
    Regular(CommonOpts),
    /// Certificate that the restriction b-function divides s.
    BfunctionCert {
        #[command(flatten)]
        opts: CommonOpts,
        /// Also check theta_j against a homogenized initial-ideal computation.
        #[arg(long)]
        deep: bool,
    },
    /// Restriction pipeline report.
    Restrict(CommonOpts),
    /// Compare the restricted lattice ideal with the normalized Horn ideal.
    #[command(name = "verify-thm15")]
    VerifyRestriction(CommonOpts),
    /// Holonomicity of the lattice and normalized Horn modules agree.
    #[command(name = "check-cor16")]
    CheckHolonomicityTransfer(CommonOpts),
    /// Truncated series solutions correspond across Horn and lattice systems.
    CheckCorrespondence(CommonOpts),
    /// Everything.
    Report(CommonOpts),
}

impl Command {
    fn opts(&self) -> &CommonOpts {
        match self {
            Command::Validate(o)
            | Command::Construct(o)
            | Command::Rank(o)
            | Command::Holonomic(o)
            | Command::Regular(o)
            | Command::Restrict(o)
            | Command::VerifyRestriction(o)
            | Command::CheckHolonomicityTransfer(o)
            | Command::CheckCorrespondence(o)
            | Command::Report(o) => o,
            Command::BfunctionCert { opts, .. } => opts,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Construct(_) => "construct",
            Command::Rank(_) => "rank",
            Command::Holonomic(_) => "holonomic",
            Command::Regular(_) => "regular",
            Command::BfunctionCert { .. } => "bfunction-cert",
            Command::Restrict(_) => "restrict",
            Command::VerifyRestriction(_) => "verify-thm15",
            Command::CheckHolonomicityTransfer(_) => "check-cor16",
            Command::CheckCorrespondence(_) => "check-correspondence",
            Command::Report(_) => "report",
        }
    }
}

/// Exit code for an error surfaced by a command.
pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit { .. } | Error::NonIntegralKappa(_) => EXIT_INCONCLUSIVE,
        Error::HypothesisViolated(_)
        | Error::NotNormalized(_)
        | Error::ImproperIdeal
        | Error::MismatchWithNHorn { .. }
        | Error::Internal(_) => EXIT_NEGATIVE,
        Error::RankDeficient { .. }
        | Error::DimensionMismatch(_)
        | Error::IndexOutOfRange { .. }
        | Error::Parse { .. }
        | Error::ShapeMismatch(_)
        | Error::InvalidOrder(_) => EXIT_INPUT,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::RankDeficient { .. } => "rank-deficient",
        Error::DimensionMismatch(_) => "dimension-mismatch",
        Error::IndexOutOfRange { .. } => "index-out-of-range",
        Error::HypothesisViolated(_) => "hypothesis-violated",
        Error::NotNormalized(_) => "not-normalized",
        Error::NonIntegralKappa(_) => "non-integral-kappa",
        Error::ResourceLimit { .. } => "resource-limit",
        Error::InvalidOrder(_) => "invalid-order",
        Error::MismatchWithNHorn { .. } => "mismatch-with-nhorn",
        Error::Parse { .. } => "parse-error",
        Error::ShapeMismatch(_) => "shape-mismatch",
        Error::ImproperIdeal => "improper-ideal",
        Error::Internal(_) => "internal",
    }
}

fn error_json(e: &Error) -> Value {
    json!({ "error": error_kind(e), "message": e.to_string() })
}

/// Result of one command on one input.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: u8,
    pub json: Value,
    pub text: String,
}

impl Outcome {
    fn new(code: u8, json: Value, text: String) -> Self {
        Outcome { code, json, text }
    }

    pub fn from_error(e: &Error) -> Self {
        Outcome::new(exit_code_for(e), error_json(e), format!("error: {e}\n"))
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Data whose identity block sits in the top rows, with the row permutation
/// applied (if any).
fn normalized(data: &HornData) -> Result<(HornData, Option<Vec<usize>>)> {
    if data.flags().has_identity_top_block {
        return Ok((data.clone(), None));
    }
    let (d, perm) = data.normalized()?;
    Ok((d, Some(perm)))
}

fn perm_note(perm: &Option<Vec<usize>>, text: &mut String) {
    if let Some(p) = perm {
        let shown: Vec<String> = p.iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(text, "rows reordered to put the identity block on top: [{}]", shown.join(", "));
    }
}

fn system_ideal(data: &HornData, kind: SystemKind) -> Result<(DIdeal, Option<Vec<usize>>)> {
    match kind {
        SystemKind::Lattice => Ok((data.build_lattice_ideal()?, None)),
        SystemKind::Horn => Ok((data.build_horn()?, None)),
        SystemKind::Nhorn => {
            let (d, perm) = normalized(data)?;
            Ok((d.build_nhorn()?, perm))
        }
    }
}

fn kind_name(kind: SystemKind) -> &'static str {
    match kind {
        SystemKind::Lattice => "lattice",
        SystemKind::Horn => "horn",
        SystemKind::Nhorn => "nhorn",
    }
}

fn generator_lines(text: &mut String, title: &str, gens: &[String]) {
    let _ = writeln!(text, "{title}:");
    for g in gens {
        let _ = writeln!(text, "  {g}");
    }
}

fn cmd_validate(data: &HornData) -> Outcome {
    let f = data.flags();
    let a = to_json(data.a());
    let beta: Vec<String> = data.beta().iter().map(format_rational).collect();
    let witness: Option<Vec<String>> = data.nonneg_witness().map(|w| w.iter().map(ToString::to_string).collect());
    let identity: Option<Vec<usize>> = data.identity_rows().map(|r| r.iter().map(|i| i + 1).collect());
    let json = json!({
        "n": data.n(), "m": data.m(), "d": data.d(),
        "flags": to_json(f), "A": a, "beta": beta,
        "identity_rows": identity, "nonneg_witness": witness,
    });
    let mut text = format!("n = {}, m = {}, d = {}\n", data.n(), data.m(), data.d());
    for (name, v) in [
        ("full_rank_m", f.full_rank_m),
        ("no_nonneg_kernel_vector", f.no_nonneg_kernel_vector),
        ("has_identity_submatrix", f.has_identity_submatrix),
        ("has_identity_top_block", f.has_identity_top_block),
        ("kappa_zero_on_identity_rows", f.kappa_zero_on_identity_rows),
        ("top_m_rows_rank_m", f.top_m_rows_rank_m),
    ] {
        let _ = writeln!(text, "{name}: {v}");
    }
    let _ = writeln!(text, "A = {:?}", data.a());
    let _ = writeln!(text, "beta = [{}]", beta.join(", "));
    if let Some(w) = &witness {
        let _ = writeln!(text, "nonnegative vector in the column span: [{}]", w.join(", "));
    }
    Outcome::new(EXIT_OK, json, text)
}

fn cmd_construct(data: &HornData) -> Outcome {
    let mut text = String::new();
    let mut obj = serde_json::Map::new();
    let mut section = |key: &str, title: &str, r: Result<Vec<String>>, text: &mut String| match r {
        Ok(g) => {
            generator_lines(text, title, &g);
            obj.insert(key.into(), json!(g));
        }
        Err(e) => {
            let _ = writeln!(text, "{title}: unavailable ({e})");
            obj.insert(key.into(), error_json(&e));
        }
    };
    section("horn", "Horn", data.build_horn().map(|i| i.rendered()), &mut text);
    let nh = normalized(data).and_then(|(d, _)| d.build_nhorn().map(|i| i.rendered()));
    section("nhorn", "normalized Horn", nh, &mut text);
    section(
        "lattice_basis_ideal",
        "lattice basis ideal",
        data.build_lattice_basis_ideal().map(|i| i.rendered()),
        &mut text,
    );
    section("euler", "Euler operators", Ok(data.build_euler().iter().map(|g| g.render()).collect()), &mut text);
    section("lattice", "H(B, kappa)", data.build_lattice_ideal().map(|i| i.rendered()), &mut text);
    if let Ok((_, Some(perm))) = normalized(data) {
        perm_note(&Some(perm.clone()), &mut text);
        obj.insert("permutation".into(), json!(perm.iter().map(|i| i + 1).collect::<Vec<_>>()));
    }
    Outcome::new(EXIT_OK, Value::Object(obj), text)
}

fn rank_text(r: &RankVerdict) -> String {
    match r {
        RankVerdict::Finite { value, .. } => format!("rank: {value}"),
        RankVerdict::Infinite => "rank: infinite".into(),
        RankVerdict::Inconclusive { budget } => format!("rank: inconclusive (budget {budget} exhausted)"),
    }
}

fn cmd_rank(data: &HornData, kind: SystemKind, budget: usize) -> Result<Outcome> {
    let (ideal, perm) = system_ideal(data, kind)?;
    let r = analysis::holonomic_rank(&ideal, budget)?;
    let code = match r {
        RankVerdict::Finite { .. } => EXIT_OK,
        RankVerdict::Infinite => EXIT_NEGATIVE,
        RankVerdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    };
    let mut text = format!("system: {}\n{}\n", kind_name(kind), rank_text(&r));
    perm_note(&perm, &mut text);
    Ok(Outcome::new(code, json!({ "system": kind, "rank": to_json(&r) }), text))
}

fn cmd_holonomic(data: &HornData, kind: SystemKind, budget: usize) -> Result<Outcome> {
    let (ideal, perm) = system_ideal(data, kind)?;
    let (h, dim) = analysis::holonomicity(&ideal, budget, true)?;
    let code = match h {
        Holonomicity::Yes | Holonomicity::ZeroModule => EXIT_OK,
        Holonomicity::No => EXIT_NEGATIVE,
        Holonomicity::Inconclusive => EXIT_INCONCLUSIVE,
    };
    let mut text = format!("system: {}\nholonomic: {}\n", kind_name(kind), holo_text(&h));
    if let Some(d) = &dim {
        let _ = writeln!(text, "characteristic variety dimension: {} (n = {})", d.dim, d.n);
    }
    perm_note(&perm, &mut text);
    Ok(Outcome::new(code, json!({ "system": kind, "holonomic": h, "char_dim": dim }), text))
}

fn holo_text(h: &Holonomicity) -> &'static str {
    match h {
        Holonomicity::Yes => "yes",
        Holonomicity::No => "no",
        Holonomicity::Inconclusive => "inconclusive",
        Holonomicity::ZeroModule => "zero module",
    }
}

fn cmd_regular(data: &HornData) -> Outcome {
    let sums: Vec<String> = crate::exactlin::row_sums(data.b()).iter().map(ToString::to_string).collect();
    let regular = analysis::regularity_row_sum(data);
    let homogeneous = analysis::lattice_binomials_homogeneous(data);
    let text = format!(
        "column sums of B: [{}]\nrow-sum criterion: {}\nlattice binomials degree-homogeneous: {}\n",
        sums.join(", "),
        regular,
        homogeneous
    );
    let json = json!({ "row_sums": sums, "regular": regular, "binomials_homogeneous": homogeneous });
    Outcome::new(if regular { EXIT_OK } else { EXIT_NEGATIVE }, json, text)
}

fn cmd_bfunction(data: &HornData, budget: usize, deep: bool) -> Result<Outcome> {
    let cert = restriction::bfunction_divides_s_certificate(data, budget, deep)?;
    let mut text = String::new();
    for e in &cert.entries {
        let _ = writeln!(text, "j = {}: witness {}", e.j, e.witness);
        let _ = writeln!(
            text,
            "  initial form {}, combination {}, member {}{}",
            e.initial_form,
            e.combination_verified,
            e.gb_member,
            e.initial_ideal_member.map_or(String::new(), |b| format!(", initial ideal {b}"))
        );
    }
    let _ = writeln!(text, "s = {}\nb(s) divides s: {}", cert.s, cert.divides_s);
    Ok(Outcome::new(if cert.divides_s { EXIT_OK } else { EXIT_NEGATIVE }, to_json(&cert), text))
}

fn verdict_text(v: &EqualityVerdict) -> String {
    match v {
        EqualityVerdict::Equal => "equal".into(),
        EqualityVerdict::LeftNotContained { witness } => format!("left-not-contained (witness {witness})"),
        EqualityVerdict::RightNotContained { witness } => format!("right-not-contained (witness {witness})"),
        EqualityVerdict::Inconclusive { budget } => format!("inconclusive (budget {budget} exhausted)"),
    }
}

fn verdict_code(v: &EqualityVerdict) -> u8 {
    match v {
        EqualityVerdict::Equal => EXIT_OK,
        EqualityVerdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
        _ => EXIT_NEGATIVE,
    }
}

fn cmd_restrict(data: &HornData, budget: usize) -> Result<Outcome> {
    let (d, perm) = normalized(data)?;
    let r = restriction::restriction_report(&d, budget)?;
    let mut text = String::new();
    perm_note(&perm, &mut text);
    generator_lines(&mut text, "explicit generators", &r.explicit_generators.iter().map(|g| g.render()).collect::<Vec<_>>());
    generator_lines(
        &mut text,
        "intersection generators at x = 1",
        &r.intersection_generators.iter().map(|g| g.render()).collect::<Vec<_>>(),
    );
    let _ = writeln!(text, "b(s) divides s: {}", r.certificate.divides_s);
    let _ = writeln!(text, "restriction vs normalized Horn: {}", verdict_text(&r.equality_verdict));
    let _ = writeln!(text, "explicit vs elimination route: {}", verdict_text(&r.paths_agree));
    let code = verdict_code(&r.equality_verdict).max(verdict_code(&r.paths_agree));
    let code = if r.certificate.divides_s { code } else { code.max(EXIT_NEGATIVE) };
    let mut json = to_json(&r);
    json["permutation"] = json!(perm.map(|p| p.iter().map(|i| i + 1).collect::<Vec<_>>()));
    Ok(Outcome::new(code, json, text))
}

fn cmd_verify(data: &HornData, budget: usize) -> Result<Outcome> {
    let (d, perm) = normalized(data)?;
    let v = restriction::verify_restriction_equals_nhorn(&d, budget)?;
    let mut text = String::new();
    perm_note(&perm, &mut text);
    let _ = writeln!(text, "verdict: {}", verdict_text(&v));
    let perm_json = json!(perm.map(|p| p.iter().map(|i| i + 1).collect::<Vec<_>>()));
    Ok(Outcome::new(verdict_code(&v), json!({ "verdict": to_json(&v), "permutation": perm_json }), text))
}

fn cmd_transfer(data: &HornData, budget: usize) -> Result<Outcome> {
    let (d, perm) = normalized(data)?;
    let c = analysis::holonomicity_transfer_consistency(&d, budget)?;
    let mut text = String::new();
    perm_note(&perm, &mut text);
    let dim = |x: &Option<analysis::CharDimension>| x.as_ref().map_or("-".to_string(), |d| d.dim.to_string());
    let _ = writeln!(text, "lattice basis module: {} (char dim {})", holo_text(&c.lattice), dim(&c.lattice_dim));
    let _ = writeln!(text, "normalized Horn module: {} (char dim {})", holo_text(&c.nhorn), dim(&c.nhorn_dim));
    let _ = writeln!(text, "agree: {}", c.agree.map_or("inconclusive".to_string(), |b| b.to_string()));
    let code = match c.agree {
        Some(true) => EXIT_OK,
        Some(false) => EXIT_NEGATIVE,
        None => EXIT_INCONCLUSIVE,
    };
    Ok(Outcome::new(code, to_json(&c), text))
}

fn cmd_correspondence(data: &HornData, trunc: u32) -> Result<Outcome> {
    let v = verify_solution_correspondence(data, trunc)?;
    let text = match &v {
        CorrespondenceVerdict::Pass { terms, order } => format!("pass ({terms} coefficients, order {order})\n"),
        CorrespondenceVerdict::Fail { system, generator, exponent, coefficient } => {
            format!("fail: {system} generator {generator} leaves {coefficient} at exponent {exponent:?}\n")
        }
        CorrespondenceVerdict::NoSeries { at } => format!("no series with constant term 1 (blocked at {at:?})\n"),
    };
    Ok(Outcome::new(if v.passed() { EXIT_OK } else { EXIT_NEGATIVE }, to_json(&v), text))
}

fn section(out: Result<Outcome>) -> (Value, String) {
    match out {
        Ok(o) => (o.json, o.text),
        Err(e) => (error_json(&e), format!("unavailable: {e}\n")),
    }
}

fn cmd_report(data: &HornData, budget: usize, trunc: u32) -> Outcome {
    let mut obj = serde_json::Map::new();
    let mut text = String::new();
    let mut add = |key: &str, title: &str, r: Result<Outcome>| {
        let (j, t) = section(r);
        obj.insert(key.into(), j);
        let _ = writeln!(text, "== {title}");
        text.push_str(&t);
    };
    add("validate", "validate", Ok(cmd_validate(data)));
    add("construct", "construct", Ok(cmd_construct(data)));
    let analyse = |kind: SystemKind| -> Result<Outcome> {
        let (ideal, _) = system_ideal(data, kind)?;
        let rep = analysis::analyze(kind_name(kind), &ideal, data, budget)?;
        let text = format!(
            "holonomic: {} (char dim {})\n{}\nregular candidate: {}\nA-homogeneous: {}\n",
            holo_text(&rep.holonomic),
            rep.char_dim.map_or("-".into(), |d| d.to_string()),
            rank_text(&rep.rank),
            rep.regular_candidate,
            rep.a_homogeneous.map_or("n/a".into(), |b| b.to_string()),
        );
        Ok(Outcome::new(EXIT_OK, to_json(&rep), text))
    };
    add("lattice", "lattice basis module", analyse(SystemKind::Lattice));
    add("horn", "Horn module", analyse(SystemKind::Horn));
    add("nhorn", "normalized Horn module", analyse(SystemKind::Nhorn));
    add("regular", "regularity", Ok(cmd_regular(data)));
    add("bfunction_cert", "b-function certificate", cmd_bfunction(data, budget, false));
    add("restriction", "restriction", cmd_restrict(data, budget));
    add("holonomicity_transfer", "lattice vs normalized Horn holonomicity", cmd_transfer(data, budget));
    add("correspondence", "series correspondence", cmd_correspondence(data, trunc));
    Outcome::new(EXIT_OK, Value::Object(obj), text)
}

fn run_one(cmd: &Command, path: &PathBuf) -> Outcome {
    let opts = cmd.opts();
    let spec = match read_input(path) {
        Ok(s) => s,
        Err(e) => return Outcome::from_error(&e),
    };
    let data = match HornData::validate(spec.b, spec.kappa) {
        Ok(d) => d,
        Err(e) => return Outcome::from_error(&e),
    };
    let kind = opts.system.or(spec.system).unwrap_or(SystemKind::Lattice);
    let action = match cmd {
        Command::Validate(_) => Action::Validate,
        Command::Construct(_) => Action::Construct,
        Command::Rank(_) => Action::Rank,
        Command::Holonomic(_) => Action::Holonomic,
        Command::Regular(_) => Action::Regular,
        Command::BfunctionCert { deep, .. } => Action::BfunctionCert { deep: *deep },
        Command::Restrict(_) => Action::Restrict,
        Command::VerifyRestriction(_) => Action::VerifyRestriction,
        Command::CheckHolonomicityTransfer(_) => Action::CheckHolonomicityTransfer,
        Command::CheckCorrespondence(_) => Action::CheckCorrespondence,
        Command::Report(_) => Action::Report,
    };
    evaluate(&data, action, kind, opts.budget, opts.trunc)
}

/// A single analysis, independent of how its input was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Validate,
    Construct,
    Rank,
    Holonomic,
    Regular,
    BfunctionCert { deep: bool },
    Restrict,
    VerifyRestriction,
    CheckHolonomicityTransfer,
    CheckCorrespondence,
    Report,
}

/// Runs `action` on already validated data. `kind` selects the system for
/// `Rank` and `Holonomic`; errors are folded into the outcome.
pub fn evaluate(data: &HornData, action: Action, kind: SystemKind, budget: usize, trunc: u32) -> Outcome {
    let res = match action {
        Action::Validate => Ok(cmd_validate(data)),
        Action::Construct => Ok(cmd_construct(data)),
        Action::Rank => cmd_rank(data, kind, budget),
        Action::Holonomic => cmd_holonomic(data, kind, budget),
        Action::Regular => Ok(cmd_regular(data)),
        Action::BfunctionCert { deep } => cmd_bfunction(data, budget, deep),
        Action::Restrict => cmd_restrict(data, budget),
        Action::VerifyRestriction => cmd_verify(data, budget),
        Action::CheckHolonomicityTransfer => cmd_transfer(data, budget),
        Action::CheckCorrespondence => cmd_correspondence(data, trunc),
        Action::Report => Ok(cmd_report(data, budget, trunc)),
    };
    res.unwrap_or_else(|e| Outcome::from_error(&e))
}

/// Output of a whole invocation.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI on `args` (including the program name) without touching the
/// process streams.
pub fn run_args<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Invocation { code, stdout: String::new(), stderr: rendered }
            } else {
                Invocation { code, stdout: rendered, stderr: String::new() }
            };
        }
    };
    run(&cli.command)
}

pub fn run(cmd: &Command) -> Invocation {
    let opts = cmd.opts();
    let outcomes = process_all(cmd, &opts.inputs, opts.jobs as usize);
    let code = outcomes.iter().map(|o| o.code).max().unwrap_or(EXIT_OK);
    let mut stdout = String::new();
    let mut stderr = String::new();
    match opts.format {
        Format::Json => {
            let docs: Vec<Value> = outcomes
                .iter()
                .zip(&opts.inputs)
                .map(|(o, p)| {
                    json!({ "input": p.display().to_string(), "command": cmd.name(), "exit_code": o.code, "result": o.json })
                })
                .collect();
            let doc = if docs.len() == 1 { docs.into_iter().next().unwrap() } else { Value::Array(docs) };
            stdout = serde_json::to_string_pretty(&doc).expect("json output");
            stdout.push('\n');
        }
        Format::Text => {
            let many = outcomes.len() > 1;
            for (o, p) in outcomes.iter().zip(&opts.inputs) {
                if many {
                    let _ = writeln!(stdout, "# {}", p.display());
                }
                if o.code == EXIT_INPUT {
                    stderr.push_str(&o.text);
                } else {
                    stdout.push_str(&o.text);
                }
            }
        }
    }
    Invocation { code, stdout, stderr }
}

fn process_all(cmd: &Command, inputs: &[PathBuf], jobs: usize) -> Vec<Outcome> {
    if jobs <= 1 || inputs.len() <= 1 {
        return inputs.iter().map(|p| run_one(cmd, p)).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots: Vec<std::sync::Mutex<Option<Outcome>>> = inputs.iter().map(|_| std::sync::Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..jobs.min(inputs.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= inputs.len() {
                    break;
                }
                let o = run_one(cmd, &inputs[i]);
                *slots[i].lock().expect("result slot") = Some(o);
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().expect("result slot").expect("job finished")).collect()
}

/// Entry point for the binary.
pub fn main() -> std::process::ExitCode {
    let inv = run_args(std::env::args_os());
    print!("{}", inv.stdout);
    eprint!("{}", inv.stderr);
    std::process::ExitCode::from(inv.code)
}
