//! hhl: exact homology, identity suites, filtration checks and Tor stability
//! comparisons for the hyperoctahedral chain complexes.
//!
//! Exit codes: 0 on success, 1 when a requested assertion fails (acyclicity,
//! identity or structure suites), 2 for configuration errors and guard
//! refusals, 3 for internal integrity violations.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hhl_core::bar::{self, BarError};
use hhl_core::complexes::{build_d_complex, build_word_complex, ComplexError, WeylType};
use hhl_core::homology::{homology_report, HomologyReport};
use hhl_core::scalar::{FieldSpec, ScalarConfig, ScalarError};
use hhl_core::verify::{self, SuiteResult};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "hhl",
    version,
    about = "Exact homology of the chain complexes attached to the hyperoctahedral Hecke algebras"
)]
struct Cli {
    /// Number of worker threads (default: one per core)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Cap on the number of basis columns a run may allocate; overrides the
    /// HHL_GUARD environment variable (default 5000000)
    #[arg(long, global = true)]
    guard: Option<u128>,

    /// Write the report to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Include wall-clock timings in the report (makes two otherwise equal
    /// runs differ byte for byte)
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a chain complex and report its Betti numbers
    Homology(HomologyArgs),
    /// Replay the rewriting identities behind the filtration argument
    Identities(IdentitiesArgs),
    /// Take one Dpm(n) apart: filtration, quotients, blocks, Phi and Psi
    Filtration(FiltrationArgs),
    /// Compare Tor over H(B_{n-1}) and H(B_n) through the stabilization map
    Stability(StabilityArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ComplexArg {
    #[value(name = "C")]
    C,
    #[value(name = "Cpm")]
    Cpm,
    #[value(name = "D")]
    D,
    #[value(name = "Dpm")]
    Dpm,
}

impl ComplexArg {
    fn label(self) -> &'static str {
        match self {
            ComplexArg::C => "C",
            ComplexArg::Cpm => "Cpm",
            ComplexArg::D => "D",
            ComplexArg::Dpm => "Dpm",
        }
    }

    fn signed(self) -> bool {
        matches!(self, ComplexArg::Cpm | ComplexArg::Dpm)
    }

    fn uses_q(self) -> bool {
        matches!(self, ComplexArg::D | ComplexArg::Dpm)
    }
}

#[derive(Args)]
struct HomologyArgs {
    /// Which complex to build
    #[arg(long, value_enum, ignore_case = true)]
    complex: ComplexArg,

    /// Rank of the group
    #[arg(long)]
    n: usize,

    /// Hecke parameter: an exact nonzero literal like 2, -1 or 1/3
    /// (ignored by the word complexes C and Cpm)
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    q: String,

    /// Coefficient field: Q or Fp:<prime>
    #[arg(long, default_value = "Q")]
    field: String,

    /// Restrict the acyclicity assertion to degrees at most d
    #[arg(long)]
    d: Option<i64>,

    /// Exit with status 1 unless the homology vanishes in all degrees
    /// d <= n-2 (or d <= --d when that is lower)
    #[arg(long)]
    assert_acyclic: bool,

    /// Also write the complex itself (labels and boundary triplets) here
    #[arg(long)]
    export_complex: Option<PathBuf>,
}

#[derive(Args)]
struct IdentitiesArgs {
    /// Largest rank the suites run through
    #[arg(long, default_value_t = 5)]
    n_max: usize,

    /// Hecke parameter; without it the suites run over a default set of
    /// values (1, 2, 1/3, -1 over Q; 2 and p-1 over Fp:<p>)
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,

    /// Coefficient field: Q or Fp:<prime>
    #[arg(long, default_value = "Q")]
    field: String,

    /// Negative control: bump one letter of every xi word so the ladder
    /// identity must fail
    #[arg(long, hide = true)]
    perturb_xi: bool,
}

#[derive(Args)]
struct FiltrationArgs {
    /// Rank of the group
    #[arg(long)]
    n: usize,

    /// Hecke parameter for the structural checks
    #[arg(long, default_value = "1/3", allow_hyphen_values = true)]
    q: String,

    /// Coefficient field: Q or Fp:<prime>
    #[arg(long, default_value = "Q")]
    field: String,
}

#[derive(Args)]
struct StabilityArgs {
    /// Rank of the larger group; the map goes from B_{n-1} to B_n
    #[arg(long)]
    n: usize,

    /// Tor degree to compare
    #[arg(long)]
    d: usize,

    /// Hecke parameter
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    q: String,

    /// Coefficient field: Q or Fp:<prime>
    #[arg(long, default_value = "Q")]
    field: String,
}

#[derive(Debug)]
enum Failure {
    Assertion(String),
    Guard(String),
    Usage(String),
    Integrity(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Assertion(_) => 1,
            Failure::Guard(_) | Failure::Usage(_) => 2,
            Failure::Integrity(_) | Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Assertion(m)
            | Failure::Guard(m)
            | Failure::Usage(m)
            | Failure::Integrity(m)
            | Failure::Io(m) => m,
        }
    }
}

impl From<ScalarError> for Failure {
    fn from(e: ScalarError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<ComplexError> for Failure {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::BadParams(m) => Failure::Usage(m),
            ComplexError::Integrity(m) => Failure::Integrity(m),
            other => Failure::Integrity(other.to_string()),
        }
    }
}

impl From<BarError> for Failure {
    fn from(e: BarError) -> Self {
        match e {
            BarError::GuardExceeded { .. } => Failure::Guard(e.to_string()),
            BarError::BadParams(m) => Failure::Usage(m),
            BarError::Complex(c) => c.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot configure {jobs} worker threads: {e}")))?;
    }
    let guard = effective_guard(cli)?;
    match &cli.cmd {
        Cmd::Homology(a) => cmd_homology(cli, a, guard),
        Cmd::Identities(a) => cmd_identities(cli, a, guard),
        Cmd::Filtration(a) => cmd_filtration(cli, a, guard),
        Cmd::Stability(a) => cmd_stability(cli, a, guard),
    }
}

fn effective_guard(cli: &Cli) -> Result<u128, Failure> {
    if let Some(g) = cli.guard {
        return Ok(g);
    }
    match std::env::var("HHL_GUARD") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("HHL_GUARD is not an integer: {v}"))),
        Err(_) => Ok(bar::DEFAULT_GUARD),
    }
}

fn config(field: FieldSpec, q: &str) -> Result<ScalarConfig, Failure> {
    Ok(match field {
        FieldSpec::Q => ScalarConfig::rational(q)?,
        FieldSpec::Fp(p) => ScalarConfig::prime(p, q)?,
    })
}

/// Total number of basis columns of C / Cpm / D / Dpm at rank n; the module
/// complexes have the same dimensions as the matching word complexes.
fn total_columns(n: usize, signed: bool) -> u128 {
    let mut total: u128 = 0;
    for l in 0..=n {
        let mut term: u128 = 1;
        for i in 0..l {
            term = term.saturating_mul((n - i) as u128);
        }
        if signed {
            term = term.saturating_mul(2u128.saturating_pow(l as u32));
        }
        total = total.saturating_add(term);
    }
    total
}

fn check_columns(what: &str, estimate: u128, guard: u128) -> Result<(), Failure> {
    if estimate > guard {
        return Err(Failure::Guard(format!(
            "{what} needs about {estimate} basis columns, over the limit {guard}; raise --guard or HHL_GUARD"
        )));
    }
    Ok(())
}

fn write_atomic(path: &Path, body: &str) -> Result<(), Failure> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, body)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn emit(cli: &Cli, doc: &Value, csv: impl FnOnce() -> String) -> Result<(), Failure> {
    let body = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => csv(),
    };
    match &cli.out {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(path) => write_atomic(path, &body),
    }
}

fn cmd_homology(cli: &Cli, a: &HomologyArgs, guard: u128) -> Result<(), Failure> {
    let field = FieldSpec::parse(&a.field)?;
    // The word complexes ignore q, but a malformed literal is still a typo
    // worth rejecting rather than silently dropping.
    let cfg = config(field, &a.q)?;
    check_columns(
        &format!("{}({})", a.complex.label(), a.n),
        total_columns(a.n, a.complex.signed()),
        guard,
    )?;
    let started = Instant::now();
    let complex = match a.complex {
        ComplexArg::C => build_word_complex(a.n, false, field)?,
        ComplexArg::Cpm => build_word_complex(a.n, true, field)?,
        ComplexArg::D => build_d_complex(a.n, WeylType::A, &cfg)?,
        ComplexArg::Dpm => build_d_complex(a.n, WeylType::B, &cfg)?,
    };
    let mut report = homology_report(&complex)?;
    if cli.timings {
        report.elapsed_ms = Some(started.elapsed().as_millis());
    }
    if let Some(path) = &a.export_complex {
        let mut body = complex.to_json().to_string();
        body.push('\n');
        write_atomic(path, &body)?;
    }

    let limit = match a.d {
        Some(d) => d.min(a.n as i64 - 2),
        None => a.n as i64 - 2,
    };
    let violations: Vec<i64> = report
        .betti
        .iter()
        .filter(|&(deg, b)| *deg <= limit && *b != 0)
        .map(|(deg, _)| *deg)
        .collect();

    let mut doc = serde_json::to_value(&report).expect("reports serialize");
    let obj = doc.as_object_mut().expect("reports are objects");
    obj.insert("format_version".into(), json!(1));
    obj.insert("command".into(), json!("homology"));
    obj.insert(
        "config".into(),
        json!({
            "complex": a.complex.label(),
            "n": a.n,
            "q": if a.complex.uses_q() { json!(a.q) } else { Value::Null },
            "field": a.field,
            "d": a.d,
            "assert_acyclic": a.assert_acyclic,
            "guard": guard.to_string(),
        }),
    );
    obj.insert("acyclic_through".into(), json!(limit));
    obj.insert("acyclic".into(), json!(violations.is_empty()));
    emit(cli, &doc, || homology_csv(&report))?;

    if a.assert_acyclic && !violations.is_empty() {
        return Err(Failure::Assertion(format!(
            "homology of {}({}) does not vanish in degrees {violations:?} (checked through degree {limit})",
            a.complex.label(),
            a.n
        )));
    }
    Ok(())
}

fn homology_csv(r: &HomologyReport) -> String {
    let mut out = String::from("degree,dim,rank,betti\n");
    for (deg, dim) in &r.dims {
        let rank = r.ranks.get(deg).copied().unwrap_or(0);
        let betti = r.betti.get(deg).copied().unwrap_or(0);
        out.push_str(&format!("{deg},{dim},{rank},{betti}\n"));
    }
    out
}

fn suite_csv(runs: &[(String, Vec<SuiteResult>)]) -> String {
    let mut out = String::from("q,suite,cases,failed\n");
    for (q, suites) in runs {
        for s in suites {
            out.push_str(&format!("{q},{},{},{}\n", s.name, s.cases, s.failed));
        }
    }
    out
}

fn cmd_identities(cli: &Cli, a: &IdentitiesArgs, guard: u128) -> Result<(), Failure> {
    let field = FieldSpec::parse(&a.field)?;
    check_columns(
        &format!("the identity suites over B_{}", a.n_max),
        bar::group_order_b(a.n_max),
        guard,
    )?;
    let qs: Vec<String> = match &a.q {
        Some(q) => vec![q.clone()],
        None => match field {
            FieldSpec::Q => ["1", "2", "1/3", "-1"].map(str::to_string).to_vec(),
            FieldSpec::Fp(p) => vec!["2".to_string(), (p - 1).to_string()],
        },
    };
    let started = Instant::now();
    let mut runs: Vec<(String, Vec<SuiteResult>)> = Vec::new();
    for q in &qs {
        let cfg = config(field, q)?;
        runs.push((q.clone(), verify::identity_suite(a.n_max, &cfg, a.perturb_xi)));
    }
    let failures_total: usize = runs
        .iter()
        .flat_map(|(_, suites)| suites.iter().map(|s| s.failed))
        .sum();

    let mut doc = json!({
        "format_version": 1,
        "command": "identities",
        "config": {
            "n_max": a.n_max,
            "field": a.field,
            "q": a.q,
            "perturb_xi": a.perturb_xi,
            "guard": guard.to_string(),
        },
        "runs": runs.iter().map(|(q, suites)| json!({"q": q, "suites": suites})).collect::<Vec<_>>(),
        "failures_total": failures_total,
        "passed": failures_total == 0,
    });
    if cli.timings {
        doc["elapsed_ms"] = json!(started.elapsed().as_millis() as u64);
    }
    emit(cli, &doc, || suite_csv(&runs))?;

    if failures_total > 0 {
        return Err(Failure::Assertion(format!(
            "{failures_total} identity case(s) failed"
        )));
    }
    Ok(())
}

fn cmd_filtration(cli: &Cli, a: &FiltrationArgs, guard: u128) -> Result<(), Failure> {
    let field = FieldSpec::parse(&a.field)?;
    check_columns(
        &format!("Dpm({})", a.n),
        total_columns(a.n, true),
        guard,
    )?;
    let cfg = config(field, &a.q)?;
    let started = Instant::now();
    let mut suites = verify::structure_suite(a.n, &cfg)?;
    suites.push(verify::q1_suite(a.n, WeylType::A)?);
    suites.push(verify::q1_suite(a.n, WeylType::B)?);
    let failures_total: usize = suites.iter().map(|s| s.failed).sum();

    let mut doc = json!({
        "format_version": 1,
        "command": "filtration",
        "config": {
            "n": a.n,
            "field": a.field,
            "q": a.q,
            "guard": guard.to_string(),
        },
        "suites": suites,
        "failures_total": failures_total,
        "passed": failures_total == 0,
    });
    if cli.timings {
        doc["elapsed_ms"] = json!(started.elapsed().as_millis() as u64);
    }
    let runs = vec![(a.q.clone(), suites)];
    emit(cli, &doc, || suite_csv(&runs))?;

    if failures_total > 0 {
        return Err(Failure::Assertion(format!(
            "{failures_total} structure case(s) failed"
        )));
    }
    Ok(())
}

fn cmd_stability(cli: &Cli, a: &StabilityArgs, guard: u128) -> Result<(), Failure> {
    let field = FieldSpec::parse(&a.field)?;
    let cfg = config(field, &a.q)?;
    let started = Instant::now();
    let report = bar::stabilization_map(a.n, a.d, &cfg, guard)?;

    let mut doc = serde_json::to_value(&report).expect("reports serialize");
    let obj = doc.as_object_mut().expect("reports are objects");
    obj.insert("format_version".into(), json!(1));
    obj.insert("command".into(), json!("stability"));
    obj.insert(
        "config".into(),
        json!({
            "n": a.n,
            "d": a.d,
            "field": a.field,
            "q": a.q,
            "guard": guard.to_string(),
        }),
    );
    if cli.timings {
        obj.insert("elapsed_ms".into(), json!(started.elapsed().as_millis() as u64));
    }
    emit(cli, &doc, || {
        format!(
            "n,d,field,q,tor_small,tor_big,map_rank,verdict,stable_range\n{},{},{},{},{},{},{},{},{}\n",
            report.n,
            report.d,
            report.field,
            report.q,
            report.tor_small,
            report.tor_big,
            report.map_rank,
            report.verdict,
            report.stable_range
        )
    })
}
