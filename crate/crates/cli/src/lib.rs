//! Command-line front end: parses flags, wires files into the library
//! pipeline, and renders reports.
//!
//! Exit codes: 0 on success (and on a passing verification), 1 when a
//! verification fails, 2 for usage or parse errors, 3 for semantically
//! invalid inputs such as an empty support or a blown enumeration budget.
//! All output is deterministic given the flags and the seed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use cspar_core::error::{Error, Result};
use cspar_core::histogram::classify;
use cspar_core::instance::{Instance, Kind};
use cspar_core::relation::ValuedRelation;
use cspar_core::sparsify::{self, SamplingPlan};
use cspar_core::verify::{self, CensusReport, WitnessFamily, DEFAULT_BUDGET};
use cspar_core::{q, Q};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;

#[derive(Parser)]
#[command(
    name = "cspar",
    version,
    about = "Analyze, sparsify, and verify valued constraint instances"
)]
struct Cli {
    /// Worker threads for exhaustive checks (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a relation file and print the structural report.
    Analyze(AnalyzeArgs),
    /// Generate a complete or random instance over a relation.
    Gen(GenArgs),
    /// Plan and execute a sparsifier for an instance.
    Sparsify(SparsifyArgs),
    /// Compare a sparsifier against its source over every assignment.
    Verify(VerifyArgs),
    /// Count distinct clause-value vectors of a complete instance.
    Census(CensusArgs),
    /// Build a witness family that lower-bounds sparsifier size.
    Witness(WitnessArgs),
    /// Replay a named end-to-end pipeline at desk scale.
    Demo(DemoArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Relation file to classify.
    #[arg(long)]
    relation: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit key=value lines instead of prose.
    #[arg(long)]
    machine: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Relation file fixing the arity.
    #[arg(long)]
    relation: PathBuf,
    /// Instance kind: uniform, rpartite, or symset.
    #[arg(long, value_parser = parse_kind)]
    kind: Kind,
    /// Number of variables (per part for rpartite).
    #[arg(long)]
    n: u32,
    /// Draw this many clauses at random; omit for the complete instance.
    #[arg(long)]
    m: Option<u64>,
    /// Seed for random generation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the instance here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SparsifyArgs {
    /// Relation file the instance is over.
    #[arg(long)]
    relation: PathBuf,
    /// Instance file to sparsify.
    #[arg(long)]
    instance: PathBuf,
    /// Target accuracy as a fraction, e.g. 1/4.
    #[arg(long, value_parser = parse_ratio)]
    eps: Q,
    /// Oversampling constant in the sample-count formula.
    #[arg(long, default_value_t = 8)]
    kappa: u32,
    /// Seed for the sampling draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the sparsified instance here; the plan summary then goes to
    /// stdout. Without this flag the instance itself goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit the summary as key=value lines instead of prose.
    #[arg(long)]
    machine: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Relation file both instances are over.
    #[arg(long)]
    relation: PathBuf,
    /// Original instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Candidate sparsifier file.
    #[arg(long)]
    sparsifier: PathBuf,
    /// Allowed relative deviation as a fraction, e.g. 1/4.
    #[arg(long, value_parser = parse_ratio)]
    eps: Q,
    /// Refuse to enumerate more assignments than this.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Emit key=value lines instead of prose.
    #[arg(long)]
    machine: bool,
}

#[derive(Args)]
struct CensusArgs {
    /// Relation file the instance is over.
    #[arg(long)]
    relation: PathBuf,
    /// Complete instance file to census.
    #[arg(long)]
    instance: PathBuf,
    /// Codeword-weight thresholds to tally, e.g. 2,4,8.
    #[arg(long, value_delimiter = ',', required = true)]
    thresholds: Vec<u64>,
    /// Restrict to assignments dominated by this symbol.
    #[arg(long)]
    dominant: Option<u8>,
    /// Refuse to enumerate more assignments than this.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Emit key=value lines instead of a table.
    #[arg(long)]
    machine: bool,
}

#[derive(Args)]
struct WitnessArgs {
    /// Relation file to build witnesses for.
    #[arg(long)]
    relation: PathBuf,
    /// Number of variables (per part for rpartite).
    #[arg(long)]
    n: u32,
    /// Instance model the family lives in: uniform or rpartite.
    #[arg(long, value_parser = parse_kind)]
    kind: Kind,
    /// Emit key=value lines instead of prose.
    #[arg(long)]
    machine: bool,
}

#[derive(Args)]
struct DemoArgs {
    /// Demo name: cut, full-relation, or r2-nonmonotone.
    name: String,
    /// Seed for the random phases of a demo.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_ratio(s: &str) -> std::result::Result<Q, String> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let n: i128 = num
        .trim()
        .parse()
        .map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: i128 = den
        .trim()
        .parse()
        .map_err(|_| format!("bad denominator in {s:?}"))?;
    if d == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Q::new(n, d))
}

fn parse_kind(s: &str) -> std::result::Result<Kind, String> {
    Kind::parse(s).map_err(|e| e.to_string())
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io { .. } => EXIT_USAGE,
        Error::Invalid(_) | Error::Budget { .. } => EXIT_SEMANTIC,
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_relation(path: &Path) -> Result<ValuedRelation> {
    ValuedRelation::parse(&read_file(path)?)
}

fn load_instance(path: &Path) -> Result<Instance> {
    Instance::parse(&read_file(path)?)
}

/// Runs the CLI against `args` (including the program name), writing to
/// the given streams, and returns the process exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args.iter()) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = write!(err, "{e}");
            return EXIT_USAGE;
        }
    };
    if let Some(t) = cli.threads {
        // The global pool can only be sized once per process; later calls
        // are no-ops, which is fine because results never depend on it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let outcome = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Sparsify(a) => cmd_sparsify(a, out, err),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Census(a) => cmd_census(a, out),
        Command::Witness(a) => cmd_witness(a, out),
        Command::Demo(a) => cmd_demo(a, out, err),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Sends the main artifact to `--out` when given, else to stdout.
fn emit(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            let _ = out.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    let rel = load_relation(&a.relation)?;
    let report = classify(&rel)?;
    let text = if a.machine {
        let mut s = report.machine_lines().join("\n");
        s.push('\n');
        s
    } else {
        report.to_string()
    };
    emit(&a.out, &text, out)?;
    Ok(EXIT_OK)
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let rel = load_relation(&a.relation)?;
    let inst = match a.m {
        Some(m) => Instance::random(a.kind, a.n, rel.arity(), m, a.seed)?,
        None => Instance::complete(a.kind, a.n, rel.arity())?,
    };
    emit(&a.out, &inst.to_text(), out)?;
    Ok(EXIT_OK)
}

fn plan_machine_lines(plan: &SamplingPlan, before: &Instance, after: &Instance) -> Vec<String> {
    vec![
        format!("mode={}", plan.mode.label()),
        format!("samples={}", plan.samples),
        format!("weight={}", plan.weight),
        format!("exponent={}", plan.exponent),
        format!("eps_power={}", plan.eps_power),
        format!("no_nontrivial={}", plan.no_nontrivial),
        format!("indeterminate={}", plan.indeterminate),
        format!("exact={}", plan.exact),
        format!("rule={}", plan.rule),
        format!("clauses_in={}", before.clauses.len()),
        format!("clauses_out={}", after.clauses.len()),
        format!("weight_in={}", before.total_weight()),
        format!("weight_out={}", after.total_weight()),
    ]
}

fn cmd_sparsify(a: &SparsifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let rel = load_relation(&a.relation)?;
    let inst = load_instance(&a.instance)?;
    let report = classify(&rel)?;
    let plan = sparsify::plan(
        &report,
        inst.kind,
        inst.complete_profile().is_some(),
        inst.n,
        inst.clauses.len() as u64,
        a.eps,
        a.kappa,
    )?;
    let sparsified = sparsify::execute(&plan, &inst, a.seed)?;
    let summary = if a.machine {
        let mut s = plan_machine_lines(&plan, &inst, &sparsified).join("\n");
        s.push('\n');
        s
    } else {
        format!(
            "plan: {plan}\nclauses: {} -> {}\ntotal weight: {} -> {}\n",
            inst.clauses.len(),
            sparsified.clauses.len(),
            inst.total_weight(),
            sparsified.total_weight()
        )
    };
    match &a.out {
        Some(p) => {
            write_file(p, &sparsified.to_text())?;
            let _ = out.write_all(summary.as_bytes());
        }
        None => {
            let _ = out.write_all(sparsified.to_text().as_bytes());
            let _ = err.write_all(summary.as_bytes());
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let rel = load_relation(&a.relation)?;
    let original = load_instance(&a.instance)?;
    let sparsifier = load_instance(&a.sparsifier)?;
    let report = verify::exhaustive_verify(&rel, &original, &sparsifier, a.eps, a.budget)?;
    if a.machine {
        for line in report.machine_lines() {
            let _ = writeln!(out, "{line}");
        }
    } else {
        let _ = writeln!(out, "{report}");
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY_FAIL })
}

fn render_census(report: &CensusReport, machine: bool) -> String {
    let mut s = String::new();
    if machine {
        s.push_str(&format!("assignments={}\n", report.assignments));
        s.push_str(&format!("zero_assignments={}\n", report.zero_assignments));
        s.push_str(&format!("distinct_nonzero={}\n", report.distinct_nonzero));
        for (t, c) in report.thresholds.iter().zip(&report.counts) {
            s.push_str(&format!("count[{t}]={c}\n"));
        }
    } else {
        s.push_str(&format!("assignments: {}\n", report.assignments));
        s.push_str(&format!(
            "zero-codeword assignments: {}\n",
            report.zero_assignments
        ));
        s.push_str(&format!(
            "distinct nonzero codewords: {}\n",
            report.distinct_nonzero
        ));
        s.push_str("threshold  count\n");
        for (t, c) in report.thresholds.iter().zip(&report.counts) {
            s.push_str(&format!("{t:>9}  {c}\n"));
        }
    }
    s
}

fn cmd_census(a: &CensusArgs, out: &mut dyn Write) -> Result<i32> {
    let rel = load_relation(&a.relation)?;
    let inst = load_instance(&a.instance)?;
    let report = verify::codeword_census(&rel, &inst, &a.thresholds, a.dominant, a.budget)?;
    let _ = out.write_all(render_census(&report, a.machine).as_bytes());
    Ok(EXIT_OK)
}

fn render_witness(fam: &WitnessFamily, machine: bool) -> String {
    let sat_min = fam.satisfied.iter().map(|s| s.len()).min().unwrap_or(0);
    let sat_max = fam.satisfied.iter().map(|s| s.len()).max().unwrap_or(0);
    if machine {
        format!(
            "members={}\nsat_min={sat_min}\nsat_max={sat_max}\ndisjoint={}\nmax_shared={}\nshare_cap={}\nimplied_bound={}\n",
            fam.assignments.len(),
            fam.disjoint,
            fam.max_shared,
            fam.share_cap,
            fam.implied_bound
        )
    } else {
        format!(
            "members: {}\nsatisfied clauses per member: {sat_min}..={sat_max}\npairwise disjoint: {}\nlargest observed sharing: {}\nstructural sharing cap: {}\nimplied size lower bound: {}\n",
            fam.assignments.len(),
            if fam.disjoint { "yes" } else { "no" },
            fam.max_shared,
            fam.share_cap,
            fam.implied_bound
        )
    }
}

fn cmd_witness(a: &WitnessArgs, out: &mut dyn Write) -> Result<i32> {
    let rel = load_relation(&a.relation)?;
    let fam = match a.kind {
        Kind::Uniform => verify::witness_family_uniform(&rel, a.n)?,
        Kind::Rpartite => {
            let (_, witness) = rel.max_and_arity()?;
            verify::witness_family_rpartite(&rel, &witness, a.n)?
        }
        Kind::SymSet => {
            return Err(Error::invalid(
                "witness families are built in the uniform or rpartite model",
            ))
        }
    };
    let _ = out.write_all(render_witness(&fam, a.machine).as_bytes());
    Ok(EXIT_OK)
}

const DEMOS: [&str; 3] = ["cut", "full-relation", "r2-nonmonotone"];

fn cmd_demo(a: &DemoArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match a.name.as_str() {
        "cut" => demo_cut(out),
        "full-relation" => demo_full_relation(out),
        "r2-nonmonotone" => demo_r2_nonmonotone(a.seed, out),
        other => {
            let _ = writeln!(
                err,
                "unknown demo {other:?}; available demos: {}",
                DEMOS.join(", ")
            );
            Ok(EXIT_USAGE)
        }
    }
}

/// Complete cut instance at n = 14: the planned sample count already
/// exceeds the clause count, so the plan keeps everything and the
/// verification is exact.
fn demo_cut(out: &mut dyn Write) -> Result<i32> {
    let rel = cspar_core::fixtures::cut();
    let report = classify(&rel)?;
    let n = 14;
    let inst = Instance::complete(Kind::Uniform, n, rel.arity())?;
    let eps = q(1, 4);
    let _ = writeln!(out, "relation: cut (r=2, case {})", report.case.label());
    let _ = writeln!(
        out,
        "instance: complete uniform, n={n}, {} clauses",
        inst.clauses.len()
    );
    let plan = sparsify::plan(
        &report,
        inst.kind,
        true,
        n,
        inst.clauses.len() as u64,
        eps,
        8,
    )?;
    let _ = writeln!(out, "plan: {plan}");
    let sparsified = sparsify::execute(&plan, &inst, 0)?;
    let verdict = verify::exhaustive_verify(&rel, &inst, &sparsified, eps, DEFAULT_BUDGET)?;
    let _ = writeln!(out, "{verdict}");
    Ok(if verdict.pass { EXIT_OK } else { EXIT_VERIFY_FAIL })
}

/// A relation whose every tuple carries the same value needs only one
/// constraint: the sparsifier is a single clause with zero deviation.
fn demo_full_relation(out: &mut dyn Write) -> Result<i32> {
    let rel = cspar_core::fixtures::full_constant(3, 2, 1);
    let report = classify(&rel)?;
    let n = 6;
    let inst = Instance::complete(Kind::Uniform, n, rel.arity())?;
    let _ = writeln!(out, "relation: full Boolean triple, every tuple at value 1");
    let _ = writeln!(
        out,
        "instance: complete uniform, n={n}, {} clauses",
        inst.clauses.len()
    );
    let plan = sparsify::plan(
        &report,
        inst.kind,
        true,
        n,
        inst.clauses.len() as u64,
        q(1, 100),
        8,
    )?;
    let _ = writeln!(out, "plan: {plan}");
    let sparsified = sparsify::execute(&plan, &inst, 0)?;
    let _ = writeln!(
        out,
        "sparsifier: {} clause of weight {}",
        sparsified.clauses.len(),
        sparsified.total_weight()
    );
    let verdict = verify::exhaustive_verify(&rel, &inst, &sparsified, q(1, 100), DEFAULT_BUDGET)?;
    let _ = writeln!(out, "{verdict}");
    Ok(if verdict.pass { EXIT_OK } else { EXIT_VERIFY_FAIL })
}

/// The quadruple-arity fixture whose sparsifiability improves as the
/// instance gets denser: below the density threshold nothing nontrivial
/// is guaranteed, above it a bundled sparsifier works.
fn demo_r2_nonmonotone(seed: u64, out: &mut dyn Write) -> Result<i32> {
    let rel = cspar_core::fixtures::r2_nonmonotone();
    let report = classify(&rel)?;
    let n = 10;
    let eps = q(1, 2);
    let kappa = 8;
    let _ = writeln!(
        out,
        "relation: r=4 over three symbols, case {}, plentifulness {}",
        report.case.label(),
        report.k
    );
    let _ = writeln!(out, "model: random uniform instances at n={n}, eps=1/2");

    let sparse_m = 125;
    let sparse = Instance::random(Kind::Uniform, n, rel.arity(), sparse_m, seed)?;
    let plan_lo = sparsify::plan(&report, sparse.kind, false, n, sparse_m, eps, kappa)?;
    let _ = writeln!(out, "\nbelow the density threshold (m={sparse_m}):");
    let _ = writeln!(out, "plan: {plan_lo}");
    if plan_lo.no_nontrivial {
        let _ = writeln!(
            out,
            "no nontrivial sparsifier is guaranteed here; keeping all {sparse_m} clauses"
        );
    }

    let dense_m = 32000;
    let dense = Instance::random(Kind::Uniform, n, rel.arity(), dense_m, seed)?;
    let plan_hi = sparsify::plan(&report, dense.kind, false, n, dense_m, eps, kappa)?;
    let _ = writeln!(out, "\nabove the density threshold (m={dense_m}):");
    let _ = writeln!(out, "plan: {plan_hi}");
    let sparsified = sparsify::execute(&plan_hi, &dense, seed)?;
    let bound = size_bound(rel.arity(), kappa, n, report.k);
    let _ = writeln!(
        out,
        "sparsifier: {} clauses (size bound r!*kappa*n^(r-k)*ln n = {bound})",
        sparsified.clauses.len()
    );
    let verdict = verify::exhaustive_verify(&rel, &dense, &sparsified, eps, DEFAULT_BUDGET)?;
    let _ = writeln!(out, "{verdict}");
    Ok(if verdict.pass && plan_lo.no_nontrivial {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAIL
    })
}

/// Ceiling of `r! * kappa * n^(r-k) * ln n`.
pub fn size_bound(r: usize, kappa: u32, n: u32, k: u32) -> u64 {
    let factorial: u64 = (1..=r as u64).product();
    let poly = factorial as f64 * kappa as f64 * (n as f64).powi((r as u32 - k) as i32);
    (poly * (n as f64).ln()).ceil() as u64
}
