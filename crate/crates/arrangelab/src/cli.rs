//! Command-line front end.
//!
//! Exit codes are a stable contract: 0 success (all applicable checks hold,
//! or no counterexample candidates), 1 a check failed, 2 usage or parse
//! error, 3 the search found counterexample candidates.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use crate::derivation::{certify_free_basis, is_free, saito_check};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::fileio::{ArrangementFile, BasisFile, FileMeta};
use crate::geom::Arrangement;
use crate::report::{analyze, restrict_line, AnalyzeOptions};
use crate::verify::{
    conjecture_scan, conjecture_scan_with, run_all, run_one, CheckOptions, CorpusSpec, ScanReport,
    TheoremReport, THEOREM_IDS,
};

pub const MAX_DEGREE_ENV: &str = "ARRANGELAB_MAX_DEGREE";

#[derive(Parser)]
#[command(
    name = "arrangelab",
    version,
    about = "Exact analysis of projective line arrangements",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full combinatorial and algebraic report for an arrangement file.
    Analyze {
        path: PathBuf,
        /// Emit the machine-readable report instead of text.
        #[arg(long)]
        json: bool,
        /// Refuse non-essential input instead of analyzing with a warning.
        #[arg(long)]
        strict: bool,
    },
    /// Construct a named family member and write its arrangement file.
    Generate {
        /// near_pencil, grid, monomial, finite_plane, generic,
        /// random_supersolvable
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: Option<u64>,
        /// For monomial: append the coordinate triangle.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Restriction multiarrangement of one member line: points,
    /// multiplicities, exponents.
    Restrict {
        path: PathBuf,
        /// Zero-based index of the member line.
        #[arg(long)]
        line: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run theorem checks; exit 0 exactly when every applicable check holds.
    Verify {
        /// Arrangement file (not needed for --theorem kawanoue).
        path: Option<PathBuf>,
        /// One check id (see --list).
        #[arg(long)]
        theorem: Option<String>,
        /// Run every arrangement-level check (the default).
        #[arg(long)]
        all: bool,
        /// List the available check ids and exit.
        #[arg(long)]
        list: bool,
        /// After a Free verdict, extract a candidate basis from the
        /// derivation nullspaces and certify it.
        #[arg(long)]
        certify: bool,
        /// Certify an explicit basis pair from a JSON file.
        #[arg(long)]
        basis: Option<PathBuf>,
        /// Waive characteristic-zero hypotheses (to demonstrate designed
        /// failures over prime fields).
        #[arg(long)]
        allow_positive_char: bool,
        #[arg(long)]
        json: bool,
    },
    /// Scan seeded corpora for non-free arrangements without double points;
    /// exit 3 when a candidate is found.
    Search {
        /// mixed, named, supersolvable, or generic:LO..HI
        #[arg(long, default_value = "mixed")]
        corpus: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; seeds are partitioned and merged in order.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the full scan report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        /// Test plumbing: force NonFree verdicts so the candidate path and
        /// exit code 3 can be exercised.
        #[arg(long, hide = true)]
        inject_fake_nonfree: bool,
    },
}

/// Parses and runs a full command line, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Io(_)
        | Error::Json(_)
        | Error::FileFormat(_)
        | Error::ScalarParse { .. }
        | Error::NotSquarefree(_)
        | Error::QuadraticOutOfRange(_)
        | Error::CompositeModulus(_)
        | Error::FamilyParameter(_)
        | Error::UnknownTheorem(_)
        | Error::LineIndexOutOfRange { .. }
        | Error::TooFewLines { .. }
        | Error::ZeroTriple
        | Error::DuplicateLine(_)
        | Error::NotEssential => 2,
        _ => 1,
    }
}

fn max_degree_from_env() -> Option<usize> {
    std::env::var(MAX_DEGREE_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
}

fn load_arrangement(path: &Path) -> Result<(ArrangementFile, Arrangement)> {
    let text = std::fs::read_to_string(path)?;
    let file = ArrangementFile::from_json(&text)?;
    let arr = file.to_arrangement()?;
    Ok((file, arr))
}

fn dispatch(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Analyze { path, json, strict } => cmd_analyze(&path, json, strict),
        Cmd::Generate {
            family,
            n,
            a,
            b,
            m,
            k,
            p,
            full,
            seed,
            out,
        } => cmd_generate(&family, n, a, b, m, k, p, full, seed, out.as_deref()),
        Cmd::Restrict { path, line, json } => cmd_restrict(&path, line, json),
        Cmd::Verify {
            path,
            theorem,
            all,
            list,
            certify,
            basis,
            allow_positive_char,
            json,
        } => cmd_verify(
            path.as_deref(),
            theorem.as_deref(),
            all,
            list,
            certify,
            basis.as_deref(),
            allow_positive_char,
            json,
        ),
        Cmd::Search {
            corpus,
            trials,
            seed,
            jobs,
            out,
            json,
            inject_fake_nonfree,
        } => cmd_search(
            &corpus,
            trials,
            seed,
            jobs,
            out.as_deref(),
            json,
            inject_fake_nonfree,
        ),
    }
}

fn cmd_analyze(path: &Path, json: bool, strict: bool) -> Result<i32> {
    let (_, arr) = load_arrangement(path)?;
    if arr.len() < 2 {
        return Err(Error::TooFewLines {
            needed: 2,
            got: arr.len(),
        });
    }
    if strict && !arr.is_essential() {
        return Err(Error::NotEssential);
    }
    let report = analyze(
        &arr,
        AnalyzeOptions {
            max_degree: max_degree_from_env(),
        },
    )?;
    if json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    family: &str,
    n: Option<usize>,
    a: Option<usize>,
    b: Option<usize>,
    m: Option<usize>,
    k: Option<usize>,
    p: Option<u64>,
    full: bool,
    seed: u64,
    out: Option<&Path>,
) -> Result<i32> {
    let need = |opt: Option<usize>, name: &str| {
        opt.ok_or_else(|| Error::FamilyParameter(format!("{family} needs --{name}")))
    };
    let spec = match family {
        "near_pencil" => FamilySpec::NearPencil {
            n: need(n, "n")?,
        },
        "grid" => FamilySpec::Grid {
            a: need(a, "a")?,
            b: need(b, "b")?,
        },
        "monomial" => FamilySpec::Monomial {
            n: need(n, "n")?,
            full,
        },
        "finite_plane" => FamilySpec::FinitePlane {
            p: p.ok_or_else(|| Error::FamilyParameter("finite_plane needs --p".into()))?,
        },
        "generic" => FamilySpec::Generic {
            n: need(n, "n")?,
            seed,
        },
        "random_supersolvable" => FamilySpec::RandomSupersolvable {
            m: need(m, "m")?,
            k: need(k, "k")?,
            seed,
        },
        "random" => FamilySpec::Random {
            n: need(n, "n")?,
            seed,
        },
        other => {
            return Err(Error::FamilyParameter(format!(
                "unknown family {other:?} (near_pencil, grid, monomial, finite_plane, \
                 generic, random_supersolvable, random)"
            )))
        }
    };
    let arr = spec.build()?;
    let randomized = matches!(
        spec,
        FamilySpec::Generic { .. }
            | FamilySpec::RandomSupersolvable { .. }
            | FamilySpec::Random { .. }
    );
    let file = ArrangementFile::from_arrangement(
        &arr,
        Some(FileMeta {
            name: Some(spec.label()),
            family: Some(spec.label()),
            seed: randomized.then_some(seed),
        }),
    );
    match out {
        Some(path) => std::fs::write(path, file.to_json())?,
        None => print!("{}", file.to_json()),
    }
    Ok(0)
}

fn cmd_restrict(path: &Path, line: usize, json: bool) -> Result<i32> {
    let (_, arr) = load_arrangement(path)?;
    let report = restrict_line(&arr, line)?;
    if json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(0)
}

fn render_theorem_report(r: &TheoremReport) -> String {
    let mut out = String::new();
    if !r.applicable {
        let _ = write!(
            out,
            "{}: not applicable ({})",
            r.id,
            r.hypothesis_failed.as_deref().unwrap_or("hypothesis")
        );
    } else if r.holds {
        let _ = write!(out, "{}: holds", r.id);
    } else {
        let _ = write!(out, "{}: FAILED", r.id);
    }
    if r.applicable && !r.quantities.is_empty() {
        let mut parts = Vec::new();
        for (key, value) in &r.quantities {
            if key == "per_line" {
                continue;
            }
            parts.push(format!("{key}={value}"));
        }
        if !parts.is_empty() {
            let _ = write!(out, "  [{}]", parts.join(" "));
        }
    }
    if let Some(wit) = &r.witness {
        let _ = write!(out, "  witness: {wit}");
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    path: Option<&Path>,
    theorem: Option<&str>,
    all: bool,
    list: bool,
    certify: bool,
    basis: Option<&Path>,
    allow_positive_char: bool,
    json: bool,
) -> Result<i32> {
    if list {
        for id in THEOREM_IDS {
            println!("{id}");
        }
        return Ok(0);
    }
    let opts = CheckOptions {
        allow_positive_char,
        max_degree: max_degree_from_env(),
    };
    let mut reports: Vec<TheoremReport> = Vec::new();

    // self-contained certificate needs no input file
    if theorem == Some("kawanoue") && path.is_none() {
        reports.push(run_one(&crate::families::triangle(), "kawanoue", opts)?);
        return finish_verify(reports, json);
    }

    let Some(path) = path else {
        return Err(Error::FileFormat(
            "an arrangement file is required (except for --theorem kawanoue)".into(),
        ));
    };
    let (_, arr) = load_arrangement(path)?;

    if let Some(basis_path) = basis {
        let text = std::fs::read_to_string(basis_path)?;
        let basis_file = BasisFile::from_json(&text)?;
        let field = arr.field();
        let theta2 = basis_file.theta2.to_derivation(field)?;
        let theta3 = basis_file.theta3.to_derivation(field)?;
        let outcome = saito_check(&arr, &theta2, &theta3)?;
        let mut report = TheoremReport {
            id: "basis-certificate".into(),
            applicable: true,
            hypothesis_failed: None,
            holds: outcome.is_certified(),
            quantities: Default::default(),
            witness: None,
        };
        report
            .quantities
            .insert("outcome".into(), serde_json::to_value(&outcome)?);
        reports.push(report);
        return finish_verify(reports, json);
    }

    match theorem {
        Some(id) => reports.push(run_one(&arr, id, opts)?),
        None => {
            let _ = all; // --all is the default
            reports.extend(run_all(&arr, opts)?);
        }
    }

    if certify {
        reports.push(certify_report(&arr)?);
    }
    finish_verify(reports, json)
}

/// Constructive freeness certificate: only applicable to essential
/// characteristic-zero arrangements with a Free verdict.
fn certify_report(arr: &Arrangement) -> Result<TheoremReport> {
    let mut report = TheoremReport {
        id: "freeness-certificate".into(),
        applicable: false,
        hypothesis_failed: None,
        holds: false,
        quantities: Default::default(),
        witness: None,
    };
    if arr.field().characteristic() != 0 {
        report.hypothesis_failed = Some("characteristic zero".into());
        return Ok(report);
    }
    if !arr.is_essential() {
        report.hypothesis_failed = Some("essential".into());
        return Ok(report);
    }
    let verdict = is_free(arr)?;
    let Some((_, d2, d3)) = verdict.exponents() else {
        report.hypothesis_failed = Some("a Free verdict to certify".into());
        return Ok(report);
    };
    report.applicable = true;
    let pair = certify_free_basis(arr, d2, d3)?;
    report.holds = pair.is_some();
    report
        .quantities
        .insert("exponents".into(), json!([1, d2, d3]));
    if let Some((t2, t3)) = pair {
        report.quantities.insert(
            "basis".into(),
            json!({
                "theta2": crate::fileio::DerivationFile::from_derivation(&t2),
                "theta3": crate::fileio::DerivationFile::from_derivation(&t3),
            }),
        );
    }
    Ok(report)
}

fn finish_verify(reports: Vec<TheoremReport>, json: bool) -> Result<i32> {
    let all_hold = reports.iter().all(TheoremReport::passed);
    if json {
        let doc = crate::verify::to_document(&reports);
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for r in &reports {
            println!("{}", render_theorem_report(r));
        }
        println!(
            "verdict: {}",
            if all_hold {
                "all applicable checks hold"
            } else {
                "CHECK FAILED"
            }
        );
    }
    Ok(if all_hold { 0 } else { 1 })
}

fn render_scan_text(report: &ScanReport) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(
        w,
        "scan: {} trials, seed {}",
        report.corpus.trials, report.corpus.seed
    );
    let _ = writeln!(
        w,
        "{:>5} {:>6} {:>6} {:>8} {:>7} {:>7} {:>14}",
        "|A|", "count", "free", "nonfree", "n2 min", "n2 max", "2*n2 >= |A|"
    );
    for s in &report.stats {
        let _ = writeln!(
            w,
            "{:>5} {:>6} {:>6} {:>8} {:>7} {:>7} {:>14}",
            s.size, s.count, s.free, s.nonfree, s.n2_min, s.n2_max, s.satisfies_half
        );
    }
    if report.candidates.is_empty() {
        let _ = writeln!(w, "no counterexample candidates (non-free with n2 = 0)");
    } else {
        let _ = writeln!(
            w,
            "COUNTEREXAMPLE CANDIDATES: {} (non-free with n2 = 0)",
            report.candidates.len()
        );
        for (record, file) in &report.candidates {
            let _ = writeln!(w, "  trial {} {}:", record.index, record.label);
            for line in file.to_json().lines() {
                let _ = writeln!(w, "    {line}");
            }
        }
    }
    out
}

fn cmd_search(
    corpus: &str,
    trials: usize,
    seed: u64,
    jobs: usize,
    out: Option<&Path>,
    json: bool,
    inject_fake_nonfree: bool,
) -> Result<i32> {
    let spec = CorpusSpec::parse(corpus, trials, seed)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let report = pool.install(|| {
        if inject_fake_nonfree {
            conjecture_scan_with(&spec, &|a| {
                let mut v = is_free(a)?;
                v.status = crate::derivation::FreenessStatus::NonFree;
                Ok(v)
            })
        } else {
            conjecture_scan(&spec)
        }
    })?;
    if let Some(path) = out {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", render_scan_text(&report));
    }
    Ok(if report.has_candidates() { 3 } else { 0 })
}
