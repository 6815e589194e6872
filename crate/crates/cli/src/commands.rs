use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use syzygy_core::asymptotics::{analyze, AnalysisOptions, StepInvariants};
use syzygy_core::asymptotics::step_invariants;
use syzygy_core::cring::McmOptions;
use syzygy_core::eisenbud::{lift_resolution, operators, scan_operator, EisenbudOperators};
use syzygy_core::hilbert::{hilbert_series, oracle_dim};
use syzygy_core::resolve::{resolve, Periodicity, Resolution, ResolveOptions};
use syzygy_core::Error as CoreError;

use crate::cache;
use crate::report::Report;
use crate::spec::{ExampleSpec, Settings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Compute or extend the resolution and write the cache.
    Resolve,
    /// Per-step Hilbert data.
    Hilbert,
    /// Quasi-polynomial fits and theorem verdicts.
    Analyze,
    /// Eisenbud operators, their identities and the surjectivity scan.
    Operators,
    /// Cross-check dimensions and exactness by dense linear algebra.
    Oracle,
    /// Write the JSON and CSV reports to the output directory.
    Report,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Command-line overrides and run options.
#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub steps: Option<usize>,
    pub degree_bound: Option<i32>,
    pub period: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub output: Format,
    pub max_degree: Option<i32>,
    pub time_limit: Option<Duration>,
    pub out_dir: Option<PathBuf>,
}

/// Ordered by severity; a batch reports the most severe status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    BudgetPartial,
    VerificationFailed,
    Usage,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 1,
            Status::Usage => 2,
            Status::BudgetPartial => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: String,
    pub status: Status,
    /// Text for standard output.
    pub output: String,
    /// Diagnostics for standard error.
    pub notes: Vec<String>,
}

pub fn settings(spec: &ExampleSpec, flags: &Flags) -> Settings {
    let s = spec.settings;
    Settings {
        steps: flags.steps.unwrap_or(s.steps),
        degree_bound: flags.degree_bound.unwrap_or(s.degree_bound),
        period: flags.period.unwrap_or(s.period),
        seed: flags.seed.unwrap_or(s.seed),
        trials: flags.trials.unwrap_or(s.trials),
    }
}

/// Returns `M_0, ..., M_steps`, reading and updating the cache when one is
/// configured. Unreadable or stale cache files are recomputed with a warning.
pub fn obtain_resolution(
    spec: &ExampleSpec,
    steps: usize,
    flags: &Flags,
    deadline: Option<Instant>,
    notes: &mut Vec<String>,
) -> Result<Resolution, CoreError> {
    let opts = ResolveOptions { deadline };
    let Some(dir) = &flags.cache_dir else {
        return resolve(&spec.module, steps, &opts);
    };
    let cached = cache::load(dir, spec).unwrap_or_else(|e| {
        notes.push(format!("warning: {e}; recomputing"));
        None
    });
    let res = match cached {
        Some(mut r) if r.len() > steps => {
            r.truncate(steps);
            return Ok(r);
        }
        Some(mut r) => {
            notes.push(format!(
                "{}: extending cached resolution from step {} to {steps}",
                spec.name,
                r.len() - 1
            ));
            r.extend(steps, &opts)?;
            r
        }
        None => resolve(&spec.module, steps, &opts)?,
    };
    if let Err(e) = cache::store(dir, spec, &res) {
        notes.push(format!("warning: {e}"));
    }
    Ok(res)
}

#[derive(Serialize)]
struct ResolveSummary {
    name: String,
    fingerprint: String,
    steps: usize,
    truncated: bool,
    zero_module: bool,
    betti: Vec<usize>,
    degrees: Vec<Vec<i32>>,
    periodicity: Option<Periodicity>,
}

#[derive(Serialize)]
struct HilbertStep {
    #[serde(flatten)]
    step: StepInvariants,
    numerator: String,
    hilbert_function: Vec<i64>,
}

#[derive(Serialize)]
struct HilbertReport {
    name: String,
    truncated: bool,
    steps: Vec<HilbertStep>,
}

#[derive(Serialize)]
struct CheckResult {
    ok: bool,
    detail: String,
}

impl CheckResult {
    fn from(r: Result<(), CoreError>) -> CheckResult {
        match r {
            Ok(()) => CheckResult {
                ok: true,
                detail: String::new(),
            },
            Err(e) => CheckResult {
                ok: false,
                detail: e.to_string(),
            },
        }
    }
}

#[derive(Serialize)]
struct FactorizationCheck {
    i: usize,
    #[serde(flatten)]
    result: CheckResult,
}

#[derive(Serialize)]
struct ScanRow {
    n: usize,
    surjective: bool,
    coeffs: Option<Vec<u32>>,
    tried: usize,
    degree: Option<i32>,
    kernel_mu: Option<usize>,
}

#[derive(Serialize)]
struct OperatorsReport {
    name: String,
    top: usize,
    identity: CheckResult,
    chain_maps: CheckResult,
    matrix_factorizations: Vec<FactorizationCheck>,
    scans: Vec<ScanRow>,
}

#[derive(Clone, Copy, Serialize)]
struct OracleRow {
    i: usize,
    degree: i32,
    groebner: i64,
    oracle: i64,
}

#[derive(Serialize)]
struct OracleReport {
    name: String,
    max_degree: i32,
    checked: usize,
    mismatches: Vec<OracleRow>,
    complex: CheckResult,
    exactness: CheckResult,
    #[serde(skip)]
    rows: Vec<OracleRow>,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn csv_of(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).unwrap();
    for r in rows {
        w.write_record(r).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn core_status(e: &CoreError) -> Status {
    match e {
        CoreError::Usage(_) => Status::Usage,
        _ => Status::VerificationFailed,
    }
}

/// Runs one command on one example.
pub fn run(command: Command, spec: &ExampleSpec, flags: &Flags, deadline: Option<Instant>) -> Outcome {
    let mut notes = Vec::new();
    let result = run_inner(command, spec, flags, deadline, &mut notes);
    match result {
        Ok((status, output)) => Outcome {
            name: spec.name.clone(),
            status,
            output,
            notes,
        },
        Err(e) => {
            notes.push(format!("error: {}: {e}", spec.name));
            Outcome {
                name: spec.name.clone(),
                status: core_status(&e),
                output: String::new(),
                notes,
            }
        }
    }
}

fn run_inner(
    command: Command,
    spec: &ExampleSpec,
    flags: &Flags,
    deadline: Option<Instant>,
    notes: &mut Vec<String>,
) -> Result<(Status, String), CoreError> {
    let set = settings(spec, flags);
    if set.period == 0 || set.trials == 0 {
        return Err(CoreError::Usage("period and trials must be positive".into()));
    }
    let res = obtain_resolution(spec, set.steps, flags, deadline, notes)?;
    let budget = if res.truncated() {
        notes.push(format!(
            "{}: time limit reached after step {}; output is partial",
            spec.name,
            res.len() - 1
        ));
        Status::BudgetPartial
    } else {
        Status::Ok
    };
    let csv = flags.output == Format::Csv;
    let (status, text) = match command {
        Command::Resolve => {
            let s = ResolveSummary {
                name: spec.name.clone(),
                fingerprint: spec.fingerprint(),
                steps: res.len() - 1,
                truncated: res.truncated(),
                zero_module: res.syzygy(0).rank() == 0,
                betti: res.betti_numbers(),
                degrees: (0..res.len()).map(|i| res.shifts(i).to_vec()).collect(),
                periodicity: res.periodicity(),
            };
            let text = if csv {
                csv_of(
                    &["i", "beta", "degrees"],
                    s.degrees.iter().enumerate().map(|(i, d)| {
                        let degs: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                        vec![i.to_string(), d.len().to_string(), degs.join(" ")]
                    }),
                )
            } else {
                json(&s)
            };
            (Status::Ok, text)
        }
        Command::Hilbert => {
            let mcm = McmOptions {
                seed: set.seed,
                ..McmOptions::default()
            };
            let steps = step_invariants(&res, &mcm)?;
            let rows: Vec<HilbertStep> = steps
                .into_iter()
                .zip(res.modules())
                .map(|(step, m)| {
                    let series = hilbert_series(m);
                    HilbertStep {
                        step,
                        numerator: series.numerator().to_string(),
                        hilbert_function: (0..=set.degree_bound).map(|d| series.dim_in_degree(d)).collect(),
                    }
                })
                .collect();
            let text = if csv {
                csv_of(
                    &["i", "beta", "e0", "e1", "reg", "mu"],
                    rows.iter().map(|r| {
                        let s = &r.step;
                        vec![
                            s.i.to_string(),
                            s.beta.to_string(),
                            s.e0.to_string(),
                            s.e1.map(|x| x.to_string()).unwrap_or_default(),
                            s.reg.map(|x| x.to_string()).unwrap_or_default(),
                            s.beta.to_string(),
                        ]
                    }),
                )
            } else {
                json(&HilbertReport {
                    name: spec.name.clone(),
                    truncated: res.truncated(),
                    steps: rows,
                })
            };
            (Status::Ok, text)
        }
        Command::Analyze | Command::Report => {
            let report = build_report(spec, &res, set)?;
            let status = if report.any_failure() {
                Status::VerificationFailed
            } else {
                Status::Ok
            };
            let text = if command == Command::Report {
                let dir = flags.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
                let written = write_report(&dir, &report).map_err(|e| {
                    CoreError::Usage(format!("cannot write reports to {}: {e}", dir.display()))
                })?;
                written.iter().map(|p| format!("{}\n", p.display())).collect()
            } else if csv {
                report.to_csv()
            } else {
                report.to_json()
            };
            (status, text)
        }
        Command::Operators => operators_command(spec, &res, set, csv)?,
        Command::Oracle => {
            let max_degree = flags.max_degree.unwrap_or(set.degree_bound);
            let r = oracle_command(spec, &res, max_degree);
            let ok = r.mismatches.is_empty() && r.complex.ok && r.exactness.ok;
            let text = if csv {
                csv_of(
                    &["i", "degree", "groebner", "oracle"],
                    r.rows.iter().map(|x| {
                        vec![
                            x.i.to_string(),
                            x.degree.to_string(),
                            x.groebner.to_string(),
                            x.oracle.to_string(),
                        ]
                    }),
                )
            } else {
                json(&r)
            };
            (if ok { Status::Ok } else { Status::VerificationFailed }, text)
        }
    };
    Ok((status.max(budget), text))
}

/// The full analysis of an example as a report.
pub fn build_report(spec: &ExampleSpec, res: &Resolution, set: Settings) -> Result<Report, CoreError> {
    let opts = AnalysisOptions {
        period: set.period,
        trials: set.trials,
        seed: set.seed,
        degree_bound: set.degree_bound,
        mcm: McmOptions::default(),
    };
    let analysis = analyze(res, &opts)?;
    Ok(Report::new(spec, set, res.truncated(), analysis))
}

/// Writes `<name>.json` and `<name>.csv` atomically into `dir`.
pub fn write_report(dir: &Path, report: &Report) -> std::io::Result<Vec<PathBuf>> {
    use std::io::Write;
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for (ext, text) in [("json", report.to_json()), ("csv", report.to_csv())] {
        let path = dir.join(format!("{}.{ext}", report.name));
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(text.as_bytes())?;
        tmp.persist(&path).map_err(|e| e.error)?;
        out.push(path);
    }
    Ok(out)
}

fn operators_command(
    spec: &ExampleSpec,
    res: &Resolution,
    set: Settings,
    csv: bool,
) -> Result<(Status, String), CoreError> {
    if res.len() < 3 || spec.ring.codim() == 0 {
        return Err(CoreError::Usage(
            "operators need a complete intersection and at least two steps".into(),
        ));
    }
    let ops: EisenbudOperators = operators(&lift_resolution(res)?)?;
    let identity = CheckResult::from(ops.check_identity());
    let chain_maps = CheckResult::from(ops.check_chain_maps());
    let mut factorizations = Vec::new();
    if spec.ring.codim() == 1 {
        if let Some(p) = res.periodicity() {
            for i in (p.start + 1).max(1)..ops.top() {
                factorizations.push(FactorizationCheck {
                    i,
                    result: CheckResult::from(ops.check_matrix_factorization(i)),
                });
            }
        }
    }
    let mut scans = Vec::new();
    for n in 0..res.len() - 2 {
        let scan = scan_operator(&ops, n, set.trials, set.seed.wrapping_add(n as u64))?;
        scans.push(ScanRow {
            n,
            surjective: scan.found.is_some(),
            coeffs: scan.found.as_ref().map(|m| m.coeffs.clone()),
            tried: scan.tried,
            degree: scan.found.as_ref().map(|m| m.degree),
            kernel_mu: scan.found.as_ref().and_then(|m| m.kernel.as_ref()).map(|k| k.rank()),
        });
    }
    let ok = identity.ok && chain_maps.ok && factorizations.iter().all(|f| f.result.ok);
    let report = OperatorsReport {
        name: spec.name.clone(),
        top: ops.top(),
        identity,
        chain_maps,
        matrix_factorizations: factorizations,
        scans,
    };
    let text = if csv {
        csv_of(
            &["n", "surjective", "coeffs", "tried", "kernel_mu"],
            report.scans.iter().map(|s| {
                let coeffs: Vec<String> = s.coeffs.iter().flatten().map(|c| c.to_string()).collect();
                vec![
                    s.n.to_string(),
                    s.surjective.to_string(),
                    coeffs.join(" "),
                    s.tried.to_string(),
                    s.kernel_mu.map(|m| m.to_string()).unwrap_or_default(),
                ]
            }),
        )
    } else {
        json(&report)
    };
    Ok((if ok { Status::Ok } else { Status::VerificationFailed }, text))
}

fn oracle_command(spec: &ExampleSpec, res: &Resolution, max_degree: i32) -> OracleReport {
    let mut rows = Vec::new();
    for (i, m) in res.modules().iter().enumerate() {
        let series = hilbert_series(m);
        for d in 0..=max_degree {
            rows.push(OracleRow {
                i,
                degree: d,
                groebner: series.dim_in_degree(d),
                oracle: oracle_dim(m, d),
            });
        }
    }
    let mismatches = rows
        .iter()
        .filter(|r| r.groebner != r.oracle)
        .copied()
        .collect();
    OracleReport {
        name: spec.name.clone(),
        max_degree,
        checked: rows.len(),
        mismatches,
        complex: CheckResult::from(res.check_complex()),
        exactness: CheckResult::from(res.check_exactness(max_degree)),
        rows,
    }
}

/// Runs a command over several examples concurrently. Outcomes come back in
/// input order.
pub fn run_batch(command: Command, specs: &[ExampleSpec], flags: &Flags) -> Vec<Outcome> {
    let deadline = flags.time_limit.map(|t| Instant::now() + t);
    specs
        .par_iter()
        .map(|s| run(command, s, flags, deadline))
        .collect()
}

/// Joins batch outputs: JSON documents become an array, CSV tables are
/// separated by `# name` lines.
pub fn combine(outcomes: &[Outcome], flags: &Flags, command: Command) -> String {
    if outcomes.len() == 1 || command == Command::Report {
        return outcomes.iter().map(|o| o.output.as_str()).collect();
    }
    match flags.output {
        Format::Json => {
            let docs: Vec<&str> = outcomes
                .iter()
                .map(|o| o.output.trim_end())
                .filter(|s| !s.is_empty())
                .collect();
            format!("[\n{}\n]\n", docs.join(",\n"))
        }
        Format::Csv => outcomes
            .iter()
            .map(|o| format!("# {}\n{}", o.name, o.output))
            .collect(),
    }
}
