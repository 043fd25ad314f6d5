//! Parallel sweep execution, deterministic report assembly and CSV output.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spec::{resolve, Perturbation, SweepSpec, Task};
use crate::error::{Error, Result};
use crate::hyp2f1::EvalConfig;
use crate::inequalities::{check, CheckOptions, CheckRecord, Params, Point, TheoremId};

/// A check that could not be evaluated, with its reproduction coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub id: TheoremId,
    pub params: Params,
    pub point: Point,
    pub message: String,
}

/// One entry of a sweep: an evaluated check or an evaluation error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Check(CheckRecord),
    Error(ErrorRecord),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        matches!(self, Outcome::Check(r) if r.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Totals {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    /// Parameter tuples outside a theorem's hypothesis, not evaluated.
    pub skipped: usize,
    /// Passing checks whose strict bound is met within ten error budgets.
    pub strictness_unresolved: usize,
}

/// Smallest margin seen for one theorem and where it occurred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMargin {
    pub value: f64,
    pub params: Params,
    pub point: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

/// The sampled point that came closest to one bound of one theorem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub id: TheoremId,
    pub side: Side,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub params: Params,
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub spec: SweepSpec,
    pub totals: Totals,
    pub failures: Vec<Outcome>,
    pub min_margins: BTreeMap<TheoremId, MinMargin>,
    pub witnesses: Vec<Witness>,
    pub wall_time: f64,
    /// Every evaluated check in grid order; written to CSV, not to JSON.
    #[serde(skip)]
    pub records: Vec<Outcome>,
}

enum TaskResult {
    Done(Outcome),
    Skipped,
}

fn options(spec: &SweepSpec, base: &CheckOptions) -> CheckOptions {
    let mut opts = *base;
    if let Some(t) = &spec.tolerance {
        if let Some(s) = t.slack {
            opts.slack = s;
        }
        if let Some(r) = t.rel_tol {
            opts.eval = EvalConfig { rel_tol: r, ..opts.eval };
        }
    }
    opts
}

fn perturb(mut r: CheckRecord, p: &Perturbation, slack: f64) -> CheckRecord {
    r.lower = r.lower.map(|l| l + p.lower_shift);
    r.upper = r.upper.map(|u| u + p.upper_shift);
    r.margin_lower = r.lower.map(|l| r.value - l);
    r.margin_upper = r.upper.map(|u| u - r.value);
    let tol = r.eval_error_budget + slack;
    r.pass = r.value.is_finite()
        && r.margin_lower.is_none_or(|m| m >= -tol)
        && r.margin_upper.is_none_or(|m| m >= -tol);
    r
}

fn run_task(task: &Task, opts: &CheckOptions, perturbations: &[Perturbation]) -> TaskResult {
    match check(task.id, &task.params, &task.point, opts) {
        Ok(mut r) => {
            for p in perturbations.iter().filter(|p| p.theorem == task.id) {
                r = perturb(r, p, opts.slack);
            }
            TaskResult::Done(Outcome::Check(r))
        }
        Err(Error::HypothesisViolation { .. }) => TaskResult::Skipped,
        Err(e) => TaskResult::Done(Outcome::Error(ErrorRecord {
            id: task.id,
            params: task.params,
            point: task.point,
            message: e.to_string(),
        })),
    }
}

/// Run `spec` on the current rayon pool with default check options.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    run_sweep_with(spec, &CheckOptions::default(), None)
}

/// Run `spec` with `base` options (overridden by `spec.tolerance`)
/// on `threads` worker threads, or the current rayon pool if `None`.
///
/// Per-point evaluation errors become report entries; only an invalid spec
/// or thread-pool failure aborts.
pub fn run_sweep_with(spec: &SweepSpec, base: &CheckOptions, threads: Option<usize>) -> Result<SweepReport> {
    spec.validate()?;
    let start = Instant::now();
    let tasks = resolve(spec)?;
    let opts = options(spec, base);
    let work = || -> Vec<TaskResult> {
        tasks.par_iter().map(|t| run_task(t, &opts, &spec.perturbations)).collect()
    };
    let results = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?
            .install(work),
        None => work(),
    };
    let mut report = assemble(spec.clone(), results);
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

fn assemble(spec: SweepSpec, results: Vec<TaskResult>) -> SweepReport {
    let mut totals = Totals::default();
    let mut records = Vec::with_capacity(results.len());
    for r in results {
        match r {
            TaskResult::Skipped => totals.skipped += 1,
            TaskResult::Done(o) => {
                totals.checks += 1;
                match &o {
                    Outcome::Check(c) if c.pass => {
                        totals.passed += 1;
                        if c.strictness_unresolved {
                            totals.strictness_unresolved += 1;
                        }
                    }
                    Outcome::Check(_) => totals.failed += 1,
                    Outcome::Error(_) => totals.errors += 1,
                }
                records.push(o);
            }
        }
    }
    let failures = records.iter().filter(|o| !o.passed()).cloned().collect();

    let mut min_margins: BTreeMap<TheoremId, MinMargin> = BTreeMap::new();
    let mut extremes: BTreeMap<(TheoremId, Side), (f64, &CheckRecord)> = BTreeMap::new();
    for o in &records {
        let Outcome::Check(r) = o else { continue };
        if let Some(m) = r.min_margin() {
            let better = min_margins.get(&r.id).is_none_or(|cur| m < cur.value);
            if better {
                min_margins.insert(
                    r.id,
                    MinMargin {
                        value: m,
                        params: r.params,
                        point: r.point,
                    },
                );
            }
        }
        for (side, margin) in [(Side::Lower, r.margin_lower), (Side::Upper, r.margin_upper)] {
            if let Some(m) = margin {
                let e = extremes.entry((r.id, side)).or_insert((m, r));
                if m < e.0 {
                    *e = (m, r);
                }
            }
        }
    }
    let witnesses = extremes
        .into_iter()
        .map(|((id, side), (margin, r))| Witness {
            id,
            side,
            value: r.value,
            bound: match side {
                Side::Lower => r.lower.unwrap_or(f64::NAN),
                Side::Upper => r.upper.unwrap_or(f64::NAN),
            },
            margin,
            params: r.params,
            point: r.point,
        })
        .collect();

    SweepReport {
        spec,
        totals,
        failures,
        min_margins,
        witnesses,
        wall_time: 0.0,
        records,
    }
}

pub const CSV_HEADER: [&str; 12] = [
    "theorem_id",
    "a",
    "b",
    "c",
    "x",
    "y",
    "value",
    "lower",
    "upper",
    "margin_lower",
    "margin_upper",
    "pass",
];

fn num(v: f64) -> String {
    // Debug formatting is the shortest round-trip representation.
    format!("{v:?}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Write `records` as CSV with a header row and LF line endings. Pair
/// parameters `(c, d)` fill the `a, b, c` columns as `(c, d, c + d)`; a
/// scalar point goes in `x`. Error records leave the numeric columns empty
/// and fail.
pub fn write_records_csv<W: Write>(records: &[Outcome], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Config(format!("writing CSV: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for o in records {
        let (id, params, point) = match o {
            Outcome::Check(r) => (r.id, r.params, r.point),
            Outcome::Error(e) => (e.id, e.params, e.point),
        };
        let (a, b, c) = params.columns();
        let (x, y) = point.columns();
        let mut row = vec![id.to_string(), num(a), num(b), num(c), opt(x), opt(y)];
        match o {
            Outcome::Check(r) => row.extend([
                num(r.value),
                opt(r.lower),
                opt(r.upper),
                opt(r.margin_lower),
                opt(r.margin_upper),
                r.pass.to_string(),
            ]),
            Outcome::Error(_) => row.extend(std::iter::repeat_n(String::new(), 5).chain(["false".to_string()])),
        }
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Config(format!("writing CSV: {e}")))?;
    Ok(())
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Write every record as CSV; see [`write_records_csv`].
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_records_csv(&self.records, out)
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
    }

    /// Witness for `id` on `side`, if that bound exists.
    pub fn witness(&self, id: TheoremId, side: Side) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.id == id && w.side == side)
    }
}
