use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::graphs::Graph;
use crate::seidel::switching_class_key;
use crate::spectral::{JacobiOptions, SpectralError};
use crate::verify::{
    format_real, CheckKind, Quantity, Subject, VerifyError, DEFAULT_STRICT_MARGIN,
};

use super::{GraphSource, SearchError};

pub const DEFAULT_P_GRID: [f64; 5] = [0.25, 0.5, 1.0, 1.5, 1.75];
pub const DEFAULT_FAILURE_CAP: usize = 1000;
/// Class keys cost `2 n · (n-1)!` relabellings, so the view stops here.
pub const MAX_CLASS_VIEW_ORDER: usize = 6;

const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    pub checks: Vec<CheckKind>,
    pub p_grid: Vec<f64>,
    pub strict_margin: f64,
    /// Worker threads; 0 uses one per core.
    pub workers: usize,
    pub failure_cap: usize,
    /// Abort on the first malformed input line instead of skipping it.
    pub strict_parse: bool,
    /// Keep one summary row per graph.
    pub rows: bool,
    /// Group graphs by switching class (orders up to 6).
    pub classes: bool,
    pub timing: bool,
    pub jacobi: JacobiOptions,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            checks: CheckKind::ALL.to_vec(),
            p_grid: DEFAULT_P_GRID.to_vec(),
            strict_margin: DEFAULT_STRICT_MARGIN,
            workers: 0,
            failure_cap: DEFAULT_FAILURE_CAP,
            strict_parse: true,
            rows: false,
            classes: false,
            timing: true,
            jacobi: JacobiOptions::default(),
        }
    }
}

impl ScanOptions {
    pub fn with_checks(checks: &[CheckKind]) -> Self {
        ScanOptions {
            checks: checks.to_vec(),
            ..ScanOptions::default()
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.checks.is_empty() {
            return Err(SearchError::Options("no checks selected".into()));
        }
        if !(self.strict_margin > 0.0 && self.strict_margin.is_finite()) {
            return Err(SearchError::Options(format!(
                "strict margin {} must be positive",
                self.strict_margin
            )));
        }
        if self.checks.contains(&CheckKind::Theorem1) {
            if self.p_grid.is_empty() {
                return Err(SearchError::Options("empty p grid".into()));
            }
            if let Some(p) = self.p_grid.iter().find(|p| !(**p > 0.0 && **p < 2.0)) {
                return Err(SearchError::Options(format!("p = {p} outside (0, 2)")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyRecord {
    pub graph6: String,
    pub n: usize,
    pub value: f64,
}

/// Graphs whose energy is within the strict margin of `2n - 2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EqualityStats {
    pub count: u64,
    pub sc_equivalent: u64,
    pub zero_odd_pairs: u64,
}

impl EqualityStats {
    fn add(&mut self, other: &EqualityStats) {
        self.count += other.count;
        self.sc_equivalent += other.sc_equivalent;
        self.zero_odd_pairs += other.zero_odd_pairs;
    }

    /// Every equality case is SC-equivalent to `K_n` and has no odd pairs.
    pub fn consistent(&self) -> bool {
        self.sc_equivalent == self.count && self.zero_odd_pairs == self.count
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderSummary {
    pub n: usize,
    pub graphs: u64,
    pub min_energy: Option<EnergyRecord>,
    pub equality: EqualityStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureRecord {
    /// Position of the graph in the source, from 0.
    pub index: u64,
    pub graph6: String,
    pub check: CheckKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceIssue {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphRow {
    pub graph6: String,
    pub n: usize,
    pub energy: Option<f64>,
    pub n_op: u64,
    /// Smallest margin per check.
    pub min_margin: BTreeMap<CheckKind, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassSummary {
    pub key: String,
    pub representative: String,
    pub n: usize,
    pub members: u64,
    pub energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub source: String,
    pub checks: Vec<CheckKind>,
    pub p_grid: Vec<f64>,
    pub strict_margin: f64,
    pub graphs: u64,
    pub reports: u64,
    pub failures_total: u64,
    pub failures_by_check: BTreeMap<CheckKind, u64>,
    /// Checker runs that returned an error instead of a verdict.
    pub check_errors: u64,
    /// Graphs whose eigensolver did not converge.
    pub nonconvergent: u64,
    pub min_energy: Option<EnergyRecord>,
    pub equality: EqualityStats,
    pub by_order: Vec<OrderSummary>,
    pub failures: Vec<FailureRecord>,
    pub skipped_lines: Vec<SourceIssue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassSummary>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<GraphRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

struct Outcome {
    index: u64,
    graph6: String,
    n: usize,
    energy: Option<f64>,
    nonconvergent: bool,
    reports: u64,
    check_errors: u64,
    failures: Vec<FailureRecord>,
    equality: Option<EqualityStats>,
    class_key: Option<String>,
    row: Option<GraphRow>,
}

fn is_numeric_failure(e: &VerifyError) -> bool {
    matches!(
        e,
        VerifyError::Spectral(SpectralError::NoConvergence { .. } | SpectralError::Residual { .. })
    )
}

fn examine(index: u64, g: &Graph, opts: &ScanOptions) -> Outcome {
    let subject = Subject::with_options(g, opts.jacobi);
    let n = g.order();
    let energy = subject.energy();
    let mut out = Outcome {
        index,
        graph6: subject.id().to_string(),
        n,
        energy: energy.as_ref().ok().copied(),
        nonconvergent: energy.is_err(),
        reports: 0,
        check_errors: 0,
        failures: Vec::new(),
        equality: None,
        class_key: None,
        row: None,
    };
    let mut min_margin = BTreeMap::new();
    for &check in &opts.checks {
        match subject.run(check, &opts.p_grid, opts.strict_margin) {
            Ok(reports) => {
                out.reports += reports.len() as u64;
                for r in reports {
                    let m = r.margin.to_f64();
                    min_margin
                        .entry(check)
                        .and_modify(|v: &mut f64| *v = v.min(m))
                        .or_insert(m);
                    if !r.pass {
                        out.failures.push(FailureRecord {
                            index,
                            graph6: r.graph6,
                            check,
                            lhs: Some(r.lhs),
                            rhs: Some(r.rhs),
                            margin: Some(r.margin),
                            k: r.meta.k,
                            p: r.meta.p,
                            error: None,
                        });
                    }
                }
            }
            Err(e) => {
                out.check_errors += 1;
                out.nonconvergent |= is_numeric_failure(&e);
                out.failures.push(FailureRecord {
                    index,
                    graph6: out.graph6.clone(),
                    check,
                    lhs: None,
                    rhs: None,
                    margin: None,
                    k: None,
                    p: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    if let Some(e) = out.energy {
        if (e - (2.0 * n as f64 - 2.0)).abs() <= opts.strict_margin {
            out.equality = Some(EqualityStats {
                count: 1,
                sc_equivalent: subject.is_sc_complete() as u64,
                zero_odd_pairs: (subject.odd_pairs().get() == 0) as u64,
            });
        }
    }
    if opts.classes {
        out.class_key = switching_class_key(g)
            .ok()
            .map(|k| String::from_utf8(k).expect("graph6 is ASCII"));
    }
    if opts.rows {
        out.row = Some(GraphRow {
            graph6: out.graph6.clone(),
            n,
            energy: out.energy,
            n_op: subject.odd_pairs().get(),
            min_margin,
        });
    }
    out
}

struct Accumulator {
    report: ScanReport,
    orders: BTreeMap<usize, OrderSummary>,
    class_index: HashMap<String, usize>,
    classes: Vec<ClassSummary>,
    rows: Vec<GraphRow>,
    failure_cap: usize,
}

fn lower_energy(slot: &mut Option<EnergyRecord>, graph6: &str, n: usize, value: f64) {
    // strict comparison keeps the first minimum in source order
    if slot.as_ref().is_none_or(|r| value < r.value) {
        *slot = Some(EnergyRecord {
            graph6: graph6.to_string(),
            n,
            value,
        });
    }
}

impl Accumulator {
    fn absorb(&mut self, o: Outcome) {
        let r = &mut self.report;
        r.graphs += 1;
        r.reports += o.reports;
        r.check_errors += o.check_errors;
        r.nonconvergent += o.nonconvergent as u64;
        r.failures_total += o.failures.len() as u64 - o.check_errors;
        for f in o.failures {
            if f.error.is_none() {
                *r.failures_by_check.entry(f.check).or_default() += 1;
            }
            if r.failures.len() < self.failure_cap {
                r.failures.push(f);
            }
        }
        let order = self.orders.entry(o.n).or_insert_with(|| OrderSummary {
            n: o.n,
            graphs: 0,
            min_energy: None,
            equality: EqualityStats::default(),
        });
        order.graphs += 1;
        if let Some(e) = o.energy {
            lower_energy(&mut r.min_energy, &o.graph6, o.n, e);
            lower_energy(&mut order.min_energy, &o.graph6, o.n, e);
        }
        if let Some(eq) = &o.equality {
            r.equality.add(eq);
            order.equality.add(eq);
        }
        if let Some(key) = o.class_key {
            match self.class_index.get(&key) {
                Some(&i) => self.classes[i].members += 1,
                None => {
                    self.class_index.insert(key.clone(), self.classes.len());
                    self.classes.push(ClassSummary {
                        key,
                        representative: o.graph6.clone(),
                        n: o.n,
                        members: 1,
                        energy: o.energy,
                    });
                }
            }
        }
        if let Some(row) = o.row {
            self.rows.push(row);
        }
        debug_assert!(o.index + 1 == r.graphs);
    }
}

/// Runs the selected checkers over every graph of `source`.
///
/// Graphs are processed in chunks on a pool of `opts.workers` threads and
/// folded back in source order, so the report does not depend on the
/// worker count.
pub fn scan(mut source: GraphSource, opts: &ScanOptions) -> Result<ScanReport, SearchError> {
    opts.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| SearchError::Options(format!("cannot start worker pool: {e}")))?;
    let mut checks = opts.checks.clone();
    checks.sort();
    checks.dedup();
    let opts = ScanOptions {
        checks,
        ..opts.clone()
    };
    let mut acc = Accumulator {
        report: ScanReport {
            source: source.descriptor().to_string(),
            checks: opts.checks.clone(),
            p_grid: if opts.checks.contains(&CheckKind::Theorem1) {
                opts.p_grid.clone()
            } else {
                Vec::new()
            },
            strict_margin: opts.strict_margin,
            graphs: 0,
            reports: 0,
            failures_total: 0,
            failures_by_check: BTreeMap::new(),
            check_errors: 0,
            nonconvergent: 0,
            min_energy: None,
            equality: EqualityStats::default(),
            by_order: Vec::new(),
            failures: Vec::new(),
            skipped_lines: Vec::new(),
            classes: None,
            rows: None,
            timing: None,
        },
        orders: BTreeMap::new(),
        class_index: HashMap::new(),
        classes: Vec::new(),
        rows: Vec::new(),
        failure_cap: opts.failure_cap,
    };

    let mut next_index = 0u64;
    let mut chunk: Vec<(u64, Graph)> = Vec::with_capacity(CHUNK);
    let mut exhausted = false;
    while !exhausted {
        chunk.clear();
        while chunk.len() < CHUNK {
            match source.next_item()? {
                None => {
                    exhausted = true;
                    break;
                }
                Some(Ok(g)) => {
                    if opts.classes && g.order() > MAX_CLASS_VIEW_ORDER {
                        return Err(SearchError::Options(format!(
                            "class view is limited to n <= {MAX_CLASS_VIEW_ORDER}, got n = {}",
                            g.order()
                        )));
                    }
                    chunk.push((next_index, g));
                    next_index += 1;
                }
                Some(Err(item)) if opts.strict_parse => {
                    return Err(SearchError::Parse {
                        source_name: source.descriptor().to_string(),
                        item,
                    });
                }
                Some(Err(item)) => acc.report.skipped_lines.push(SourceIssue {
                    line: item.line,
                    message: item.error.to_string(),
                }),
            }
        }
        let outcomes: Vec<Outcome> = pool.install(|| {
            chunk
                .par_iter()
                .map(|(i, g)| examine(*i, g, &opts))
                .collect()
        });
        for o in outcomes {
            acc.absorb(o);
        }
    }

    let mut report = acc.report;
    report.by_order = acc.orders.into_values().collect();
    if opts.classes {
        report.classes = Some(acc.classes);
    }
    if opts.rows {
        report.rows = Some(acc.rows);
    }
    if opts.timing {
        report.timing = Some(Timing {
            wall_seconds: start.elapsed().as_secs_f64(),
            workers: pool.current_num_threads(),
        });
    }
    Ok(report)
}

fn opt_cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl ScanReport {
    /// No failures, no checker errors and no skipped input.
    pub fn passed(&self) -> bool {
        self.failures_total == 0
            && self.check_errors == 0
            && self.nonconvergent == 0
            && self.skipped_lines.is_empty()
    }

    pub fn to_json(&self) -> Result<String, SearchError> {
        serde_json::to_string_pretty(self).map_err(|e| SearchError::Output(e.to_string()))
    }

    /// Per-graph rows when they were collected, otherwise the failure list.
    /// Reals are printed with 12 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), SearchError> {
        let err = |e: csv::Error| SearchError::Output(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        if let Some(rows) = &self.rows {
            let mut header = vec![
                "graph6".to_string(),
                "n".into(),
                "energy".into(),
                "n_op".into(),
            ];
            header.extend(self.checks.iter().map(|c| format!("min_margin_{c}")));
            w.write_record(&header).map_err(err)?;
            for r in rows {
                let mut rec = vec![
                    r.graph6.clone(),
                    r.n.to_string(),
                    r.energy.map(format_real).unwrap_or_default(),
                    r.n_op.to_string(),
                ];
                rec.extend(self.checks.iter().map(|c| {
                    r.min_margin
                        .get(c)
                        .map(|m| format_real(*m))
                        .unwrap_or_default()
                }));
                w.write_record(&rec).map_err(err)?;
            }
        } else {
            w.write_record([
                "index", "graph6", "check", "k", "p", "lhs", "rhs", "margin", "error",
            ])
            .map_err(err)?;
            for f in &self.failures {
                w.write_record([
                    f.index.to_string(),
                    f.graph6.clone(),
                    f.check.to_string(),
                    opt_cell(&f.k),
                    f.p.map(format_real).unwrap_or_default(),
                    opt_cell(&f.lhs),
                    opt_cell(&f.rhs),
                    opt_cell(&f.margin),
                    f.error.clone().unwrap_or_default(),
                ])
                .map_err(err)?;
            }
        }
        w.flush().map_err(|e| SearchError::Output(e.to_string()))
    }
}
