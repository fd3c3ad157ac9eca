//! Command-line front end: `energy`, `verify` and `constants`.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 bad input,
//! 3 a numerical method did not converge.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use seidel_lab::analytic::{
    cp_constant, cp_constant_by_quadrature, cp_is_near_degenerate, energy_by_integral,
    AnalyticError, QuadratureSpec,
};
use seidel_lab::graphs::{parse_graph6, Graph};
use seidel_lab::search::{
    boundary_family_range, enumerate_all_graphs_range, scan, stream_graph6, GraphSource,
    ScanOptions, ScanReport, SearchError, DEFAULT_FAILURE_CAP,
};
use seidel_lab::spectral::{p_energy, SpectralError};
use seidel_lab::verify::{format_real, CheckKind, Subject, DEFAULT_STRICT_MARGIN};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

/// Environment variable overriding the default strict margin.
pub const STRICT_MARGIN_ENV: &str = "SEIDEL_LAB_STRICT_MARGIN";

#[derive(Debug, Parser)]
#[command(name = "seidel-lab", version, about = "Seidel energy verification lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectrum, p-energies and odd-pair data of one graph.
    Energy(EnergyArgs),
    /// Run checkers over a graph, a graph6 file or a generated family.
    Verify(VerifyArgs),
    /// The constant C_p by closed form and by quadrature.
    Constants(ConstantsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Eigen,
    Integral,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct EnergyArgs {
    /// Graph in graph6 format.
    #[arg(long)]
    g6: String,
    /// Energy exponents.
    #[arg(short, long = "p", value_delimiter = ',', default_value = "1")]
    p: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Backend::Eigen)]
    backend: Backend,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Debug, Args)]
#[group(id = "input", required = true, multiple = false)]
struct InputArgs {
    /// One graph6 string.
    #[arg(long, group = "input")]
    g6: Option<String>,
    /// File with one graph6 string per line.
    #[arg(long, group = "input")]
    g6_file: Option<PathBuf>,
    /// Every labelled graph of order N or of each order in A..B (at most 7).
    #[arg(long, group = "input", value_name = "N|A..B")]
    all_n: Option<String>,
    /// Clique-plus-two-vertices family for orders in A..B (11 to 22).
    #[arg(long, group = "input", value_name = "N|A..B")]
    boundary_family: Option<String>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated checks: sk-basic, sk-oddpairs, oddpair-lower, theorem1, theorem2.
    #[arg(
        long,
        default_value = "sk-basic,sk-oddpairs,oddpair-lower,theorem1,theorem2"
    )]
    checks: String,
    /// Exponents for theorem1.
    #[arg(
        short,
        long = "p",
        value_delimiter = ',',
        default_value = "0.25,0.5,1,1.5,1.75"
    )]
    p: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Skip malformed graph6 lines instead of aborting.
    #[arg(long)]
    lenient: bool,
    /// Leave wall time out of the report.
    #[arg(long)]
    no_timing: bool,
    /// Include one row per graph.
    #[arg(long)]
    verbose: bool,
    /// Group graphs by switching class (n <= 6).
    #[arg(long)]
    classes: bool,
    /// Write the report here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_FAILURE_CAP)]
    failure_cap: usize,
    /// Margin for strict inequalities and equality claims.
    #[arg(long, env = STRICT_MARGIN_ENV, default_value_t = DEFAULT_STRICT_MARGIN)]
    strict_margin: f64,
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    #[arg(short, long = "p", value_delimiter = ',', required = true)]
    p: Vec<f64>,
    /// Relative tolerance of the quadrature.
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

/// An error carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        let code = match e {
            SpectralError::NoConvergence { .. } | SpectralError::Residual { .. } => {
                EXIT_NONCONVERGENCE
            }
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<AnalyticError> for Failure {
    fn from(e: AnalyticError) -> Self {
        let code = match e {
            AnalyticError::NoConvergence { .. } => EXIT_NONCONVERGENCE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(format!("write failed: {e}"))
    }
}

/// Parses `N`, `A..B` or `A..=B` (both inclusive).
fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::input(format!("invalid order range `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        None => {
            let n = num(s)?;
            Ok((n, n))
        }
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        }
    }
}

fn parse_graph(text: &str) -> Result<Graph, Failure> {
    parse_graph6(text.trim()).map_err(|e| Failure::input(format!("`{text}`: {e}")))
}

/// Runs the CLI; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Energy(a) => cmd_energy(&a, out),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Constants(a) => cmd_constants(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn cmd_energy(a: &EnergyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let g = parse_graph(&a.g6)?;
    if let Some(p) = a.p.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
        return Err(Failure::input(format!("p = {p} must be positive")));
    }
    if a.backend == Backend::Integral {
        if let Some(p) = a.p.iter().find(|p| **p >= 2.0) {
            return Err(Failure::input(format!(
                "the integral backend needs 0 < p < 2, got {p}"
            )));
        }
    }
    let subject = Subject::new(&g);
    let spectrum = subject.spectrum()?;
    let spec = QuadratureSpec::default();
    let mut energies = Vec::new();
    for &p in &a.p {
        let eigen = (a.backend != Backend::Integral).then(|| p_energy(spectrum, p));
        let integral = if a.backend != Backend::Eigen && p < 2.0 {
            Some(energy_by_integral(subject.sk(), p, &spec)?)
        } else {
            None
        };
        energies.push((p, eigen, integral));
    }
    let n_op = subject.odd_pairs().get();
    let sc = subject.is_sc_complete();

    match a.format {
        Format::Json => {
            let rows: Vec<_> = energies
                .iter()
                .map(|(p, e, i)| json!({ "p": p, "eigen": e, "integral": i }))
                .collect();
            let doc = json!({
                "graph6": subject.id(),
                "n": g.order(),
                "spectrum": spectrum.values(),
                "energies": rows,
                "n_op": n_op,
                "sc_equivalent_to_complete": sc,
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("plain JSON")
            )?;
        }
        Format::Csv => {
            writeln!(
                out,
                "graph6,n,p,eigen,integral,n_op,sc_equivalent_to_complete"
            )?;
            for (p, e, i) in &energies {
                writeln!(
                    out,
                    "{},{},{},{},{},{n_op},{sc}",
                    subject.id(),
                    g.order(),
                    format_real(*p),
                    e.map(format_real).unwrap_or_default(),
                    i.map(format_real).unwrap_or_default(),
                )?;
            }
        }
        Format::Plain => {
            writeln!(out, "graph6: {}", subject.id())?;
            writeln!(out, "n: {}", g.order())?;
            let values: Vec<String> = spectrum.values().iter().map(|v| format_real(*v)).collect();
            writeln!(out, "spectrum: {}", values.join(" "))?;
            for (p, e, i) in &energies {
                let label = if *p == 1.0 {
                    "E_S".to_string()
                } else {
                    format!(
                        "E_{}",
                        format_real(*p).trim_end_matches('0').trim_end_matches('.')
                    )
                };
                if let Some(e) = e {
                    writeln!(out, "{label} (eigen): {}", format_real(*e))?;
                }
                match i {
                    Some(i) => writeln!(out, "{label} (integral): {}", format_real(*i))?,
                    None if a.backend == Backend::Both => {
                        writeln!(out, "{label} (integral): n/a, needs p < 2")?
                    }
                    None => {}
                }
                if let (Some(e), Some(i)) = (e, i) {
                    writeln!(out, "{label} difference: {:.3e}", (e - i).abs())?;
                }
            }
            writeln!(out, "odd pairs: {n_op}")?;
            writeln!(out, "SC-equivalent to complete: {sc}")?;
        }
    }
    Ok(EXIT_PASS)
}

fn verify_source(input: &InputArgs) -> Result<GraphSource, Failure> {
    if let Some(s) = &input.g6 {
        let g = parse_graph(s)?;
        return Ok(GraphSource::from_graphs(
            format!("graph6({})", s.trim()),
            vec![g],
        ));
    }
    if let Some(path) = &input.g6_file {
        return Ok(stream_graph6(path)?);
    }
    if let Some(r) = &input.all_n {
        let (lo, hi) = parse_range(r)?;
        return Ok(enumerate_all_graphs_range(lo, hi)?);
    }
    if let Some(r) = &input.boundary_family {
        let (lo, hi) = parse_range(r)?;
        return Ok(boundary_family_range(lo, hi)?);
    }
    Err(Failure::input("no input given"))
}

fn report_exit_code(r: &ScanReport) -> i32 {
    if r.failures_total > 0 || (r.check_errors > r.nonconvergent) {
        EXIT_CHECK_FAILED
    } else if r.nonconvergent > 0 {
        EXIT_NONCONVERGENCE
    } else if !r.skipped_lines.is_empty() {
        EXIT_INPUT
    } else {
        EXIT_PASS
    }
}

fn write_plain(r: &ScanReport, out: &mut dyn Write) -> io::Result<()> {
    let checks: Vec<&str> = r.checks.iter().map(|c| c.name()).collect();
    writeln!(out, "source: {}", r.source)?;
    writeln!(out, "checks: {}", checks.join(","))?;
    if !r.p_grid.is_empty() {
        let ps: Vec<String> = r.p_grid.iter().map(|p| p.to_string()).collect();
        writeln!(out, "p: {}", ps.join(","))?;
    }
    writeln!(out, "graphs: {}", r.graphs)?;
    writeln!(out, "reports: {}", r.reports)?;
    writeln!(out, "failures: {}", r.failures_total)?;
    if r.check_errors > 0 {
        writeln!(
            out,
            "checker errors: {} ({} non-convergent)",
            r.check_errors, r.nonconvergent
        )?;
    }
    if let Some(m) = &r.min_energy {
        writeln!(
            out,
            "min energy: {} at {} (n = {})",
            format_real(m.value),
            m.graph6,
            m.n
        )?;
    }
    writeln!(
        out,
        "equality cases: {} (SC-equivalent to K_n: {}, no odd pairs: {})",
        r.equality.count, r.equality.sc_equivalent, r.equality.zero_odd_pairs
    )?;
    if r.by_order.len() > 1 {
        for o in &r.by_order {
            let min = o
                .min_energy
                .as_ref()
                .map(|m| format!("{} at {}", format_real(m.value), m.graph6))
                .unwrap_or_else(|| "n/a".into());
            writeln!(
                out,
                "  n = {}: graphs {}, min energy {}, equality cases {}",
                o.n, o.graphs, min, o.equality.count
            )?;
        }
    }
    for s in &r.skipped_lines {
        writeln!(out, "skipped line {}: {}", s.line, s.message)?;
    }
    for f in &r.failures {
        let mut line = format!("FAIL #{} {} {}", f.index, f.graph6, f.check);
        if let Some(k) = f.k {
            line += &format!(" k={k}");
        }
        if let Some(p) = f.p {
            line += &format!(" p={p}");
        }
        if let (Some(l), Some(rh), Some(m)) = (&f.lhs, &f.rhs, &f.margin) {
            line += &format!(" lhs={l} rhs={rh} margin={m}");
        }
        if let Some(e) = &f.error {
            line += &format!(" error: {e}");
        }
        writeln!(out, "{line}")?;
    }
    if (r.failures.len() as u64) < r.failures_total {
        writeln!(
            out,
            "({} more failures not listed)",
            r.failures_total - r.failures.len() as u64
        )?;
    }
    if let Some(classes) = &r.classes {
        writeln!(out, "switching classes: {}", classes.len())?;
        for c in classes {
            writeln!(
                out,
                "  {} members {} energy {}",
                c.representative,
                c.members,
                c.energy.map(format_real).unwrap_or_default()
            )?;
        }
    }
    if let Some(rows) = &r.rows {
        for row in rows {
            let margins: Vec<String> = row
                .min_margin
                .iter()
                .map(|(c, m)| format!("{c}={}", format_real(*m)))
                .collect();
            writeln!(
                out,
                "{} n={} E_S={} n_op={} {}",
                row.graph6,
                row.n,
                row.energy.map(format_real).unwrap_or_default(),
                row.n_op,
                margins.join(" ")
            )?;
        }
    }
    if let Some(t) = &r.timing {
        writeln!(
            out,
            "wall time: {:.3} s on {} workers",
            t.wall_seconds, t.workers
        )?;
    }
    writeln!(out, "result: {}", if r.passed() { "PASS" } else { "FAIL" })
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let checks = CheckKind::parse_list(&a.checks).map_err(|e| Failure::input(e.to_string()))?;
    if checks.is_empty() {
        return Err(Failure::input("no checks selected"));
    }
    if let Some(p) = a.p.iter().find(|p| !(**p > 0.0 && **p < 2.0)) {
        return Err(Failure::input(format!("p = {p} outside (0, 2)")));
    }
    if !(a.strict_margin > 0.0 && a.strict_margin.is_finite()) {
        return Err(Failure::input(format!(
            "strict margin {} must be positive",
            a.strict_margin
        )));
    }
    let source = verify_source(&a.input)?;
    let opts = ScanOptions {
        checks,
        p_grid: a.p.clone(),
        strict_margin: a.strict_margin,
        workers: a.workers,
        failure_cap: a.failure_cap,
        strict_parse: !a.lenient,
        rows: a.verbose,
        classes: a.classes,
        timing: !a.no_timing,
        ..ScanOptions::default()
    };
    let report = scan(source, &opts)?;

    let mut file;
    let mut stdout_sink;
    let sink: &mut dyn Write = match &a.output {
        Some(path) => {
            file =
                BufWriter::new(File::create(path).map_err(|e| {
                    Failure::input(format!("cannot create {}: {e}", path.display()))
                })?);
            &mut file
        }
        None => {
            stdout_sink = &mut *out;
            &mut stdout_sink
        }
    };
    match a.format {
        Format::Json => writeln!(sink, "{}", report.to_json()?)?,
        Format::Csv => report.write_csv(&mut *sink)?,
        Format::Plain => write_plain(&report, sink)?,
    }
    sink.flush()?;
    let code = report_exit_code(&report);
    if a.output.is_some() {
        writeln!(
            err,
            "{}: {} graphs, {} failures",
            report.source, report.graphs, report.failures_total
        )?;
    }
    Ok(code)
}

fn cmd_constants(
    a: &ConstantsArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let spec = QuadratureSpec::with_tolerance(a.tolerance)?;
    let mut rows = Vec::new();
    for &p in &a.p {
        let closed = cp_constant(p)?;
        let quad = cp_constant_by_quadrature(p, &spec)?;
        let degenerate = cp_is_near_degenerate(p);
        if degenerate {
            writeln!(
                err,
                "warning: p = {p} is close to an endpoint; sin(pi p) is small and C_p is ill-conditioned"
            )?;
        }
        rows.push((p, closed, quad, degenerate));
    }
    match a.format {
        Format::Json => {
            let doc: Vec<_> = rows
                .iter()
                .map(|(p, c, q, d)| {
                    json!({
                        "p": p,
                        "closed_form": c,
                        "quadrature": q,
                        "difference": (c - q).abs(),
                        "near_degenerate": d,
                    })
                })
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("plain JSON")
            )?;
        }
        Format::Csv => {
            writeln!(out, "p,closed_form,quadrature,difference,near_degenerate")?;
            for (p, c, q, d) in &rows {
                writeln!(
                    out,
                    "{},{},{},{:.3e},{d}",
                    format_real(*p),
                    format_real(*c),
                    format_real(*q),
                    (c - q).abs()
                )?;
            }
        }
        Format::Plain => {
            for (p, c, q, _) in &rows {
                writeln!(
                    out,
                    "p = {p}: closed form {}  quadrature {}  difference {:.3e}",
                    format_real(*c),
                    format_real(*q),
                    (c - q).abs()
                )?;
            }
        }
    }
    Ok(EXIT_PASS)
}
