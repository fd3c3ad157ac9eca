//! Checkers for the S_k(A²) bounds, the odd-pair lemmas and the two energy
//! inequalities. Each returns machine-readable reports with margins.
//!
//! Integer-valued claims are decided in exact arithmetic; floating point
//! only enters the energy inequalities.

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::graphs::{encode_graph6, seidel_matrix, Graph};
use crate::seidel::{count_odd_pairs, is_sc_equivalent_to_complete, CompleteWitness, OddPairCount};
use crate::spectral::{
    eigenvalues_with, elementary_symmetric_a2, p_energy, JacobiOptions, SeidelMatrix,
    SpectralError, Spectrum,
};

/// Margin above which a strict floating-point inequality counts as strict,
/// and within which an equality claim counts as equal.
pub const DEFAULT_STRICT_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("p = {0} outside (0, 2)")]
    Exponent(f64),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    SkBasic,
    SkOddpairs,
    OddpairLower,
    Theorem1,
    Theorem2,
}

impl CheckKind {
    pub const ALL: [CheckKind; 5] = [
        CheckKind::SkBasic,
        CheckKind::SkOddpairs,
        CheckKind::OddpairLower,
        CheckKind::Theorem1,
        CheckKind::Theorem2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::SkBasic => "sk-basic",
            CheckKind::SkOddpairs => "sk-oddpairs",
            CheckKind::OddpairLower => "oddpair-lower",
            CheckKind::Theorem1 => "theorem1",
            CheckKind::Theorem2 => "theorem2",
        }
    }

    /// Parses a comma-separated list such as `sk-basic,theorem2`.
    pub fn parse_list(s: &str) -> Result<Vec<CheckKind>, VerifyError> {
        let mut out: Vec<CheckKind> = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<_, _>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckKind::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| VerifyError::UnknownCheck(s.to_string()))
    }
}

/// Either an exact integer or a float. Exact values serialize as decimal
/// strings so they survive JSON round trips.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Exact(BigInt),
    Real(f64),
}

impl Quantity {
    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Exact(x) => x.to_f64().unwrap_or(f64::NAN),
            Quantity::Real(x) => *x,
        }
    }
}

/// Formats with 12 significant digits.
pub fn format_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // round first so that 0.99999999999999 reads as 1.00000000000
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Exact(x) => write!(f, "{x}"),
            Quantity::Real(x) => f.write_str(&format_real(*x)),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Quantity::Exact(x) => s.serialize_str(&x.to_string()),
            Quantity::Real(x) => s.serialize_f64(*x),
        }
    }
}

/// Which half of the energy bound applied to a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem2Branch {
    /// SC-equivalent to `K_n`: energy must equal `2n - 2`.
    Equality,
    /// Otherwise the bound must be strict.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMeta {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_op: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<Theorem2Branch>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub graph6: String,
    pub check: CheckKind,
    pub pass: bool,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub margin: Quantity,
    pub meta: ReportMeta,
}

/// `C(a, b)`, zero unless `0 <= b <= a`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::from(1);
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    acc
}

/// Graph identifier used in reports.
pub fn graph_id(g: &Graph) -> String {
    encode_graph6(g).unwrap_or_else(|_| format!("<order {} graph>", g.order()))
}

/// A graph plus lazily computed invariants shared by all checkers.
pub struct Subject<'a> {
    graph: &'a Graph,
    id: String,
    matrix: SeidelMatrix,
    jacobi: JacobiOptions,
    spectrum: OnceCell<Result<Spectrum, SpectralError>>,
    sk: OnceCell<Vec<BigInt>>,
    n_op: OnceCell<OddPairCount>,
    witness: OnceCell<Option<CompleteWitness>>,
}

impl<'a> Subject<'a> {
    pub fn new(graph: &'a Graph) -> Self {
        Subject::with_options(graph, JacobiOptions::default())
    }

    pub fn with_options(graph: &'a Graph, jacobi: JacobiOptions) -> Self {
        Subject {
            graph,
            id: graph_id(graph),
            matrix: seidel_matrix(graph),
            jacobi,
            spectrum: OnceCell::new(),
            sk: OnceCell::new(),
            n_op: OnceCell::new(),
            witness: OnceCell::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn spectrum(&self) -> Result<&Spectrum, SpectralError> {
        self.spectrum
            .get_or_init(|| eigenvalues_with(&self.matrix, &self.jacobi))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn energy(&self) -> Result<f64, SpectralError> {
        Ok(p_energy(self.spectrum()?, 1.0))
    }

    pub fn sk(&self) -> &[BigInt] {
        self.sk
            .get_or_init(|| elementary_symmetric_a2(&self.matrix))
    }

    pub fn odd_pairs(&self) -> OddPairCount {
        *self.n_op.get_or_init(|| count_odd_pairs(self.graph))
    }

    pub fn sc_witness(&self) -> Option<CompleteWitness> {
        *self
            .witness
            .get_or_init(|| is_sc_equivalent_to_complete(self.graph))
    }

    pub fn is_sc_complete(&self) -> bool {
        self.sc_witness().is_some()
    }

    fn meta(&self) -> ReportMeta {
        ReportMeta {
            n: self.order(),
            k: None,
            p: None,
            n_op: None,
            branch: None,
        }
    }

    fn exact_report(
        &self,
        check: CheckKind,
        lhs: BigInt,
        rhs: BigInt,
        meta: ReportMeta,
    ) -> VerificationReport {
        let margin = &lhs - &rhs;
        VerificationReport {
            graph6: self.id.clone(),
            check,
            pass: !margin.is_negative_big(),
            lhs: Quantity::Exact(lhs),
            rhs: Quantity::Exact(rhs),
            margin: Quantity::Exact(margin),
            meta,
        }
    }

    /// `S_k(A²) >= n(n-1) C(n-2, k-1)` for `k = 1..=n`.
    pub fn sk_basic(&self) -> Vec<VerificationReport> {
        let n = self.order() as i64;
        let sk = self.sk();
        (1..=self.order())
            .map(|k| {
                let rhs = BigInt::from(n * (n - 1)) * binomial(n - 2, k as i64 - 1);
                let meta = ReportMeta {
                    k: Some(k),
                    ..self.meta()
                };
                self.exact_report(CheckKind::SkBasic, sk[k].clone(), rhs, meta)
            })
            .collect()
    }

    /// `S_k(A²) >= n(n-1) C(n-2, k-1) + 4 N_op C(n-4, k-2)` for `k = 1..=n`;
    /// the odd-pair term vanishes for `k >= n - 1`.
    pub fn sk_oddpairs(&self) -> Vec<VerificationReport> {
        let n = self.order() as i64;
        let n_op = self.odd_pairs().get();
        let sk = self.sk();
        (1..=self.order())
            .map(|k| {
                let k_ = k as i64;
                let rhs = BigInt::from(n * (n - 1)) * binomial(n - 2, k_ - 1)
                    + BigInt::from(4 * n_op) * binomial(n - 4, k_ - 2);
                let meta = ReportMeta {
                    k: Some(k),
                    n_op: Some(n_op),
                    ..self.meta()
                };
                self.exact_report(CheckKind::SkOddpairs, sk[k].clone(), rhs, meta)
            })
            .collect()
    }

    /// `N_op = 0` when SC-equivalent to `K_n`, otherwise
    /// `N_op >= max(1, 2(n-3)²)`.
    pub fn oddpair_lower(&self) -> VerificationReport {
        let n = self.order() as i64;
        let n_op = self.odd_pairs().get();
        let lhs = BigInt::from(n_op);
        let meta = ReportMeta {
            n_op: Some(n_op),
            ..self.meta()
        };
        if self.is_sc_complete() {
            let mut r = self.exact_report(CheckKind::OddpairLower, lhs, BigInt::zero(), meta);
            r.pass = n_op == 0;
            r.meta.branch = Some(Theorem2Branch::Equality);
            r
        } else {
            // at least one odd pair, and at least 2(n-3)² of them
            let rhs = BigInt::from((2 * (n - 3) * (n - 3)).max(1));
            let mut r = self.exact_report(CheckKind::OddpairLower, lhs, rhs, meta);
            r.meta.branch = Some(Theorem2Branch::Strict);
            r
        }
    }

    /// `E_p > (n-1)^p + (n-2)` with margin above `strict`.
    pub fn theorem1(&self, p: f64, strict: f64) -> Result<VerificationReport, VerifyError> {
        if !(p > 0.0 && p < 2.0) {
            return Err(VerifyError::Exponent(p));
        }
        let n = self.order() as f64;
        let lhs = p_energy(self.spectrum()?, p);
        let rhs = (n - 1.0).powf(p) + (n - 2.0);
        let margin = lhs - rhs;
        Ok(VerificationReport {
            graph6: self.id.clone(),
            check: CheckKind::Theorem1,
            pass: margin > strict,
            lhs: Quantity::Real(lhs),
            rhs: Quantity::Real(rhs),
            margin: Quantity::Real(margin),
            meta: ReportMeta {
                p: Some(p),
                ..self.meta()
            },
        })
    }

    /// `E_S >= 2n - 2`: equal (within `strict`) on the SC-class of `K_n`,
    /// strictly larger (by more than `strict`) elsewhere.
    pub fn theorem2(&self, strict: f64) -> Result<VerificationReport, VerifyError> {
        let n = self.order() as f64;
        let lhs = self.energy()?;
        let rhs = 2.0 * n - 2.0;
        let margin = lhs - rhs;
        let (branch, pass) = if self.is_sc_complete() {
            (Theorem2Branch::Equality, margin.abs() <= strict)
        } else {
            (Theorem2Branch::Strict, margin > strict)
        };
        Ok(VerificationReport {
            graph6: self.id.clone(),
            check: CheckKind::Theorem2,
            pass,
            lhs: Quantity::Real(lhs),
            rhs: Quantity::Real(rhs),
            margin: Quantity::Real(margin),
            meta: ReportMeta {
                n_op: Some(self.odd_pairs().get()),
                branch: Some(branch),
                ..self.meta()
            },
        })
    }

    /// Runs one checker; `theorem1` runs once per entry of `p_grid`.
    pub fn run(
        &self,
        check: CheckKind,
        p_grid: &[f64],
        strict: f64,
    ) -> Result<Vec<VerificationReport>, VerifyError> {
        Ok(match check {
            CheckKind::SkBasic => self.sk_basic(),
            CheckKind::SkOddpairs => self.sk_oddpairs(),
            CheckKind::OddpairLower => vec![self.oddpair_lower()],
            CheckKind::Theorem1 => p_grid
                .iter()
                .map(|&p| self.theorem1(p, strict))
                .collect::<Result<_, _>>()?,
            CheckKind::Theorem2 => vec![self.theorem2(strict)?],
        })
    }
}

trait NegativeBig {
    fn is_negative_big(&self) -> bool;
}

impl NegativeBig for BigInt {
    fn is_negative_big(&self) -> bool {
        self.sign() == num_bigint::Sign::Minus
    }
}

pub fn verify_sk_basic(g: &Graph) -> Vec<VerificationReport> {
    Subject::new(g).sk_basic()
}

pub fn verify_sk_oddpairs(g: &Graph) -> Vec<VerificationReport> {
    Subject::new(g).sk_oddpairs()
}

pub fn verify_oddpair_lower(g: &Graph) -> VerificationReport {
    Subject::new(g).oddpair_lower()
}

pub fn verify_theorem1(g: &Graph, p: f64) -> Result<VerificationReport, VerifyError> {
    Subject::new(g).theorem1(p, DEFAULT_STRICT_MARGIN)
}

pub fn verify_theorem2(g: &Graph) -> Result<VerificationReport, VerifyError> {
    Subject::new(g).theorem2(DEFAULT_STRICT_MARGIN)
}
