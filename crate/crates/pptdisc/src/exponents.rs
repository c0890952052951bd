//! Error-exponent computation: quantum and classical Chernoff quantities,
//! the measurement-induced distributions behind the achievability bounds,
//! closed-form error probabilities and exponent entries for every supported
//! hypothesis pair, and least-squares exponent fits on computed error
//! curves.
//!
//! Infinite exponents are represented by `f64::INFINITY`; serialization
//! writes them as `"inf"` (see [`crate::report`]).

use crate::error::{Error, Result};
use crate::operator::DensityMatrix;
use crate::states::PureState;

/// Probability support cutoff: entries at or below this are treated as zero.
const SUPPORT_TOL: f64 = 1e-12;

/// A finite outcome distribution with named outcomes.
#[derive(Clone, Debug)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
    labels: Vec<String>,
}

impl DiscreteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let labels = (0..probs.len()).map(|i| i.to_string()).collect();
        Self::with_labels(probs, labels)
    }

    pub fn with_labels(probs: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if probs.len() != labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities but {} labels",
                probs.len(),
                labels.len()
            )));
        }
        if probs.iter().any(|&p| p < -SUPPORT_TOL) {
            return Err(Error::InvalidArgument("negative probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { probs, labels })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// Minimizes a smooth function on `[0, 1]` by grid seeding at resolution
/// 1e-3 followed by golden-section refinement to a 1e-8 bracket.
fn minimize_unit_interval(f: impl Fn(f64) -> f64) -> f64 {
    let grid_points = 1000usize;
    let mut best_idx = 0usize;
    let mut best_val = f64::INFINITY;
    for i in 0..=grid_points {
        let s = i as f64 / grid_points as f64;
        let v = f(s);
        if v < best_val {
            best_val = v;
            best_idx = i;
        }
    }
    let lo = if best_idx == 0 {
        0.0
    } else {
        (best_idx - 1) as f64 / grid_points as f64
    };
    let hi = if best_idx == grid_points {
        1.0
    } else {
        (best_idx + 1) as f64 / grid_points as f64
    };

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > 1e-8 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    best_val.min(fc).min(fd)
}

/// Quantum Chernoff exponent `-min_s log Tr[rho0^{1-s} rho1^s]`; infinite
/// for states with orthogonal supports.
pub fn quantum_chernoff(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dimensions {} and {} differ",
            rho0.dim(),
            rho1.dim()
        )));
    }
    let s0 = rho0.op().eig_hermitian()?;
    let s1 = rho1.op().eig_hermitian()?;
    let n = rho0.dim();
    // Squared overlaps between eigenvectors, restricted to the supports.
    let supp0: Vec<usize> = (0..n)
        .filter(|&i| s0.eigenvalues[i] > SUPPORT_TOL)
        .collect();
    let supp1: Vec<usize> = (0..n)
        .filter(|&j| s1.eigenvalues[j] > SUPPORT_TOL)
        .collect();
    let mut weights = Vec::new();
    for &i in &supp0 {
        let vi = s0.eigenvector(i);
        for &j in &supp1 {
            let vj = s1.eigenvector(j);
            let ov: crate::operator::C64 = vi.iter().zip(&vj).map(|(a, b)| a.conj() * b).sum();
            let w = ov.norm_sqr();
            if w > 1e-16 {
                weights.push((s0.eigenvalues[i], s1.eigenvalues[j], w));
            }
        }
    }
    let trace_at = |s: f64| -> f64 {
        weights
            .iter()
            .map(|&(l0, l1, w)| l0.powf(1.0 - s) * l1.powf(s) * w)
            .sum()
    };
    // Orthogonal supports short-circuit.
    if trace_at(0.5) <= SUPPORT_TOL {
        return Ok(f64::INFINITY);
    }
    let minimum = minimize_unit_interval(trace_at);
    Ok(-minimum.ln())
}

/// Classical Chernoff exponent `-min_a log sum_x P(x)^a Q(x)^{1-a}`.
///
/// At interior `a` only outcomes in both supports contribute; at the
/// endpoints the sum runs over the support of the opposing distribution
/// (`a = 0` sums `Q` over `supp P`, `a = 1` sums `P` over `supp Q`).
pub fn classical_chernoff(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if p.labels != q.labels {
        return Err(Error::DimensionMismatch(
            "distributions have different outcome sets".into(),
        ));
    }
    let common: Vec<(f64, f64)> = p
        .probs
        .iter()
        .zip(&q.probs)
        .filter(|(&pp, &qq)| pp > SUPPORT_TOL && qq > SUPPORT_TOL)
        .map(|(&pp, &qq)| (pp, qq))
        .collect();
    let endpoint0: f64 = p
        .probs
        .iter()
        .zip(&q.probs)
        .filter(|(&pp, _)| pp > SUPPORT_TOL)
        .map(|(_, &qq)| qq)
        .sum();
    let endpoint1: f64 = p
        .probs
        .iter()
        .zip(&q.probs)
        .filter(|(_, &qq)| qq > SUPPORT_TOL)
        .map(|(&pp, _)| pp)
        .sum();
    let interior = if common.is_empty() {
        f64::INFINITY
    } else {
        minimize_unit_interval(|a| {
            common
                .iter()
                .map(|&(pp, qq)| pp.powf(a) * qq.powf(1.0 - a))
                .sum()
        })
    };
    let minimum = interior.min(endpoint0).min(endpoint1);
    if minimum <= SUPPORT_TOL {
        return Ok(f64::INFINITY);
    }
    Ok(-minimum.ln())
}

/// The two outcome distributions induced by measuring each copy in the
/// Schmidt basis of `psi`: `P` concentrated on the diagonal outcomes with
/// the Schmidt weights, and `Q = (d^2 U - P) / (d^2 - 1)` for the uniform
/// distribution `U` over all `d^2` outcomes.
pub fn schmidt_measurement_distributions(
    psi: &PureState,
) -> Result<(DiscreteDistribution, DiscreteDistribution)> {
    let dims = psi.factorization().local_dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::InvalidArgument(
            "bipartite d x d state required".into(),
        ));
    }
    let d = dims[0];
    let coeffs = psi
        .schmidt_coeffs()
        .expect("bipartite state has Schmidt data");
    let mut lambdas = vec![0.0; d];
    for (i, c) in coeffs.iter().enumerate().take(d) {
        lambdas[i] = c * c;
    }
    let mut p = vec![0.0; d * d];
    let mut q = vec![0.0; d * d];
    let d2 = (d * d) as f64;
    let mut labels = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let x = i * d + j;
            labels.push(format!("{i},{j}"));
            if i == j {
                p[x] = lambdas[i];
            }
            q[x] = (1.0 - p[x]) / (d2 - 1.0);
        }
    }
    Ok((
        DiscreteDistribution::with_labels(p, labels.clone())?,
        DiscreteDistribution::with_labels(q, labels)?,
    ))
}

/// Per-copy error ratio of the computational-plus-Schmidt measurement on a
/// multipartite system: `1 - (d_{n-1} d_n - min(d_{n-1}, d_n)) / (prod - 1)`.
pub fn multipartite_upper_bound(dims: &[usize]) -> Result<f64> {
    if dims.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "multipartite bound needs at least 3 factors, got {}",
            dims.len()
        )));
    }
    if dims.iter().any(|&d| d < 1) {
        return Err(Error::InvalidArgument(
            "factor dimensions must be >= 1".into(),
        ));
    }
    let product: usize = dims.iter().product();
    let last = dims[dims.len() - 1];
    let second_last = dims[dims.len() - 2];
    let pair = second_last * last;
    let kept = pair - second_last.min(last);
    Ok(1.0 - kept as f64 / (product as f64 - 1.0))
}

/// The five closed-form error-probability cases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ErrorCase {
    /// `Phi_d` vs its complement: `min((1-p)(d+1)^{-n}, p)`.
    Mes { d: usize },
    /// Embedded `Phi_m` vs padded complement mixture:
    /// `min((1-p)(lambda/(m+1))^n, p)`.
    MesHigh { m: usize, lambda: f64 },
    /// Embedded complement vs padded `Phi_m`:
    /// `min(p (m+1)^{-n}, (1-p) lambda^n)`.
    MesHigh1 { m: usize, lambda: f64 },
    /// Embedded symmetric state vs padded anti-symmetric mixture:
    /// `min(p ((m-1)/(m+1))^n, (1-p) lambda^n)`.
    SymHigh { m: usize, lambda: f64 },
    /// Embedded anti-symmetric state vs padded symmetric mixture:
    /// `min((1-p)(lambda (m-1)/(m+1))^n, p)`.
    SymHigh1 { m: usize, lambda: f64 },
}

impl ErrorCase {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            ErrorCase::Mes { d } => d >= 2,
            ErrorCase::MesHigh { m, lambda }
            | ErrorCase::MesHigh1 { m, lambda }
            | ErrorCase::SymHigh { m, lambda }
            | ErrorCase::SymHigh1 { m, lambda } => m >= 2 && (0.0..=1.0).contains(&lambda),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "invalid case parameters: {self:?}"
            )))
        }
    }
}

/// Exact optimal n-copy error probability for the given case at prior `p`.
pub fn closed_form_error(case: &ErrorCase, p: f64, n: u32) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("prior {p} outside (0, 1)")));
    }
    case.validate()?;
    let ni = n as i32;
    let value = match *case {
        ErrorCase::Mes { d } => ((1.0 - p) * (d as f64 + 1.0).powi(-ni)).min(p),
        ErrorCase::MesHigh { m, lambda } => {
            ((1.0 - p) * (lambda / (m as f64 + 1.0)).powi(ni)).min(p)
        }
        ErrorCase::MesHigh1 { m, lambda } => {
            (p * (m as f64 + 1.0).powi(-ni)).min((1.0 - p) * lambda.powi(ni))
        }
        ErrorCase::SymHigh { m, lambda } => {
            let mf = m as f64;
            (p * ((mf - 1.0) / (mf + 1.0)).powi(ni)).min((1.0 - p) * lambda.powi(ni))
        }
        ErrorCase::SymHigh1 { m, lambda } => {
            let mf = m as f64;
            ((1.0 - p) * (lambda * (mf - 1.0) / (mf + 1.0)).powi(ni)).min(p)
        }
    };
    Ok(value)
}

/// A rate-dependent exponent entry.
#[derive(Clone, Debug, PartialEq)]
pub enum RateCurve {
    /// The same value for every rate `r > 0` (possibly infinite).
    Constant(f64),
    /// Infinite for `r <= threshold`, the given value beyond.
    InfThenConst { threshold: f64, above: f64 },
    /// `max(r - threshold, 0)`.
    LinearAbove { threshold: f64 },
}

impl RateCurve {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            RateCurve::Constant(v) => v,
            RateCurve::InfThenConst { threshold, above } => {
                if r <= threshold {
                    f64::INFINITY
                } else {
                    above
                }
            }
            RateCurve::LinearAbove { threshold } => (r - threshold).max(0.0),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            RateCurve::Constant(v) if v.is_infinite() => "inf".into(),
            RateCurve::Constant(v) => format!("{v:.6}"),
            RateCurve::InfThenConst { threshold, above } => {
                format!("inf for r <= {threshold:.6}, {above:.6} beyond")
            }
            RateCurve::LinearAbove { threshold } => format!("max(r - {threshold:.6}, 0)"),
        }
    }
}

/// One row of the exponent summary: which hypothesis pair, in table order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TableRow {
    MesForward { d: usize },
    MesReverse { d: usize },
    WernerForward { d: usize },
    WernerReverse { d: usize },
    MesPadded { m: usize, lambda: f64 },
    MesPerpPadded { m: usize, lambda: f64 },
    WernerPadded { m: usize, lambda: f64 },
    WernerPerpPadded { m: usize, lambda: f64 },
}

impl TableRow {
    /// Rows numbered 1..=8 in summary-table order.
    pub fn from_index(index: usize, d: usize, m: usize, lambda: f64) -> Result<Self> {
        Ok(match index {
            1 => TableRow::MesForward { d },
            2 => TableRow::MesReverse { d },
            3 => TableRow::WernerForward { d },
            4 => TableRow::WernerReverse { d },
            5 => TableRow::MesPadded { m, lambda },
            6 => TableRow::MesPerpPadded { m, lambda },
            7 => TableRow::WernerPadded { m, lambda },
            8 => TableRow::WernerPerpPadded { m, lambda },
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "table row {index} outside 1..=8"
                )))
            }
        })
    }

    pub fn index(&self) -> usize {
        match self {
            TableRow::MesForward { .. } => 1,
            TableRow::MesReverse { .. } => 2,
            TableRow::WernerForward { .. } => 3,
            TableRow::WernerReverse { .. } => 4,
            TableRow::MesPadded { .. } => 5,
            TableRow::MesPerpPadded { .. } => 6,
            TableRow::WernerPadded { .. } => 7,
            TableRow::WernerPerpPadded { .. } => 8,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TableRow::MesForward { .. } => "mes-forward",
            TableRow::MesReverse { .. } => "mes-reverse",
            TableRow::WernerForward { .. } => "werner-forward",
            TableRow::WernerReverse { .. } => "werner-reverse",
            TableRow::MesPadded { .. } => "mes-padded",
            TableRow::MesPerpPadded { .. } => "mes-perp-padded",
            TableRow::WernerPadded { .. } => "werner-padded",
            TableRow::WernerPerpPadded { .. } => "werner-perp-padded",
        }
    }

    pub fn from_label(label: &str, d: usize, m: usize, lambda: f64) -> Result<Self> {
        let index = match label {
            "mes-forward" => 1,
            "mes-reverse" => 2,
            "werner-forward" => 3,
            "werner-reverse" => 4,
            "mes-padded" => 5,
            "mes-perp-padded" => 6,
            "werner-padded" => 7,
            "werner-perp-padded" => 8,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown table row '{other}'"
                )));
            }
        };
        Self::from_index(index, d, m, lambda)
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            TableRow::MesForward { d } | TableRow::MesReverse { d } => d >= 2,
            TableRow::WernerForward { d } | TableRow::WernerReverse { d } => d >= 2,
            TableRow::MesPadded { m, lambda }
            | TableRow::MesPerpPadded { m, lambda }
            | TableRow::WernerPadded { m, lambda }
            | TableRow::WernerPerpPadded { m, lambda } => m >= 2 && (0.0..=1.0).contains(&lambda),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "invalid row parameters: {self:?}"
            )))
        }
    }
}

/// Chernoff/Stein/Hoeffding/strong-converse entries for one hypothesis pair.
#[derive(Clone, Debug)]
pub struct ExponentReport {
    pub row: TableRow,
    pub chernoff: f64,
    pub stein: f64,
    pub hoeffding: RateCurve,
    pub strong_converse: RateCurve,
}

/// Emits the exponent entries of the given summary-table row.
pub fn exponents_table(row: &TableRow) -> Result<ExponentReport> {
    row.validate()?;
    let report = match *row {
        TableRow::MesForward { d } => forward_entries(*row, (d as f64 + 1.0).ln()),
        TableRow::MesReverse { d } => reverse_entries(*row, (d as f64 + 1.0).ln()),
        TableRow::WernerForward { d } => {
            let df = d as f64;
            reverse_entries(*row, ((df + 1.0) / (df - 1.0)).ln())
        }
        TableRow::WernerReverse { d } => {
            let df = d as f64;
            forward_entries(*row, ((df + 1.0) / (df - 1.0)).ln())
        }
        TableRow::MesPadded { m, lambda } => {
            forward_entries(*row, ((m as f64 + 1.0) / lambda).ln())
        }
        TableRow::MesPerpPadded { m, lambda } => {
            padded_reverse_entries(*row, (m as f64 + 1.0).ln(), lambda)
        }
        TableRow::WernerPadded { m, lambda } => {
            let mf = m as f64;
            padded_reverse_entries(*row, ((mf + 1.0) / (mf - 1.0)).ln(), lambda)
        }
        TableRow::WernerPerpPadded { m, lambda } => {
            let mf = m as f64;
            forward_entries(*row, ((mf + 1.0) / (lambda * (mf - 1.0))).ln())
        }
    };
    Ok(report)
}

/// Rows whose type-II error is pinned by the trade-off: finite Stein rate,
/// infinite Hoeffding up to it, linear strong converse beyond it.
fn forward_entries(row: TableRow, rate: f64) -> ExponentReport {
    ExponentReport {
        row,
        chernoff: rate,
        stein: rate,
        hoeffding: RateCurve::InfThenConst {
            threshold: rate,
            above: 0.0,
        },
        strong_converse: RateCurve::LinearAbove { threshold: rate },
    }
}

/// Rows in the reversed order: the type-II error can vanish, so the Stein
/// exponent is infinite and the Hoeffding exponent is the finite rate.
fn reverse_entries(row: TableRow, rate: f64) -> ExponentReport {
    ExponentReport {
        row,
        chernoff: rate,
        stein: f64::INFINITY,
        hoeffding: RateCurve::Constant(rate),
        strong_converse: RateCurve::Constant(0.0),
    }
}

/// Reversed padded rows: the mixing weight adds a second error branch, so
/// the Chernoff entry is the max of the two rates and the Hoeffding entry
/// switches from infinite to the base rate at `r = log(1/lambda)`.
fn padded_reverse_entries(row: TableRow, base_rate: f64, lambda: f64) -> ExponentReport {
    let lambda_rate = (1.0 / lambda).ln();
    ExponentReport {
        row,
        chernoff: base_rate.max(lambda_rate),
        stein: f64::INFINITY,
        hoeffding: RateCurve::InfThenConst {
            threshold: lambda_rate,
            above: base_rate,
        },
        strong_converse: RateCurve::Constant(0.0),
    }
}

/// Least-squares slope of `-log P_e` against `n`.
pub fn empirical_exponent(values: &[(u32, f64)]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "exponent fit needs at least 2 points, got {}",
            values.len()
        )));
    }
    if values.iter().any(|&(_, pe)| pe <= 0.0) {
        return Ok(f64::INFINITY);
    }
    let n = values.len() as f64;
    let mean_x: f64 = values.iter().map(|&(k, _)| k as f64).sum::<f64>() / n;
    let mean_y: f64 = values.iter().map(|&(_, pe)| -pe.ln()).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for &(k, pe) in values {
        let dx = k as f64 - mean_x;
        num += dx * (-pe.ln() - mean_y);
        den += dx * dx;
    }
    if den == 0.0 {
        return Err(Error::InvalidArgument("all points share the same n".into()));
    }
    Ok(num / den)
}
