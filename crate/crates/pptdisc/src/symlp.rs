//! Twirl-reduced linear programming for testing a maximally entangled state
//! against its orthogonal complement under PPT measurements.
//!
//! Permutation and `U (x) U*` symmetry collapse the optimal n-copy POVM onto
//! the span of the operators `B_k` (words over `{Phi_d, 1 - Phi_d}` with `k`
//! copies of `Phi_d`), leaving an (n+1)-variable program. The PPT condition
//! on such a test is encoded by the matrix `Q`: partial transposition maps
//! each `B_k` into the orthogonal word basis over the symmetric and
//! anti-symmetric projectors, with the `Q` entries as coefficients, so a test
//! `sum_k x_k B_k` is PPT exactly when `Q x >= 0` and `Q (1 - x) >= 0`
//! componentwise.
//!
//! The LP is solved in this reduced x-space directly; the stacked
//! block-matrix presentation with explicit slack blocks is equivalent and
//! would only add redundant identity rows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::simplex::{simplex_solve, LinearProgram, Sense};
use crate::states::{max_entangled, measurement_m, orth_complement};

/// The `(n+1) x (n+1)` partial-transpose expansion matrix.
#[derive(Clone, Debug)]
pub struct QMatrix {
    pub n: u32,
    pub d: usize,
    entries: Vec<Vec<f64>>,
}

impl QMatrix {
    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn get(&self, l: usize, k: usize) -> f64 {
        self.entries[l][k]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.entries.iter().map(|row| row.iter().sum()).collect()
    }

    /// `Q^T u`.
    pub fn transpose_apply(&self, u: &[f64]) -> Vec<f64> {
        let size = self.entries.len();
        (0..size)
            .map(|k| (0..size).map(|l| self.entries[l][k] * u[l]).sum())
            .collect()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(x).map(|(q, v)| q * v).sum())
            .collect()
    }

    /// Negative-control hook: a copy with the (0, 0) entry shifted, which
    /// must break the dual certificate identity.
    #[doc(hidden)]
    pub fn perturbed(&self, delta: f64) -> QMatrix {
        let mut entries = self.entries.clone();
        entries[0][0] += delta;
        QMatrix {
            n: self.n,
            d: self.d,
            entries,
        }
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Builds `Q` from the double-binomial expansion of the transposed word
/// operators in the symmetric/anti-symmetric word basis.
pub fn q_matrix(n: u32, d: usize) -> Result<QMatrix> {
    if n < 1 || d < 2 {
        return Err(Error::InvalidArgument(format!(
            "q_matrix needs n >= 1 and d >= 2, got n={n}, d={d}"
        )));
    }
    let size = (n + 1) as usize;
    let inv_d = 1.0 / d as f64;
    let mut entries = vec![vec![0.0; size]; size];
    for l in 0..size {
        for k in 0..size {
            let mut acc = 0.0;
            for j in 0..=l.min(k) {
                let tail = binomial(n - l as u32, (k - j) as u32);
                if tail == 0.0 {
                    continue;
                }
                acc += binomial(l as u32, j as u32)
                    * tail
                    * inv_d.powi(j as i32)
                    * (1.0 - inv_d).powi((l - j) as i32)
                    * (-inv_d).powi((k - j) as i32)
                    * (1.0 + inv_d).powi(n as i32 - l as i32 - k as i32 + j as i32);
            }
            entries[l][k] = acc;
        }
    }
    Ok(QMatrix { n, d, entries })
}

/// True iff both `Q x >= 0` and `Q (1 - x) >= 0` within `tol`, i.e. the
/// symmetric test with acceptance weights `x` and its complement are both
/// PPT operators.
pub fn ppt_constraint_check(x: &[f64], q: &QMatrix, tol: f64) -> Result<bool> {
    let size = (q.n + 1) as usize;
    if x.len() != size {
        return Err(Error::DimensionMismatch(format!(
            "weight vector length {} does not match n + 1 = {size}",
            x.len()
        )));
    }
    let direct = q.apply(x);
    let ones_minus: Vec<f64> = x.iter().map(|v| 1.0 - v).collect();
    let complement = q.apply(&ones_minus);
    Ok(direct.iter().chain(&complement).all(|&v| v >= -tol))
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetricLpSolution {
    pub n: u32,
    pub d: usize,
    pub p: f64,
    /// Optimal acceptance weights of the symmetric test.
    pub x: Vec<f64>,
    /// Optimal error probability.
    pub value: f64,
}

impl SymmetricLpSolution {
    /// JSON form of the instance with its dual certificate attached:
    /// `{n, d, p, x[], value, dual: {u[], v[], w[], z}}`.
    pub fn to_json(&self, dual: &DualCertificate) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "d": self.d,
            "p": self.p,
            "x": self.x,
            "value": self.value,
            "dual": {
                "u": dual.u,
                "v": dual.v,
                "w": dual.w,
                "z": dual.z,
            },
        })
    }
}

/// Exact optimal PPT error probability for `n` copies at prior `p`, by
/// minimizing `p + (1-p)(x_0 - p/(1-p) x_n)` over the PPT polytope.
pub fn solve_symmetric_lp(n: u32, d: usize, p: f64) -> Result<SymmetricLpSolution> {
    check_prior(p)?;
    let q = q_matrix(n, d)?;
    let size = (n + 1) as usize;
    let mut cost = vec![0.0; size];
    cost[0] = 1.0;
    cost[size - 1] = -p / (1.0 - p);
    let lp = reduced_lp(&q, cost, Vec::new());
    let sol = simplex_solve(&lp)?;
    let value = p + (1.0 - p) * sol.value;
    Ok(SymmetricLpSolution {
        n,
        d,
        p,
        x: sol.x,
        value,
    })
}

/// Closed-form dual feasible point with its certificate identity verified on
/// construction.
#[derive(Clone, Debug, Serialize)]
pub struct DualCertificate {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    /// Certified lower bound on the error probability.
    pub objective: f64,
    /// Max residual of `(Q^T u)_k = delta_{0k} - delta_{nk} (d+1)^{-n}`.
    pub identity_residual: f64,
}

/// Builds the dual point
/// `u*_i = 2^{-n} C(n, i) [1 - (-(d-1)/(d+1))^{n-i}]`, `v* = 0`,
/// `w*_n = max(p/(1-p) - (d+1)^{-n}, 0)` and verifies the identity
/// `(Q^T u*)_k = delta_{0k} - delta_{nk} (d+1)^{-n}`.
///
/// The binomial weight accounts for the multiplicity of each projector word
/// class; without it the identity only holds at `n = 1`.
pub fn dual_certificate(n: u32, d: usize, p: f64) -> Result<DualCertificate> {
    check_prior(p)?;
    let q = q_matrix(n, d)?;
    dual_certificate_for(&q, p)
}

pub(crate) fn dual_certificate_for(q: &QMatrix, p: f64) -> Result<DualCertificate> {
    let (n, d) = (q.n, q.d);
    let size = (n + 1) as usize;
    let df = d as f64;
    let ratio = -(df - 1.0) / (df + 1.0);
    let u: Vec<f64> = (0..size)
        .map(|i| {
            binomial(n, i as u32) * (1.0 - ratio.powi((n as usize - i) as i32))
                / 2f64.powi(n as i32)
        })
        .collect();
    if let Some(bad) = u.iter().find(|&&ui| ui < 0.0) {
        return Err(Error::CertificateFailure(format!(
            "negative dual component {bad}"
        )));
    }
    let v = vec![0.0; size];
    let decay = (df + 1.0).powi(-(n as i32));
    let mut w = vec![0.0; size];
    w[size - 1] = (p / (1.0 - p) - decay).max(0.0);

    let qtu = q.transpose_apply(&u);
    let mut residual = 0.0f64;
    for (k, &val) in qtu.iter().enumerate() {
        let target = if k == 0 {
            1.0
        } else if k == size - 1 {
            -decay
        } else {
            0.0
        };
        residual = residual.max((val - target).abs());
    }
    if residual > 1e-10 {
        return Err(Error::CertificateFailure(format!(
            "dual identity residual {residual:.3e} exceeds 1e-10 at n={n}, d={d}"
        )));
    }
    let objective = ((1.0 - p) * decay).min(p);
    Ok(DualCertificate {
        u,
        v,
        w,
        z: None,
        objective,
        identity_residual: residual,
    })
}

/// Optimal type-II error at type-I level `alpha`: minimizes `x_0` over the
/// PPT polytope with `x_n >= 1 - alpha`. The matching dual point (`u*` with
/// `z* = (d+1)^{-n}`) is constructed and its feasibility checked before the
/// value is returned.
pub fn tradeoff_lp(n: u32, d: usize, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!(
            "alpha {alpha} outside [0, 1]"
        )));
    }
    let q = q_matrix(n, d)?;
    let size = (n + 1) as usize;
    let mut cost = vec![0.0; size];
    cost[0] = 1.0;
    let mut last_row = vec![0.0; size];
    last_row[size - 1] = 1.0;
    let lp = reduced_lp(&q, cost, vec![(last_row, Sense::Ge, 1.0 - alpha)]);
    let sol = simplex_solve(&lp)?;

    // Dual feasibility: (Q^T u*)_k + z* delta_{nk} = delta_{0k}.
    let cert = dual_certificate_for(&q, 0.5)?;
    let z = (d as f64 + 1.0).powi(-(n as i32));
    let mut lhs = q.transpose_apply(&cert.u);
    lhs[size - 1] += z;
    for (k, &val) in lhs.iter().enumerate() {
        let target = if k == 0 { 1.0 } else { 0.0 };
        if (val - target).abs() > 1e-10 {
            return Err(Error::CertificateFailure(format!(
                "trade-off dual infeasible at k={k}: {val} vs {target}"
            )));
        }
    }
    let dual_objective = (1.0 - alpha) * z;
    if (sol.value - dual_objective).abs() > 1e-9 {
        return Err(Error::CertificateFailure(format!(
            "trade-off duality gap {} at n={n}, d={d}, alpha={alpha}",
            sol.value - dual_objective
        )));
    }
    Ok(sol.value)
}

/// Error probability of the explicit single-copy LOCC protocol, evaluated in
/// closed form and (when the n-copy dimension fits the cap) by tracing the
/// measurement power against the complement power; the two must agree.
pub fn locc_achievability(n: u32, d: usize, p: f64) -> Result<f64> {
    check_prior(p)?;
    let decay = (d as f64 + 1.0).powi(-(n as i32));
    let closed = (1.0 - p) * decay;
    if (d * d)
        .checked_pow(n)
        .is_some_and(|t| t <= crate::operator::DIM_CAP)
    {
        let m = measurement_m(d)?.kron_power(n)?;
        let phi = max_entangled(d)?;
        let perp_n = orth_complement(&phi)?.kron_power(n)?;
        let direct = (1.0 - p) * m.trace_product(perp_n.op())?.re;
        if (direct - closed).abs() > 1e-10 {
            return Err(Error::CertificateFailure(format!(
                "LOCC trace {direct} disagrees with closed form {closed}"
            )));
        }
    }
    Ok(closed.min(p))
}

/// Closed-form optimum `min((1-p)(d+1)^{-n}, p)` the LP must reproduce.
pub fn mes_closed_form(n: u32, d: usize, p: f64) -> f64 {
    ((1.0 - p) * (d as f64 + 1.0).powi(-(n as i32))).min(p)
}

/// The reduced-space program: `Q x >= 0`, `Q x <= rowsum` (the complement
/// constraint), box bounds `0 <= x <= 1`, plus any extra rows.
fn reduced_lp(q: &QMatrix, cost: Vec<f64>, extra: Vec<(Vec<f64>, Sense, f64)>) -> LinearProgram {
    let size = cost.len();
    let sums = q.row_sums();
    let mut rows = Vec::new();
    let mut senses = Vec::new();
    let mut rhs = Vec::new();
    for (l, row) in q.entries().iter().enumerate() {
        rows.push(row.clone());
        senses.push(Sense::Ge);
        rhs.push(0.0);
        rows.push(row.clone());
        senses.push(Sense::Le);
        rhs.push(sums[l]);
    }
    for (row, sense, b) in extra {
        rows.push(row);
        senses.push(sense);
        rhs.push(b);
    }
    LinearProgram {
        cost,
        rows,
        senses,
        rhs,
        bounds: vec![(0.0, 1.0); size],
    }
}

fn check_prior(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("prior {p} outside (0, 1)")));
    }
    Ok(())
}
