//! Batch front-end: every computation behind a subcommand with CSV/JSON
//! output. The `pptdisc` binary is a thin argument parser around the
//! functions here; crate examples call them directly.
//!
//! Outputs are deterministic given the configuration and seed; the only
//! nondeterministic byte is the optional timestamp header line, suppressible
//! with `--no-timestamp`.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::exponents::{closed_form_error, ErrorCase, TableRow};
use crate::report::{fmt_float, json_float, CsvTable};
use crate::states::schmidt_state;
use crate::symlp::{dual_certificate_for, q_matrix, solve_symmetric_lp, tradeoff_lp};
use crate::upb::{
    delta_s, ppt_perfect_discrimination, sep_error_lower_bound, separation_witness, tiles_upb,
    upb_hypothesis_pair, DeltaConfig, ProductBasis,
};

/// Environment variable that prefixes relative output paths.
pub const OUT_DIR_ENV: &str = "PPTDISC_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Shared run options.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub timestamp: bool,
    pub restarts: usize,
    pub tol: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            format: OutputFormat::Csv,
            out: None,
            seed: 0,
            timestamp: true,
            restarts: 32,
            tol: None,
        }
    }
}

impl RunConfig {
    fn render(&self, table: &CsvTable) -> Result<String> {
        match self.format {
            OutputFormat::Csv => {
                let mut buf = Vec::new();
                table.write_csv(&mut buf, self.timestamp)?;
                Ok(String::from_utf8(buf).expect("csv output is utf-8"))
            }
            OutputFormat::Json => Ok(serde_json::to_string_pretty(&table.to_json())? + "\n"),
        }
    }

    /// Writes to the resolved output path, or returns the text for stdout.
    pub fn deliver(&self, text: String) -> Result<Option<String>> {
        match &self.out {
            None => Ok(Some(text)),
            Some(path) => {
                let resolved = resolve_out_path(path);
                if let Some(parent) = resolved.parent() {
                    if !parent.as_os_str().is_empty() {
                        std::fs::create_dir_all(parent)?;
                    }
                }
                std::fs::write(&resolved, text)?;
                Ok(None)
            }
        }
    }
}

fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(path);
            }
        }
    }
    path.to_path_buf()
}

pub fn parse_curve_case(name: &str, d: usize, m: usize, lambda: f64) -> Result<ErrorCase> {
    Ok(match name {
        "mes" => ErrorCase::Mes { d },
        "mes-high" => ErrorCase::MesHigh { m, lambda },
        "mes-high-1" => ErrorCase::MesHigh1 { m, lambda },
        "sym-high" => ErrorCase::SymHigh { m, lambda },
        "sym-high-1" => ErrorCase::SymHigh1 { m, lambda },
        other => return Err(Error::InvalidArgument(format!("unknown case '{other}'"))),
    })
}

/// Error-probability curve over a copy range: closed form, LP value where
/// the twirl reduction applies, and the certificate lower bound where one is
/// available.
pub fn cmd_error_curve(
    case: &ErrorCase,
    p: f64,
    n_min: u32,
    n_max: u32,
    cfg: &RunConfig,
) -> Result<String> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::InvalidArgument(format!(
            "empty copy range {n_min}..{n_max}"
        )));
    }
    let mut table = CsvTable::new(&["case", "n", "p_e_closed_form", "p_e_lp", "p_e_lower_cert"]);
    for n in n_min..=n_max {
        let closed = closed_form_error(case, p, n)?;
        let (lp_cell, cert_cell) = match *case {
            ErrorCase::Mes { d } => {
                let lp = solve_symmetric_lp(n, d, p)?.value;
                // Certificate from the exponential lower bound at eta = 1/d.
                let psi = schmidt_state(&vec![1.0 / d as f64; d])?;
                let cert = crate::ppt::exp_lower_bound(&psi, p, n.min(3))?;
                let bound = p.min(1.0 - p) * cert.t.powi(n as i32);
                (fmt_float(lp), fmt_float(bound))
            }
            _ => (String::new(), String::new()),
        };
        table.push_row(vec![
            case_label(case),
            n.to_string(),
            fmt_float(closed),
            lp_cell,
            cert_cell,
        ]);
    }
    cfg.render(&table)
}

fn case_label(case: &ErrorCase) -> String {
    match case {
        ErrorCase::Mes { .. } => "mes".into(),
        ErrorCase::MesHigh { .. } => "mes-high".into(),
        ErrorCase::MesHigh1 { .. } => "mes-high-1".into(),
        ErrorCase::SymHigh { .. } => "sym-high".into(),
        ErrorCase::SymHigh1 { .. } => "sym-high-1".into(),
    }
}

/// Optimal type-I/type-II trade-off over an alpha grid.
pub fn cmd_tradeoff(
    d: usize,
    n_min: u32,
    n_max: u32,
    alpha_grid: &[f64],
    cfg: &RunConfig,
) -> Result<String> {
    if alpha_grid.is_empty() {
        return Err(Error::InvalidArgument("empty alpha grid".into()));
    }
    if alpha_grid.iter().any(|a| !(0.0..=1.0).contains(a)) {
        return Err(Error::InvalidArgument("alpha grid outside [0, 1]".into()));
    }
    if n_min == 0 || n_min > n_max {
        return Err(Error::InvalidArgument(format!(
            "empty copy range {n_min}..{n_max}"
        )));
    }
    let mut table = CsvTable::new(&["d", "n", "alpha", "beta_lp", "beta_closed"]);
    for n in n_min..=n_max {
        for &alpha in alpha_grid {
            let lp = tradeoff_lp(n, d, alpha)?;
            let closed = (1.0 - alpha) * (d as f64 + 1.0).powi(-(n as i32));
            table.push_row(vec![
                d.to_string(),
                n.to_string(),
                fmt_float(alpha),
                fmt_float(lp),
                fmt_float(closed),
            ]);
        }
    }
    cfg.render(&table)
}

/// Exponent table rows over a rate grid. `rows` may be a single row or all
/// eight.
pub fn cmd_exponents(rows: &[TableRow], r_grid: &[f64], cfg: &RunConfig) -> Result<String> {
    if r_grid.is_empty() {
        return Err(Error::InvalidArgument("empty rate grid".into()));
    }
    if r_grid.iter().any(|r| *r <= 0.0) {
        return Err(Error::InvalidArgument("rates must be positive".into()));
    }
    let mut table = CsvTable::new(&[
        "case",
        "d",
        "m",
        "lambda",
        "r",
        "chernoff",
        "stein",
        "hoeffding",
        "strong_converse",
    ]);
    for row in rows {
        let report = crate::exponents::exponents_table(row)?;
        let (d_cell, m_cell, lambda_cell) = match *row {
            TableRow::MesForward { d }
            | TableRow::MesReverse { d }
            | TableRow::WernerForward { d }
            | TableRow::WernerReverse { d } => (d.to_string(), String::new(), String::new()),
            TableRow::MesPadded { m, lambda }
            | TableRow::MesPerpPadded { m, lambda }
            | TableRow::WernerPadded { m, lambda }
            | TableRow::WernerPerpPadded { m, lambda } => {
                (String::new(), m.to_string(), fmt_float(lambda))
            }
        };
        for &r in r_grid {
            table.push_row(vec![
                row.label().to_string(),
                d_cell.clone(),
                m_cell.clone(),
                lambda_cell.clone(),
                fmt_float(r),
                fmt_float(report.chernoff),
                fmt_float(report.stein),
                fmt_float(report.hoeffding.eval(r)),
                fmt_float(report.strong_converse.eval(r)),
            ]);
        }
    }
    cfg.render(&table)
}

/// All eight table rows with the given parameters.
pub fn all_table_rows(d: usize, m: usize, lambda: f64) -> Result<Vec<TableRow>> {
    (1..=8)
        .map(|i| TableRow::from_index(i, d, m, lambda))
        .collect()
}

/// Separation report: minimax-overlap estimate, PPT-perfect flag, the
/// geometric SEP bound series, and the witness checks per copy count.
pub fn cmd_separation(
    basis: Option<&ProductBasis>,
    n_min: u32,
    n_max: u32,
    cfg: &RunConfig,
) -> Result<String> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::InvalidArgument(format!(
            "empty copy range {n_min}..{n_max}"
        )));
    }
    let default_basis;
    let basis = match basis {
        Some(b) => b,
        None => {
            default_basis = tiles_upb();
            &default_basis
        }
    };
    let per_copy = basis.dims().0 * basis.dims().1;
    if per_copy.pow(n_max) > crate::operator::DIM_CAP {
        return Err(Error::DimensionCap {
            dim: per_copy.pow(n_max.min(8)),
            cap: crate::operator::DIM_CAP,
        });
    }

    let delta_cfg = DeltaConfig {
        restarts: cfg.restarts,
        seed: cfg.seed,
        improve_tol: cfg.tol.unwrap_or(1e-8),
        ..Default::default()
    };
    let estimate = delta_s(basis, &delta_cfg)?;
    let pair = upb_hypothesis_pair(basis)?;
    let ppt_perfect = ppt_perfect_discrimination(basis)?;
    let mu = estimate.value / basis.len() as f64;

    let mut bounds = Vec::new();
    let mut witnesses = Vec::new();
    for n in n_min..=n_max {
        bounds.push(serde_json::json!({
            "n": n,
            "sep_error_lower_bound": json_float(sep_error_lower_bound(estimate.value, basis.len(), n)?),
        }));
        let w = separation_witness(
            basis,
            &pair.rho1,
            n,
            estimate.value,
            cfg.restarts.max(64),
            cfg.seed,
        )?;
        witnesses.push(serde_json::json!({
            "n": n,
            "psd_check": w.psd_check,
            "block_positivity_falsified": w.block_pos_falsified,
            "witness_trace": json_float(w.h_operator.trace().re),
        }));
    }
    let value = serde_json::json!({
        "basis_members": basis.len(),
        "dims": [basis.dims().0, basis.dims().1],
        "delta": json_float(estimate.value),
        "delta_converged": estimate.converged,
        "restarts_used": estimate.restarts_used,
        "mu": json_float(mu),
        "ppt_perfect_discrimination": ppt_perfect,
        "sep_bounds": bounds,
        "witness_checks": witnesses,
    });
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

/// One verification check outcome.
#[derive(Clone, Debug)]
pub struct VerifyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

/// The full certificate suite. `perturb_q` injects an error into the first
/// entry of every Q matrix as a negative control (the dual-identity check
/// must then fail).
pub fn verify_suite(seed: u64, perturb_q: f64) -> Result<Vec<VerifyCheck>> {
    let mut checks = Vec::new();

    // Row sums of Q are exactly 1.
    let mut worst = 0.0f64;
    for d in 2..=5 {
        for n in 1..=10 {
            let q = q_matrix(n, d)?;
            for s in q.row_sums() {
                worst = worst.max((s - 1.0).abs());
            }
        }
    }
    checks.push(VerifyCheck {
        name: "q-row-sums",
        passed: worst < 1e-12,
        residual: worst,
        tolerance: 1e-12,
    });

    // Dual certificate identity over the full grid.
    let mut worst = 0.0f64;
    let mut passed = true;
    for d in 2..=5 {
        for n in 1..=10 {
            let q = q_matrix(n, d)?.perturbed(perturb_q);
            match dual_certificate_for(&q, 0.5) {
                Ok(cert) => worst = worst.max(cert.identity_residual),
                Err(_) => {
                    passed = false;
                    worst = f64::INFINITY;
                }
            }
        }
    }
    checks.push(VerifyCheck {
        name: "dual-identity",
        passed: passed && worst < 1e-10,
        residual: worst,
        tolerance: 1e-10,
    });

    // Decomposition sign pattern for representative states and copy counts.
    let mut passed = true;
    let states = [
        schmidt_state(&[0.5, 0.5])?,
        schmidt_state(&[0.8, 0.2])?,
        schmidt_state(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])?,
        schmidt_state(&[0.5, 0.3, 0.2])?,
    ];
    for psi in &states {
        for n in 1..=2 {
            if crate::ppt::exp_lower_bound(psi, 0.5, n).is_err() {
                passed = false;
            }
        }
    }
    checks.push(VerifyCheck {
        name: "xy-sign-checks",
        passed,
        residual: if passed { 0.0 } else { f64::INFINITY },
        tolerance: 1e-9,
    });

    // Weak-duality sandwich on randomized instances.
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut min_gap = f64::INFINITY;
    for &d in &[2usize, 3] {
        for _ in 0..10 {
            let f = crate::operator::Factorization::bipartite(d, d)?;
            let h =
                crate::states::random::hermitian(&mut rng, d * d).with_factorization(f.clone())?;
            let g =
                crate::states::random::hermitian(&mut rng, d * d).with_factorization(f.clone())?;
            let scale = g
                .eigenvalues()?
                .iter()
                .map(|v| v.abs())
                .fold(0.0f64, f64::max)
                .max(
                    g.gamma()?
                        .eigenvalues()?
                        .iter()
                        .map(|v| v.abs())
                        .fold(0.0f64, f64::max),
                );
            let m = g.scale(1.0 / (scale + 1e-9));
            let primal = crate::ppt::ppt_norm_primal_value(&h, &m)?;
            let split = crate::states::random::hermitian(&mut rng, d * d).with_factorization(f)?;
            let w: f64 = rng.gen_range(-1.0..2.0);
            let x = h.scale(w).add(&split)?;
            let y = h.sub(&x)?;
            let dual = crate::ppt::ppt_norm_dual_value(&h, &x, &y)?;
            min_gap = min_gap.min(dual.norm_value - primal);
        }
    }
    checks.push(VerifyCheck {
        name: "weak-duality-sandwich",
        passed: min_gap > -1e-9,
        residual: (-min_gap).max(0.0),
        tolerance: 1e-9,
    });

    Ok(checks)
}

/// Renders the verify report; returns the text and overall success.
pub fn cmd_verify(seed: u64, perturb_q: f64) -> Result<(String, bool)> {
    let checks = verify_suite(seed, perturb_q)?;
    let mut out = String::new();
    let mut all_passed = true;
    for check in &checks {
        all_passed &= check.passed;
        out.push_str(&format!(
            "{:<24} {}  residual {:>12} (tol {})\n",
            check.name,
            if check.passed { "PASS" } else { "FAIL" },
            fmt_float(check.residual),
            fmt_float(check.tolerance),
        ));
    }
    out.push_str(if all_passed {
        "verify: all checks passed\n"
    } else {
        "verify: FAILURES present\n"
    });
    Ok((out, all_passed))
}

/// Parses a comma-separated float list.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number '{tok}' in grid")))
        })
        .collect()
}

/// Loads a product basis from a JSON file.
pub fn load_basis(path: &Path) -> Result<ProductBasis> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    ProductBasis::from_json(&value)
}
