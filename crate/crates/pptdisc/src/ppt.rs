//! The PPT-distinguishability norm in primal and dual form, together with
//! the certificates built from it: an exponential lower bound on the error
//! probability of testing an entangled pure state against its orthogonal
//! complement, and a strong-converse bound for the asymmetric setting.
//!
//! No general-purpose solver for the norm ships here: exact values are only
//! available on twirl-symmetric instances (see [`crate::symlp`]), while
//! generic instances get certified two-sided bounds from feasible primal and
//! dual points.

use crate::error::{Error, Result};
use crate::operator::{DensityMatrix, Operator};
use crate::states::{orth_complement, PureState};

/// Feasibility tolerance for primal constraint checks.
const FEAS_TOL: f64 = 1e-9;
/// Spectral tolerance for certificate sign checks, scaled by operator norm.
const SIGN_TOL: f64 = 1e-9;

/// A dual decomposition `target = x_part + y_part` whose value
/// `||x||_1 + ||y^Gamma||_1` upper-bounds the PPT norm of the target.
#[derive(Clone, Debug)]
pub struct DualDecomposition {
    pub x_part: Operator,
    pub y_part: Operator,
    pub target: Operator,
    pub norm_value: f64,
}

/// Evaluates a feasible point of the primal norm program: any Hermitian `m`
/// with `-1 <= m <= 1` and `-1 <= m^Gamma <= 1` yields the lower bound
/// `Tr[h m] <= ||h||_PPT`.
pub fn ppt_norm_primal_value(h: &Operator, m: &Operator) -> Result<f64> {
    for (name, op) in [("h", h), ("m", m)] {
        if !op.is_hermitian(FEAS_TOL * op.max_abs().max(1.0)) {
            return Err(Error::NotHermitian {
                deviation: op.hermitian_deviation(),
            });
        }
        let _ = name;
    }
    let bound_check = |op: &Operator, label: &str| -> Result<()> {
        let vals = op.eigenvalues()?;
        let max = vals[0];
        let min = *vals.last().expect("nonempty");
        if max > 1.0 + FEAS_TOL || min < -1.0 - FEAS_TOL {
            return Err(Error::InfeasiblePoint(format!(
                "{label} has spectrum [{min}, {max}] outside [-1, 1]"
            )));
        }
        Ok(())
    };
    bound_check(m, "m")?;
    bound_check(&m.gamma()?, "m^Gamma")?;
    Ok(h.trace_product(m)?.re)
}

/// Wraps a decomposition `h = x + y` into its dual value
/// `||x||_1 + ||y^Gamma||_1`, an upper bound on `||h||_PPT`.
pub fn ppt_norm_dual_value(h: &Operator, x: &Operator, y: &Operator) -> Result<DualDecomposition> {
    let recombined = x.add(y)?;
    let scale = h.max_abs().max(1.0);
    if recombined.max_abs_diff(h) > FEAS_TOL * scale {
        return Err(Error::InfeasiblePoint(format!(
            "x + y deviates from the target by {:.3e}",
            recombined.max_abs_diff(h)
        )));
    }
    let norm_value = x.trace_norm()? + y.gamma()?.trace_norm()?;
    Ok(DualDecomposition {
        x_part: x.clone(),
        y_part: y.clone(),
        target: h.clone(),
        norm_value,
    })
}

/// Equiprobable-prior error probability from a PPT norm value:
/// `(1 - norm/2) / 2`.
pub fn error_prob_from_ppt_norm(norm_value: f64) -> Result<f64> {
    if !(0.0..=2.0 + 1e-12).contains(&norm_value) {
        return Err(Error::InvalidArgument(format!(
            "norm value {norm_value} outside [0, 2]"
        )));
    }
    Ok(0.5 * (1.0 - 0.5 * norm_value))
}

/// Exponential lower-bound certificate for testing `psi^{(x)n}` against its
/// orthogonal complement power under PPT measurements.
#[derive(Clone, Debug)]
pub struct ExpLowerBoundCert {
    /// Largest squared Schmidt coefficient of `psi`.
    pub eta: f64,
    /// Per-copy decay base `(1 - eta) / ((d^2 - 1) eta)`.
    pub t: f64,
    pub n: u32,
    /// `min(p, 1-p) t^n`.
    pub bound: f64,
}

/// Builds the certificate for `n` copies at prior `p`.
///
/// The single-copy commuting-pair check `1 - psi^Gamma/eta >= 0` and
/// `1 + (1/eta - 2) psi^Gamma >= 0` justifies the sign pattern for every
/// `n`: all operators involved are polynomials in `psi^Gamma`, so the n-copy
/// comparison reduces to products of their joint eigenvalues. When the
/// n-copy dimension fits the cap the decomposition `x = (1 - t^n) rho`,
/// `y = t^n rho - sigma` is additionally materialized and checked spectrally
/// (`x >= 0`, `y^Gamma <= 0`).
pub fn exp_lower_bound(psi: &PureState, p: f64, n: u32) -> Result<ExpLowerBoundCert> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("prior {p} outside (0, 1)")));
    }
    let dims = psi.factorization().local_dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::InvalidArgument(format!(
            "certificate needs a state on C^d (x) C^d, got factors {dims:?}"
        )));
    }
    let d = dims[0];
    let eta = psi.eta().expect("bipartite state has Schmidt data");
    if eta >= 1.0 - 1e-12 {
        return Err(Error::ProductState);
    }
    let d2 = (d * d) as f64;
    let t = (1.0 - eta) / ((d2 - 1.0) * eta);
    let bound = p.min(1.0 - p) * t.powi(n as i32);

    // Single-copy justification valid for all n.
    let proj = psi.projector();
    let gamma = proj.op().gamma()?;
    let id = Operator::identity(gamma.factorization().clone());
    let upper = id.sub(&gamma.scale(1.0 / eta))?;
    if !upper.is_psd(SIGN_TOL)? {
        return Err(Error::CertificateFailure(
            "single-copy check 1 - psi^Gamma/eta >= 0 failed".into(),
        ));
    }
    let lower = id.add(&gamma.scale(1.0 / eta - 2.0))?;
    if !lower.is_psd(SIGN_TOL)? {
        return Err(Error::CertificateFailure(
            "single-copy check 1 + (1/eta - 2) psi^Gamma >= 0 failed".into(),
        ));
    }

    // Materialized n-copy check when the dimension allows it.
    if (d * d)
        .checked_pow(n)
        .is_some_and(|t| t <= crate::operator::DIM_CAP)
    {
        let (x, y) = materialize_decomposition(psi, n, 1.0)?;
        let x_min = x.min_eigenvalue()?;
        if x_min < -SIGN_TOL * x.max_abs().max(1.0) {
            return Err(Error::CertificateFailure(format!(
                "materialized X has negative eigenvalue {x_min:.3e}"
            )));
        }
        let y_gamma = y.gamma()?;
        let y_max = y_gamma.max_eigenvalue()?;
        if y_max > SIGN_TOL * y_gamma.max_abs().max(1.0) {
            return Err(Error::CertificateFailure(format!(
                "materialized Y^Gamma has positive eigenvalue {y_max:.3e}"
            )));
        }
    }

    Ok(ExpLowerBoundCert { eta, t, n, bound })
}

/// The scaled decomposition of `rho - lambda sigma` used by the exponential
/// and strong-converse bounds: `x = (1 - lambda t^n) rho`,
/// `y = lambda (t^n rho - sigma)` with `rho = psi^{(x)n}` and `sigma` the
/// complement power.
pub fn materialize_decomposition(
    psi: &PureState,
    n: u32,
    lambda: f64,
) -> Result<(Operator, Operator)> {
    let eta = psi
        .eta()
        .ok_or(Error::InvalidArgument("bipartite state required".into()))?;
    let d = psi.factorization().local_dims()[0];
    let d2 = (d * d) as f64;
    let t = (1.0 - eta) / ((d2 - 1.0) * eta);
    let tn = t.powi(n as i32);
    let proj = psi.projector();
    let rho = proj.kron_power(n)?;
    let sigma = orth_complement(&proj)?.kron_power(n)?;
    let x = rho.op().scale(1.0 - lambda * tn);
    let y = rho.op().scale(lambda * tn).sub(&sigma.op().scale(lambda))?;
    Ok((x, y))
}

/// Lower bound on the optimal type-I error at type-II level `mu`, from a
/// decomposition of `rho - lambda sigma`:
/// `(1 + lambda - norm)/2 - lambda mu`.
pub fn alpha_lower_bound(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    mu: f64,
    lambda: f64,
    decomp: &DualDecomposition,
) -> Result<f64> {
    if lambda < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "lambda {lambda} must be nonnegative"
        )));
    }
    let target = rho.op().sub(&sigma.op().scale(lambda))?;
    let scale = target.max_abs().max(1.0);
    if decomp.target.max_abs_diff(&target) > FEAS_TOL * scale {
        return Err(Error::InfeasiblePoint(
            "decomposition target is not rho - lambda sigma".into(),
        ));
    }
    Ok(0.5 * (1.0 + lambda - decomp.norm_value) - lambda * mu)
}

/// Strong-converse bound on the Stein exponent:
/// `log((d^2 - 1) eta / (1 - eta)) >= log(d + 1)`.
///
/// An exact product input is an error; a nearly-product state (eta within
/// 1e-12 of 1, where the formula exceeds any meaningful rate) reports the
/// infinity sentinel instead of a noise-dominated float.
pub fn stein_upper_bound(psi: &PureState) -> Result<f64> {
    let dims = psi.factorization().local_dims();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::InvalidArgument("bipartite d x d state required".into()));
    }
    let eta = psi.eta().expect("bipartite");
    if eta >= 1.0 {
        return Err(Error::ProductState);
    }
    if eta >= 1.0 - 1e-12 {
        return Ok(f64::INFINITY);
    }
    let d2 = (dims[0] * dims[0]) as f64;
    Ok(((d2 - 1.0) * eta / (1.0 - eta)).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Factorization;
    use crate::states::test_support::{rand_hermitian, rng};
    use crate::states::{max_entangled, schmidt_state};
    use rand::Rng;

    fn mes_pure(d: usize) -> PureState {
        schmidt_state(&vec![1.0 / d as f64; d]).unwrap()
    }

    #[test]
    fn primal_value_examples() {
        let mut r = rng(3);
        let h = rand_hermitian(&mut r, 4)
            .with_factorization(Factorization::bipartite(2, 2).unwrap())
            .unwrap();
        let zero = Operator::zeros(h.factorization().clone());
        assert_eq!(ppt_norm_primal_value(&h, &zero).unwrap(), 0.0);

        let id = Operator::identity(h.factorization().clone());
        let v = ppt_norm_primal_value(&h, &id).unwrap();
        assert!((v - h.trace().re).abs() < 1e-12);

        // m = 2 M_2 - 1 evaluates h = Phi - Phi_perp to the exact norm 4/3.
        let phi = max_entangled(2).unwrap();
        let perp = crate::states::orth_complement(&phi).unwrap();
        let diff = phi.op().sub(perp.op()).unwrap();
        let m = crate::states::measurement_m(2)
            .unwrap()
            .scale(2.0)
            .sub(&id)
            .unwrap();
        let v = ppt_norm_primal_value(&diff, &m).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-12);

        // An infeasible m is rejected.
        let too_big = id.scale(1.5);
        assert!(matches!(
            ppt_norm_primal_value(&h, &too_big),
            Err(Error::InfeasiblePoint(_))
        ));
    }

    #[test]
    fn dual_value_examples() {
        let phi = max_entangled(2).unwrap();
        let perp = crate::states::orth_complement(&phi).unwrap();
        let h = phi.op().sub(perp.op()).unwrap();

        // y = 0 degenerates to the trace norm.
        let zero = Operator::zeros(h.factorization().clone());
        let d = ppt_norm_dual_value(&h, &h, &zero).unwrap();
        assert!((d.norm_value - h.trace_norm().unwrap()).abs() < 1e-10);

        // The designed decomposition at psi = Phi_2, n = 1: value 2(1 - t) = 4/3.
        let psi = mes_pure(2);
        let (x, y) = materialize_decomposition(&psi, 1, 1.0).unwrap();
        let d = ppt_norm_dual_value(&h, &x, &y).unwrap();
        assert!((d.norm_value - 4.0 / 3.0).abs() < 1e-10, "{}", d.norm_value);
        // And || Y^Gamma ||_1 alone is 1 - t = 2/3.
        assert!((y.gamma().unwrap().trace_norm().unwrap() - 2.0 / 3.0).abs() < 1e-10);

        // h = 0 with x = -y = Phi: valid but loose upper bound of the zero
        // norm. ||Phi||_1 = 1 and ||Phi^Gamma||_1 = ||F/d||_1 = d, so the
        // value is 1 + d.
        let zero_h = Operator::zeros(h.factorization().clone());
        let d = ppt_norm_dual_value(&zero_h, phi.op(), &phi.op().scale(-1.0)).unwrap();
        assert!((d.norm_value - 3.0).abs() < 1e-10);

        // Mismatched decomposition is rejected.
        assert!(matches!(
            ppt_norm_dual_value(&h, &x, &x),
            Err(Error::InfeasiblePoint(_))
        ));
    }

    #[test]
    fn weak_duality_sandwich_on_random_instances() {
        let mut r = rng(17);
        for _ in 0..20 {
            let h = rand_hermitian(&mut r, 4)
                .with_factorization(Factorization::bipartite(2, 2).unwrap())
                .unwrap();
            // Feasible primal point: scale a random Hermitian into the box.
            let g = rand_hermitian(&mut r, 4)
                .with_factorization(Factorization::bipartite(2, 2).unwrap())
                .unwrap();
            let scale = g
                .eigenvalues()
                .unwrap()
                .iter()
                .map(|v| v.abs())
                .fold(0.0f64, f64::max)
                .max(
                    g.gamma()
                        .unwrap()
                        .eigenvalues()
                        .unwrap()
                        .iter()
                        .map(|v| v.abs())
                        .fold(0.0f64, f64::max),
                );
            let m = g.scale(1.0 / (scale + 1e-9));
            let primal = ppt_norm_primal_value(&h, &m).unwrap();

            // Random valid decomposition h = x + y.
            let split = rand_hermitian(&mut r, 4)
                .with_factorization(Factorization::bipartite(2, 2).unwrap())
                .unwrap();
            let w: f64 = r.gen_range(-1.0..2.0);
            let x = h.scale(w).add(&split).unwrap();
            let y = h.sub(&x).unwrap();
            let dual = ppt_norm_dual_value(&h, &x, &y).unwrap();
            assert!(
                primal <= dual.norm_value + 1e-9,
                "sandwich violated: primal {primal} > dual {}",
                dual.norm_value
            );
        }
    }

    #[test]
    fn error_prob_conversion() {
        assert!((error_prob_from_ppt_norm(2.0).unwrap()).abs() < 1e-15);
        assert!((error_prob_from_ppt_norm(0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((error_prob_from_ppt_norm(4.0 / 3.0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(error_prob_from_ppt_norm(2.5).is_err());
        assert!(error_prob_from_ppt_norm(-0.1).is_err());
    }

    #[test]
    fn exp_lower_bound_examples() {
        // Maximally entangled d=2: t = 1/3, tight at n = 1, p = 1/2.
        let cert = exp_lower_bound(&mes_pure(2), 0.5, 1).unwrap();
        assert!((cert.t - 1.0 / 3.0).abs() < 1e-12);
        assert!((cert.bound - 1.0 / 6.0).abs() < 1e-12);

        for d in 2..=4usize {
            let cert = exp_lower_bound(&mes_pure(d), 0.5, 1).unwrap();
            assert!((cert.t - 1.0 / (d as f64 + 1.0)).abs() < 1e-12, "d={d}");
        }

        // Skewed coefficients: eta = 0.8, t = 1/12, squared at n = 2.
        let psi = schmidt_state(&[0.8, 0.2]).unwrap();
        let cert = exp_lower_bound(&psi, 0.5, 2).unwrap();
        assert!((cert.eta - 0.8).abs() < 1e-12);
        assert!((cert.t - 1.0 / 12.0).abs() < 1e-12);
        assert!((cert.bound - 0.5 / 144.0).abs() < 1e-14);

        // Product states are a distinct error, not a zero bound.
        let product = schmidt_state(&[1.0, 0.0]).unwrap();
        assert!(matches!(
            exp_lower_bound(&product, 0.5, 1),
            Err(Error::ProductState)
        ));
    }

    #[test]
    fn decomposition_signs_on_random_states() {
        let mut r = rng(23);
        for &d in &[2usize, 3] {
            for _ in 0..5 {
                let psi = crate::states::random::entangled_pure_state(&mut r, d);
                for n in 1..=2u32 {
                    let cert = exp_lower_bound(&psi, 0.4, n).unwrap();
                    assert!(cert.bound > 0.0);
                    // X + Y must recombine to rho - sigma exactly (lambda = 1).
                    let (x, y) = materialize_decomposition(&psi, n, 1.0).unwrap();
                    let rho = psi.projector().kron_power(n).unwrap();
                    let sigma = crate::states::orth_complement(&psi.projector())
                        .unwrap()
                        .kron_power(n)
                        .unwrap();
                    let target = rho.op().sub(sigma.op()).unwrap();
                    assert!(x.add(&y).unwrap().max_abs_diff(&target) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn alpha_lower_bound_examples() {
        let psi = mes_pure(2);
        let rho = psi.projector();
        let sigma = crate::states::orth_complement(&rho).unwrap();

        // lambda = 0 with decomposition (rho, 0): bound 0.
        let zero = Operator::zeros(rho.op().factorization().clone());
        let decomp = ppt_norm_dual_value(rho.op(), rho.op(), &zero).unwrap();
        let v = alpha_lower_bound(&rho, &sigma, 0.1, 0.0, &decomp).unwrap();
        assert!(v.abs() < 1e-12);

        // The strong-converse choice lambda = t^{-n}, mu = e^{-nr}:
        // bound = 1 - t^{-n} e^{-nr}; at d=2, n=1, r=log 9 this is 2/3.
        let n = 1u32;
        let t: f64 = 1.0 / 3.0;
        let lambda = t.powi(-(n as i32));
        let (x, y) = materialize_decomposition(&psi, n, lambda).unwrap();
        let target = rho.op().sub(&sigma.op().scale(lambda)).unwrap();
        let decomp = ppt_norm_dual_value(&target, &x, &y).unwrap();
        let mu = 9.0f64.powi(-(n as i32));
        let v = alpha_lower_bound(&rho, &sigma, mu, lambda, &decomp).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10, "{v}");

        // Mismatched target rejected.
        assert!(alpha_lower_bound(&rho, &sigma, mu, 2.0 * lambda, &decomp).is_err());
    }

    #[test]
    fn stein_upper_bound_examples() {
        for d in 2..=4usize {
            let v = stein_upper_bound(&mes_pure(d)).unwrap();
            assert!((v - (d as f64 + 1.0).ln()).abs() < 1e-12);
        }
        let skew = schmidt_state(&[0.8, 0.2]).unwrap();
        assert!((stein_upper_bound(&skew).unwrap() - 12.0f64.ln()).abs() < 1e-12);
        let product = schmidt_state(&[1.0, 0.0]).unwrap();
        assert!(matches!(
            stein_upper_bound(&product),
            Err(Error::ProductState)
        ));
        // Nearly-product: divergence reported as the sentinel.
        let nearly = schmidt_state(&[1.0 - 1e-13, 1e-13]).unwrap();
        assert!(stein_upper_bound(&nearly).unwrap().is_infinite());
    }

    #[test]
    fn cert_bound_never_exceeds_lp_optimum_and_is_tight_for_mes() {
        for d in 2..=3usize {
            for n in 1..=3u32 {
                let lp = crate::symlp::solve_symmetric_lp(n, d, 0.5).unwrap().value;
                let cert = exp_lower_bound(&mes_pure(d), 0.5, n).unwrap();
                assert!(cert.bound <= lp + 1e-12);
                assert!((cert.bound - lp).abs() < 1e-10, "tightness at d={d}, n={n}");
            }
        }
        // Non-maximal psi: strictly below the (maximally entangled) optimum.
        let psi = schmidt_state(&[0.7, 0.3]).unwrap();
        let cert = exp_lower_bound(&psi, 0.5, 1).unwrap();
        let lp = crate::symlp::solve_symmetric_lp(1, 2, 0.5).unwrap().value;
        assert!(cert.bound < lp);
    }
}
