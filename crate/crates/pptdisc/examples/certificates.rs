//! Certificate machinery: the closed-form dual point of the symmetric LP
//! with its verified identity, the exponential lower-bound decomposition for
//! a non-maximally-entangled state, and the strong-converse bound it yields.
//!
//! Run with: cargo run --example certificates

use pptdisc::ppt::{
    alpha_lower_bound, exp_lower_bound, materialize_decomposition, ppt_norm_dual_value,
    stein_upper_bound,
};
use pptdisc::states::{orth_complement, schmidt_state};
use pptdisc::symlp::dual_certificate;

fn main() -> pptdisc::Result<()> {
    println!("== symmetric-LP dual certificates ==");
    for (n, d) in [(1u32, 2usize), (4, 3), (10, 5)] {
        let cert = dual_certificate(n, d, 0.5)?;
        println!(
            "n = {n:>2}, d = {d}: identity residual {:.3e}, certified bound {:.12}",
            cert.identity_residual, cert.objective
        );
    }

    println!("\n== exponential lower bound for a skewed state ==");
    let psi = schmidt_state(&[0.8, 0.2])?;
    for n in 1..=3u32 {
        let cert = exp_lower_bound(&psi, 0.5, n)?;
        println!(
            "n = {n}: eta = {:.3}, t = {:.6}, bound = {:.3e}",
            cert.eta, cert.t, cert.bound
        );
    }

    println!("\n== dual decomposition value at one copy ==");
    let rho = psi.projector();
    let sigma = orth_complement(&rho)?;
    let target = rho.op().sub(sigma.op())?;
    let (x, y) = materialize_decomposition(&psi, 1, 1.0)?;
    let decomp = ppt_norm_dual_value(&target, &x, &y)?;
    println!(
        "||X||_1 + ||Y^Gamma||_1 = {:.12} (upper bound on the PPT norm)",
        decomp.norm_value
    );

    println!("\n== strong-converse territory ==");
    let stein_cap = stein_upper_bound(&psi)?;
    println!("Stein exponent upper bound: {stein_cap:.12}");
    let t = exp_lower_bound(&psi, 0.5, 1)?.t;
    let lambda = 1.0 / t;
    let (x, y) = materialize_decomposition(&psi, 1, lambda)?;
    let shifted = rho.op().sub(&sigma.op().scale(lambda))?;
    let decomp = ppt_norm_dual_value(&shifted, &x, &y)?;
    for r in [stein_cap * 1.2, stein_cap * 1.5, stein_cap * 2.0] {
        let alpha_floor = alpha_lower_bound(&rho, &sigma, (-r).exp(), lambda, &decomp)?;
        println!("type-II rate r = {r:.4}: type-I error >= {alpha_floor:.6}");
    }
    Ok(())
}
