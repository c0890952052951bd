//! Chernoff exponents three ways: the unrestricted (global) quantum value,
//! the locality-constrained closed form, and an empirical fit on the exact
//! LP error curve.
//!
//! Run with: cargo run --example chernoff_fit

use pptdisc::exponents::{
    classical_chernoff, empirical_exponent, quantum_chernoff, schmidt_measurement_distributions,
};
use pptdisc::states::{max_entangled, orth_complement, schmidt_state};
use pptdisc::symlp::solve_symmetric_lp;

fn main() -> pptdisc::Result<()> {
    let d = 2;
    let phi = max_entangled(d)?;
    let perp = orth_complement(&phi)?;

    // Orthogonal states: one unrestricted measurement suffices, so the
    // global exponent diverges.
    let global = quantum_chernoff(&phi, &perp)?;
    println!("global Chernoff exponent: {global}");

    // Locality-constrained: the Schmidt-basis measurement induces classical
    // distributions whose Chernoff exponent is log(d + 1).
    let psi = schmidt_state(&vec![1.0 / d as f64; d])?;
    let (p_dist, q_dist) = schmidt_measurement_distributions(&psi)?;
    let measured = classical_chernoff(&p_dist, &q_dist)?;
    println!("Schmidt-measurement classical exponent: {measured:.12}");
    println!(
        "closed form log(d + 1):                 {:.12}",
        (d as f64 + 1.0).ln()
    );

    // Empirical: fit the slope of -log P_e on the exact LP values.
    let curve: Vec<(u32, f64)> = (1..=6)
        .map(|n| Ok((n, solve_symmetric_lp(n, d, 0.5)?.value)))
        .collect::<pptdisc::Result<_>>()?;
    let slope = empirical_exponent(&curve)?;
    println!("empirical fit on LP curve(n = 1..6):    {slope:.12}");
    assert!((slope - (d as f64 + 1.0).ln()).abs() < 1e-9);
    Ok(())
}
