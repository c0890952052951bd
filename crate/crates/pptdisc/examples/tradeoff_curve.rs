//! Optimal trade-off between the type-I and type-II errors for the
//! maximally-entangled-state test: the LP value matches
//! `(1 - alpha) / (d + 1)^n` across the whole alpha range.
//!
//! Run with: cargo run --example tradeoff_curve

use pptdisc::symlp::tradeoff_lp;

fn main() -> pptdisc::Result<()> {
    let d = 2;
    let n = 2;
    println!("type-II error at type-I level alpha, d = {d}, n = {n}\n");
    println!("{:>8} {:>18} {:>18}", "alpha", "beta (LP)", "beta (closed)");
    for k in 0..=10 {
        let alpha = k as f64 / 10.0;
        let lp = tradeoff_lp(n, d, alpha)?;
        let closed = (1.0 - alpha) * (d as f64 + 1.0).powi(-(n as i32));
        println!("{alpha:>8.2} {lp:>18.12} {closed:>18.12}");
        assert!((lp - closed).abs() < 1e-9);
    }
    println!("\nbeta is affine in alpha; the slope is the (d+1)^-n decay of the test");
    Ok(())
}
