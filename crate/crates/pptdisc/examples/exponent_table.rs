//! The full exponent summary: Chernoff, Stein, Hoeffding, and strong
//! converse entries for all eight supported hypothesis pairs.
//!
//! Run with: cargo run --example exponent_table

use pptdisc::cli::all_table_rows;
use pptdisc::exponents::exponents_table;
use pptdisc::report::fmt_float;

fn main() -> pptdisc::Result<()> {
    let (d, m, lambda) = (3, 2, 0.25);
    println!("exponents at d = {d}, m = {m}, lambda = {lambda}\n");
    println!(
        "{:<20} {:>12} {:>12} {:>34} {:>26}",
        "case", "chernoff", "stein", "hoeffding(r)", "strong converse(r)"
    );
    for row in all_table_rows(d, m, lambda)? {
        let report = exponents_table(&row)?;
        println!(
            "{:<20} {:>12} {:>12} {:>34} {:>26}",
            row.label(),
            fmt_float(report.chernoff),
            fmt_float(report.stein),
            report.hoeffding.describe(),
            report.strong_converse.describe(),
        );
    }
    Ok(())
}
