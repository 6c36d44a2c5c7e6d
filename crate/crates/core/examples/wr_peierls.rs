//! The Peierls exponent and bound for a few distance pairs.

use sftlab::wr::{peierls_report, WrParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!(
        "{:>6} {:>8} {:>12} {:>12} valid",
        "R2", "exponent", "alpha", "bound"
    );
    for r2 in [256, 4096, 4097, 8192, 1 << 16] {
        let r = peierls_report(WrParams::planar(1, r2)?);
        println!(
            "{r2:>6} {:>8} {:>12.4e} {:>12.4e} {}",
            r.exponent, r.alpha, r.bound, r.valid
        );
    }
    Ok(())
}
