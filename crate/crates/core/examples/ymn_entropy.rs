//! Exact window counts of the relabelled shift Y_{m,n} and the entropy
//! they imply per site.

use sftlab::hochman::ymn_pattern_count;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (m, n) in [(2, 1), (3, 1), (2, 2)] {
        for big_n in [16, 64, 256] {
            let c = ymn_pattern_count(big_n, m, n, 7)?;
            println!(
                "m={m} n={n} N={big_n:>3}: log count / N^2 = {:.5}, alpha log m = {:.5}, brackets {} {}",
                c.per_site, c.predicted, c.lower_holds, c.upper_holds
            );
        }
    }
    Ok(())
}
