//! Finite-size and transfer-matrix upper bounds on the entropy of
//! Widom-Rowlinson, against the ln 2 / 4 placement floor.

use sftlab::entropy::{
    finite_size_upper_bound, placement_lower_bound, strip_entropy_upper_bound, PlacementStyle,
};
use sftlab::wr::{wr_rules, WrParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let floor = placement_lower_bound(PlacementStyle::WrGrid { r1: 1, d: 2 });
    println!("lower bound {floor:.6}");
    for r2 in [1, 2, 3] {
        let rules = wr_rules(WrParams::planar(1, r2)?);
        let sizes: Vec<String> = (1..=4)
            .map(|n| finite_size_upper_bound(&rules, n).map(|b| format!("{b:.4}")))
            .collect::<Result<_, _>>()?;
        println!("R2={r2} finite-size N=1..4: {}", sizes.join(" "));
        for w in 1..=4 {
            let s = strip_entropy_upper_bound(&rules, w, 1e-10)?;
            println!("  strip w={w}: {:.6} ({} states)", s.bound, s.states);
        }
    }
    Ok(())
}
