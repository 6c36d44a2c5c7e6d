//! Heat-bath chains for Widom-Rowlinson in a box with plus boundary: the
//! minus probability at the centre as R2 grows, and one final state.

use sftlab::grid::Coord;
use sftlab::wr::{
    delta_plus_boundary, heat_bath_sample, run_chains, BoundaryKind, SamplerConfig, WrParams, MINUS, PLUS,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for r2 in [1, 2, 4] {
        let r = run_chains(&SamplerConfig {
            k: 12,
            params: WrParams::planar(1, r2)?,
            boundary: BoundaryKind::Plus,
            sweeps: 800,
            burn_in: 200,
            chains: 8,
            seed: 1,
        })?;
        let (m, se) = r.minus_at_center;
        println!("R2={r2}: P(minus at centre) = {m:.4} ± {se:.4}");
    }

    let k = 8;
    let p = WrParams::planar(1, 1)?;
    let bc = delta_plus_boundary(k, 1)?;
    let run = heat_bath_sample(k, p, Some(&bc), 400, 0, 7, false)?;
    for y in (-k + 1..k).rev() {
        let row: String = (-k + 1..k)
            .map(|x| match run.config.get(Coord::new(x, y)) {
                Ok(s) if s == PLUS => '+',
                Ok(s) if s == MINUS => '-',
                _ => '.',
            })
            .collect();
        println!("{row}");
    }
    Ok(())
}
