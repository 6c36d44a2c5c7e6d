//! Contour decomposition of one configuration with a minus island, the
//! flip that removes it, and the exhaustive check of a whole box.

use sftlab::grid::{Coord, Pattern};
use sftlab::wr::{
    contour_decompose, delta_plus_boundary, flip_rho, full_config, interior_shape, verify_ensemble,
    wr_alphabet, WrParams, MINUS, ZERO,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = WrParams::planar(1, 2)?;
    let k = 6;
    let island = Pattern::from_fn(interior_shape(k), |c| {
        if c.dist(Coord::ORIGIN) == 0 {
            MINUS
        } else {
            ZERO
        }
    });
    let x = full_config(&island, &delta_plus_boundary(k, 1)?)?;
    let cd = contour_decompose(&x, Coord::ORIGIN, p)?;
    println!("|A| = {}, |C| = {}, |M| = {}", cd.a.len(), cd.c.len(), cd.m.len());
    println!("moat definitions agree: {}", cd.moat_definitions_agree());
    let y = flip_rho(&x, &cd, p)?;
    println!(
        "centre after flip: {}",
        wr_alphabet().name(y.get(Coord::ORIGIN)?).unwrap()
    );

    let r = verify_ensemble(4, WrParams::planar(1, 1)?, Coord::ORIGIN)?;
    println!(
        "k=4 R2=1: {} configurations, {} with minus at centre, {} moat classes, passed {}",
        r.ensemble_size,
        r.minus_event_size,
        r.classes.len(),
        r.passed()
    );
    Ok(())
}
