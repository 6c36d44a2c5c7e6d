//! Gluing a centre pattern to an outer ring across an annulus, and finding
//! the narrowest annulus that works.

use sftlab::grid::{Coord, Pattern, Shape};
use sftlab::sft::{glue_search, least_glue_k};
use sftlab::wr::{wr_rules, WrParams, MINUS, PLUS, ZERO};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = WrParams::planar(1, 2)?;
    let rules = wr_rules(p);
    let inner = Pattern::from_fn(
        Shape::square(1),
        |c| if c == Coord::ORIGIN { MINUS } else { ZERO },
    );
    let outer = Pattern::from_fn(Shape::annulus(4, 5), |c| {
        if c.x == 5 && c.y == 0 {
            PLUS
        } else {
            ZERO
        }
    });

    match glue_search(&inner, &outer, 1, 3, &rules)? {
        Some(f) => println!("k = 3 glues, filler has {} sites", f.len()),
        None => println!("k = 3 does not glue"),
    }
    match least_glue_k(&inner, &outer, 1, 3, &rules)? {
        Some((k, _)) => println!("least gluing annulus width: {k}"),
        None => println!("nothing up to k = 3 glues"),
    }
    Ok(())
}
