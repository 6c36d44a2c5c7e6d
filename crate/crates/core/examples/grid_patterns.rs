//! Building, translating and gluing finite patterns, then round-tripping
//! one through its JSON document.

use sftlab::grid::{Alphabet, Coord, Pattern, Shape, Symbol};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = Alphabet::new(["0", "+", "-"])?;
    let checker = Pattern::from_fn(Shape::rect_wh(Coord::ORIGIN, 4, 3), |c| {
        Symbol(((c.x + c.y) % 2) as u32)
    });
    let ring = Pattern::filled(Shape::annulus(3, 4), a.symbol("-").unwrap());

    let moved = checker.moved_by(Coord::new(-2, -1));
    let glued = moved.concat_disjoint(&ring)?;
    println!(
        "checker {} sites, ring {} sites, glued {}",
        checker.len(),
        ring.len(),
        glued.len()
    );
    println!("same up to placement: {}", moved == checker);
    println!("same placement: {}", moved.positioned_eq(&checker));

    let json = glued.to_json(&a);
    let (_, back) = Pattern::from_json(&json)?;
    println!("json round trip exact: {}", back.positioned_eq(&glued));
    Ok(())
}
