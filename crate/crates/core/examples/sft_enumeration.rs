//! Counting locally admissible patterns of the hard-square shift and of
//! Widom-Rowlinson, and listing the smallest ones.

use sftlab::grid::{Alphabet, Coord, Shape, Symbol};
use sftlab::sft::{count_admissible, list_admissible, DistanceRule, SearchOptions, SftRules};
use sftlab::wr::{wr_alphabet, wr_rules, WrParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // no two 1s at l-infinity distance 1
    let hard = SftRules::distance(
        Alphabet::new(["0", "1"])?,
        vec![DistanceRule::new(vec![Symbol(1)], vec![Symbol(1)], 1)],
    )?;
    let wr = wr_rules(WrParams::planar(1, 2)?);

    println!("n  hard-square  WR(1,2)");
    for n in 1..=5 {
        let region = Shape::rect_wh(Coord::ORIGIN, n, n);
        let h = count_admissible(&region, &hard, None, SearchOptions::default())?;
        let w = count_admissible(&region, &wr, None, SearchOptions::default())?;
        println!("{n}  {h:>11}  {w}");
    }

    let names = wr_alphabet();
    for p in list_admissible(
        &Shape::rect_wh(Coord::ORIGIN, 2, 1),
        &wr,
        None,
        SearchOptions::default(),
    )? {
        let row: Vec<&str> = p.values().iter().map(|&s| names.name(s).unwrap()).collect();
        println!("{}", row.join(" "));
    }
    Ok(())
}
