//! Level squares of the hierarchical shift, corner frequencies in an x_ω
//! window, and a picture of P_1.

use sftlab::hochman::{
    build_level_square, corner_frequency, locate_level_subsquares, side, BlankLabels, OmegaPrefix, TileSet,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tiles = TileSet::x(2);
    let p1 = build_level_square(1, 2, &BlankLabels::Seeded(3))?;
    let s = side(1) as i32;
    for y in (0..s).rev() {
        let row: Vec<String> = (0..s)
            .map(|x| {
                format!(
                    "{:<14}",
                    tiles
                        .decode(p1.pattern.get((x, y).into()).unwrap())
                        .unwrap()
                        .to_string()
                )
            })
            .collect();
        println!("{}", row.join(""));
    }

    let p5 = build_level_square(5, 1, &BlankLabels::default())?;
    for j in 0..=5 {
        println!(
            "P_5 holds {} level-{j} squares",
            locate_level_subsquares(&p5.pattern, j, TileSet::x(1)).len()
        );
    }

    let om = OmegaPrefix::random(20, 42);
    for n in 0..=3 {
        let f = corner_frequency(&om, n, 300)?;
        println!(
            "level {n}: frequency {:.6}, limit {:.6}, floor {:.6}",
            f.frequency, f.limit, f.frequency_floor
        );
    }
    Ok(())
}
