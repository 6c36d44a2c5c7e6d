//! Fixed lattice animals and the contours that can surround the origin.

use sftlab::wr::{count_fixed_animals, enumerate_lattice_animals, AnimalMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let counts = count_fixed_animals(10)?;
    for (i, c) in counts.iter().enumerate() {
        let n = i + 1;
        let around = if n <= 9 {
            enumerate_lattice_animals(n, AnimalMode::ContoursSurroundingOrigin)?.to_string()
        } else {
            "-".into()
        };
        println!("n={n:>2} animals {c:>6} surrounding origin {around}");
    }
    Ok(())
}
