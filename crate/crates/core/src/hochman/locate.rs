use rayon::prelude::*;
use serde::Serialize;

use crate::grid::{Coord, Pattern, Shape};

use super::omega::{build_x_omega_window, OmegaPrefix};
use super::square::{build_level_square, level_square_tile, BlankLabels};
use super::{side, HochmanError, TileSet, ARROW_COUNT, SW_CORNER};

const BLANK_CLASS: u32 = ARROW_COUNT;
const NONE_CLASS: u32 = u32::MAX;

/// Blanks collapse to one class, corner labels read as the SW corner arrow.
fn class_of(tiles: TileSet, s: u32) -> u32 {
    let sym = crate::grid::Symbol(s);
    if s < ARROW_COUNT {
        s
    } else if tiles.is_blank(sym) {
        BLANK_CLASS
    } else if tiles.is_corner(sym) {
        SW_CORNER.0
    } else {
        NONE_CLASS
    }
}

/// Lower-left corners of all copies of `P_n` (blank labels ignored) lying
/// entirely inside `p`, in row-major order.
pub fn locate_level_subsquares(p: &Pattern, n: u32, tiles: TileSet) -> Vec<Coord> {
    let Some((lo, hi)) = p.shape().bounding_box() else {
        return Vec::new();
    };
    let w = (hi.x - lo.x + 1) as usize;
    let h = (hi.y - lo.y + 1) as usize;
    let s = side(n);
    if s > w || s > h {
        return Vec::new();
    }
    let mut grid = vec![NONE_CLASS; w * h];
    for (c, v) in p.iter() {
        grid[(c.y - lo.y) as usize * w + (c.x - lo.x) as usize] = class_of(tiles, v.0);
    }
    let template: Vec<u32> = (0..s * s)
        .map(|i| level_square_tile(n, Coord::new((i % s) as i32, (i / s) as i32)).0)
        .collect();
    let first = template[0];
    (0..=h - s)
        .into_par_iter()
        .flat_map_iter(|y| {
            let grid = &grid;
            let template = &template;
            (0..=w - s).filter_map(move |x| {
                if grid[y * w + x] != first {
                    return None;
                }
                let hit = (0..s).all(|dy| {
                    let row = &grid[(y + dy) * w + x..(y + dy) * w + x + s];
                    row == &template[dy * s..(dy + 1) * s]
                });
                hit.then(|| Coord::new(lo.x + x as i32, lo.y + y as i32))
            })
        })
        .collect()
}

/// Frequency of level-`n` corners in `P_big`: `4^{big-n} / side(big)²`
/// when the locator is right.
pub fn measured_alpha(n: u32, big: u32) -> Result<f64, HochmanError> {
    if n > big {
        return Err(HochmanError::InvalidArgument(format!("level {n} above {big}")));
    }
    let p = build_level_square(big, 1, &BlankLabels::default())?;
    let found = locate_level_subsquares(&p.pattern, n, TileSet::x(1)).len();
    Ok(found as f64 / (side(big) * side(big)) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CornerFrequency {
    pub n: u32,
    pub radius: i32,
    pub count: usize,
    pub area: usize,
    pub frequency: f64,
    /// `1 / (100·4ⁿ)`.
    pub frequency_floor: f64,
    /// `4^{-n} / 25`.
    pub limit: f64,
    pub relative_error: f64,
}

/// Level-`n` corners of `x_ω` lying in `[-radius, radius]²`. The window is
/// padded so that squares crossing its edge are still seen.
pub fn corner_frequency(omega: &OmegaPrefix, n: u32, radius: i32) -> Result<CornerFrequency, HochmanError> {
    let pad = side(n) as i32;
    let w = build_x_omega_window(omega, radius + pad, 1, &BlankLabels::default())?;
    let inner = Shape::square(radius);
    let count = locate_level_subsquares(&w, n, TileSet::x(1))
        .into_iter()
        .filter(|&c| inner.contains(c))
        .count();
    let area = inner.len();
    let frequency = count as f64 / area as f64;
    let limit = 0.25f64.powi(n as i32) / 25.0;
    Ok(CornerFrequency {
        n,
        radius,
        count,
        area,
        frequency,
        frequency_floor: 0.25f64.powi(n as i32) / 100.0,
        limit,
        relative_error: (frequency - limit).abs() / limit,
    })
}

/// A pattern and the region whose corners are counted. `None` counts
/// every corner found.
#[derive(Debug, Clone)]
pub struct WindowSample {
    pub pattern: Pattern,
    pub inner: Option<Shape>,
}

impl WindowSample {
    fn corners(&self, n: u32, tiles: TileSet) -> usize {
        let found = locate_level_subsquares(&self.pattern, n, tiles);
        match &self.inner {
            None => found.len(),
            Some(s) => found.into_iter().filter(|&c| s.contains(c)).count(),
        }
    }
}

/// `freq(P_{n1}) / freq(P_{n2})` pooled over the samples.
pub fn goheels_ratio(
    samples: &[WindowSample],
    n1: u32,
    n2: u32,
    tiles: TileSet,
) -> Result<f64, HochmanError> {
    let a: usize = samples.iter().map(|w| w.corners(n1, tiles)).sum();
    let b: usize = samples.iter().map(|w| w.corners(n2, tiles)).sum();
    if b == 0 {
        return Err(HochmanError::NoOccurrences(n2));
    }
    Ok(a as f64 / b as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContainmentReport {
    pub n: u32,
    pub radius: i32,
    pub blanks: usize,
    pub boxes_checked: usize,
    /// Boxes `u + [-n, n]²` around a blank with no level-`2n` square
    /// containing them, as `(u, v)`.
    pub failures: Vec<(Coord, Coord)>,
}

/// For every blank `v` of `x_ω` in `[-radius, radius]²` and every box
/// `u + [-n, n]²` containing `v` inside that window, looks for a level-`2n`
/// square containing the box.
pub fn check_containment(
    omega: &OmegaPrefix,
    n: u32,
    radius: i32,
) -> Result<ContainmentReport, HochmanError> {
    let s = side(2 * n) as i32;
    let w = build_x_omega_window(omega, radius + s, 1, &BlankLabels::default())?;
    let corners = locate_level_subsquares(&w, 2 * n, TileSet::x(1));
    let tiles = TileSet::x(1);
    let ni = n as i32;
    let mut blanks = 0;
    let mut boxes_checked = 0;
    let mut failures = Vec::new();
    for v in Shape::square(radius).iter() {
        if !tiles.is_blank(w.get(v).expect("inside")) {
            continue;
        }
        blanks += 1;
        for dy in -ni..=ni {
            for dx in -ni..=ni {
                let u = Coord::new(v.x + dx, v.y + dy);
                if u.x.abs() + ni > radius || u.y.abs() + ni > radius {
                    continue;
                }
                boxes_checked += 1;
                let inside = corners.iter().any(|c| {
                    c.x <= u.x - ni && c.y <= u.y - ni && u.x + ni <= c.x + s - 1 && u.y + ni <= c.y + s - 1
                });
                if !inside {
                    failures.push((u, v));
                }
            }
        }
    }
    Ok(ContainmentReport {
        n,
        radius,
        blanks,
        boxes_checked,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_in_level_squares() {
        let p = build_level_square(5, 1, &BlankLabels::default()).unwrap();
        for j in 0..=5 {
            let c = locate_level_subsquares(&p.pattern, j, TileSet::x(1));
            assert_eq!(c.len(), 4usize.pow(5 - j), "level {j}");
        }
    }

    #[test]
    fn exact_ratio_on_level_square() {
        let p = build_level_square(5, 1, &BlankLabels::default()).unwrap();
        let ws = [WindowSample {
            pattern: p.pattern,
            inner: None,
        }];
        assert_eq!(goheels_ratio(&ws, 1, 3, TileSet::x(1)).unwrap(), 16.0);
        assert_eq!(goheels_ratio(&ws, 2, 2, TileSet::x(1)).unwrap(), 1.0);
    }

    #[test]
    fn small_containment() {
        let om = OmegaPrefix::random(14, 9);
        for n in 0..=2 {
            let r = check_containment(&om, n, 40).unwrap();
            assert!(
                r.failures.is_empty(),
                "n = {n}: {:?}",
                &r.failures[..3.min(r.failures.len())]
            );
            assert!(r.boxes_checked > 0);
        }
    }
}
