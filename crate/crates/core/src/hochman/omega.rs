use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{Coord, Pattern, Shape};

use super::square::{label_blanks, level_square_tile, BlankLabels};
use super::{side, Color, HochmanError, TileSet};

/// Finite prefix `(ω₁, …, ω_L)` of quadrant directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaPrefix(pub Vec<Color>);

impl OmegaPrefix {
    pub fn random(len: usize, seed: u64) -> OmegaPrefix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        OmegaPrefix((0..len).map(|_| Color::ALL[rng.gen_range(0..4)]).collect())
    }

    pub fn constant(c: Color, len: usize) -> OmegaPrefix {
        OmegaPrefix(vec![c; len])
    }

    /// Comma separated colour names, e.g. `NW,SE,SE`.
    pub fn parse(s: &str) -> Result<OmegaPrefix, HochmanError> {
        s.split(',')
            .map(|t| {
                Color::parse(t.trim())
                    .ok_or_else(|| HochmanError::InvalidArgument(format!("unknown colour {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(OmegaPrefix)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Lower-left corner of `B_level`, the square where `x_ω` equals `P_level`.
pub fn omega_box(omega: &OmegaPrefix, level: usize) -> Result<Coord, HochmanError> {
    if level > omega.len() {
        return Err(HochmanError::InvalidArgument(format!(
            "level {level} is beyond the prefix length {}",
            omega.len()
        )));
    }
    let mut lo = Coord::ORIGIN;
    for (n, c) in omega.0[..level].iter().enumerate() {
        let q = side(n as u32) as i32 + 2;
        let (qx, qy) = c.quadrant();
        lo = Coord::new(lo.x - 1 - qx * q, lo.y - 1 - qy * q);
    }
    Ok(lo)
}

/// Smallest level whose box covers `[-radius, radius]²`.
fn covering_level(omega: &OmegaPrefix, radius: i32) -> Result<usize, HochmanError> {
    for level in 0..=omega.len().min(28) {
        let lo = omega_box(omega, level)?;
        let s = side(level as u32) as i32;
        if lo.x <= -radius && lo.y <= -radius && lo.x + s - 1 >= radius && lo.y + s - 1 >= radius {
            return Ok(level);
        }
    }
    Err(HochmanError::PrefixTooShort {
        len: omega.len(),
        radius,
    })
}

/// `x_ω` on `[-radius, radius]²` over `X_k`.
pub fn build_x_omega_window(
    omega: &OmegaPrefix,
    radius: i32,
    k: u32,
    labels: &BlankLabels,
) -> Result<Pattern, HochmanError> {
    if omega.is_empty() && radius > 0 {
        return Err(HochmanError::PrefixTooShort { len: 0, radius });
    }
    let level = covering_level(omega, radius)?;
    let lo = omega_box(omega, level)?;
    let plain = Pattern::from_fn(Shape::square(radius), |c| level_square_tile(level as u32, c - lo));
    label_blanks(&plain, TileSet::x(k), labels)
}
