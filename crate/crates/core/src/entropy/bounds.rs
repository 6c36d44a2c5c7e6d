use num_bigint::BigUint;

use crate::grid::{Coord, Pattern, Shape, Symbol};
use crate::sft::{count_admissible, SearchOptions, SftRules};

use super::EntropyError;

/// Natural log of a big integer without overflowing `f64`.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        let f: f64 = num_traits::ToPrimitive::to_f64(x).expect("fits in f64");
        return f.ln();
    }
    let shift = bits - 64;
    let top: f64 = num_traits::ToPrimitive::to_f64(&(x >> shift)).expect("64 bits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `(1/N²) log` of the number of locally admissible `N × N` patterns.
pub fn finite_size_upper_bound(rules: &SftRules, n: usize) -> Result<f64, EntropyError> {
    finite_size_with(rules, n, SearchOptions::default())
}

pub fn finite_size_with(rules: &SftRules, n: usize, opts: SearchOptions) -> Result<f64, EntropyError> {
    if n == 0 {
        return Err(EntropyError::InvalidArgument("N must be at least 1".into()));
    }
    let region = Shape::rect_wh(Coord::ORIGIN, n as i32, n as i32);
    let count = count_admissible(&region, rules, None, opts)?;
    Ok(ln_biguint(&count) / (n * n) as f64)
}

/// Constructive lower bounds on entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlacementStyle {
    /// Independent `0`/`+` choices on the sublattice `(R₁+1)Z^d`.
    WrGrid { r1: u32, d: u32 },
    /// A positive-density set of sites each carrying one of `m` labels.
    LabelGrid { alpha: f64, m: u32 },
}

pub fn placement_lower_bound(style: PlacementStyle) -> f64 {
    match style {
        PlacementStyle::WrGrid { r1, d } => 2f64.ln() / ((r1 + 1) as f64).powi(d as i32),
        PlacementStyle::LabelGrid { alpha, m } => alpha * (m as f64).ln(),
    }
}

/// The witness family behind the WR lower bound on `[0, n)²`: every choice of
/// `0` or `plus` at sites whose coordinates are both multiples of `r1 + 1`.
pub fn wr_grid_witnesses(r1: u32, n: usize, zero: Symbol, plus: Symbol) -> Vec<Pattern> {
    let step = (r1 + 1) as i32;
    let shape = Shape::rect_wh(Coord::ORIGIN, n as i32, n as i32);
    let slots: Vec<Coord> = shape
        .iter()
        .filter(|c| c.x % step == 0 && c.y % step == 0)
        .collect();
    let base = Pattern::filled(shape, zero);
    (0u64..1 << slots.len())
        .map(|mask| {
            let mut p = base.clone();
            for (i, &c) in slots.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    p.set(c, plus).expect("slot inside shape");
                }
            }
            p
        })
        .collect()
}
