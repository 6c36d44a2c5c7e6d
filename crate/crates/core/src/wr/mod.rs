//! The Widom-Rowlinson shift and the machinery of its Peierls estimate.
//!
//! Configurations live over `{0, +, -}`. Nonzero symbols must be more than
//! `R₁` apart and opposite signs more than `R₂` apart, both in ℓ∞.
//!
//! The headline regime `R₂ > 2^{5d+2} R₁^{2d}` is far beyond anything that
//! can be simulated, so the pieces are checked at three levels: formulas
//! exactly for any `R₂`, contour mechanics exhaustively on tiny boxes, and
//! statistical diagnostics with the sampler on moderate boxes.

mod animals;
mod census;
mod contour;
mod ensemble;
mod greedy;
mod peierls;
mod sampler;

use thiserror::Error;

use crate::grid::{Alphabet, Coord, Pattern, Shape, Symbol};
use crate::sft::{BoundaryCondition, DistanceRule, SftError, SftRules};

pub use animals::{
    count_fixed_animals, enumerate_lattice_animals, fixed_animals, hole_count, AnimalMode, MAX_ANIMAL_SIZE,
};
pub use census::{verify_ensemble, ClassSummary, WrVerifyReport};
pub use contour::{contour_decompose, flip_rho, Connectivity, ContourData, CONTOUR_ADJACENCY};
pub use ensemble::{exact_conditional_distribution, full_config, interior_shape, EXACT_SITE_CAP};
pub use greedy::{greedy_moat_sites, GreedyReport};
pub use peierls::{peierls_report, PeierlsReport};
pub use sampler::{
    estimate_minus_event, heat_bath_sample, run_chains, ChainSummary, EventEstimate, MultiChainReport,
    SampleRun, SamplerConfig, TraceRow,
};

pub const ZERO: Symbol = Symbol(0);
pub const PLUS: Symbol = Symbol(1);
pub const MINUS: Symbol = Symbol(2);

pub fn wr_alphabet() -> Alphabet {
    Alphabet::new(["0", "+", "-"]).expect("three distinct symbols")
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WrError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("k = {k} is not a multiple of R1 + 1 = {step}")]
    NotMultiple { k: i32, step: u32 },
    #[error("interior has {sites} sites, above the exhaustive cap of {cap}")]
    RegionTooLarge { sites: usize, cap: usize },
    #[error("boundary condition is not admissible")]
    InfeasibleBoundary,
    #[error("site {0} does not carry a minus")]
    NotMinusAtV(Coord),
    #[error("contour data does not match the configuration")]
    StaleContour,
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("animal size {n} exceeds the exhaustive cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error(transparent)]
    Sft(#[from] SftError),
}

/// Interaction distances and the ambient dimension (which only enters formulas).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct WrParams {
    pub r1: u32,
    pub r2: u32,
    pub d: u32,
}

impl WrParams {
    pub fn new(r1: u32, r2: u32, d: u32) -> Result<Self, WrError> {
        if r1 < 1 {
            return Err(WrError::InvalidParams("R1 must be at least 1".into()));
        }
        if r2 < r1 {
            return Err(WrError::InvalidParams(format!("R2 = {r2} is below R1 = {r1}")));
        }
        if d < 2 {
            return Err(WrError::InvalidParams("d must be at least 2".into()));
        }
        Ok(WrParams { r1, r2, d })
    }

    /// Planar parameters.
    pub fn planar(r1: u32, r2: u32) -> Result<Self, WrError> {
        WrParams::new(r1, r2, 2)
    }
}

pub fn wr_rules(p: WrParams) -> SftRules {
    SftRules::distance(
        wr_alphabet(),
        vec![
            DistanceRule::new(vec![PLUS, MINUS], vec![PLUS, MINUS], p.r1),
            DistanceRule::new(vec![PLUS], vec![MINUS], p.r2),
        ],
    )
    .expect("valid distance rules")
}

/// Swaps `+` and `-`.
pub fn spin_flip(x: &Pattern) -> Pattern {
    x.map_symbols(flip_symbol)
}

pub fn flip_symbol(s: Symbol) -> Symbol {
    match s {
        PLUS => MINUS,
        MINUS => PLUS,
        other => other,
    }
}

/// Sign of a boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Plus,
    Minus,
    Free,
}

/// The ring of `[-k, k]²` with `+` spaced `R₁ + 1` apart on each face.
///
/// For `k = 0` the ring degenerates to the origin, which carries `+`.
pub fn delta_plus_boundary(k: i32, r1: u32) -> Result<BoundaryCondition, WrError> {
    let step = r1 as i32 + 1;
    if k < 0 || k % step != 0 {
        return Err(WrError::NotMultiple { k, step: r1 + 1 });
    }
    if k == 0 {
        return Ok(BoundaryCondition::new(Pattern::filled(
            Shape::from_sites([Coord::ORIGIN]),
            PLUS,
        )));
    }
    let ring = Shape::annulus(k - 1, k);
    let p = Pattern::from_fn(ring, |c| {
        let on_x = c.x.abs() == k;
        let on_y = c.y.abs() == k;
        let plus = (on_x && !on_y && c.y % step == 0) || (on_y && !on_x && c.x % step == 0);
        if plus {
            PLUS
        } else {
            ZERO
        }
    });
    Ok(BoundaryCondition::new(p))
}

pub fn delta_minus_boundary(k: i32, r1: u32) -> Result<BoundaryCondition, WrError> {
    Ok(BoundaryCondition::new(spin_flip(
        &delta_plus_boundary(k, r1)?.fixed,
    )))
}

/// Boundary for a given kind; `Free` has no pinned sites.
pub fn boundary(kind: BoundaryKind, k: i32, r1: u32) -> Result<Option<BoundaryCondition>, WrError> {
    Ok(match kind {
        BoundaryKind::Plus => Some(delta_plus_boundary(k, r1)?),
        BoundaryKind::Minus => Some(delta_minus_boundary(k, r1)?),
        BoundaryKind::Free => None,
    })
}

/// Dense view of `[-k, k]²`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Board {
    pub k: i32,
    pub side: usize,
}

impl Board {
    pub fn new(k: i32) -> Self {
        Board {
            k,
            side: (2 * k + 1) as usize,
        }
    }

    pub fn len(&self) -> usize {
        self.side * self.side
    }

    pub fn idx(&self, c: Coord) -> usize {
        (c.y + self.k) as usize * self.side + (c.x + self.k) as usize
    }

    pub fn coord(&self, i: usize) -> Coord {
        Coord::new((i % self.side) as i32 - self.k, (i / self.side) as i32 - self.k)
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x.abs() <= self.k && c.y.abs() <= self.k
    }

    pub fn on_ring(&self, i: usize) -> bool {
        let c = self.coord(i);
        c.x.abs() == self.k || c.y.abs() == self.k
    }

    /// Marks every site within ℓ∞ distance `r` of a marked site.
    pub fn dilate(&self, mask: &[bool], r: i32) -> Vec<bool> {
        // separable: rows then columns
        let n = self.side as i32;
        let mut tmp = vec![false; mask.len()];
        for y in 0..n {
            let mut last: i32 = i32::MIN / 2;
            let mut next = vec![i32::MAX / 2; n as usize];
            let mut nxt = i32::MAX / 2;
            for x in (0..n).rev() {
                if mask[(y * n + x) as usize] {
                    nxt = x;
                }
                next[x as usize] = nxt;
            }
            for x in 0..n {
                if mask[(y * n + x) as usize] {
                    last = x;
                }
                tmp[(y * n + x) as usize] = x - last <= r || next[x as usize] - x <= r;
            }
        }
        let mut out = vec![false; mask.len()];
        for x in 0..n {
            let mut last: i32 = i32::MIN / 2;
            let mut next = vec![i32::MAX / 2; n as usize];
            let mut nxt = i32::MAX / 2;
            for y in (0..n).rev() {
                if tmp[(y * n + x) as usize] {
                    nxt = y;
                }
                next[y as usize] = nxt;
            }
            for y in 0..n {
                if tmp[(y * n + x) as usize] {
                    last = y;
                }
                out[(y * n + x) as usize] = y - last <= r || next[y as usize] - y <= r;
            }
        }
        out
    }

    pub fn neighbors8(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let c = self.coord(i);
        c.king_neighbors()
            .filter(|&t| self.contains(t))
            .map(|t| self.idx(t))
    }

    pub fn neighbors4(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let c = self.coord(i);
        c.rook_neighbors()
            .filter(|&t| self.contains(t))
            .map(|t| self.idx(t))
    }

    pub fn mask_to_shape(&self, mask: &[bool]) -> Shape {
        Shape::from_sites((0..mask.len()).filter(|&i| mask[i]).map(|i| self.coord(i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::is_locally_admissible;

    fn pair(a: (i32, i32, Symbol), b: (i32, i32, Symbol)) -> Pattern {
        Pattern::from_pairs([(Coord::new(a.0, a.1), a.2), (Coord::new(b.0, b.1), b.2)])
    }

    #[test]
    fn rules_follow_the_definition() {
        let r = wr_rules(WrParams::planar(1, 1).unwrap());
        assert!(!is_locally_admissible(&pair((0, 0, PLUS), (1, 0, PLUS)), &r).unwrap());
        assert!(is_locally_admissible(&pair((0, 0, PLUS), (2, 0, PLUS)), &r).unwrap());
        let r = wr_rules(WrParams::planar(1, 4).unwrap());
        assert!(!is_locally_admissible(&pair((0, 0, PLUS), (4, 3, MINUS)), &r).unwrap());
        assert!(is_locally_admissible(&pair((0, 0, PLUS), (5, 0, MINUS)), &r).unwrap());
        let r = wr_rules(WrParams::planar(1, 2).unwrap());
        assert!(!is_locally_admissible(&pair((0, 0, PLUS), (2, 0, MINUS)), &r).unwrap());
    }

    #[test]
    fn params_validation() {
        assert!(WrParams::planar(2, 1).is_err());
        assert!(WrParams::planar(0, 1).is_err());
        assert!(WrParams::new(1, 1, 1).is_err());
    }

    #[test]
    fn delta_plus_at_k2() {
        let bc = delta_plus_boundary(2, 1).unwrap();
        assert_eq!(bc.fixed.len(), 16);
        let plus: Vec<Coord> = bc.fixed.iter().filter(|p| p.1 == PLUS).map(|p| p.0).collect();
        let mut want = vec![
            Coord::new(2, 0),
            Coord::new(-2, 0),
            Coord::new(0, 2),
            Coord::new(0, -2),
        ];
        want.sort();
        assert_eq!(plus, want);
        assert!(matches!(
            delta_plus_boundary(3, 1),
            Err(WrError::NotMultiple { .. })
        ));
        let zero = delta_plus_boundary(0, 1).unwrap();
        assert_eq!(zero.fixed.get(Coord::ORIGIN), Ok(PLUS));
    }

    #[test]
    fn minus_boundary_is_flipped_plus() {
        let p = delta_plus_boundary(4, 1).unwrap().fixed;
        let m = delta_minus_boundary(4, 1).unwrap().fixed;
        assert!(spin_flip(&p).positioned_eq(&m));
    }

    #[test]
    fn dilation_matches_brute_force() {
        let b = Board::new(4);
        let mut mask = vec![false; b.len()];
        mask[b.idx(Coord::new(1, -2))] = true;
        mask[b.idx(Coord::new(-4, 4))] = true;
        let d = b.dilate(&mask, 2);
        for i in 0..b.len() {
            let c = b.coord(i);
            let want = c.dist(Coord::new(1, -2)) <= 2 || c.dist(Coord::new(-4, 4)) <= 2;
            assert_eq!(d[i], want, "{c}");
        }
    }
}
