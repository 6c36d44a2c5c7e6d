//! The moat subset `B‴` whose sites can be set to `+` independently.

use serde::Serialize;

use crate::grid::{Coord, Shape};

use super::{ContourData, WrError, WrParams};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyReport {
    /// The chosen cardinal direction.
    pub u: Coord,
    pub b: usize,
    pub b_prime: usize,
    pub b_second: usize,
    #[serde(skip)]
    pub b_third: Shape,
    pub b_third_len: usize,
    pub c_len: usize,
    /// `|B| ≥ |C| / 2d`. Corner sites of `C` may have no cardinal ray into
    /// the moat under ℓ∞ adjacency, so this can fall short.
    pub b_meets_fraction: bool,
    /// `|B″| ≥ |B′| / (4^d R₁^d)`.
    pub b_second_meets_bound: bool,
    /// `R₂ > 2^{3d+1} R₁^{2d}`.
    pub in_regime: bool,
    /// `|B‴| ≥ |C| R₂ / (2^{3d+1} R₁^d)`, checked only in regime.
    pub cardinality_bound_holds: Option<bool>,
}

impl GreedyReport {
    /// Non-fatal diagnostics, one line each.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.in_regime {
            out.push("BoundRegimeViolated: R2 <= 2^(3d+1) R1^(2d); cardinality bound not checked".into());
        }
        if !self.b_meets_fraction {
            out.push(format!("|B| = {} < |C|/2d with |C| = {}", self.b, self.c_len));
        }
        if !self.b_second_meets_bound {
            out.push(format!("|B''| = {} < |B'|/(4^d R1^d)", self.b_second));
        }
        out
    }
}

/// Builds `B → B′ → B″ → B‴` for `cd` and checks the properties the
/// counting argument needs.
///
/// Separation of `B‴`, containment in the moat and distance from `C` are
/// hard failures. Sizes are reported with flags.
pub fn greedy_moat_sites(cd: &ContourData, p: WrParams) -> Result<GreedyReport, WrError> {
    let (r1, r2, d) = (p.r1 as i32, p.r2 as i32, p.d);
    let dirs = [
        Coord::new(0, 1),
        Coord::new(0, -1),
        Coord::new(1, 0),
        Coord::new(-1, 0),
    ];
    let mut best: Option<(Coord, Vec<Coord>)> = None;
    for u in dirs {
        let b: Vec<Coord> =
            cd.c.iter()
                .filter(|&t| (1..=r2).all(|j| cd.m.contains(Coord::new(t.x + j * u.x, t.y + j * u.y))))
                .collect();
        if best.as_ref().map_or(true, |(_, bb)| b.len() > bb.len()) {
            best = Some((u, b));
        }
    }
    let (u, b) = best.expect("four directions");
    let c_len = cd.c.len();

    let mut b_prime: Vec<Coord> = Vec::with_capacity(b.len() * r2 as usize);
    for t in &b {
        for j in 1..=r2 {
            b_prime.push(Coord::new(t.x + j * u.x, t.y + j * u.y));
        }
    }
    b_prime.sort_unstable();
    let before = b_prime.len();
    b_prime.dedup();
    if b_prime.len() != before {
        return Err(WrError::InvariantViolated("rays of B' overlap".into()));
    }

    // greedy in site order: keep a site, discard everything within R1 of it
    let mut removed = std::collections::HashSet::new();
    let mut b_second: Vec<Coord> = Vec::new();
    for &s in &b_prime {
        if removed.contains(&s) {
            continue;
        }
        b_second.push(s);
        for dy in -r1..=r1 {
            for dx in -r1..=r1 {
                removed.insert(Coord::new(s.x + dx, s.y + dy));
            }
        }
    }

    let near_c = |s: Coord| cd.c.iter().any(|t| t.dist(s) <= p.r1);
    let b_third: Vec<Coord> = b_second.iter().copied().filter(|&s| !near_c(s)).collect();

    for (i, &s) in b_third.iter().enumerate() {
        if !cd.m.contains(s) {
            return Err(WrError::InvariantViolated(format!(
                "B''' site {s} is outside the moat"
            )));
        }
        if b_third[i + 1..].iter().any(|&t| t.dist(s) <= p.r1) {
            return Err(WrError::InvariantViolated(format!(
                "B''' sites near {s} are within R1"
            )));
        }
    }

    let r1d = (p.r1 as f64).powi(d as i32);
    let in_regime = (p.r2 as f64) > 2f64.powi(3 * d as i32 + 1) * r1d * r1d;
    let bound = c_len as f64 * p.r2 as f64 / (2f64.powi(3 * d as i32 + 1) * r1d);
    let cardinality_bound_holds = in_regime.then(|| b_third.len() as f64 >= bound);
    if cardinality_bound_holds == Some(false) {
        return Err(WrError::InvariantViolated(format!(
            "|B'''| = {} < |C| R2 / (2^(3d+1) R1^d) = {bound}",
            b_third.len()
        )));
    }
    if in_regime && c_len > 0 && b_third.is_empty() {
        return Err(WrError::InvariantViolated("B''' is empty for nonempty C".into()));
    }
    Ok(GreedyReport {
        u,
        b: b.len(),
        b_prime: b_prime.len(),
        b_second: b_second.len(),
        b_third_len: b_third.len(),
        b_third: Shape::from_sites(b_third),
        c_len,
        b_meets_fraction: (b.len() * 2 * d as usize) >= c_len,
        b_second_meets_bound: (b_second.len() as f64) * 4f64.powi(d as i32) * r1d >= b_prime.len() as f64,
        in_regime,
        cardinality_bound_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Pattern;
    use crate::sft::is_locally_admissible;
    use crate::wr::{
        contour_decompose, delta_plus_boundary, flip_rho, full_config, interior_shape, wr_rules, MINUS, PLUS,
        ZERO,
    };

    #[test]
    fn in_regime_single_minus() {
        // R2 = 130 > 2^7 = 128, so the cardinality bound is asserted
        let p = WrParams::planar(1, 130).unwrap();
        let k = 134;
        let bc = delta_plus_boundary(k, 1).unwrap();
        let mut inner = Pattern::filled(interior_shape(k), ZERO);
        inner.set(Coord::ORIGIN, MINUS).unwrap();
        let x = full_config(&inner, &bc).unwrap();
        let cd = contour_decompose(&x, Coord::ORIGIN, p).unwrap();
        let g = greedy_moat_sites(&cd, p).unwrap();
        assert!(g.in_regime);
        assert_eq!(g.cardinality_bound_holds, Some(true));
        assert!(g.b_second_meets_bound);

        let y = flip_rho(&x, &cd, p).unwrap();
        let mut z = y.clone();
        for s in g.b_third.iter() {
            assert_eq!(y.get(s), Ok(ZERO));
            z.set(s, PLUS).unwrap();
        }
        assert!(is_locally_admissible(&z, &wr_rules(p)).unwrap());
    }
}
