use crate::entropy::FiniteDistribution;
use crate::grid::{Pattern, Shape};
use crate::sft::{is_locally_admissible, list_admissible, BoundaryCondition, SearchOptions};

use super::{delta_plus_boundary, wr_rules, WrError, WrParams};

/// Interior sites allowed in an exhaustively materialized ensemble.
pub const EXACT_SITE_CAP: usize = 25;

/// `[-k+1, k-1]²`.
pub fn interior_shape(k: i32) -> Shape {
    Shape::square(k - 1)
}

/// Interior plus boundary ring as one pattern on `[-k, k]²`.
pub fn full_config(interior: &Pattern, bc: &BoundaryCondition) -> Result<Pattern, WrError> {
    let joined = interior
        .concat_disjoint(&bc.fixed)
        .map_err(crate::sft::SftError::from)?;
    // a full box is stored as a rectangle; the value order is the same
    if let Some((lo, hi)) = joined.shape().bounding_box() {
        let rect = Shape::rect(lo, hi);
        if rect.len() == joined.len() {
            return Ok(Pattern::new(rect, joined.values().to_vec()).expect("same length"));
        }
    }
    Ok(joined)
}

/// The uniform measure on interiors admissible with the `δ_{k,+}` boundary.
pub fn exact_conditional_distribution(k: i32, p: WrParams) -> Result<FiniteDistribution<Pattern>, WrError> {
    let region = interior_shape(k);
    if region.len() > EXACT_SITE_CAP {
        return Err(WrError::RegionTooLarge {
            sites: region.len(),
            cap: EXACT_SITE_CAP,
        });
    }
    let bc = delta_plus_boundary(k, p.r1)?;
    let rules = wr_rules(p);
    if !is_locally_admissible(&bc.fixed, &rules)? {
        return Err(WrError::InfeasibleBoundary);
    }
    let support = list_admissible(&region, &rules, Some(&bc), SearchOptions::default())?;
    FiniteDistribution::uniform(support)
        .map_err(|e| WrError::InvariantViolated(format!("empty ensemble: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Coord;
    use crate::sft::count_admissible;
    use crate::wr::{MINUS, ZERO};

    #[test]
    fn k2_support_matches_enumeration() {
        let p = WrParams::planar(1, 1).unwrap();
        let d = exact_conditional_distribution(2, p).unwrap();
        let bc = delta_plus_boundary(2, 1).unwrap();
        let n = count_admissible(&interior_shape(2), &wr_rules(p), Some(&bc), Default::default()).unwrap();
        assert_eq!(num_bigint::BigUint::from(d.support_size()), n);
        assert_eq!(d.support_size(), 3);
        let zero = Pattern::filled(interior_shape(2), ZERO);
        assert!(d.prob(&zero) > 0.0);
        assert!(d.is_uniform(1e-15));
    }

    #[test]
    fn huge_r2_forbids_minus_at_k2() {
        let p = WrParams::planar(1, 50).unwrap();
        let d = exact_conditional_distribution(2, p).unwrap();
        for (x, _) in d.weights() {
            assert!(x.iter().all(|(_, s)| s != MINUS));
        }
        let _ = Coord::ORIGIN;
    }

    #[test]
    fn cap_is_enforced() {
        let p = WrParams::planar(1, 1).unwrap();
        assert!(matches!(
            exact_conditional_distribution(4, p),
            Err(WrError::RegionTooLarge { .. })
        ));
    }
}
