//! Finite gluing search: fill an annulus between a central square and an
//! exterior window so the whole configuration is locally admissible.
//!
//! Success certifies gluability of these finite data only; the outer window
//! stands in for a full point.

use crate::grid::{Pattern, Shape};

use super::rules::SftRules;
use super::search::{stream_admissible, BoundaryCondition, SearchOptions};
use super::SftError;

/// Fills `[-(n+k), n+k]² ∖ [-n, n]²`, or returns `None` if no filling exists.
pub fn glue_search(
    inner: &Pattern,
    outer: &Pattern,
    n: i32,
    k: i32,
    r: &SftRules,
) -> Result<Option<Pattern>, SftError> {
    glue_search_with(inner, outer, n, k, r, SearchOptions::default())
}

pub fn glue_search_with(
    inner: &Pattern,
    outer: &Pattern,
    n: i32,
    k: i32,
    r: &SftRules,
    opts: SearchOptions,
) -> Result<Option<Pattern>, SftError> {
    if n < 0 || k < 0 {
        return Err(SftError::BadGlueInput("n and k must be nonnegative".into()));
    }
    if inner.shape() != &Shape::square(n) {
        return Err(SftError::BadGlueInput(format!(
            "inner pattern must cover [-{n},{n}]²"
        )));
    }
    let outer_box = Shape::square(n + k);
    if let Some(c) = outer.shape().first_common_site(&outer_box) {
        return Err(SftError::OverlappingBoundary(c));
    }
    let fixed = inner.concat_disjoint(outer)?;
    let annulus = Shape::annulus(n, n + k);
    let bc = BoundaryCondition::new(fixed);
    let mut it = stream_admissible(&annulus, r, Some(&bc), opts)?;
    it.next().transpose()
}

/// Tries `k = 0, 1, …, k_max` and returns the least `k` that glues, with its filler.
///
/// Stops early once the annulus would reach into `outer`.
pub fn least_glue_k(
    inner: &Pattern,
    outer: &Pattern,
    n: i32,
    k_max: i32,
    r: &SftRules,
) -> Result<Option<(i32, Pattern)>, SftError> {
    for k in 0..=k_max {
        if outer.shape().first_common_site(&Shape::square(n + k)).is_some() {
            break;
        }
        if let Some(f) = glue_search(inner, outer, n, k, r)? {
            return Ok(Some((k, f)));
        }
    }
    Ok(None)
}
