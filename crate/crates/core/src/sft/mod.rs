//! Local rules, admissibility checks, exhaustive enumeration and gluing.
//!
//! All counts here are of *locally* admissible patterns. Whether such a
//! pattern extends to a full point is not decidable in general, so callers
//! that need the language of the shift treat these counts as upper bounds.

mod glue;
mod rules;
mod search;

use thiserror::Error;

use crate::grid::{Coord, GridError, Symbol};

pub use glue::{glue_search, glue_search_with, least_glue_k};
pub use rules::{
    block_at, block_pattern, blocks_of, count_violations, first_violation, is_locally_admissible,
    occurrences, Block2, Constraint, DistanceDoc, DistanceRule, RulesDoc, SftRules, Violation,
};
pub use search::{
    count_admissible, enumerate_admissible, list_admissible, stream_admissible, AdmissibleIter,
    BoundaryCondition, Enumeration, EnumerationMode, SearchOptions, DEFAULT_NODE_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SftError {
    #[error("symbol {0:?} is not in the rules' alphabet")]
    UnknownSymbol(Symbol),
    #[error("search exceeded the node budget of {budget}")]
    RegionTooLarge { budget: u64 },
    #[error("boundary condition overlaps the free region at {0}")]
    OverlappingBoundary(Coord),
    #[error("invalid rules: {0}")]
    InvalidRules(String),
    #[error("invalid gluing input: {0}")]
    BadGlueInput(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Rules `r` with every translate of `w` forbidden.
pub fn forbid_word(r: &SftRules, w: crate::grid::Pattern) -> Result<SftRules, SftError> {
    r.forbid_word(w)
}
