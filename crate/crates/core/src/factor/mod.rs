//! Sliding block codes and the factor decomposition `φ = ψ₂ ∘ ψ₁` through
//! the relabelled shift `Y_{m,2n}`.
//!
//! A code of radius `r` reads the `(2r+1)²` block around a site through a
//! [`View`] and returns one output symbol. Radius-0 codes are stored as
//! tables so they can be serialized; wider codes are closures.

mod decompose;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Alphabet, Coord, GridError, Pattern, Symbol};
use crate::hochman::HochmanError;

pub use decompose::{
    build_psi1, build_psi2, build_psi2_with, check_decomposition, collapse_code, hochman_code, identity_code,
    image_entropy_estimate, level_square_images, parity_code, CodeKind, DecompositionReport, ImageEntropy,
    LABELING_CAP,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorError {
    #[error("pattern is too small for a radius-{radius} code")]
    ShapeTooSmall { radius: u32 },
    #[error("alphabets do not chain: {0}")]
    AlphabetMismatch(String),
    #[error("{count} labelings exceed the cap {cap}")]
    TooManyLabelings { count: u128, cap: u128 },
    #[error("image of the level square at {0} is not in the image list")]
    ImageNotFound(Coord),
    #[error("substitution neighbourhood at offset {0} contains a blank")]
    NeighborhoodContainsBlank(Coord),
    #[error("site {0} is outside the pattern")]
    MissingSite(Coord),
    #[error("unknown code {0:?}")]
    UnknownCode(String),
    #[error(transparent)]
    Hochman(#[from] HochmanError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Read access to the neighbourhood of the site being coded, by offset.
pub trait View {
    fn at(&self, d: Coord) -> Result<Symbol, FactorError>;
}

struct PatternView<'a> {
    p: &'a Pattern,
    v: Coord,
}

impl View for PatternView<'_> {
    fn at(&self, d: Coord) -> Result<Symbol, FactorError> {
        let c = self.v + d;
        self.p.get_opt(c).ok_or(FactorError::MissingSite(c))
    }
}

struct Shifted<'a> {
    inner: &'a dyn View,
    t: Coord,
}

impl View for Shifted<'_> {
    fn at(&self, d: Coord) -> Result<Symbol, FactorError> {
        self.inner.at(d + self.t)
    }
}

/// A view given by a closure; handy for building substituted neighbourhoods.
pub struct FnView<F: Fn(Coord) -> Result<Symbol, FactorError>>(pub F);

impl<F: Fn(Coord) -> Result<Symbol, FactorError>> View for FnView<F> {
    fn at(&self, d: Coord) -> Result<Symbol, FactorError> {
        (self.0)(d)
    }
}

pub type RuleFn = dyn Fn(&dyn View) -> Result<Symbol, FactorError> + Send + Sync;

#[derive(Clone)]
pub enum LocalRule {
    /// Radius 0: output indexed by input symbol.
    Table(Vec<Symbol>),
    Func(Arc<RuleFn>),
}

#[derive(Clone)]
pub struct SlidingBlockCode {
    name: String,
    radius: u32,
    source: Alphabet,
    target: Alphabet,
    rule: LocalRule,
}

impl fmt::Debug for SlidingBlockCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SlidingBlockCode")
            .field("name", &self.name)
            .field("radius", &self.radius)
            .field("source", &self.source.len())
            .field("target", &self.target.len())
            .finish()
    }
}

/// Serialized form of a table code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeDoc {
    pub name: String,
    pub source: Alphabet,
    pub target: Alphabet,
    /// Target symbol name for each source symbol, in source order.
    pub table: Vec<String>,
}

impl SlidingBlockCode {
    pub fn from_table(
        name: impl Into<String>,
        source: Alphabet,
        target: Alphabet,
        table: Vec<Symbol>,
    ) -> Result<Self, FactorError> {
        if table.len() != source.len() {
            return Err(FactorError::AlphabetMismatch(format!(
                "table has {} entries for {} source symbols",
                table.len(),
                source.len()
            )));
        }
        if let Some(s) = table.iter().find(|s| !target.contains(**s)) {
            return Err(FactorError::AlphabetMismatch(format!(
                "{} is not a target symbol",
                s.0
            )));
        }
        Ok(SlidingBlockCode {
            name: name.into(),
            radius: 0,
            source,
            target,
            rule: LocalRule::Table(table),
        })
    }

    pub fn from_fn(
        name: impl Into<String>,
        radius: u32,
        source: Alphabet,
        target: Alphabet,
        f: impl Fn(&dyn View) -> Result<Symbol, FactorError> + Send + Sync + 'static,
    ) -> Self {
        SlidingBlockCode {
            name: name.into(),
            radius,
            source,
            target,
            rule: LocalRule::Func(Arc::new(f)),
        }
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let table = alphabet.symbols().collect();
        Self::from_table("identity", alphabet.clone(), alphabet, table).expect("square table")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn table(&self) -> Option<&[Symbol]> {
        match &self.rule {
            LocalRule::Table(t) => Some(t),
            LocalRule::Func(_) => None,
        }
    }

    /// Output symbol at the centre of `view`.
    pub fn eval(&self, view: &dyn View) -> Result<Symbol, FactorError> {
        match &self.rule {
            LocalRule::Table(t) => {
                let s = view.at(Coord::ORIGIN)?;
                t.get(s.index())
                    .copied()
                    .ok_or_else(|| FactorError::AlphabetMismatch(format!("{} is not a source symbol", s.0)))
            }
            LocalRule::Func(f) => f(view),
        }
    }

    /// `x ↦ c(σ_t x)`: reads the neighbourhood of `v + t`.
    pub fn shifted(&self, t: Coord) -> SlidingBlockCode {
        let inner = self.clone();
        let name = format!("{}+shift({},{})", self.name, t.x, t.y);
        Self::from_fn(
            name,
            self.radius + t.x.unsigned_abs().max(t.y.unsigned_abs()),
            self.source.clone(),
            self.target.clone(),
            move |v| inner.eval(&Shifted { inner: v, t }),
        )
    }

    pub fn to_doc(&self) -> Option<CodeDoc> {
        let t = self.table()?;
        Some(CodeDoc {
            name: self.name.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            table: t
                .iter()
                .map(|&s| self.target.name(s).expect("checked").to_string())
                .collect(),
        })
    }

    pub fn from_doc(doc: CodeDoc) -> Result<Self, FactorError> {
        let table = doc
            .table
            .iter()
            .map(|n| {
                doc.target
                    .symbol(n)
                    .ok_or_else(|| FactorError::AlphabetMismatch(format!("unknown target {n:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_table(doc.name, doc.source, doc.target, table)
    }
}

/// Applies `c` at every site whose `radius`-neighbourhood lies in `p`.
pub fn apply_code(c: &SlidingBlockCode, p: &Pattern) -> Result<Pattern, FactorError> {
    let out = p.shape().eroded(c.radius);
    if out.is_empty() {
        return Err(FactorError::ShapeTooSmall { radius: c.radius });
    }
    if let Some(t) = c.table() {
        let q = p.subpattern(&out)?;
        let mut values = Vec::with_capacity(q.len());
        for &s in q.values() {
            values.push(
                *t.get(s.index()).ok_or_else(|| {
                    FactorError::AlphabetMismatch(format!("{} is not a source symbol", s.0))
                })?,
            );
        }
        return Ok(Pattern::new(out, values)?);
    }
    let sites = out.to_vec();
    let values = sites
        .par_iter()
        .map(|&v| c.eval(&PatternView { p, v }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Pattern::new(out, values)?)
}

/// `c2 ∘ c1`, of radius `r1 + r2`.
pub fn compose(c2: &SlidingBlockCode, c1: &SlidingBlockCode) -> Result<SlidingBlockCode, FactorError> {
    if c1.target != c2.source {
        return Err(FactorError::AlphabetMismatch(format!(
            "{} outputs {} symbols, {} reads {}",
            c1.name,
            c1.target.len(),
            c2.name,
            c2.source.len()
        )));
    }
    let name = format!("{}∘{}", c2.name, c1.name);
    if let (Some(t2), Some(t1)) = (c2.table(), c1.table()) {
        let table = t1.iter().map(|s| t2[s.index()]).collect();
        return SlidingBlockCode::from_table(name, c1.source.clone(), c2.target.clone(), table);
    }
    let (a, b) = (c1.clone(), c2.clone());
    Ok(SlidingBlockCode::from_fn(
        name,
        c1.radius + c2.radius,
        c1.source.clone(),
        c2.target.clone(),
        move |v| {
            let mid = FnView(|d: Coord| a.eval(&Shifted { inner: v, t: d }));
            b.eval(&mid)
        },
    ))
}
