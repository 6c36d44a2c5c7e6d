//! Lattice geometry and finite patterns on Z².
//!
//! A [`Pattern`] is a total assignment of [`Symbol`]s to the sites of a finite
//! [`Shape`]. Shapes are explicit site sets with a rectangle fast path, since
//! annuli, rings and unions of boxes all show up in the constructions built on
//! top of this module.
//!
//! Sites are ordered row by row: first by `y`, then by `x`. Every iteration
//! over a shape, and the value vector of every pattern, follows that order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("site {0} is outside the pattern's shape")]
    SiteOutOfShape(Coord),
    #[error("shapes overlap at site {0}")]
    OverlappingShapes(Coord),
    #[error("expected {expected} values for the shape, got {got}")]
    ValueCountMismatch { expected: usize, got: usize },
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(String),
    #[error("symbol index {0} is not in the alphabet")]
    UnknownSymbolIndex(u32),
    #[error("malformed pattern document: {0}")]
    Json(String),
}

/// A site of Z².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub const ORIGIN: Coord = Coord { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Coord { x, y }
    }

    /// ℓ∞ distance, the metric used for every interaction range in this crate.
    pub fn dist(self, other: Coord) -> u32 {
        let dx = (self.x - other.x).unsigned_abs();
        let dy = (self.y - other.y).unsigned_abs();
        dx.max(dy)
    }

    /// The eight king-move neighbours.
    pub fn king_neighbors(self) -> impl Iterator<Item = Coord> {
        const OFF: [(i32, i32); 8] = [
            (-1, -1),
            (0, -1),
            (1, -1),
            (-1, 0),
            (1, 0),
            (-1, 1),
            (0, 1),
            (1, 1),
        ];
        OFF.into_iter()
            .map(move |(dx, dy)| Coord::new(self.x + dx, self.y + dy))
    }

    /// The four edge neighbours.
    pub fn rook_neighbors(self) -> impl Iterator<Item = Coord> {
        const OFF: [(i32, i32); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];
        OFF.into_iter()
            .map(move |(dx, dy)| Coord::new(self.x + dx, self.y + dy))
    }
}

impl Ord for Coord {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Coord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Coord {
    type Output = Coord;
    fn add(self, o: Coord) -> Coord {
        Coord::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Coord {
    type Output = Coord;
    fn sub(self, o: Coord) -> Coord {
        Coord::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Coord {
    type Output = Coord;
    fn neg(self) -> Coord {
        Coord::new(-self.x, -self.y)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i32, i32)> for Coord {
    fn from((x, y): (i32, i32)) -> Self {
        Coord::new(x, y)
    }
}

/// Opaque symbol token: an index into some [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Ordered finite list of distinct symbol names. Indices are stable and are
/// what patterns store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    lookup: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, GridError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(GridError::EmptyAlphabet);
        }
        let mut lookup = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if lookup.insert(n.clone(), Symbol(i as u32)).is_some() {
                return Err(GridError::DuplicateSymbol(n.clone()));
            }
        }
        Ok(Alphabet { names, lookup })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.lookup.get(name).copied()
    }

    pub fn name(&self, s: Symbol) -> Option<&str> {
        self.names.get(s.index()).map(String::as_str)
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s.index() < self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len() as u32).map(Symbol)
    }
}

impl Serialize for Alphabet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.names.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Alphabet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let names = Vec::<String>::deserialize(d)?;
        Alphabet::new(names).map_err(serde::de::Error::custom)
    }
}

/// A finite set of sites.
#[derive(Debug, Clone)]
pub enum Shape {
    /// The box `[lo.x, hi.x] × [lo.y, hi.y]`; empty when `hi < lo` in either axis.
    Rect { lo: Coord, hi: Coord },
    /// Sorted, deduplicated site list.
    Sites(Arc<[Coord]>),
}

impl Shape {
    pub fn rect(lo: Coord, hi: Coord) -> Self {
        Shape::Rect { lo, hi }
    }

    /// The centred square `[-r, r]²`.
    pub fn square(r: i32) -> Self {
        Shape::rect(Coord::new(-r, -r), Coord::new(r, r))
    }

    /// `[x0, x0 + w) × [y0, y0 + h)`.
    pub fn rect_wh(origin: Coord, w: i32, h: i32) -> Self {
        Shape::rect(origin, Coord::new(origin.x + w - 1, origin.y + h - 1))
    }

    pub fn empty() -> Self {
        Shape::Sites(Arc::from(Vec::new()))
    }

    pub fn from_sites<I: IntoIterator<Item = Coord>>(sites: I) -> Self {
        let mut v: Vec<Coord> = sites.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Shape::Sites(Arc::from(v))
    }

    /// `[-outer, outer]² ∖ [-inner, inner]²`.
    pub fn annulus(inner: i32, outer: i32) -> Self {
        Shape::from_sites(
            Shape::square(outer)
                .iter()
                .filter(|c| c.x.abs() > inner || c.y.abs() > inner),
        )
    }

    pub fn len(&self) -> usize {
        match self {
            Shape::Rect { lo, hi } => {
                if hi.x < lo.x || hi.y < lo.y {
                    0
                } else {
                    ((hi.x - lo.x + 1) as usize) * ((hi.y - lo.y + 1) as usize)
                }
            }
            Shape::Sites(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Width and height if this is a non-empty rectangle.
    pub fn rect_dims(&self) -> Option<(Coord, usize, usize)> {
        match self {
            Shape::Rect { lo, hi } if hi.x >= lo.x && hi.y >= lo.y => {
                Some((*lo, (hi.x - lo.x + 1) as usize, (hi.y - lo.y + 1) as usize))
            }
            _ => None,
        }
    }

    /// Position of `c` in this shape's site order.
    pub fn index_of(&self, c: Coord) -> Option<usize> {
        match self {
            Shape::Rect { lo, hi } => {
                if c.x < lo.x || c.x > hi.x || c.y < lo.y || c.y > hi.y {
                    None
                } else {
                    let w = (hi.x - lo.x + 1) as usize;
                    Some((c.y - lo.y) as usize * w + (c.x - lo.x) as usize)
                }
            }
            Shape::Sites(s) => s.binary_search(&c).ok(),
        }
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.index_of(c).is_some()
    }

    pub fn iter(&self) -> ShapeIter<'_> {
        match self {
            Shape::Rect { lo, hi } => ShapeIter::Rect {
                lo: *lo,
                hi: *hi,
                cur: *lo,
                done: hi.x < lo.x || hi.y < lo.y,
            },
            Shape::Sites(s) => ShapeIter::Sites(s.iter()),
        }
    }

    /// Smallest rectangle containing every site, as `(lo, hi)`.
    pub fn bounding_box(&self) -> Option<(Coord, Coord)> {
        match self {
            Shape::Rect { lo, hi } => (!self.is_empty()).then_some((*lo, *hi)),
            Shape::Sites(s) => {
                let first = *s.first()?;
                let (mut lo, mut hi) = (first, first);
                for c in s.iter() {
                    lo.x = lo.x.min(c.x);
                    lo.y = lo.y.min(c.y);
                    hi.x = hi.x.max(c.x);
                    hi.y = hi.y.max(c.y);
                }
                Some((lo, hi))
            }
        }
    }

    /// The shape `{s + t : s ∈ self}`.
    pub fn shifted(&self, t: Coord) -> Shape {
        match self {
            Shape::Rect { lo, hi } => Shape::Rect {
                lo: *lo + t,
                hi: *hi + t,
            },
            Shape::Sites(s) => Shape::Sites(s.iter().map(|&c| c + t).collect()),
        }
    }

    pub fn is_subset(&self, other: &Shape) -> bool {
        if let (Shape::Rect { lo: a, hi: b }, Shape::Rect { lo: c, hi: d }) = (self, other) {
            if self.is_empty() {
                return true;
            }
            return a.x >= c.x && a.y >= c.y && b.x <= d.x && b.y <= d.y;
        }
        self.iter().all(|c| other.contains(c))
    }

    pub fn first_common_site(&self, other: &Shape) -> Option<Coord> {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().find(|&c| large.contains(c))
    }

    pub fn union(&self, other: &Shape) -> Shape {
        Shape::from_sites(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &Shape) -> Shape {
        Shape::from_sites(self.iter().filter(|&c| !other.contains(c)))
    }

    /// Sites `s` with `s + [-r, r]² ⊆ self`.
    pub fn eroded(&self, r: u32) -> Shape {
        let r = r as i32;
        if let Shape::Rect { lo, hi } = self {
            return Shape::Rect {
                lo: Coord::new(lo.x + r, lo.y + r),
                hi: Coord::new(hi.x - r, hi.y - r),
            };
        }
        Shape::from_sites(
            self.iter().filter(|&c| {
                (-r..=r).all(|dy| (-r..=r).all(|dx| self.contains(Coord::new(c.x + dx, c.y + dy))))
            }),
        )
    }

    pub fn to_vec(&self) -> Vec<Coord> {
        self.iter().collect()
    }
}

impl PartialEq for Shape {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Shape::Rect { .. }, Shape::Rect { .. }) if self.is_empty() && other.is_empty() => true,
            (Shape::Rect { lo: a, hi: b }, Shape::Rect { lo: c, hi: d }) => a == c && b == d,
            _ => self.len() == other.len() && self.iter().eq(other.iter()),
        }
    }
}

impl Eq for Shape {}

impl FromIterator<Coord> for Shape {
    fn from_iter<T: IntoIterator<Item = Coord>>(iter: T) -> Self {
        Shape::from_sites(iter)
    }
}

pub enum ShapeIter<'a> {
    Rect {
        lo: Coord,
        hi: Coord,
        cur: Coord,
        done: bool,
    },
    Sites(std::slice::Iter<'a, Coord>),
}

impl Iterator for ShapeIter<'_> {
    type Item = Coord;

    fn next(&mut self) -> Option<Coord> {
        match self {
            ShapeIter::Rect { lo, hi, cur, done } => {
                if *done {
                    return None;
                }
                let out = *cur;
                if cur.x < hi.x {
                    cur.x += 1;
                } else if cur.y < hi.y {
                    cur.x = lo.x;
                    cur.y += 1;
                } else {
                    *done = true;
                }
                Some(out)
            }
            ShapeIter::Sites(it) => it.next().copied(),
        }
    }
}

/// A total assignment of symbols to the sites of a finite shape.
///
/// `==` compares patterns up to translation; use [`Pattern::positioned_eq`]
/// when the placement matters too.
#[derive(Debug, Clone)]
pub struct Pattern {
    shape: Shape,
    values: Vec<Symbol>,
}

impl Pattern {
    pub fn new(shape: Shape, values: Vec<Symbol>) -> Result<Self, GridError> {
        if shape.len() != values.len() {
            return Err(GridError::ValueCountMismatch {
                expected: shape.len(),
                got: values.len(),
            });
        }
        Ok(Pattern { shape, values })
    }

    pub fn empty() -> Self {
        Pattern {
            shape: Shape::empty(),
            values: Vec::new(),
        }
    }

    pub fn filled(shape: Shape, s: Symbol) -> Self {
        let values = vec![s; shape.len()];
        Pattern { shape, values }
    }

    pub fn from_fn(shape: Shape, mut f: impl FnMut(Coord) -> Symbol) -> Self {
        let values = shape.iter().map(&mut f).collect();
        Pattern { shape, values }
    }

    /// Builds a pattern from `(site, symbol)` pairs; later duplicates win.
    pub fn from_pairs<I: IntoIterator<Item = (Coord, Symbol)>>(pairs: I) -> Self {
        let mut v: Vec<(Coord, Symbol)> = pairs.into_iter().collect();
        v.sort_by_key(|p| p.0);
        let mut sites: Vec<Coord> = Vec::with_capacity(v.len());
        let mut values: Vec<Symbol> = Vec::with_capacity(v.len());
        for (c, s) in v {
            if sites.last() == Some(&c) {
                *values.last_mut().unwrap() = s;
            } else {
                sites.push(c);
                values.push(s);
            }
        }
        Pattern {
            shape: Shape::Sites(Arc::from(sites)),
            values,
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, c: Coord) -> Result<Symbol, GridError> {
        self.get_opt(c).ok_or(GridError::SiteOutOfShape(c))
    }

    pub fn get_opt(&self, c: Coord) -> Option<Symbol> {
        self.shape.index_of(c).map(|i| self.values[i])
    }

    pub fn set(&mut self, c: Coord, s: Symbol) -> Result<(), GridError> {
        let i = self.shape.index_of(c).ok_or(GridError::SiteOutOfShape(c))?;
        self.values[i] = s;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coord, Symbol)> + '_ {
        self.shape.iter().zip(self.values.iter().copied())
    }

    /// Shift action: the result `q` satisfies `q(s) = self(s + t)`.
    pub fn translate(&self, t: Coord) -> Pattern {
        Pattern {
            shape: self.shape.shifted(-t),
            values: self.values.clone(),
        }
    }

    /// Places the pattern so its shape moves by `+t` (the inverse of [`translate`](Self::translate)).
    pub fn moved_by(&self, t: Coord) -> Pattern {
        self.translate(-t)
    }

    /// Restriction to `s`.
    pub fn subpattern(&self, s: &Shape) -> Result<Pattern, GridError> {
        if let (Some((lo, w, h)), Some((plo, pw, _))) = (s.rect_dims(), self.shape.rect_dims()) {
            if !s.is_subset(&self.shape) {
                let bad = s.iter().find(|&c| !self.shape.contains(c)).unwrap();
                return Err(GridError::SiteOutOfShape(bad));
            }
            let mut values = Vec::with_capacity(w * h);
            for y in 0..h {
                let row = (lo.y - plo.y) as usize + y;
                let start = row * pw + (lo.x - plo.x) as usize;
                values.extend_from_slice(&self.values[start..start + w]);
            }
            return Ok(Pattern {
                shape: s.clone(),
                values,
            });
        }
        let mut values = Vec::with_capacity(s.len());
        for c in s.iter() {
            values.push(self.get(c)?);
        }
        Ok(Pattern {
            shape: s.clone(),
            values,
        })
    }

    /// Concatenation of patterns on disjoint shapes.
    pub fn concat_disjoint(&self, other: &Pattern) -> Result<Pattern, GridError> {
        if let Some(c) = self.shape.first_common_site(&other.shape) {
            return Err(GridError::OverlappingShapes(c));
        }
        Ok(Pattern::from_pairs(self.iter().chain(other.iter())))
    }

    /// Overwrites or extends with the values of `other`.
    pub fn overlay(&self, other: &Pattern) -> Pattern {
        Pattern::from_pairs(self.iter().chain(other.iter()))
    }

    pub fn map_symbols(&self, mut f: impl FnMut(Symbol) -> Symbol) -> Pattern {
        Pattern {
            shape: self.shape.clone(),
            values: self.values.iter().map(|&s| f(s)).collect(),
        }
    }

    /// The offset that moves the lexicographically least site to the origin.
    pub fn canonical_offset(&self) -> Coord {
        self.shape.iter().next().unwrap_or(Coord::ORIGIN)
    }

    /// Representative of the translation class, anchored at the origin.
    pub fn canonical(&self) -> Pattern {
        self.translate(self.canonical_offset())
    }

    /// Equality including placement.
    pub fn positioned_eq(&self, other: &Pattern) -> bool {
        self.shape == other.shape && self.values == other.values
    }

    pub fn to_doc(&self, alphabet: &Alphabet) -> PatternDoc {
        let shape = match self.shape.rect_dims() {
            Some((lo, w, h)) => ShapeDoc::Rect {
                rect: [lo.x, lo.y, lo.x + w as i32 - 1, lo.y + h as i32 - 1],
            },
            None => ShapeDoc::Sites {
                sites: self.shape.iter().map(|c| [c.x, c.y]).collect(),
            },
        };
        PatternDoc {
            alphabet: alphabet.names().to_vec(),
            shape,
            values: self.values.iter().map(|s| s.0).collect(),
        }
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> String {
        serde_json::to_string(&self.to_doc(alphabet)).expect("pattern documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<(Alphabet, Pattern), GridError> {
        let doc: PatternDoc = serde_json::from_str(text).map_err(|e| GridError::Json(e.to_string()))?;
        doc.into_pattern()
    }
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len() || self.values != other.values {
            return false;
        }
        let (a, b) = (self.canonical_offset(), other.canonical_offset());
        self.shape
            .iter()
            .map(|c| c - a)
            .eq(other.shape.iter().map(|c| c - b))
    }
}

impl Eq for Pattern {}

impl Hash for Pattern {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let a = self.canonical_offset();
        self.values.hash(state);
        for c in self.shape.iter() {
            (c - a).hash(state);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShapeDoc {
    Rect { rect: [i32; 4] },
    Sites { sites: Vec<[i32; 2]> },
}

/// Serialized pattern: `{"alphabet": [...], "shape": {"rect": [x0,y0,x1,y1]} | {"sites": [[x,y],...]}, "values": [...]}`.
///
/// Rect values are row-major (rows of increasing `y`, each left to right);
/// site-list values are parallel to `sites`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternDoc {
    pub alphabet: Vec<String>,
    pub shape: ShapeDoc,
    pub values: Vec<u32>,
}

impl PatternDoc {
    pub fn into_pattern(self) -> Result<(Alphabet, Pattern), GridError> {
        let alphabet = Alphabet::new(self.alphabet)?;
        if let Some(&bad) = self.values.iter().find(|&&v| v as usize >= alphabet.len()) {
            return Err(GridError::UnknownSymbolIndex(bad));
        }
        let pattern = match self.shape {
            ShapeDoc::Rect {
                rect: [x0, y0, x1, y1],
            } => Pattern::new(
                Shape::rect(Coord::new(x0, y0), Coord::new(x1, y1)),
                self.values.into_iter().map(Symbol).collect(),
            )?,
            ShapeDoc::Sites { sites } => {
                if sites.len() != self.values.len() {
                    return Err(GridError::ValueCountMismatch {
                        expected: sites.len(),
                        got: self.values.len(),
                    });
                }
                let mut seen = std::collections::HashSet::new();
                for s in &sites {
                    if !seen.insert(*s) {
                        return Err(GridError::Json(format!("duplicate site {:?}", s)));
                    }
                }
                Pattern::from_pairs(
                    sites
                        .into_iter()
                        .zip(self.values)
                        .map(|([x, y], v)| (Coord::new(x, y), Symbol(v))),
                )
            }
        };
        Ok((alphabet, pattern))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2x2() -> Pattern {
        Pattern::new(
            Shape::rect(Coord::new(0, 0), Coord::new(1, 1)),
            vec![Symbol(0), Symbol(1), Symbol(2), Symbol(3)],
        )
        .unwrap()
    }

    #[test]
    fn chebyshev_distance() {
        let a = Coord::new(1, -2);
        let b = Coord::new(4, 0);
        assert_eq!(a.dist(b), 3);
        assert_eq!(b.dist(a), 3);
        assert_eq!(a.dist(a), 0);
    }

    #[test]
    fn rect_cardinality() {
        assert_eq!(Shape::rect(Coord::new(-1, 2), Coord::new(3, 4)).len(), 15);
        assert!(Shape::rect(Coord::new(1, 0), Coord::new(0, 5)).is_empty());
        assert_eq!(Shape::rect(Coord::new(1, 0), Coord::new(0, 5)).iter().count(), 0);
    }

    #[test]
    fn translate_identity_and_inverse() {
        let p = p2x2();
        assert!(p.translate(Coord::ORIGIN).positioned_eq(&p));
        let t = Coord::new(5, -7);
        assert!(p.translate(t).translate(-t).positioned_eq(&p));
    }

    #[test]
    fn translate_follows_shift_action() {
        let p = p2x2();
        let q = p.translate(Coord::new(2, 3));
        assert_eq!(q.shape(), &Shape::rect(Coord::new(-2, -3), Coord::new(-1, -2)));
        for s in q.shape().iter() {
            assert_eq!(q.get(s).unwrap(), p.get(s + Coord::new(2, 3)).unwrap());
        }
        assert_eq!(q, p);
    }

    #[test]
    fn subpattern_cases() {
        let p = p2x2();
        assert!(p.subpattern(p.shape()).unwrap().positioned_eq(&p));
        let one = p.subpattern(&Shape::from_sites([Coord::new(1, 0)])).unwrap();
        assert_eq!(one.values(), &[Symbol(1)]);
        let err = p
            .subpattern(&Shape::from_sites([Coord::new(0, 0), Coord::new(2, 0)]))
            .unwrap_err();
        assert_eq!(err, GridError::SiteOutOfShape(Coord::new(2, 0)));
        let err = p
            .subpattern(&Shape::rect(Coord::new(0, 0), Coord::new(2, 0)))
            .unwrap_err();
        assert!(matches!(err, GridError::SiteOutOfShape(_)));
    }

    #[test]
    fn concat_cases() {
        let a = Pattern::filled(Shape::from_sites([Coord::new(0, 0)]), Symbol(0));
        let b = Pattern::filled(Shape::from_sites([Coord::new(1, 0)]), Symbol(1));
        let ab = a.concat_disjoint(&b).unwrap();
        let expect = Pattern::new(
            Shape::rect(Coord::new(0, 0), Coord::new(1, 0)),
            vec![Symbol(0), Symbol(1)],
        )
        .unwrap();
        assert!(ab.positioned_eq(&expect));
        assert!(a.concat_disjoint(&Pattern::empty()).unwrap().positioned_eq(&a));
        assert_eq!(
            a.concat_disjoint(&a).unwrap_err(),
            GridError::OverlappingShapes(Coord::new(0, 0))
        );
    }

    #[test]
    fn lookup_outside_is_error() {
        assert_eq!(
            p2x2().get(Coord::new(3, 3)),
            Err(GridError::SiteOutOfShape(Coord::new(3, 3)))
        );
    }

    #[test]
    fn json_round_trip_rect_and_sites() {
        let alpha = Alphabet::new(["a", "b", "c", "d"]).unwrap();
        let p = p2x2();
        let (a2, q) = Pattern::from_json(&p.to_json(&alpha)).unwrap();
        assert_eq!(a2, alpha);
        assert!(q.positioned_eq(&p));

        let s = Pattern::from_pairs([(Coord::new(3, 1), Symbol(2)), (Coord::new(-1, 0), Symbol(0))]);
        let text = s.to_json(&alpha);
        assert!(text.contains("\"sites\""));
        let (_, s2) = Pattern::from_json(&text).unwrap();
        assert!(s2.positioned_eq(&s));
    }

    #[test]
    fn json_rejects_bad_documents() {
        assert!(
            Pattern::from_json(r#"{"alphabet":["a"],"shape":{"rect":[0,0,1,0]},"values":[0,1]}"#).is_err()
        );
        assert!(Pattern::from_json(r#"{"alphabet":["a"],"shape":{"rect":[0,0,1,0]},"values":[0]}"#).is_err());
        assert!(Pattern::from_json(r#"{"alphabet":[],"shape":{"rect":[0,0,0,0]},"values":[0]}"#).is_err());
        assert!(
            Pattern::from_json(r#"{"alphabet":["a"],"shape":{"rect":[0,0,0,0]},"values":[0],"x":1}"#)
                .is_err()
        );
    }

    #[test]
    fn eroded_rect_and_sites_agree() {
        let r = Shape::rect(Coord::new(0, 0), Coord::new(4, 3));
        let s = Shape::from_sites(r.iter());
        assert_eq!(r.eroded(1), s.eroded(1));
        assert_eq!(r.eroded(1).len(), 3 * 2);
    }

    #[test]
    fn annulus_size() {
        assert_eq!(Shape::annulus(1, 3).len(), 49 - 9);
    }
}
