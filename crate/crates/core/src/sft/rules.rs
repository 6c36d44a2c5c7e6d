use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::grid::{Alphabet, Coord, Pattern, PatternDoc, Shape, Symbol};

use super::SftError;

/// A 2×2 block in row-major order: `[(0,0), (1,0), (0,1), (1,1)]`.
pub type Block2 = [Symbol; 4];

/// Forbids `a` and `b` (in either order) at ℓ∞ distance `1..=min_exclusive`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceRule {
    pub a: Vec<Symbol>,
    pub b: Vec<Symbol>,
    pub min_exclusive: u32,
}

impl DistanceRule {
    pub fn new(mut a: Vec<Symbol>, mut b: Vec<Symbol>, min_exclusive: u32) -> Self {
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        DistanceRule { a, b, min_exclusive }
    }

    pub fn forbids(&self, s: Symbol, t: Symbol, dist: u32) -> bool {
        dist >= 1
            && dist <= self.min_exclusive
            && ((self.a.contains(&s) && self.b.contains(&t)) || (self.b.contains(&s) && self.a.contains(&t)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    Allowed2x2(HashSet<Block2>),
    Distance(Vec<DistanceRule>),
    Compound {
        base: Box<SftRules>,
        forbidden: Vec<Pattern>,
    },
}

/// Local rules defining a two-dimensional SFT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SftRules {
    alphabet: Alphabet,
    constraint: Constraint,
}

impl SftRules {
    pub fn allowed_2x2<I: IntoIterator<Item = Block2>>(
        alphabet: Alphabet,
        allowed: I,
    ) -> Result<Self, SftError> {
        let allowed: HashSet<Block2> = allowed.into_iter().collect();
        for b in &allowed {
            for &s in b {
                check_symbol(&alphabet, s)?;
            }
        }
        Ok(SftRules {
            alphabet,
            constraint: Constraint::Allowed2x2(allowed),
        })
    }

    /// Every 2×2 block allowed.
    pub fn full_shift(alphabet: Alphabet) -> Self {
        let q = alphabet.len() as u32;
        let mut allowed = HashSet::new();
        for i in 0..q.pow(4) {
            allowed.insert([
                Symbol(i % q),
                Symbol(i / q % q),
                Symbol(i / (q * q) % q),
                Symbol(i / (q * q * q)),
            ]);
        }
        SftRules {
            alphabet,
            constraint: Constraint::Allowed2x2(allowed),
        }
    }

    pub fn distance(alphabet: Alphabet, rules: Vec<DistanceRule>) -> Result<Self, SftError> {
        for r in &rules {
            if r.min_exclusive == 0 {
                return Err(SftError::InvalidRules(
                    "distance rules need min_exclusive >= 1".into(),
                ));
            }
            for &s in r.a.iter().chain(&r.b) {
                check_symbol(&alphabet, s)?;
            }
        }
        Ok(SftRules {
            alphabet,
            constraint: Constraint::Distance(rules),
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn constraint(&self) -> &Constraint {
        &self.constraint
    }

    /// Adds `w` to the forbidden words.
    pub fn forbid_word(&self, w: Pattern) -> Result<SftRules, SftError> {
        for (_, s) in w.iter() {
            check_symbol(&self.alphabet, s)?;
        }
        let w = w.canonical();
        Ok(match &self.constraint {
            Constraint::Compound { base, forbidden } => {
                let mut forbidden = forbidden.clone();
                forbidden.push(w);
                SftRules {
                    alphabet: self.alphabet.clone(),
                    constraint: Constraint::Compound {
                        base: base.clone(),
                        forbidden,
                    },
                }
            }
            _ => SftRules {
                alphabet: self.alphabet.clone(),
                constraint: Constraint::Compound {
                    base: Box::new(self.clone()),
                    forbidden: vec![w],
                },
            },
        })
    }

    /// Largest interaction range: 1 for block rules, else the largest distance
    /// and the extent of any forbidden word.
    pub fn range(&self) -> u32 {
        let f = self.flatten();
        let mut r = if f.allowed.is_empty() { 0 } else { 1 };
        for d in &f.distance {
            r = r.max(d.min_exclusive);
        }
        for w in &f.forbidden {
            if let Some((lo, hi)) = w.shape().bounding_box() {
                r = r.max(lo.dist(hi));
            }
        }
        r.max(1)
    }

    pub(crate) fn flatten(&self) -> FlatRules<'_> {
        let mut out = FlatRules {
            allowed: Vec::new(),
            distance: Vec::new(),
            forbidden: Vec::new(),
        };
        self.flatten_into(&mut out);
        out
    }

    fn flatten_into<'a>(&'a self, out: &mut FlatRules<'a>) {
        match &self.constraint {
            Constraint::Allowed2x2(a) => out.allowed.push(a),
            Constraint::Distance(d) => out.distance.extend(d.iter()),
            Constraint::Compound { base, forbidden } => {
                base.flatten_into(out);
                out.forbidden.extend(forbidden.iter());
            }
        }
    }

    pub fn to_doc(&self) -> RulesDoc {
        let names = self.alphabet.names().to_vec();
        match &self.constraint {
            Constraint::Allowed2x2(a) => {
                let mut blocks: Vec<[u32; 4]> = a.iter().map(|b| b.map(|s| s.0)).collect();
                blocks.sort_unstable();
                RulesDoc::Allowed2x2 {
                    alphabet: names,
                    allowed: blocks,
                }
            }
            Constraint::Distance(rules) => RulesDoc::Distance {
                alphabet: names,
                rules: rules
                    .iter()
                    .map(|r| DistanceDoc {
                        classes: [r.a.clone(), r.b.clone()].map(|c| {
                            c.iter()
                                .map(|&s| self.alphabet.name(s).unwrap().to_string())
                                .collect()
                        }),
                        min_exclusive: r.min_exclusive,
                    })
                    .collect(),
            },
            Constraint::Compound { base, forbidden } => RulesDoc::Compound {
                base: Box::new(base.to_doc()),
                forbidden_words: forbidden.iter().map(|w| w.to_doc(&self.alphabet)).collect(),
            },
        }
    }

    pub fn from_doc(doc: RulesDoc) -> Result<Self, SftError> {
        match doc {
            RulesDoc::Allowed2x2 { alphabet, allowed } => SftRules::allowed_2x2(
                Alphabet::new(alphabet)?,
                allowed.into_iter().map(|b| b.map(Symbol)),
            ),
            RulesDoc::Distance { alphabet, rules } => {
                let alphabet = Alphabet::new(alphabet)?;
                let lookup = |names: &[String]| -> Result<Vec<Symbol>, SftError> {
                    names
                        .iter()
                        .map(|n| {
                            alphabet
                                .symbol(n)
                                .ok_or_else(|| SftError::InvalidRules(format!("unknown symbol {n:?}")))
                        })
                        .collect()
                };
                let mut out = Vec::new();
                for r in &rules {
                    out.push(DistanceRule::new(
                        lookup(&r.classes[0])?,
                        lookup(&r.classes[1])?,
                        r.min_exclusive,
                    ));
                }
                SftRules::distance(alphabet, out)
            }
            RulesDoc::Compound {
                base,
                forbidden_words,
            } => {
                let mut rules = SftRules::from_doc(*base)?;
                for w in forbidden_words {
                    let (a, p) = w.into_pattern()?;
                    if a != rules.alphabet {
                        return Err(SftError::InvalidRules(
                            "forbidden word alphabet differs from base".into(),
                        ));
                    }
                    rules = rules.forbid_word(p)?;
                }
                Ok(rules)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("rules serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, SftError> {
        let doc: RulesDoc = serde_json::from_str(text).map_err(|e| SftError::InvalidRules(e.to_string()))?;
        SftRules::from_doc(doc)
    }
}

pub(crate) struct FlatRules<'a> {
    pub allowed: Vec<&'a HashSet<Block2>>,
    pub distance: Vec<&'a DistanceRule>,
    pub forbidden: Vec<&'a Pattern>,
}

fn check_symbol(a: &Alphabet, s: Symbol) -> Result<(), SftError> {
    if a.contains(s) {
        Ok(())
    } else {
        Err(SftError::UnknownSymbol(s))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceDoc {
    pub classes: [Vec<String>; 2],
    pub min_exclusive: u32,
}

/// Serialized rules. Allowed blocks are row-major index quadruples, the same
/// value order a `rect [0,0,1,1]` pattern uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum RulesDoc {
    Allowed2x2 {
        alphabet: Vec<String>,
        allowed: Vec<[u32; 4]>,
    },
    Distance {
        alphabet: Vec<String>,
        rules: Vec<DistanceDoc>,
    },
    Compound {
        base: Box<RulesDoc>,
        forbidden_words: Vec<PatternDoc>,
    },
}

/// True iff no rule is violated inside `p.shape`.
pub fn is_locally_admissible(p: &Pattern, r: &SftRules) -> Result<bool, SftError> {
    Ok(first_violation(p, r)?.is_none())
}

/// A violated constraint, located by an anchor site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Block { lower_left: Coord },
    Distance { a: Coord, b: Coord },
    Word { index: usize, anchor: Coord },
}

pub fn first_violation(p: &Pattern, r: &SftRules) -> Result<Option<Violation>, SftError> {
    let mut out = None;
    scan_violations(p, r, &mut |v| {
        out = Some(v);
        false
    })?;
    Ok(out)
}

pub fn count_violations(p: &Pattern, r: &SftRules) -> Result<usize, SftError> {
    let mut n = 0;
    scan_violations(p, r, &mut |_| {
        n += 1;
        true
    })?;
    Ok(n)
}

/// Calls `f` on each violation until it returns false.
fn scan_violations(p: &Pattern, r: &SftRules, f: &mut dyn FnMut(Violation) -> bool) -> Result<(), SftError> {
    for (_, s) in p.iter() {
        check_symbol(&r.alphabet, s)?;
    }
    let flat = r.flatten();
    for allowed in &flat.allowed {
        if let Some((lo, w, h)) = p.shape().rect_dims() {
            let vals = p.values();
            for y in 0..h.saturating_sub(1) {
                for x in 0..w.saturating_sub(1) {
                    let i = y * w + x;
                    let b = [vals[i], vals[i + 1], vals[i + w], vals[i + w + 1]];
                    if !allowed.contains(&b) {
                        let ll = Coord::new(lo.x + x as i32, lo.y + y as i32);
                        if !f(Violation::Block { lower_left: ll }) {
                            return Ok(());
                        }
                    }
                }
            }
        } else {
            for c in p.shape().iter() {
                let sites = [
                    c,
                    Coord::new(c.x + 1, c.y),
                    Coord::new(c.x, c.y + 1),
                    Coord::new(c.x + 1, c.y + 1),
                ];
                let vals: Option<Vec<Symbol>> = sites.iter().map(|&t| p.get_opt(t)).collect();
                if let Some(v) = vals {
                    if !allowed.contains(&[v[0], v[1], v[2], v[3]]) && !f(Violation::Block { lower_left: c })
                    {
                        return Ok(());
                    }
                }
            }
        }
    }
    if !flat.distance.is_empty() {
        let rmax = flat.distance.iter().map(|d| d.min_exclusive).max().unwrap() as i32;
        let relevant: Vec<bool> = r
            .alphabet
            .symbols()
            .map(|s| flat.distance.iter().any(|d| d.a.contains(&s) || d.b.contains(&s)))
            .collect();
        for (c, s) in p.iter() {
            if !relevant[s.index()] {
                continue;
            }
            for dy in -rmax..=rmax {
                for dx in -rmax..=rmax {
                    let t = Coord::new(c.x + dx, c.y + dy);
                    // each unordered pair once
                    if t <= c {
                        continue;
                    }
                    if let Some(u) = p.get_opt(t) {
                        let dist = c.dist(t);
                        if flat.distance.iter().any(|d| d.forbids(s, u, dist))
                            && !f(Violation::Distance { a: c, b: t })
                        {
                            return Ok(());
                        }
                    }
                }
            }
        }
    }
    for (index, w) in flat.forbidden.iter().enumerate() {
        for anchor in occurrences(p, w) {
            if !f(Violation::Word { index, anchor }) {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Offsets `t` such that `w` shifted by `t` is a subpattern of `p`.
pub fn occurrences(p: &Pattern, w: &Pattern) -> Vec<Coord> {
    let Some(first) = w.shape().iter().next() else {
        return Vec::new();
    };
    let cells: Vec<(Coord, Symbol)> = w.iter().collect();
    let mut out = Vec::new();
    for (c, s) in p.iter() {
        if s != cells[0].1 {
            continue;
        }
        let t = c - first;
        if cells.iter().all(|&(d, v)| p.get_opt(d + t) == Some(v)) {
            out.push(t);
        }
    }
    out
}

/// The block at lower-left `c` of `p`, if fully present.
pub fn block_at(p: &Pattern, c: Coord) -> Option<Block2> {
    Some([
        p.get_opt(c)?,
        p.get_opt(Coord::new(c.x + 1, c.y))?,
        p.get_opt(Coord::new(c.x, c.y + 1))?,
        p.get_opt(Coord::new(c.x + 1, c.y + 1))?,
    ])
}

/// All 2×2 blocks occurring in `p`.
pub fn blocks_of(p: &Pattern) -> HashSet<Block2> {
    let mut out = HashSet::new();
    if let Some((lo, w, h)) = p.shape().rect_dims() {
        let v = p.values();
        for y in 0..h.saturating_sub(1) {
            for x in 0..w.saturating_sub(1) {
                let i = y * w + x;
                out.insert([v[i], v[i + 1], v[i + w], v[i + w + 1]]);
            }
        }
        let _ = lo;
    } else {
        for c in p.shape().iter() {
            if let Some(b) = block_at(p, c) {
                out.insert(b);
            }
        }
    }
    out
}

/// The 2×2 block pattern anchored at the origin.
pub fn block_pattern(b: Block2) -> Pattern {
    Pattern::new(Shape::rect(Coord::ORIGIN, Coord::new(1, 1)), b.to_vec()).expect("4 values")
}
