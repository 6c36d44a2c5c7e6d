//! Backtracking enumeration of locally admissible fillings.
//!
//! Sites are filled in row-major order and symbols tried in index order, so
//! every enumeration is deterministic. Distance rules are forward-checked
//! through per-site blocking counters; block rules and forbidden words are
//! checked as soon as the last free site of a window is assigned.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::grid::{Coord, Pattern, Shape, Symbol};

use super::rules::{is_locally_admissible, Block2, SftRules};
use super::SftError;

/// Default cap on search nodes (symbol trials) per enumeration.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Sites pinned during enumeration or sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition {
    pub fixed: Pattern,
}

impl BoundaryCondition {
    pub fn new(fixed: Pattern) -> Self {
        BoundaryCondition { fixed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub node_budget: u64,
    /// Split the first free site's choices across threads (count mode only).
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: DEFAULT_NODE_BUDGET,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationMode {
    Count,
    List,
    Stream,
}

pub enum Enumeration {
    Count(BigUint),
    List(Vec<Pattern>),
    Stream(AdmissibleIter),
}

/// Enumerates patterns on `region` that are locally admissible together with `bc`.
pub fn enumerate_admissible(
    region: &Shape,
    rules: &SftRules,
    bc: Option<&BoundaryCondition>,
    mode: EnumerationMode,
) -> Result<Enumeration, SftError> {
    let opts = SearchOptions::default();
    Ok(match mode {
        EnumerationMode::Count => Enumeration::Count(count_admissible(region, rules, bc, opts)?),
        EnumerationMode::List => {
            Enumeration::List(stream_admissible(region, rules, bc, opts)?.collect::<Result<_, _>>()?)
        }
        EnumerationMode::Stream => Enumeration::Stream(stream_admissible(region, rules, bc, opts)?),
    })
}

pub fn count_admissible(
    region: &Shape,
    rules: &SftRules,
    bc: Option<&BoundaryCondition>,
    opts: SearchOptions,
) -> Result<BigUint, SftError> {
    let compiled = Compiled::new(region, rules, bc)?;
    if opts.parallel && !compiled.order.is_empty() && compiled.feasible {
        let q = compiled.q as u32;
        let parts: Vec<Result<u128, SftError>> = (0..q)
            .into_par_iter()
            .map(|s| {
                let mut search = Search::new(compiled.clone(), opts.node_budget);
                if !search.force_first(s) {
                    return Ok(0);
                }
                search.count()
            })
            .collect();
        let mut total = BigUint::from(0u32);
        for p in parts {
            total += p?;
        }
        return Ok(total);
    }
    Ok(BigUint::from(Search::new(compiled, opts.node_budget).count()?))
}

pub fn list_admissible(
    region: &Shape,
    rules: &SftRules,
    bc: Option<&BoundaryCondition>,
    opts: SearchOptions,
) -> Result<Vec<Pattern>, SftError> {
    stream_admissible(region, rules, bc, opts)?.collect()
}

pub fn stream_admissible(
    region: &Shape,
    rules: &SftRules,
    bc: Option<&BoundaryCondition>,
    opts: SearchOptions,
) -> Result<AdmissibleIter, SftError> {
    let compiled = Compiled::new(region, rules, bc)?;
    Ok(AdmissibleIter {
        search: Search::new(compiled, opts.node_budget),
        region: region.clone(),
        failed: false,
    })
}

/// Lazily yields admissible patterns; yields one error and stops if the node budget runs out.
pub struct AdmissibleIter {
    search: Search,
    region: Shape,
    failed: bool,
}

impl AdmissibleIter {
    pub fn nodes(&self) -> u64 {
        self.search.nodes
    }
}

impl Iterator for AdmissibleIter {
    type Item = Result<Pattern, SftError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        match self.search.next_solution() {
            Ok(true) => {
                Some(Ok(Pattern::new(self.region.clone(), self.search.current())
                    .expect("one value per region site")))
            }
            Ok(false) => None,
            Err(e) => {
                self.failed = true;
                Some(Err(e))
            }
        }
    }
}

const NONE: u32 = u32::MAX;

#[derive(Clone)]
enum Check {
    Block { set: usize, cells: [usize; 4] },
    Word { cells: Vec<(usize, u32)> },
}

#[derive(Clone)]
struct DistanceCompiled {
    a: Vec<bool>,
    b: Vec<bool>,
    offsets: Vec<(i32, i32)>,
}

#[derive(Clone)]
struct Compiled {
    q: usize,
    w: usize,
    h: usize,
    vals: Vec<u32>,
    rank: Vec<u32>,
    order: Vec<usize>,
    checks: Vec<Vec<Check>>,
    allowed: Vec<std::sync::Arc<std::collections::HashSet<Block2>>>,
    distance: Vec<DistanceCompiled>,
    blocked: Vec<u32>,
    feasible: bool,
}

impl Compiled {
    fn new(region: &Shape, rules: &SftRules, bc: Option<&BoundaryCondition>) -> Result<Self, SftError> {
        let q = rules.alphabet().len();
        let fixed = bc.map(|b| &b.fixed);
        if let Some(f) = fixed {
            if let Some(c) = region.first_common_site(f.shape()) {
                return Err(SftError::OverlappingBoundary(c));
            }
        }
        let feasible = match fixed {
            Some(f) => is_locally_admissible(f, rules)?,
            None => true,
        };
        let (lo, hi) = match (
            region.bounding_box(),
            fixed.and_then(|f| f.shape().bounding_box()),
        ) {
            (Some((a, b)), Some((c, d))) => (
                Coord::new(a.x.min(c.x), a.y.min(c.y)),
                Coord::new(b.x.max(d.x), b.y.max(d.y)),
            ),
            (Some(r), None) | (None, Some(r)) => r,
            (None, None) => (Coord::ORIGIN, Coord::new(-1, -1)),
        };
        let w = (hi.x - lo.x + 1).max(0) as usize;
        let h = (hi.y - lo.y + 1).max(0) as usize;
        let idx = |c: Coord| (c.y - lo.y) as usize * w + (c.x - lo.x) as usize;
        let mut vals = vec![NONE; w * h];
        let mut present = vec![false; w * h];
        let mut rank = vec![NONE; w * h];
        let mut order = Vec::with_capacity(region.len());
        for c in region.iter() {
            let i = idx(c);
            rank[i] = order.len() as u32;
            present[i] = true;
            order.push(i);
        }
        if let Some(f) = fixed {
            for (c, s) in f.iter() {
                vals[idx(c)] = s.0;
                present[idx(c)] = true;
            }
        }

        let flat = rules.flatten();
        let mut checks: Vec<Vec<Check>> = vec![Vec::new(); order.len()];
        let allowed: Vec<_> = flat
            .allowed
            .iter()
            .map(|a| std::sync::Arc::new((*a).clone()))
            .collect();
        let last_rank =
            |cells: &[usize]| -> Option<u32> { cells.iter().map(|&i| rank[i]).filter(|&r| r != NONE).max() };
        if !allowed.is_empty() && w >= 2 && h >= 2 {
            for y in 0..h - 1 {
                for x in 0..w - 1 {
                    let i = y * w + x;
                    let cells = [i, i + 1, i + w, i + w + 1];
                    if !cells.iter().all(|&c| present[c]) {
                        continue;
                    }
                    if let Some(r) = last_rank(&cells) {
                        for set in 0..allowed.len() {
                            checks[r as usize].push(Check::Block { set, cells });
                        }
                    }
                }
            }
        }
        for word in &flat.forbidden {
            let Some((wlo, whi)) = word.shape().bounding_box() else {
                continue;
            };
            let (ww, wh) = (whi.x - wlo.x, whi.y - wlo.y);
            for ty in lo.y - wlo.y..=hi.y - wlo.y - wh {
                for tx in lo.x - wlo.x..=hi.x - wlo.x - ww {
                    let t = Coord::new(tx, ty);
                    let cells: Option<Vec<(usize, u32)>> = word
                        .iter()
                        .map(|(c, s)| {
                            let i = idx(c + t);
                            present[i].then_some((i, s.0))
                        })
                        .collect();
                    let Some(cells) = cells else { continue };
                    let ids: Vec<usize> = cells.iter().map(|c| c.0).collect();
                    if let Some(r) = last_rank(&ids) {
                        checks[r as usize].push(Check::Word { cells });
                    }
                }
            }
        }

        let distance: Vec<DistanceCompiled> = flat
            .distance
            .iter()
            .map(|d| {
                let mut a = vec![false; q];
                let mut b = vec![false; q];
                for s in &d.a {
                    a[s.index()] = true;
                }
                for s in &d.b {
                    b[s.index()] = true;
                }
                let r = d.min_exclusive as i32;
                let offsets = (-r..=r)
                    .flat_map(|dy| (-r..=r).map(move |dx| (dx, dy)))
                    .filter(|&o| o != (0, 0))
                    .collect();
                DistanceCompiled { a, b, offsets }
            })
            .collect();
        let blocked = if distance.is_empty() {
            Vec::new()
        } else {
            vec![0; w * h * q]
        };

        let mut out = Compiled {
            q,
            w,
            h,
            vals,
            rank,
            order,
            checks,
            allowed,
            distance,
            blocked,
            feasible,
        };
        if let Some(f) = fixed {
            for (c, s) in f.iter() {
                out.apply_blocks(idx(c), s.0, 0, 1);
            }
        }
        Ok(out)
    }

    /// Adjusts blocking counters of free sites with rank ≥ `from_rank` near board cell `i`.
    fn apply_blocks(&mut self, i: usize, s: u32, from_rank: u32, delta: i32) {
        if self.distance.is_empty() {
            return;
        }
        let (x, y) = ((i % self.w) as i32, (i / self.w) as i32);
        let q = self.q;
        for d in &self.distance {
            let (in_a, in_b) = (d.a[s as usize], d.b[s as usize]);
            if !in_a && !in_b {
                continue;
            }
            for &(dx, dy) in &d.offsets {
                let (tx, ty) = (x + dx, y + dy);
                if tx < 0 || ty < 0 || tx >= self.w as i32 || ty >= self.h as i32 {
                    continue;
                }
                let t = ty as usize * self.w + tx as usize;
                let r = self.rank[t];
                if r == NONE || r < from_rank {
                    continue;
                }
                let base = t * q;
                for sym in 0..q {
                    if (in_a && d.b[sym]) || (in_b && d.a[sym]) {
                        let c = &mut self.blocked[base + sym];
                        *c = (*c as i32 + delta) as u32;
                    }
                }
            }
        }
    }

    fn try_assign(&mut self, r: usize, s: u32) -> bool {
        let i = self.order[r];
        if !self.blocked.is_empty() && self.blocked[i * self.q + s as usize] != 0 {
            return false;
        }
        self.vals[i] = s;
        let ok = self.checks[r].iter().all(|c| match c {
            Check::Block { set, cells } => {
                let b = cells.map(|j| Symbol(self.vals[j]));
                self.allowed[*set].contains(&b)
            }
            Check::Word { cells } => !cells.iter().all(|&(j, v)| self.vals[j] == v),
        });
        if !ok {
            self.vals[i] = NONE;
            return false;
        }
        self.apply_blocks(i, s, r as u32 + 1, 1);
        true
    }

    fn unassign(&mut self, r: usize) {
        let i = self.order[r];
        let s = self.vals[i];
        self.apply_blocks(i, s, r as u32 + 1, -1);
        self.vals[i] = NONE;
    }
}

struct Search {
    c: Compiled,
    depth: usize,
    floor: usize,
    cand: Vec<u32>,
    at_solution: bool,
    done: bool,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn new(c: Compiled, budget: u64) -> Self {
        let n = c.order.len();
        let done = !c.feasible;
        Search {
            c,
            depth: 0,
            floor: 0,
            cand: vec![0; n + 1],
            at_solution: false,
            done,
            nodes: 0,
            budget,
        }
    }

    /// Pins the first free site to `s`; later search never revisits it.
    fn force_first(&mut self, s: u32) -> bool {
        if self.done || !self.c.try_assign(0, s) {
            self.done = true;
            return false;
        }
        self.depth = 1;
        self.floor = 1;
        true
    }

    fn current(&self) -> Vec<Symbol> {
        self.c.order.iter().map(|&i| Symbol(self.c.vals[i])).collect()
    }

    fn count(&mut self) -> Result<u128, SftError> {
        let mut n = 0u128;
        while self.next_solution()? {
            n += 1;
        }
        Ok(n)
    }

    fn next_solution(&mut self) -> Result<bool, SftError> {
        if self.done {
            return Ok(false);
        }
        let n = self.c.order.len();
        let q = self.c.q as u32;
        if self.at_solution {
            self.at_solution = false;
            if n == self.floor {
                self.done = true;
                return Ok(false);
            }
            self.depth = n - 1;
            self.c.unassign(n - 1);
        }
        loop {
            let d = self.depth;
            if d == n {
                self.at_solution = true;
                return Ok(true);
            }
            let mut found = false;
            while self.cand[d] < q {
                let s = self.cand[d];
                self.cand[d] += 1;
                self.nodes += 1;
                if self.nodes > self.budget {
                    self.done = true;
                    return Err(SftError::RegionTooLarge { budget: self.budget });
                }
                if self.c.try_assign(d, s) {
                    found = true;
                    break;
                }
            }
            if found {
                self.depth += 1;
                self.cand[self.depth] = 0;
                continue;
            }
            self.cand[d] = 0;
            if d == self.floor {
                self.done = true;
                return Ok(false);
            }
            self.depth -= 1;
            self.c.unassign(self.depth);
        }
    }
}
