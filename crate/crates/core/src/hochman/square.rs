use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::grid::{Coord, Pattern, Shape, Symbol};
use crate::sft::{Block2, SftRules};

use super::{arrow, side, ArrowKind, Color, HochmanError, TileSet, ARROW_COUNT};

pub const DEFAULT_LEVEL_CAP: u32 = 10;

/// Level whose NW-circuited square supplies the allowed 2×2 blocks.
pub const RULE_SOURCE_LEVEL: u32 = 3;

/// How blanks are labelled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlankLabels {
    Constant(u32),
    /// One label per blank, in row-major order.
    Explicit(Vec<u32>),
    /// Independent uniform labels from a seeded stream, row-major.
    Seeded(u64),
}

impl Default for BlankLabels {
    fn default() -> Self {
        BlankLabels::Constant(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSquare {
    pub n: u32,
    pub k: u32,
    /// On `[0, side)²`.
    pub pattern: Pattern,
    /// Row-major.
    pub blank_sites: Vec<Coord>,
}

/// Tile of the clockwise circuit of colour `color` on the ring of a
/// `q × q` square, or `None` off the ring.
pub(crate) fn circuit_tile(color: Color, r: Coord, q: i32) -> Option<Symbol> {
    let top = q - 1;
    let kind = match (r.x, r.y) {
        (0, 0) => ArrowKind::TurnSw,
        (x, 0) if x == top => ArrowKind::TurnSe,
        (x, y) if x == top && y == top => ArrowKind::TurnNe,
        (0, y) if y == top => ArrowKind::TurnNw,
        (_, 0) => ArrowKind::Left,
        (_, y) if y == top => ArrowKind::Right,
        (0, _) => ArrowKind::Up,
        (x, _) if x == top => ArrowKind::Down,
        _ => return None,
    };
    Some(arrow(color, kind))
}

/// Tile of `P_n` at `p ∈ [0, side(n))²` with blanks labelled 1, in `O(n)`.
pub fn level_square_tile(n: u32, p: Coord) -> Symbol {
    let (mut n, mut p) = (n, p);
    while n > 0 {
        let q = side(n - 1) as i32 + 2;
        let (qx, qy) = (p.x / q, p.y / q);
        let r = Coord::new(p.x - qx * q, p.y - qy * q);
        if let Some(t) = circuit_tile(Color::of_quadrant(qx, qy), r, q) {
            return t;
        }
        p = Coord::new(r.x - 1, r.y - 1);
        n -= 1;
    }
    Symbol(ARROW_COUNT)
}

fn render(n: u32, buf: &mut [Symbol], stride: usize, x0: usize, y0: usize) {
    if n == 0 {
        buf[y0 * stride + x0] = Symbol(ARROW_COUNT);
        return;
    }
    let q = side(n - 1) + 2;
    for color in Color::ALL {
        let (qx, qy) = color.quadrant();
        let (ox, oy) = (x0 + qx as usize * q, y0 + qy as usize * q);
        for i in 0..q {
            for (x, y) in [(i, 0), (i, q - 1), (0, i), (q - 1, i)] {
                let t = circuit_tile(color, Coord::new(x as i32, y as i32), q as i32).expect("ring site");
                buf[(oy + y) * stride + ox + x] = t;
            }
        }
        render(n - 1, buf, stride, ox + 1, oy + 1);
    }
}

/// Relabels the blanks of `p` (row-major order).
pub fn label_blanks(p: &Pattern, tiles: TileSet, labels: &BlankLabels) -> Result<Pattern, HochmanError> {
    let mut rng = match labels {
        BlankLabels::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let blanks = p.values().iter().filter(|&&s| tiles.is_blank(s)).count();
    if let BlankLabels::Explicit(v) = labels {
        if v.len() != blanks {
            return Err(HochmanError::InvalidArgument(format!(
                "{} labels for {blanks} blanks",
                v.len()
            )));
        }
    }
    let mut next = 0usize;
    let mut values = p.values().to_vec();
    for s in values.iter_mut() {
        if !tiles.is_blank(*s) {
            continue;
        }
        let label = match labels {
            BlankLabels::Constant(l) => *l,
            BlankLabels::Explicit(v) => v[next],
            BlankLabels::Seeded(_) => rng.as_mut().expect("seeded").gen_range(1..=tiles.k),
        };
        next += 1;
        *s = tiles.blank(label)?;
    }
    Ok(Pattern::new(p.shape().clone(), values).expect("same shape"))
}

/// `P_n` over `X_k`, placed on `[0, side(n))²`.
pub fn build_level_square(n: u32, k: u32, labels: &BlankLabels) -> Result<LevelSquare, HochmanError> {
    if n > DEFAULT_LEVEL_CAP {
        return Err(HochmanError::LevelTooLarge {
            n,
            cap: DEFAULT_LEVEL_CAP,
        });
    }
    if k == 0 {
        return Err(HochmanError::InvalidArgument("k must be positive".into()));
    }
    let s = side(n);
    let mut buf = vec![Symbol(0); s * s];
    render(n, &mut buf, s, 0, 0);
    let shape = Shape::rect(Coord::ORIGIN, Coord::new(s as i32 - 1, s as i32 - 1));
    let plain = Pattern::new(shape, buf).expect("side squared values");
    let tiles = TileSet::x(k);
    let pattern = label_blanks(&plain, tiles, labels)?;
    let blank_sites = pattern
        .iter()
        .filter(|(_, t)| tiles.is_blank(*t))
        .map(|(c, _)| c)
        .collect();
    Ok(LevelSquare {
        n,
        k,
        pattern,
        blank_sites,
    })
}

/// `P_n` surrounded by one circuit of colour `color`, on `[0, side(n) + 2)²`.
pub(crate) fn circuited(n: u32, color: Color) -> Pattern {
    let q = side(n) as i32 + 2;
    let shape = Shape::rect(Coord::ORIGIN, Coord::new(q - 1, q - 1));
    Pattern::from_fn(shape, |c| {
        circuit_tile(color, c, q).unwrap_or_else(|| level_square_tile(n, Coord::new(c.x - 1, c.y - 1)))
    })
}

/// 2×2 blocks of `P_level` + NW circuit, with every blank relabelled in all
/// `k` ways.
pub fn derived_blocks(level: u32, k: u32) -> HashSet<Block2> {
    let p = circuited(level, Color::NW);
    let (_, w, h) = p.shape().rect_dims().expect("rect");
    let v = p.values();
    let mut base = HashSet::new();
    for y in 0..h - 1 {
        for x in 0..w - 1 {
            let i = y * w + x;
            base.insert([v[i], v[i + 1], v[i + w], v[i + w + 1]]);
        }
    }
    let tiles = TileSet::x(k);
    let mut out = HashSet::new();
    for b in base {
        let mut partial = vec![b];
        for pos in 0..4 {
            if b[pos].0 != ARROW_COUNT {
                continue;
            }
            partial = partial
                .into_iter()
                .flat_map(|q| {
                    (1..=k).map(move |l| {
                        let mut q = q;
                        q[pos] = tiles.blank(l).expect("label in range");
                        q
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    out
}

/// The defining 2×2 rules of `X_k`.
pub fn derive_allowed_2x2(k: u32) -> SftRules {
    SftRules::allowed_2x2(TileSet::x(k).alphabet(), derived_blocks(RULE_SOURCE_LEVEL, k))
        .expect("blocks use tile symbols")
}

/// Whether the block set is the same from `P_3` and `P_4`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleStability {
    pub from_p3: usize,
    pub from_p4: usize,
    pub equal: bool,
    /// Blocks present in one set only, as tile names.
    pub differences: Vec<[String; 4]>,
}

pub fn rule_stability(k: u32) -> RuleStability {
    let a = derived_blocks(3, k);
    let b = derived_blocks(4, k);
    let alpha = TileSet::x(k).alphabet();
    let name = |s: Symbol| alpha.name(s).unwrap_or("?").to_string();
    let differences: BTreeSet<[String; 4]> = a
        .symmetric_difference(&b)
        .map(|q| [name(q[0]), name(q[1]), name(q[2]), name(q[3])])
        .collect();
    RuleStability {
        from_p3: a.len(),
        from_p4: b.len(),
        equal: differences.is_empty(),
        differences: differences.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::is_locally_admissible;

    #[test]
    fn level_zero_is_blank() {
        let p = build_level_square(0, 2, &BlankLabels::Constant(2)).unwrap();
        assert_eq!(p.pattern.len(), 1);
        assert_eq!(p.pattern.values()[0], TileSet::x(2).blank(2).unwrap());
    }

    #[test]
    fn render_matches_pointwise() {
        for n in 0..5 {
            let p = build_level_square(n, 1, &BlankLabels::default()).unwrap();
            assert_eq!(p.blank_sites.len(), 4usize.pow(n));
            for (c, s) in p.pattern.iter() {
                assert_eq!(level_square_tile(n, c), s);
            }
        }
    }

    #[test]
    fn stable_and_consistent() {
        let st = rule_stability(1);
        assert!(st.equal, "{:?}", st.differences);
        let rules = derive_allowed_2x2(2);
        let p = build_level_square(5, 2, &BlankLabels::Seeded(3)).unwrap();
        assert!(is_locally_admissible(&p.pattern, &rules).unwrap());
        let t = TileSet::x(1);
        let bl = t.blank(1).unwrap();
        assert!(!derived_blocks(3, 1).contains(&[bl; 4]));
    }
}
