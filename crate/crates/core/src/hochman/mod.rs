//! Hochman's hierarchical shift `X_k` and the relabelled shifts `Y_{m,n}`.
//!
//! Symbols are laid out as 32 coloured arrows (`color * 8 + kind`), then
//! `k` labelled blanks, then `m` corner labels `c:i` (only in `Y` alphabets).
//! Level squares are built recursively by surrounding four copies of the
//! previous level with clockwise circuits, one colour per quadrant.

mod locate;
mod omega;
mod square;
mod ymn;

use std::fmt;

use thiserror::Error;

use crate::grid::{Alphabet, Symbol};
use crate::sft::SftError;

pub use locate::{
    check_containment, corner_frequency, goheels_ratio, locate_level_subsquares, measured_alpha,
    ContainmentReport, CornerFrequency, WindowSample,
};
pub use omega::{build_x_omega_window, omega_box, OmegaPrefix};
pub use square::{
    build_level_square, derive_allowed_2x2, derived_blocks, label_blanks, level_square_tile, rule_stability,
    BlankLabels, LevelSquare, RuleStability, DEFAULT_LEVEL_CAP, RULE_SOURCE_LEVEL,
};
pub(crate) use ymn::{census_sum, window_census};
pub use ymn::{
    chi_square_uniform, count_relabelings, pi_project, relabel_to_y, restore_x, sample_mu_prime,
    y_locally_admissible, ymn_pattern_count, ChiSquare, CornerLabeling, YmnCount,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HochmanError {
    #[error("level {n} exceeds the cap {cap}")]
    LevelTooLarge { n: u32, cap: u32 },
    #[error("prefix of length {len} does not cover radius {radius}")]
    PrefixTooShort { len: usize, radius: i32 },
    #[error("label {label} is outside 1..={max}")]
    LabelOutOfRange { label: u32, max: u32 },
    #[error("window size {big_n} exceeds the side {side} of the generating square")]
    LevelTooSmall { big_n: usize, side: usize },
    #[error("no level-{0} squares found")]
    NoOccurrences(u32),
    #[error("symbol {0} is not in the tile alphabet")]
    UnknownTile(u32),
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Sft(#[from] SftError),
}

/// Quadrant colour of an arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    NW,
    NE,
    SW,
    SE,
}

impl Color {
    pub const ALL: [Color; 4] = [Color::NW, Color::NE, Color::SW, Color::SE];

    /// Quadrant `(qx, qy)` with `(0, 0)` at the lower left.
    pub fn of_quadrant(qx: i32, qy: i32) -> Color {
        match (qx, qy) {
            (0, 1) => Color::NW,
            (1, 1) => Color::NE,
            (0, 0) => Color::SW,
            _ => Color::SE,
        }
    }

    pub fn quadrant(self) -> (i32, i32) {
        match self {
            Color::NW => (0, 1),
            Color::NE => (1, 1),
            Color::SW => (0, 0),
            Color::SE => (1, 0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::NW => "NW",
            Color::NE => "NE",
            Color::SW => "SW",
            Color::SE => "SE",
        }
    }

    pub fn parse(s: &str) -> Option<Color> {
        Color::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }
}

/// Straight arrows and the four clockwise turns, named by the corner of the
/// circuit they sit in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArrowKind {
    Up,
    Down,
    Left,
    Right,
    TurnNe,
    TurnSe,
    TurnSw,
    TurnNw,
}

impl ArrowKind {
    pub const ALL: [ArrowKind; 8] = [
        ArrowKind::Up,
        ArrowKind::Down,
        ArrowKind::Left,
        ArrowKind::Right,
        ArrowKind::TurnNe,
        ArrowKind::TurnSe,
        ArrowKind::TurnSw,
        ArrowKind::TurnNw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ArrowKind::Up => "up",
            ArrowKind::Down => "down",
            ArrowKind::Left => "left",
            ArrowKind::Right => "right",
            ArrowKind::TurnNe => "turn_ne",
            ArrowKind::TurnSe => "turn_se",
            ArrowKind::TurnSw => "turn_sw",
            ArrowKind::TurnNw => "turn_nw",
        }
    }
}

/// A decoded tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TileSymbol {
    Arrow { color: Color, kind: ArrowKind },
    Blank { label: u32 },
    CornerLabel { i: u32 },
}

impl fmt::Display for TileSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TileSymbol::Arrow { color, kind } => write!(f, "{}:{}", color.name(), kind.name()),
            TileSymbol::Blank { label } => write!(f, "blank:{label}"),
            TileSymbol::CornerLabel { i } => write!(f, "c:{i}"),
        }
    }
}

pub const ARROW_COUNT: u32 = 32;

pub const fn arrow(color: Color, kind: ArrowKind) -> Symbol {
    Symbol(color as u32 * 8 + kind as u32)
}

/// The lower-left tile of every level square above level 0.
pub const SW_CORNER: Symbol = arrow(Color::SW, ArrowKind::TurnSw);

/// `k` blank labels and `m` corner labels on top of the 32 arrows.
/// `X_k` is `TileSet { k, m: 0 }`; `Y_{m,n}` uses `TileSet { k: 1, m }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TileSet {
    pub k: u32,
    pub m: u32,
}

impl TileSet {
    pub fn x(k: u32) -> TileSet {
        TileSet { k, m: 0 }
    }

    pub fn y(m: u32) -> TileSet {
        TileSet { k: 1, m }
    }

    pub fn len(self) -> usize {
        (ARROW_COUNT + self.k + self.m) as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn blank(self, label: u32) -> Result<Symbol, HochmanError> {
        if label == 0 || label > self.k {
            return Err(HochmanError::LabelOutOfRange { label, max: self.k });
        }
        Ok(Symbol(ARROW_COUNT + label - 1))
    }

    pub fn corner(self, i: u32) -> Result<Symbol, HochmanError> {
        if i == 0 || i > self.m {
            return Err(HochmanError::LabelOutOfRange {
                label: i,
                max: self.m,
            });
        }
        Ok(Symbol(ARROW_COUNT + self.k + i - 1))
    }

    pub fn is_blank(self, s: Symbol) -> bool {
        (ARROW_COUNT..ARROW_COUNT + self.k).contains(&s.0)
    }

    pub fn is_corner(self, s: Symbol) -> bool {
        (ARROW_COUNT + self.k..ARROW_COUNT + self.k + self.m).contains(&s.0)
    }

    pub fn decode(self, s: Symbol) -> Result<TileSymbol, HochmanError> {
        let i = s.0;
        if i < ARROW_COUNT {
            Ok(TileSymbol::Arrow {
                color: Color::ALL[(i / 8) as usize],
                kind: ArrowKind::ALL[(i % 8) as usize],
            })
        } else if self.is_blank(s) {
            Ok(TileSymbol::Blank {
                label: i - ARROW_COUNT + 1,
            })
        } else if self.is_corner(s) {
            Ok(TileSymbol::CornerLabel {
                i: i - ARROW_COUNT - self.k + 1,
            })
        } else {
            Err(HochmanError::UnknownTile(i))
        }
    }

    pub fn encode(self, t: TileSymbol) -> Result<Symbol, HochmanError> {
        match t {
            TileSymbol::Arrow { color, kind } => Ok(arrow(color, kind)),
            TileSymbol::Blank { label } => self.blank(label),
            TileSymbol::CornerLabel { i } => self.corner(i),
        }
    }

    /// Names like `NW:up`, `blank:3`, `c:2`.
    pub fn alphabet(self) -> Alphabet {
        let names = (0..self.len() as u32).map(|i| self.decode(Symbol(i)).expect("in range").to_string());
        Alphabet::new(names).expect("tile names are distinct")
    }

    pub(crate) fn check(self, s: Symbol) -> Result<(), HochmanError> {
        if s.index() < self.len() {
            Ok(())
        } else {
            Err(HochmanError::UnknownTile(s.0))
        }
    }
}

/// Side `5·2ⁿ − 4` of the level-`n` square.
pub fn side(n: u32) -> usize {
    5 * (1usize << n) - 4
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_layout() {
        let t = TileSet::x(3);
        let a = t.alphabet();
        assert_eq!(a.len(), 35);
        assert_eq!(a.name(arrow(Color::NW, ArrowKind::Up)), Some("NW:up"));
        assert_eq!(a.name(SW_CORNER), Some("SW:turn_sw"));
        assert_eq!(a.symbol("blank:3"), Some(Symbol(34)));
        let y = TileSet::y(2).alphabet();
        assert_eq!(y.symbol("c:2"), Some(Symbol(34)));
        for s in a.symbols() {
            assert_eq!(t.encode(t.decode(s).unwrap()).unwrap(), s);
        }
    }

    #[test]
    fn sides() {
        assert_eq!(side(0), 1);
        assert_eq!(side(3), 36);
        for n in 0..10 {
            assert_eq!(side(n + 1), 2 * side(n) + 4);
        }
    }
}
