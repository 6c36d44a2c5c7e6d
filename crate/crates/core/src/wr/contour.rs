//! Contours and moats around a minus site, and the flip map built on them.

use std::collections::VecDeque;

use crate::grid::{Coord, Pattern, Shape};
use crate::sft::is_locally_admissible;

use super::{wr_rules, Board, WrError, WrParams, MINUS, PLUS, ZERO};

/// Adjacency used for connectivity of `U`-components, contours and insides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    /// ℓ∞ neighbours (8 per site).
    King,
    /// Edge neighbours (4 per site).
    Rook,
}

/// The convention for contour geometry, kept consistent with the ℓ∞ metric.
pub const CONTOUR_ADJACENCY: Connectivity = Connectivity::King;

/// The `(U, A, C, M)` decomposition around `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourData {
    pub v: Coord,
    pub k: i32,
    /// Union of the `R₂`-boxes around minus sites.
    pub u: Shape,
    /// The component of `U` containing `v`.
    pub a: Shape,
    /// Sites outside `A`, adjacent to it, and connected to the box boundary avoiding `A`.
    pub c: Shape,
    /// Sites of `A` within `R₂` of `C`.
    pub m: Shape,
    /// Sites within `R₂` of `C` that cannot reach the boundary without crossing `C`.
    pub m_from_c: Shape,
}

impl ContourData {
    pub fn moat_definitions_agree(&self) -> bool {
        self.m == self.m_from_c
    }
}

fn flood(board: &Board, start: impl Iterator<Item = usize>, pass: &[bool], conn: Connectivity) -> Vec<bool> {
    let mut seen = vec![false; board.len()];
    let mut queue = VecDeque::new();
    for s in start {
        if pass[s] && !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(i) = queue.pop_front() {
        let mut visit = |j: usize| {
            if pass[j] && !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        };
        match conn {
            Connectivity::King => board.neighbors8(i).for_each(&mut visit),
            Connectivity::Rook => board.neighbors4(i).for_each(&mut visit),
        }
    }
    seen
}

fn adjacent(board: &Board, i: usize, mask: &[bool], conn: Connectivity) -> bool {
    match conn {
        Connectivity::King => board.neighbors8(i).any(|j| mask[j]),
        Connectivity::Rook => board.neighbors4(i).any(|j| mask[j]),
    }
}

pub(crate) struct Masks {
    pub board: Board,
    pub u: Vec<bool>,
    pub a: Vec<bool>,
    pub outside: Vec<bool>,
    pub c: Vec<bool>,
    pub m: Vec<bool>,
    pub m_from_c: Vec<bool>,
}

fn board_of(x: &Pattern) -> Result<Board, WrError> {
    let Some((lo, w, h)) = x.shape().rect_dims() else {
        return Err(WrError::InvalidParams(
            "configuration must be a centred square".into(),
        ));
    };
    let k = (w as i32 - 1) / 2;
    if w != h || lo != Coord::new(-k, -k) {
        return Err(WrError::InvalidParams(
            "configuration must be a centred square".into(),
        ));
    }
    Ok(Board::new(k))
}

pub(crate) fn masks(x: &Pattern, v: Coord, p: WrParams) -> Result<Masks, WrError> {
    let board = board_of(x)?;
    if x.get_opt(v) != Some(MINUS) {
        return Err(WrError::NotMinusAtV(v));
    }
    let conn = CONTOUR_ADJACENCY;
    let vals = x.values();
    let minus: Vec<bool> = vals.iter().map(|&s| s == MINUS).collect();
    let u = board.dilate(&minus, p.r2 as i32);
    let a = flood(&board, std::iter::once(board.idx(v)), &u, conn);
    let not_a: Vec<bool> = a.iter().map(|&b| !b).collect();
    let ring = (0..board.len()).filter(|&i| board.on_ring(i));
    let outside = flood(&board, ring, &not_a, conn);
    let c: Vec<bool> = (0..board.len())
        .map(|i| outside[i] && adjacent(&board, i, &a, conn))
        .collect();
    let near_c = board.dilate(&c, p.r2 as i32);
    let m: Vec<bool> = (0..board.len()).map(|i| a[i] && near_c[i]).collect();
    let not_c: Vec<bool> = c.iter().map(|&b| !b).collect();
    let reach = flood(
        &board,
        (0..board.len()).filter(|&i| board.on_ring(i)),
        &not_c,
        conn,
    );
    let m_from_c: Vec<bool> = (0..board.len())
        .map(|i| near_c[i] && !c[i] && !reach[i])
        .collect();
    Ok(Masks {
        board,
        u,
        a,
        outside,
        c,
        m,
        m_from_c,
    })
}

/// Decomposes the full configuration `x` on `[-k, k]²` around the minus at `v`.
///
/// Fails with `InvariantViolated` if the moat carries a nonzero symbol or is
/// thinner than `R₂` where a cardinal line enters `A` from outside. Whether
/// the two moat definitions agree is recorded, not enforced.
pub fn contour_decompose(x: &Pattern, v: Coord, p: WrParams) -> Result<ContourData, WrError> {
    let ms = masks(x, v, p)?;
    let b = ms.board;
    for i in 0..b.len() {
        if ms.m[i] && x.values()[i] != ZERO {
            return Err(WrError::InvariantViolated(format!(
                "moat site {} is not 0",
                b.coord(i)
            )));
        }
    }
    check_thickness(&ms, p.r2 as usize)?;
    Ok(ContourData {
        v,
        k: b.k,
        u: b.mask_to_shape(&ms.u),
        a: b.mask_to_shape(&ms.a),
        c: b.mask_to_shape(&ms.c),
        m: b.mask_to_shape(&ms.m),
        m_from_c: b.mask_to_shape(&ms.m_from_c),
    })
}

/// Along every row and column, stepping from an outside site into `A` must be
/// followed by at least `R₂` consecutive moat sites.
fn check_thickness(ms: &Masks, r2: usize) -> Result<(), WrError> {
    let n = ms.board.side;
    let lines = (0..n)
        .map(|y| (0..n).map(move |x| y * n + x).collect::<Vec<_>>())
        .chain((0..n).map(|x| (0..n).map(move |y| y * n + x).collect::<Vec<_>>()));
    for line in lines {
        for dir in [false, true] {
            let seq: Vec<usize> = if dir {
                line.iter().rev().copied().collect()
            } else {
                line.clone()
            };
            for w in 0..seq.len().saturating_sub(1) {
                if ms.outside[seq[w]] && ms.a[seq[w + 1]] {
                    let run = seq[w + 1..].iter().take_while(|&&i| ms.m[i]).count();
                    if run < r2 {
                        return Err(WrError::InvariantViolated(format!(
                            "moat thickness {run} < R2 entering A at {}",
                            ms.board.coord(seq[w + 1])
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Flips to `+` every minus of `A` linked to the moat by a chain of minus
/// sites with gaps at most `R₂`.
///
/// The result is re-checked against the rules; a failure would contradict
/// the legality argument and is reported as `InvariantViolated`.
pub fn flip_rho(x: &Pattern, cd: &ContourData, p: WrParams) -> Result<Pattern, WrError> {
    let ms = masks(x, cd.v, p).map_err(|_| WrError::StaleContour)?;
    let b = ms.board;
    if b.mask_to_shape(&ms.a) != cd.a || b.mask_to_shape(&ms.m) != cd.m || b.mask_to_shape(&ms.c) != cd.c {
        return Err(WrError::StaleContour);
    }
    let out = flip_with_masks(x, &ms, p)?;
    if !is_locally_admissible(&out, &wr_rules(p))? {
        return Err(WrError::InvariantViolated("rho(x) is not admissible".into()));
    }
    Ok(out)
}

pub(crate) fn flip_with_masks(x: &Pattern, ms: &Masks, p: WrParams) -> Result<Pattern, WrError> {
    let b = ms.board;
    let r2 = p.r2 as i32;
    let vals = x.values();
    let near_m = b.dilate(&ms.m, r2);
    let mut flipped = vec![false; b.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for i in 0..b.len() {
        if ms.a[i] && vals[i] == MINUS && near_m[i] {
            flipped[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let c = b.coord(i);
        for y in (c.y - r2).max(-b.k)..=(c.y + r2).min(b.k) {
            for xx in (c.x - r2).max(-b.k)..=(c.x + r2).min(b.k) {
                let j = b.idx(Coord::new(xx, y));
                if !flipped[j] && ms.a[j] && vals[j] == MINUS {
                    flipped[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    let new: Vec<_> = vals
        .iter()
        .enumerate()
        .map(|(i, &s)| if flipped[i] { PLUS } else { s })
        .collect();
    Ok(Pattern::new(x.shape().clone(), new).map_err(crate::sft::SftError::from)?)
}
