//! Fixed lattice animals (edge-connected polyominoes up to translation).
//!
//! Enumeration is Redelmeier's method: grow from a root cell, only ever
//! adding cells in the upper half-plane order, so every animal is produced
//! exactly once with its lowest-then-leftmost cell at the origin.

use crate::grid::Coord;

use super::WrError;

pub const MAX_ANIMAL_SIZE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnimalMode {
    /// Number of animals of size `n`.
    Animals,
    /// Placements of size-`n` animals with the origin in a bounded
    /// component of the complement (edge-connected), summed over animals.
    ContoursSurroundingOrigin,
}

fn check_size(n: usize) -> Result<(), WrError> {
    if n > MAX_ANIMAL_SIZE {
        return Err(WrError::TooLarge {
            n,
            cap: MAX_ANIMAL_SIZE,
        });
    }
    Ok(())
}

/// Calls `visit` once for every fixed animal of size `1..=n_max`.
fn redelmeier(n_max: usize, visit: &mut dyn FnMut(&[Coord])) {
    if n_max == 0 {
        return;
    }
    let n = n_max as i32;
    let w = (2 * n + 1) as usize;
    let idx = |c: Coord| (c.y as usize) * w + (c.x + n) as usize;
    let mut seen = vec![false; w * (n as usize + 1)];
    let allowed = |c: Coord| (c.y > 0 || (c.y == 0 && c.x >= 0)) && c.y <= n && c.x.abs() <= n;
    seen[idx(Coord::ORIGIN)] = true;
    let mut poly = Vec::with_capacity(n_max);

    fn rec(
        mut untried: Vec<Coord>,
        poly: &mut Vec<Coord>,
        seen: &mut Vec<bool>,
        n_max: usize,
        idx: &dyn Fn(Coord) -> usize,
        allowed: &dyn Fn(Coord) -> bool,
        visit: &mut dyn FnMut(&[Coord]),
    ) {
        while let Some(c) = untried.pop() {
            poly.push(c);
            visit(poly);
            if poly.len() < n_max {
                let mut added = Vec::new();
                for nb in c.rook_neighbors() {
                    if allowed(nb) && !seen[idx(nb)] {
                        seen[idx(nb)] = true;
                        added.push(nb);
                    }
                }
                let mut next = untried.clone();
                next.extend_from_slice(&added);
                rec(next, poly, seen, n_max, idx, allowed, visit);
                for a in added {
                    seen[idx(a)] = false;
                }
            }
            poly.pop();
        }
    }

    rec(
        vec![Coord::ORIGIN],
        &mut poly,
        &mut seen,
        n_max,
        &idx,
        &allowed,
        visit,
    );
}

/// Counts of fixed animals for sizes `1..=n_max`.
pub fn count_fixed_animals(n_max: usize) -> Result<Vec<u64>, WrError> {
    check_size(n_max)?;
    let mut counts = vec![0u64; n_max];
    redelmeier(n_max, &mut |p| counts[p.len() - 1] += 1);
    Ok(counts)
}

/// All fixed animals of size `n`, each as a sorted site list anchored at the origin.
pub fn fixed_animals(n: usize) -> Result<Vec<Vec<Coord>>, WrError> {
    check_size(n)?;
    let mut out = Vec::new();
    redelmeier(n, &mut |p| {
        if p.len() == n {
            let mut v = p.to_vec();
            v.sort_unstable();
            out.push(v);
        }
    });
    Ok(out)
}

/// Cells in bounded edge-connected components of the complement.
pub fn hole_count(cells: &[Coord]) -> usize {
    if cells.is_empty() {
        return 0;
    }
    let (mut lo, mut hi) = (cells[0], cells[0]);
    for c in cells {
        lo = Coord::new(lo.x.min(c.x), lo.y.min(c.y));
        hi = Coord::new(hi.x.max(c.x), hi.y.max(c.y));
    }
    let (x0, y0) = (lo.x - 1, lo.y - 1);
    let w = (hi.x - lo.x + 3) as usize;
    let h = (hi.y - lo.y + 3) as usize;
    let mut grid = vec![0u8; w * h]; // 0 free, 1 cell, 2 reached
    for c in cells {
        grid[(c.y - y0) as usize * w + (c.x - x0) as usize] = 1;
    }
    let mut stack = vec![0usize];
    grid[0] = 2;
    while let Some(i) = stack.pop() {
        let (x, y) = (i % w, i / w);
        let mut push = |j: usize| {
            if grid[j] == 0 {
                grid[j] = 2;
                stack.push(j);
            }
        };
        if x > 0 {
            push(i - 1);
        }
        if x + 1 < w {
            push(i + 1);
        }
        if y > 0 {
            push(i - w);
        }
        if y + 1 < h {
            push(i + w);
        }
    }
    grid.iter().filter(|&&g| g == 0).count()
}

/// Exhaustive count in the given mode, checked against `8^n` (animals) or
/// `32^n` (contours surrounding the origin).
pub fn enumerate_lattice_animals(n: usize, mode: AnimalMode) -> Result<u64, WrError> {
    check_size(n)?;
    if n == 0 {
        return Ok(0);
    }
    let (count, cap) = match mode {
        AnimalMode::Animals => (count_fixed_animals(n)?[n - 1], 8u128.pow(n as u32)),
        AnimalMode::ContoursSurroundingOrigin => {
            let mut total = 0u64;
            redelmeier(n, &mut |p| {
                if p.len() == n {
                    total += hole_count(p) as u64;
                }
            });
            (total, 32u128.pow(n as u32))
        }
    };
    if count as u128 > cap {
        return Err(WrError::InvariantViolated(format!(
            "{count} exceeds the bound {cap} at size {n}"
        )));
    }
    Ok(count)
}
