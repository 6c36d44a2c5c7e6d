use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::entropy::ln_biguint;
use crate::grid::Pattern;
use crate::sft::is_locally_admissible;

use super::locate::locate_level_subsquares;
use super::square::{build_level_square, derive_allowed_2x2, BlankLabels};
use super::{side, HochmanError, TileSet, SW_CORNER};

/// Labels for the located corners, in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CornerLabeling {
    Constant(u32),
    Explicit(Vec<u32>),
    Seeded(u64),
}

fn check_x1(p: &Pattern) -> Result<(), HochmanError> {
    let t = TileSet::x(1);
    for &s in p.values() {
        t.check(s)?;
    }
    Ok(())
}

/// Replaces the lower-left corner of every level-`n` square lying inside
/// `p` (over `X_1`) with a corner label `c:i`.
pub fn relabel_to_y(p: &Pattern, n: u32, m: u32, labeling: &CornerLabeling) -> Result<Pattern, HochmanError> {
    check_x1(p)?;
    let y = TileSet::y(m);
    let corners = locate_level_subsquares(p, n, TileSet::x(1));
    let labels: Vec<u32> = match labeling {
        CornerLabeling::Constant(i) => vec![*i; corners.len()],
        CornerLabeling::Explicit(v) => {
            if v.len() != corners.len() {
                return Err(HochmanError::InvalidArgument(format!(
                    "{} labels for {} corners",
                    v.len(),
                    corners.len()
                )));
            }
            v.clone()
        }
        CornerLabeling::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..corners.len()).map(|_| rng.gen_range(1..=m.max(1))).collect()
        }
    };
    let mut out = p.clone();
    for (c, i) in corners.into_iter().zip(labels) {
        out.set(c, y.corner(i)?).expect("corner inside");
    }
    Ok(out)
}

/// `π`: every `c:i` becomes `c:1`, giving a `Y_{1,n}` pattern.
pub fn pi_project(p: &Pattern, m: u32) -> Result<Pattern, HochmanError> {
    let y = TileSet::y(m);
    let c1 = TileSet::y(1).corner(1)?;
    for &s in p.values() {
        y.check(s)?;
    }
    Ok(p.map_symbols(|s| if y.is_corner(s) { c1 } else { s }))
}

/// Every `c:i` becomes the tile it replaced, giving the `X_1` pattern: the
/// SW corner arrow, or the blank itself at level 0.
pub fn restore_x(p: &Pattern, n: u32, m: u32) -> Result<Pattern, HochmanError> {
    let y = TileSet::y(m);
    for &s in p.values() {
        y.check(s)?;
    }
    let back = if n == 0 { y.blank(1)? } else { SW_CORNER };
    Ok(p.map_symbols(|s| if y.is_corner(s) { back } else { s }))
}

/// Admissibility of a `Y_{m,n}` pattern: its restoration is admissible in
/// `X_1`, every level-`n` square inside it has a labelled corner, and every
/// label whose square fits inside sits on such a corner.
pub fn y_locally_admissible(p: &Pattern, n: u32, m: u32) -> Result<bool, HochmanError> {
    let x = restore_x(p, n, m)?;
    if !is_locally_admissible(&x, &derive_allowed_2x2(1))? {
        return Ok(false);
    }
    let y = TileSet::y(m);
    let corners: HashSet<_> = locate_level_subsquares(&x, n, TileSet::x(1))
        .into_iter()
        .collect();
    let s = side(n) as i32 - 1;
    for (c, v) in p.iter() {
        let fits = p.shape().contains(crate::grid::Coord::new(c.x + s, c.y + s));
        if y.is_corner(v) && fits && !corners.contains(&c) {
            return Ok(false);
        }
        if corners.contains(&c) && !y.is_corner(v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `m^{4^{big-n}}`, the number of labelings of the level-`n` corners of `P_big`.
pub fn count_relabelings(big: u32, n: u32, m: u32) -> BigUint {
    if n > big {
        return BigUint::from(1u32);
    }
    BigUint::from(m).pow(4u32.pow(big - n))
}

/// Assigns independent uniform labels `1..=m` to every `c` of a `Y_{1,n}`
/// window.
pub fn sample_mu_prime(window: &Pattern, m: u32, seed: u64) -> Result<Pattern, HochmanError> {
    let one = TileSet::y(1);
    for &s in window.values() {
        one.check(s)?;
    }
    let y = TileSet::y(m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(window.len());
    for &s in window.values() {
        out.push(if one.is_corner(s) {
            y.corner(rng.gen_range(1..=m))?
        } else {
            s
        });
    }
    Ok(Pattern::new(window.shape().clone(), out).expect("same shape"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson test of `counts` against the uniform law on its cells.
pub fn chi_square_uniform(counts: &[u64]) -> Result<ChiSquare, HochmanError> {
    let total: u64 = counts.iter().sum();
    if counts.len() < 2 || total == 0 {
        return Err(HochmanError::InvalidArgument(
            "need two cells and some draws".into(),
        ));
    }
    let e = total as f64 / counts.len() as f64;
    let statistic = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    let dof = counts.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: dist.sf(statistic),
    })
}

fn ser_big<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Exact count of `N × N` windows of `Y_{m,n}` seen in relabelled copies of
/// `P_level`, with the bracket `m^{f N²} ≤ count ≤ |L_N(X_1)| m^{(α+ε) N²}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YmnCount {
    pub m: u32,
    pub n: u32,
    pub big_n: usize,
    pub level: u32,
    #[serde(serialize_with = "ser_big")]
    pub count: BigUint,
    pub log_count: f64,
    /// `log(count) / N²`.
    pub per_site: f64,
    /// Distinct `X_1` windows.
    pub x1_windows: usize,
    /// Distinct windows with corners marked.
    pub y1_windows: usize,
    /// Most corners in one window, i.e. `(α_n + ε_N) N²`.
    pub max_corners: u32,
    /// Corners in the window at the lower-left of `P_level`, i.e. `f_N N²`.
    pub anchor_corners: u32,
    pub lower_log: f64,
    pub upper_log: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
    /// Level-`n` corner frequency of `P_level`.
    pub alpha_measured: f64,
    /// `α_n log m`.
    pub predicted: f64,
    pub relative_error: f64,
}

/// Distinct windows of a grid with marked cells, grouped by mark count.
pub(crate) struct WindowCensus {
    pub plain: usize,
    pub marked: usize,
    pub by_marks: BTreeMap<u32, u64>,
    pub max_marks: u32,
    pub anchor_marks: u32,
}

const MERSENNE: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & MERSENNE;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MERSENNE {
        s - MERSENNE
    } else {
        s
    }
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MERSENNE {
        s - MERSENNE
    } else {
        s
    }
}

fn powmod(mut b: u64, mut e: usize) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    r
}

/// Polynomial hash of every `n × n` window, two independent bases.
fn window_hashes(vals: &[u64], w: usize, h: usize, n: usize) -> Vec<u128> {
    const BASES: [(u64, u64); 2] = [
        (0x1234_5678_9abc_def1 % MERSENNE, 0x0fed_cba9_8765_4321 % MERSENNE),
        (0x2545_f491_4f6c_dd1d % MERSENNE, 0x1b87_3593_9ddf_0c2b % MERSENNE),
    ];
    let (ow, oh) = (w - n + 1, h - n + 1);
    let mut out = vec![0u128; ow * oh];
    for (j, &(bx, by)) in BASES.iter().enumerate() {
        let px = powmod(bx, n - 1);
        let py = powmod(by, n - 1);
        let mut rows = vec![0u64; ow * h];
        for y in 0..h {
            let row = &vals[y * w..(y + 1) * w];
            let mut acc = 0;
            for &v in &row[..n] {
                acc = addmod(mulmod(acc, bx), v);
            }
            rows[y * ow] = acc;
            for x in 1..ow {
                acc = addmod(acc, MERSENNE - mulmod(row[x - 1], px));
                acc = addmod(mulmod(acc, bx), row[x + n - 1]);
                rows[y * ow + x] = acc;
            }
        }
        for x in 0..ow {
            let mut acc = 0;
            for y in 0..n {
                acc = addmod(mulmod(acc, by), rows[y * ow + x]);
            }
            let mut put = |y: usize, acc: u64| {
                let slot = &mut out[y * ow + x];
                *slot |= (acc as u128) << (64 * j);
            };
            put(0, acc);
            for y in 1..oh {
                acc = addmod(acc, MERSENNE - mulmod(rows[(y - 1) * ow + x], py));
                acc = addmod(mulmod(acc, by), rows[(y + n - 1) * ow + x]);
                put(y, acc);
            }
        }
    }
    out
}

/// `vals` are symbol indices, `marks` the corner sites.
pub(crate) fn window_census(vals: &[u32], marks: &[bool], w: usize, h: usize, n: usize) -> WindowCensus {
    let plain_vals: Vec<u64> = vals.iter().map(|&v| v as u64 + 1).collect();
    // a marked site gets a value no symbol uses
    let marked_vals: Vec<u64> = vals
        .iter()
        .zip(marks)
        .map(|(&v, &m)| if m { 1 << 40 } else { v as u64 + 1 })
        .collect();
    let mut prefix = vec![0u32; (w + 1) * (h + 1)];
    for y in 0..h {
        for x in 0..w {
            prefix[(y + 1) * (w + 1) + x + 1] = prefix[y * (w + 1) + x + 1] + prefix[(y + 1) * (w + 1) + x]
                - prefix[y * (w + 1) + x]
                + marks[y * w + x] as u32;
        }
    }
    let marks_at = |x: usize, y: usize| {
        prefix[(y + n) * (w + 1) + x + n] + prefix[y * (w + 1) + x]
            - prefix[y * (w + 1) + x + n]
            - prefix[(y + n) * (w + 1) + x]
    };
    let plain: HashSet<u128> = window_hashes(&plain_vals, w, h, n).into_iter().collect();
    let ow = w - n + 1;
    let mut seen: HashMap<u128, u32> = HashMap::new();
    let mut max_marks = 0;
    for (i, key) in window_hashes(&marked_vals, w, h, n).into_iter().enumerate() {
        let f = marks_at(i % ow, i / ow);
        max_marks = max_marks.max(f);
        seen.entry(key).or_insert(f);
    }
    let mut by_marks = BTreeMap::new();
    for &f in seen.values() {
        *by_marks.entry(f).or_insert(0u64) += 1;
    }
    WindowCensus {
        plain: plain.len(),
        marked: seen.len(),
        by_marks,
        max_marks,
        anchor_marks: marks_at(0, 0),
    }
}

pub(crate) fn census_sum(by_marks: &BTreeMap<u32, u64>, m: u32) -> BigUint {
    let base = BigUint::from(m);
    by_marks
        .iter()
        .map(|(&f, &c)| BigUint::from(c) * base.pow(f))
        .sum()
}

/// Counts the `N × N` patterns of `Y_{m,n}` occurring in relabelled copies
/// of `P_level`: `Σ_w m^{F(w)}` over distinct windows `w` of `P_level` with
/// level-`n` corners marked, `F(w)` the number of marked sites.
pub fn ymn_pattern_count(big_n: usize, m: u32, n: u32, level: u32) -> Result<YmnCount, HochmanError> {
    let s = side(level);
    if big_n == 0 || big_n > s {
        return Err(HochmanError::LevelTooSmall { big_n, side: s });
    }
    if n > level || m == 0 {
        return Err(HochmanError::InvalidArgument(format!(
            "need m ≥ 1 and n ≤ {level}"
        )));
    }
    let p = build_level_square(level, 1, &BlankLabels::default())?;
    let corners = locate_level_subsquares(&p.pattern, n, TileSet::x(1));
    let mut marks = vec![false; s * s];
    for c in &corners {
        marks[c.y as usize * s + c.x as usize] = true;
    }
    let vals: Vec<u32> = p.pattern.values().iter().map(|v| v.0).collect();
    let census = window_census(&vals, &marks, s, s, big_n);
    let count = census_sum(&census.by_marks, m);
    let log_count = ln_biguint(&count);
    let area = (big_n * big_n) as f64;
    let lm = (m as f64).ln();
    let lower_log = census.anchor_marks as f64 * lm;
    let upper_log = (census.plain as f64).ln() + census.max_marks as f64 * lm;
    let alpha_measured = corners.len() as f64 / (s * s) as f64;
    let predicted = alpha_measured * lm;
    let per_site = log_count / area;
    let relative_error = if predicted > 0.0 {
        (per_site - predicted).abs() / predicted
    } else {
        f64::NAN
    };
    // compare exactly where the logs are too close to call
    let lower_holds = count >= BigUint::from(m).pow(census.anchor_marks);
    let upper_holds = count <= BigUint::from(census.plain) * BigUint::from(m).pow(census.max_marks);
    Ok(YmnCount {
        m,
        n,
        big_n,
        level,
        count,
        log_count,
        per_site,
        x1_windows: census.plain,
        y1_windows: census.marked,
        max_corners: census.max_marks,
        anchor_corners: census.anchor_marks,
        lower_log,
        upper_log,
        lower_holds,
        upper_holds,
        alpha_measured,
        predicted,
        relative_error,
    })
}
