use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};

use crate::entropy::ln_biguint;
use crate::grid::{Coord, Pattern, Shape, Symbol};
use crate::hochman::{
    build_level_square, census_sum, level_square_tile, pi_project, relabel_to_y, side, window_census,
    y_locally_admissible, BlankLabels, CornerLabeling, TileSet, ARROW_COUNT, SW_CORNER,
};

use super::{apply_code, compose, FactorError, FnView, SlidingBlockCode};

/// Most blank labelings enumerated when collecting level-square images.
pub const LABELING_CAP: u128 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Identity,
    Collapse,
    Parity,
}

impl std::str::FromStr for CodeKind {
    type Err = FactorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" => Ok(CodeKind::Identity),
            "collapse" => Ok(CodeKind::Collapse),
            "parity" => Ok(CodeKind::Parity),
            _ => Err(FactorError::UnknownCode(s.to_string())),
        }
    }
}

fn blank_table(k: u32, target: TileSet, f: impl Fn(u32) -> u32) -> Vec<Symbol> {
    let src = TileSet::x(k);
    (0..src.len() as u32)
        .map(|i| {
            let s = Symbol(i);
            if src.is_blank(s) {
                target.blank(f(i - ARROW_COUNT + 1)).expect("label in range")
            } else {
                s
            }
        })
        .collect()
}

pub fn identity_code(k: u32) -> SlidingBlockCode {
    SlidingBlockCode::identity(TileSet::x(k).alphabet())
}

/// Forgets blank labels: `X_k → X_1`.
pub fn collapse_code(k: u32) -> SlidingBlockCode {
    let t = blank_table(k, TileSet::x(1), |_| 1);
    SlidingBlockCode::from_table("collapse", TileSet::x(k).alphabet(), TileSet::x(1).alphabet(), t)
        .expect("table over tile alphabets")
}

/// Keeps only the parity of blank labels: odd labels become `blank:1`,
/// even ones `blank:2`.
pub fn parity_code(k: u32) -> SlidingBlockCode {
    let t = blank_table(k, TileSet::x(2), |l| 2 - l % 2);
    SlidingBlockCode::from_table("parity", TileSet::x(k).alphabet(), TileSet::x(2).alphabet(), t)
        .expect("table over tile alphabets")
}

/// One of the three blank codes, read at the site itself (radius 0) or at
/// its east neighbour (radius 1).
pub fn hochman_code(kind: CodeKind, k: u32, radius: u32) -> Result<SlidingBlockCode, FactorError> {
    let base = match kind {
        CodeKind::Identity => identity_code(k),
        CodeKind::Collapse => collapse_code(k),
        CodeKind::Parity => parity_code(k),
    };
    match radius {
        0 => Ok(base),
        1 => Ok(base.shifted(Coord::new(1, 0))),
        r => Err(FactorError::Hochman(
            crate::hochman::HochmanError::InvalidArgument(format!("radius {r} is not provided; use 0 or 1")),
        )),
    }
}

fn check_source(c: &SlidingBlockCode, k: u32) -> Result<(), FactorError> {
    if *c.source() != TileSet::x(k).alphabet() {
        return Err(FactorError::AlphabetMismatch(format!(
            "{} does not read the X_{k} alphabet",
            c.name()
        )));
    }
    Ok(())
}

fn check_level(c: &SlidingBlockCode, n: u32) -> Result<(), FactorError> {
    if n < c.radius() {
        return Err(FactorError::AlphabetMismatch(format!(
            "level parameter {n} is below the code radius {}",
            c.radius()
        )));
    }
    Ok(())
}

/// Distinct `c`-images of the level-`2n` square over every blank labeling,
/// in order of first appearance (labelings enumerated lexicographically).
/// Images live on the `radius`-erosion of `[0, side(2n))²`.
pub fn level_square_images(c: &SlidingBlockCode, n: u32, k: u32) -> Result<Vec<Pattern>, FactorError> {
    check_source(c, k)?;
    check_level(c, n)?;
    let sq = build_level_square(2 * n, k, &BlankLabels::Constant(1))?;
    let blanks = sq.blank_sites.len();
    let count = (k as u128).checked_pow(blanks as u32).unwrap_or(u128::MAX);
    if count > LABELING_CAP {
        return Err(FactorError::TooManyLabelings {
            count,
            cap: LABELING_CAP,
        });
    }
    let tiles = TileSet::x(k);
    let mut labels = vec![1u32; blanks];
    let mut seen: HashMap<Vec<Symbol>, usize> = HashMap::new();
    let mut out = Vec::new();
    let mut p = sq.pattern.clone();
    loop {
        for (site, &l) in sq.blank_sites.iter().zip(&labels) {
            p.set(*site, tiles.blank(l)?)?;
        }
        let img = apply_code(c, &p)?;
        if !seen.contains_key(img.values()) {
            seen.insert(img.values().to_vec(), out.len());
            out.push(img);
        }
        // odometer, last blank fastest
        let mut i = blanks;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if labels[i] < k {
                labels[i] += 1;
                break;
            }
            labels[i] = 1;
        }
    }
}

fn square_template(level: u32) -> Vec<Symbol> {
    let s = side(level) as i32;
    (0..s * s)
        .map(|i| level_square_tile(level, Coord::new(i % s, i / s)))
        .collect()
}

/// `ψ₁ : X_k → Y_{m,2n}`: the lower-left corner of a level-`2n` square whose
/// `c`-image is `w_i` becomes `c:i`, other blanks become the `Y` blank and
/// arrows are kept.
pub fn build_psi1(
    c: &SlidingBlockCode,
    n: u32,
    k: u32,
    images: &[Pattern],
) -> Result<SlidingBlockCode, FactorError> {
    check_source(c, k)?;
    check_level(c, n)?;
    let level = 2 * n;
    let s = side(level) as i32;
    let src = TileSet::x(k);
    let y = TileSet::y(images.len() as u32);
    let template = square_template(level);
    let index: HashMap<Vec<Symbol>, u32> = images
        .iter()
        .enumerate()
        .map(|(i, w)| (w.values().to_vec(), i as u32 + 1))
        .collect();
    let code = c.clone();
    let square = Shape::rect(Coord::ORIGIN, Coord::new(s - 1, s - 1));
    let rule = move |v: &dyn super::View| -> Result<Symbol, FactorError> {
        let x0 = v.at(Coord::ORIGIN)?;
        let candidate = if level == 0 {
            src.is_blank(x0)
        } else {
            x0 == SW_CORNER
        };
        if candidate {
            let mut vals = Vec::with_capacity(template.len());
            let mut hit = true;
            for (i, &t) in template.iter().enumerate() {
                let sym = v.at(Coord::new(i as i32 % s, i as i32 / s))?;
                let ok = if src.is_blank(t) || t.0 == ARROW_COUNT {
                    src.is_blank(sym)
                } else {
                    sym == t
                };
                if !ok {
                    hit = false;
                    break;
                }
                vals.push(sym);
            }
            if hit {
                let p = Pattern::new(square.clone(), vals)?;
                let img = apply_code(&code, &p)?;
                let i = index
                    .get(img.values())
                    .ok_or(FactorError::ImageNotFound(Coord::ORIGIN))?;
                return Ok(y.corner(*i)?);
            }
        }
        if src.is_blank(x0) {
            return Ok(y.blank(1)?);
        }
        Ok(x0)
    };
    Ok(SlidingBlockCode::from_fn(
        format!("psi1[{}]", c.name()),
        s as u32 - 1,
        src.alphabet(),
        y.alphabet(),
        rule,
    ))
}

/// `ψ₂ : Y_{m,2n} → Z` with blanks in substitution neighbourhoods treated as
/// an error.
pub fn build_psi2(
    c: &SlidingBlockCode,
    n: u32,
    k: u32,
    images: &[Pattern],
) -> Result<SlidingBlockCode, FactorError> {
    build_psi2_with(c, n, k, images, 1, true)
}

/// `ψ₂`: inside a level-`2n` square labelled `c:i` copy `w_i`; elsewhere
/// replace corner labels by the SW corner arrow and apply `c`. Outside
/// squares the neighbourhood should hold no blank; with `strict` off any
/// blank found is filled with label `fill` instead of failing.
pub fn build_psi2_with(
    c: &SlidingBlockCode,
    n: u32,
    k: u32,
    images: &[Pattern],
    fill: u32,
    strict: bool,
) -> Result<SlidingBlockCode, FactorError> {
    check_source(c, k)?;
    check_level(c, n)?;
    let s = side(2 * n) as i32;
    let r = c.radius() as i32;
    let y = TileSet::y(images.len() as u32);
    let src = TileSet::x(k);
    let fill_sym = src.blank(fill)?;
    let images: Arc<Vec<Pattern>> = Arc::new(images.to_vec());
    let code = c.clone();
    let rule = move |v: &dyn super::View| -> Result<Symbol, FactorError> {
        // a labelled corner at v + d with v + [-r, r]² inside its square
        for dy in (r + 1 - s)..=-r {
            for dx in (r + 1 - s)..=-r {
                let d = Coord::new(dx, dy);
                let t = v.at(d)?;
                if y.is_corner(t) {
                    let i = (t.0 - ARROW_COUNT - 1) as usize;
                    return Ok(images[i].get(-d)?);
                }
            }
        }
        let sub = FnView(|e: Coord| {
            let t = v.at(e)?;
            if y.is_corner(t) {
                Ok(SW_CORNER)
            } else if y.is_blank(t) {
                if strict {
                    Err(FactorError::NeighborhoodContainsBlank(e))
                } else {
                    Ok(fill_sym)
                }
            } else {
                Ok(t)
            }
        });
        code.eval(&sub)
    };
    Ok(SlidingBlockCode::from_fn(
        format!("psi2[{}]", c.name()),
        (s - 1 - r).max(r) as u32,
        y.alphabet(),
        c.target().clone(),
        rule,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub code: String,
    pub k: u32,
    pub n: u32,
    pub m: usize,
    pub windows: usize,
    pub sites_compared: u64,
    /// Sites where `ψ₂∘ψ₁` and `c` differ.
    pub mismatches: u64,
    /// Sites where `π∘ψ₁` differs from the `Y_{1,2n}` relabelling.
    pub projection_mismatches: u64,
    /// Windows whose `ψ₁` image is not `Y`-admissible.
    pub inadmissible_images: usize,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.projection_mismatches == 0 && self.inadmissible_images == 0
    }
}

/// Checks `apply(ψ₂∘ψ₁, w) = apply(c, w)` symbol for symbol on each window,
/// along with the projection and admissibility of `ψ₁(w)`.
pub fn check_decomposition(
    c: &SlidingBlockCode,
    n: u32,
    k: u32,
    windows: &[Pattern],
) -> Result<DecompositionReport, FactorError> {
    let images = level_square_images(c, n, k)?;
    let psi1 = build_psi1(c, n, k, &images)?;
    let psi2 = build_psi2(c, n, k, &images)?;
    let both = compose(&psi2, &psi1)?;
    let collapse = collapse_code(k);
    let m = images.len() as u32;
    let mut report = DecompositionReport {
        code: c.name().to_string(),
        k,
        n,
        m: images.len(),
        windows: windows.len(),
        sites_compared: 0,
        mismatches: 0,
        projection_mismatches: 0,
        inadmissible_images: 0,
    };
    for w in windows {
        let direct = apply_code(c, w)?;
        let via = apply_code(&both, w)?;
        for (site, s) in via.iter() {
            report.sites_compared += 1;
            if direct.get(site)? != s {
                report.mismatches += 1;
            }
        }
        let y = apply_code(&psi1, w)?;
        if !y_locally_admissible(&y, 2 * n, m)? {
            report.inadmissible_images += 1;
        }
        let flat = apply_code(&collapse, w)?;
        let expect = relabel_to_y(&flat, 2 * n, 1, &CornerLabeling::Constant(1))?;
        let projected = pi_project(&y, m)?;
        for (site, s) in projected.iter() {
            if expect.get(site)? != s {
                report.projection_mismatches += 1;
            }
        }
    }
    Ok(report)
}

fn ser_big<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Window-count entropy of the image of a radius-0 code on `X_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageEntropy {
    pub code: String,
    pub k: u32,
    pub m: usize,
    pub big_n: usize,
    pub level: u32,
    #[serde(serialize_with = "ser_big")]
    pub count: BigUint,
    pub per_site: f64,
    /// Blank frequency of `P_level`.
    pub alpha_measured: f64,
    /// `α₀ log m`.
    pub predicted: f64,
    pub relative_error: f64,
}

/// Counts distinct `N × N` windows of `c(P_level)` over all blank labelings
/// and compares `log(count)/N²` with `α₀ log m`.
///
/// Exact when blank images never coincide with arrow images, which is
/// checked.
pub fn image_entropy_estimate(
    c: &SlidingBlockCode,
    k: u32,
    big_n: usize,
    level: u32,
) -> Result<ImageEntropy, FactorError> {
    let Some(table) = c.table() else {
        return Err(FactorError::AlphabetMismatch(format!(
            "{} is not a 1-block code",
            c.name()
        )));
    };
    check_source(c, k)?;
    let src = TileSet::x(k);
    let blank_images: Vec<Symbol> = {
        let mut v: Vec<Symbol> = (1..=k).map(|l| table[src.blank(l).unwrap().index()]).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    if (0..ARROW_COUNT).any(|i| blank_images.contains(&table[i as usize])) {
        return Err(FactorError::AlphabetMismatch(
            "a blank image coincides with an arrow image".into(),
        ));
    }
    let s = side(level);
    if big_n == 0 || big_n > s {
        return Err(crate::hochman::HochmanError::LevelTooSmall { big_n, side: s }.into());
    }
    let sq = build_level_square(level, 1, &BlankLabels::default())?;
    let one = TileSet::x(1);
    let mut vals = Vec::with_capacity(s * s);
    let mut marks = Vec::with_capacity(s * s);
    for &t in sq.pattern.values() {
        let b = one.is_blank(t);
        marks.push(b);
        vals.push(if b { u32::MAX - 1 } else { table[t.index()].0 });
    }
    let census = window_census(&vals, &marks, s, s, big_n);
    let m = blank_images.len();
    let count = census_sum(&census.by_marks, m as u32);
    let per_site = ln_biguint(&count) / (big_n * big_n) as f64;
    let alpha_measured = sq.blank_sites.len() as f64 / (s * s) as f64;
    let predicted = alpha_measured * (m as f64).ln();
    Ok(ImageEntropy {
        code: c.name().to_string(),
        k,
        m,
        big_n,
        level,
        count,
        per_site,
        alpha_measured,
        predicted,
        relative_error: if predicted > 0.0 {
            (per_site - predicted).abs() / predicted
        } else {
            per_site
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochman::{build_x_omega_window, OmegaPrefix};

    #[test]
    fn image_counts() {
        assert_eq!(level_square_images(&collapse_code(3), 0, 3).unwrap().len(), 1);
        assert_eq!(level_square_images(&parity_code(4), 0, 4).unwrap().len(), 2);
        assert_eq!(level_square_images(&identity_code(5), 0, 5).unwrap().len(), 5);
    }

    #[test]
    fn decomposition_radius_zero() {
        let windows: Vec<Pattern> = (0..5)
            .map(|s| {
                build_x_omega_window(&OmegaPrefix::random(12, s), 20, 4, &BlankLabels::Seeded(s)).unwrap()
            })
            .collect();
        for kind in [CodeKind::Identity, CodeKind::Collapse, CodeKind::Parity] {
            let c = hochman_code(kind, 4, 0).unwrap();
            let r = check_decomposition(&c, 0, 4, &windows).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn decomposition_radius_one() {
        let windows: Vec<Pattern> = (0..2)
            .map(|s| {
                build_x_omega_window(&OmegaPrefix::random(12, s), 40, 2, &BlankLabels::Seeded(s)).unwrap()
            })
            .collect();
        let c = hochman_code(CodeKind::Parity, 2, 1).unwrap();
        let r = check_decomposition(&c, 1, 2, &windows).unwrap();
        assert_eq!(r.m, 1 << 16);
        assert!(r.passed(), "{r:?}");
    }
}
