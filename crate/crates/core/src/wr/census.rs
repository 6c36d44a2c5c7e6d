//! Exhaustive checks of the contour argument over a whole `δ_{k,+}` ensemble.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::grid::{Coord, Symbol};
use crate::sft::{is_locally_admissible, stream_admissible, SearchOptions};

use super::{
    contour_decompose, delta_plus_boundary, flip_rho, full_config, greedy_moat_sites, interior_shape,
    spin_flip, wr_rules, WrError, WrParams, MINUS,
};

/// One moat class `E_{M,-,v}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassSummary {
    pub m_size: usize,
    pub c_size: usize,
    pub count: u64,
    /// Largest `|ρ⁻¹(y)|` over images `y` in the class.
    pub max_preimage: u64,
    pub distinct_images: usize,
    /// `log2` of the preimage bound `2^{4^d |C|}`.
    pub preimage_bound_log2: u64,
    /// `2^{-|C| R₂ / (2^{3d+2} R₁^d)}`.
    pub peierls_term: f64,
    pub measure: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WrVerifyReport {
    pub k: i32,
    pub params: WrParams,
    pub v: Coord,
    pub ensemble_size: u64,
    pub minus_event_size: u64,
    pub classes: Vec<ClassSummary>,
    /// `Σ_M |E_{M,-,v}| = |E_{-,v}|`.
    pub class_sum_matches: bool,
    pub rho_failures: u64,
    pub moat_disagreements: u64,
    pub preimage_bound_holds: bool,
    pub spin_flip_failures: u64,
    /// `μ(E_{M,-,v}) ≤ 2^{-|C| R₂/(2^{3d+2} R₁^d)}` for every class.
    pub peierls_terms_hold: bool,
    /// `μ(E_{-,v}) ≤ Σ_M` of those terms.
    pub peierls_sum_holds: bool,
    pub greedy_fraction_shortfalls: u64,
    /// Hard invariant failures (first few messages).
    pub invariant_failures: Vec<String>,
}

impl WrVerifyReport {
    /// All exact checks hold. Moat disagreements are part of this: the two
    /// definitions are claimed equivalent.
    pub fn passed(&self) -> bool {
        self.class_sum_matches
            && self.rho_failures == 0
            && self.moat_disagreements == 0
            && self.preimage_bound_holds
            && self.spin_flip_failures == 0
            && self.invariant_failures.is_empty()
    }
}

#[derive(Default)]
struct ClassAcc {
    c_size: usize,
    count: u64,
    greedy_short: bool,
    images: HashMap<Vec<Symbol>, u64>,
}

/// Walks every admissible interior for `δ_{k,+}` and checks the contour
/// machinery at `v`.
pub fn verify_ensemble(k: i32, p: WrParams, v: Coord) -> Result<WrVerifyReport, WrError> {
    let bc = delta_plus_boundary(k, p.r1)?;
    let minus_bc = super::delta_minus_boundary(k, p.r1)?;
    let rules = wr_rules(p);
    if !is_locally_admissible(&bc.fixed, &rules)? {
        return Err(WrError::InfeasibleBoundary);
    }
    let region = interior_shape(k);
    if !region.contains(v) {
        return Err(WrError::InvalidParams(format!("{v} is not an interior site")));
    }
    let mut ensemble_size = 0u64;
    let mut minus_event_size = 0u64;
    let mut rho_failures = 0u64;
    let mut moat_disagreements = 0u64;
    let mut spin_flip_failures = 0u64;
    let mut failures: Vec<String> = Vec::new();
    let mut classes: BTreeMap<Vec<Coord>, ClassAcc> = BTreeMap::new();

    for interior in stream_admissible(&region, &rules, Some(&bc), SearchOptions::default())? {
        let interior = interior?;
        ensemble_size += 1;
        let flipped = full_config(&spin_flip(&interior), &minus_bc)?;
        if !is_locally_admissible(&flipped, &rules)? {
            spin_flip_failures += 1;
        }
        if interior.get_opt(v) != Some(MINUS) {
            continue;
        }
        minus_event_size += 1;
        let x = full_config(&interior, &bc)?;
        let cd = match contour_decompose(&x, v, p) {
            Ok(cd) => cd,
            Err(e) => {
                if failures.len() < 10 {
                    failures.push(e.to_string());
                }
                continue;
            }
        };
        if !cd.moat_definitions_agree() {
            moat_disagreements += 1;
        }
        let y = match flip_rho(&x, &cd, p) {
            Ok(y) => y,
            Err(WrError::InvariantViolated(_)) => {
                rho_failures += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let acc = classes.entry(cd.m.to_vec()).or_default();
        acc.c_size = cd.c.len();
        acc.count += 1;
        *acc.images.entry(y.values().to_vec()).or_default() += 1;
        if acc.count == 1 {
            match greedy_moat_sites(&cd, p) {
                Ok(g) => acc.greedy_short = !g.b_meets_fraction,
                Err(e) => {
                    if failures.len() < 10 {
                        failures.push(e.to_string());
                    }
                }
            }
        }
    }

    let d = p.d;
    let denom = 2f64.powi(3 * d as i32 + 2) * (p.r1 as f64).powi(d as i32);
    let mut summaries = Vec::new();
    let mut greedy_fraction_shortfalls = 0;
    let mut preimage_bound_holds = true;
    let mut peierls_terms_hold = true;
    let mut term_sum = 0.0;
    for (m, acc) in &classes {
        let max_preimage = acc.images.values().copied().max().unwrap_or(0);
        let bound_log2 = 4u64.pow(d) * acc.c_size as u64;
        // 2^bound_log2 overflows quickly; compare in log space
        if bound_log2 < 64 && max_preimage > (1u64 << bound_log2) {
            preimage_bound_holds = false;
        }
        let term = (-(acc.c_size as f64) * p.r2 as f64 / denom).exp2();
        let measure = acc.count as f64 / ensemble_size as f64;
        if measure > term {
            peierls_terms_hold = false;
        }
        term_sum += term;
        if acc.greedy_short {
            greedy_fraction_shortfalls += 1;
        }
        summaries.push(ClassSummary {
            m_size: m.len(),
            c_size: acc.c_size,
            count: acc.count,
            max_preimage,
            distinct_images: acc.images.len(),
            preimage_bound_log2: bound_log2,
            peierls_term: term,
            measure,
        });
    }
    let class_total: u64 = classes.values().map(|a| a.count).sum();
    let event_measure = if ensemble_size > 0 {
        minus_event_size as f64 / ensemble_size as f64
    } else {
        0.0
    };
    Ok(WrVerifyReport {
        k,
        params: p,
        v,
        ensemble_size,
        minus_event_size,
        classes: summaries,
        class_sum_matches: class_total + rho_failures == minus_event_size && failures.is_empty(),
        rho_failures,
        moat_disagreements,
        preimage_bound_holds,
        spin_flip_failures,
        peierls_terms_hold,
        peierls_sum_holds: event_measure <= term_sum,
        greedy_fraction_shortfalls,
        invariant_failures: failures,
    })
}
