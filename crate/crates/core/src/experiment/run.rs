use std::time::Instant;

use serde_json::{json, Value};

use crate::entropy::{
    finite_size_upper_bound, placement_lower_bound, strip_entropy_upper_bound, write_series_csv,
    PlacementStyle,
};
use crate::factor::{check_decomposition, hochman_code, level_square_images};
use crate::grid::Coord;
use crate::hochman::{
    build_level_square, build_x_omega_window, derive_allowed_2x2, locate_level_subsquares, side,
    ymn_pattern_count, BlankLabels, OmegaPrefix, TileSet, DEFAULT_LEVEL_CAP,
};
use crate::sft::{is_locally_admissible, SftRules};
use crate::wr::{
    count_fixed_animals, enumerate_lattice_animals, peierls_report, run_chains, verify_ensemble, wr_rules,
    AnimalMode, SamplerConfig, WrParams,
};

use super::*;

/// Most level-square images listed in a factor report.
const IMAGE_LIST_CAP: usize = 16;
/// Prefix length for the random points behind factor windows.
const OMEGA_LEN: usize = 24;
const STRIP_TOL: f64 = 1e-10;

type Run = (Value, Vec<String>, Option<Artifact>);

/// Runs one experiment. Invariant failures are reported in
/// `results.violations`, not as errors.
pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    let start = Instant::now();
    let seed = cfg.seed;
    let (mut results, violations, artifact) = match &cfg.experiment {
        Experiment::Entropy(p) => entropy(p)?,
        Experiment::WrSample(p) => wr_sample(p, seed)?,
        Experiment::WrPeierls(p) => wr_peierls(p)?,
        Experiment::WrVerify(p) => wr_verify(p)?,
        Experiment::HochmanGen(p) => hochman_gen(p, seed)?,
        Experiment::HochmanAlpha(p) => hochman_alpha(p)?,
        Experiment::YmnEntropy(p) => ymn_entropy(p)?,
        Experiment::FactorDecompose(p) => factor_decompose(p, seed)?,
        Experiment::Animals(p) => animals(p)?,
    };
    results["violations"] = json!(violations);
    let report = Report {
        config: cfg.clone(),
        results,
        provenance: Provenance {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            runtime_ms: start.elapsed().as_millis() as u64,
        },
    };
    Ok(Outcome { report, artifact })
}

fn usage(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Usage(msg.into())
}

fn params(r1: u32, r2: u32, d: u32) -> Result<WrParams, ExperimentError> {
    WrParams::new(r1, r2, d).map_err(|e| usage(e.to_string()))
}

/// JSON has no infinity; an infinite bound is written as `"inf"`.
fn finite_or_inf(b: f64) -> Value {
    if b.is_finite() {
        bound(b)
    } else {
        bound("inf")
    }
}

fn csv_text(rows: &[(usize, f64)], header: [&str; 2]) -> Result<String, ExperimentError> {
    let mut buf = Vec::new();
    write_series_csv(&mut buf, header, rows)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

fn entropy(p: &EntropyParams) -> Result<Run, ExperimentError> {
    let (rules, lower) = match &p.rules {
        Some(path) => (SftRules::from_json(&std::fs::read_to_string(path)?)?, None),
        None => {
            let wp = params(p.r1, p.r2, 2)?;
            let lb = placement_lower_bound(PlacementStyle::WrGrid { r1: wp.r1, d: 2 });
            (wr_rules(wp), Some(lb))
        }
    };
    let mut violations = Vec::new();
    let mut finite = Vec::new();
    let mut rows = Vec::new();
    for &n in &p.sizes {
        let b = finite_size_upper_bound(&rules, n)?;
        rows.push((n, b));
        finite.push(json!({ "n": exact(n), "upper": bound(b) }));
    }
    let mut strips = Vec::new();
    for &w in &p.widths {
        let s = strip_entropy_upper_bound(&rules, w, STRIP_TOL)?;
        strips.push(json!({
            "width": exact(s.width),
            "tau": exact(s.tau),
            "states": exact(s.states),
            "core_states": exact(s.core_states),
            "lambda_lower": bound(s.lambda.lower),
            "lambda_upper": bound(s.lambda.upper),
            "upper": bound(s.bound),
        }));
        rows.push((w, s.bound));
        if let Some(lb) = lower {
            if s.bound + 1e-12 < lb {
                violations.push(format!("strip_upper_below_lower_bound(w={w})"));
            }
        }
    }
    if let Some(lb) = lower {
        if rows[..p.sizes.len()].iter().any(|&(_, b)| b + 1e-12 < lb) {
            violations.push("finite_size_upper_below_lower_bound".into());
        }
    }
    let artifact = Some(Artifact {
        kind: ArtifactKind::Csv,
        text: csv_text(&rows[..p.sizes.len()], ["N", "upper_bound"])?,
    });
    let results = json!({
        "finite_size": finite,
        "strip": strips,
        "lower": lower.map(bound),
    });
    Ok((results, violations, artifact))
}

fn wr_sample(p: &WrSampleParams, seed: u64) -> Result<Run, ExperimentError> {
    let wp = params(p.r1, p.r2, 2)?;
    let cfg = SamplerConfig {
        k: p.k,
        params: wp,
        boundary: p.boundary,
        sweeps: p.sweeps,
        burn_in: p.burn_in,
        chains: p.chains,
        seed,
    };
    let r = run_chains(&cfg)?;
    let chains: Vec<Value> = r
        .chains
        .iter()
        .map(|c| {
            json!({
                "stream": exact(c.stream),
                "minus_at_center": statistical(c.center_minus.mean, c.center_minus.batch_stderr),
                "plus_at_center": statistical(c.center_plus.mean, c.center_plus.batch_stderr),
                "final_plus_density": exact(c.final_plus_density),
                "final_minus_density": exact(c.final_minus_density),
            })
        })
        .collect();
    let peierls = peierls_report(wp);
    let mut violations = Vec::new();
    let (mean, se) = r.minus_at_center;
    if peierls.valid && p.boundary == crate::wr::BoundaryKind::Plus && mean - 3.0 * se > peierls.bound {
        violations.push("minus_at_center_exceeds_peierls_bound".into());
    }
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for row in &r.trace_of_first {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    let results = json!({
        "chains": chains,
        "minus_at_center": statistical(mean, se),
        "plus_at_center": statistical(r.plus_at_center.0, r.plus_at_center.1),
        "peierls_bound": finite_or_inf(peierls.bound),
        "peierls_valid": peierls.valid,
    });
    let artifact = Artifact {
        kind: ArtifactKind::Csv,
        text: String::from_utf8(buf).expect("csv is utf-8"),
    };
    Ok((results, violations, Some(artifact)))
}

fn wr_peierls(p: &WrPeierlsParams) -> Result<Run, ExperimentError> {
    let r = peierls_report(params(p.r1, p.r2, p.d)?);
    let results = json!({
        "exponent": { "value": r.exponent, "provenance": "exact" },
        "exponent_integer": r.exponent_integer().map(exact),
        "alpha": exact(r.alpha),
        "bound": finite_or_inf(r.bound),
        "valid": r.valid,
    });
    Ok((results, Vec::new(), None))
}

fn wr_verify(p: &WrVerifyParams) -> Result<Run, ExperimentError> {
    let wp = params(p.r1, p.r2, 2)?;
    let r = verify_ensemble(p.k, wp, Coord::new(p.v[0], p.v[1]))?;
    let mut violations = Vec::new();
    let checks = [
        (r.class_sum_matches, "class_sum_equals_event_size"),
        (r.rho_failures == 0, "rho_flip_valid"),
        (r.moat_disagreements == 0, "moat_definitions_agree"),
        (r.preimage_bound_holds, "rho_preimage_bound"),
        (r.spin_flip_failures == 0, "spin_flip_symmetry"),
        (r.invariant_failures.is_empty(), "contour_invariants"),
    ];
    for (ok, name) in checks {
        if !ok {
            violations.push(name.to_string());
        }
    }
    let classes: Vec<Value> = r
        .classes
        .iter()
        .map(|c| {
            json!({
                "m_size": exact(c.m_size),
                "c_size": exact(c.c_size),
                "count": exact(c.count),
                "max_preimage": exact(c.max_preimage),
                "distinct_images": exact(c.distinct_images),
                "preimage_bound_log2": bound(c.preimage_bound_log2),
                "peierls_term": bound(c.peierls_term),
                "measure": exact(c.measure),
            })
        })
        .collect();
    let results = json!({
        "ensemble_size": exact(r.ensemble_size),
        "minus_event_size": exact(r.minus_event_size),
        "classes": classes,
        "class_sum_matches": r.class_sum_matches,
        "rho_failures": exact(r.rho_failures),
        "moat_disagreements": exact(r.moat_disagreements),
        "preimage_bound_holds": r.preimage_bound_holds,
        "spin_flip_failures": exact(r.spin_flip_failures),
        "peierls_terms_hold": r.peierls_terms_hold,
        "peierls_sum_holds": r.peierls_sum_holds,
        "greedy_fraction_shortfalls": exact(r.greedy_fraction_shortfalls),
        "invariant_failures": r.invariant_failures,
    });
    Ok((results, violations, None))
}

fn hochman_gen(p: &HochmanGenParams, seed: u64) -> Result<Run, ExperimentError> {
    if p.k == 0 {
        return Err(usage("k must be at least 1"));
    }
    let labels = p.label.map_or(BlankLabels::Seeded(seed), BlankLabels::Constant);
    let sq = build_level_square(p.level, p.k, &labels)?;
    let tiles = TileSet::x(p.k);
    let mut violations = Vec::new();
    let admissible = is_locally_admissible(&sq.pattern, &derive_allowed_2x2(p.k))?;
    if !admissible {
        violations.push("level_square_admissible".into());
    }
    let blanks = sq.blank_sites.len();
    if blanks != 1 << (2 * p.level) {
        violations.push("blank_count".into());
    }
    let results = json!({
        "side": exact(side(p.level)),
        "blanks": exact(blanks),
        "admissible": admissible,
    });
    let artifact = Artifact {
        kind: ArtifactKind::PatternJson,
        text: sq.pattern.to_json(&tiles.alphabet()),
    };
    Ok((results, violations, Some(artifact)))
}

fn hochman_alpha(p: &HochmanAlphaParams) -> Result<Run, ExperimentError> {
    if p.max_k < p.level {
        return Err(usage(format!("max-k {} is below level {}", p.max_k, p.level)));
    }
    if p.max_k > DEFAULT_LEVEL_CAP {
        return Err(usage(format!(
            "max-k {} exceeds the cap {DEFAULT_LEVEL_CAP}",
            p.max_k
        )));
    }
    let n = p.level;
    let frequency_floor = 0.25f64.powi(n as i32) / 100.0;
    let limit = 0.25f64.powi(n as i32) / 25.0;
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut text = String::from("big_k,corners,area,frequency,frequency_floor,limit\n");
    for big in n..=p.max_k {
        let sq = build_level_square(big, 1, &BlankLabels::default())?;
        let corners = locate_level_subsquares(&sq.pattern, n, TileSet::x(1)).len();
        let area = side(big) * side(big);
        let freq = corners as f64 / area as f64;
        if corners != 1 << (2 * (big - n)) {
            violations.push(format!("corner_count(K={big})"));
        }
        if freq <= frequency_floor {
            violations.push(format!("frequency_above_bound(K={big})"));
        }
        text.push_str(&format!(
            "{big},{corners},{area},{freq:.12},{frequency_floor:.12},{limit:.12}\n"
        ));
        rows.push(json!({
            "big_k": exact(big),
            "corners": exact(corners),
            "area": exact(area),
            "frequency": exact(freq),
        }));
    }
    let results = json!({
        "level": exact(n),
        "rows": rows,
        "frequency_floor": bound(frequency_floor),
        "limit": exact(limit),
    });
    let artifact = Artifact {
        kind: ArtifactKind::Csv,
        text,
    };
    Ok((results, violations, Some(artifact)))
}

/// Smallest level whose square holds `2N` sites per side, and at least `n + 1`.
pub(crate) fn default_ymn_level(big_n: usize, n: u32) -> u32 {
    let mut k = n + 1;
    while side(k) < 2 * big_n && k < DEFAULT_LEVEL_CAP {
        k += 1;
    }
    k
}

fn ymn_entropy(p: &YmnEntropyParams) -> Result<Run, ExperimentError> {
    if p.m == 0 || p.big_n == 0 {
        return Err(usage("m and N must be positive"));
    }
    let level = p.level.unwrap_or_else(|| default_ymn_level(p.big_n, p.n));
    let r = ymn_pattern_count(p.big_n, p.m, p.n, level)?;
    let mut violations = Vec::new();
    if !r.lower_holds {
        violations.push("count_lower_bracket".into());
    }
    if !r.upper_holds {
        violations.push("count_upper_bracket".into());
    }
    let results = json!({
        "level": exact(r.level),
        "count": { "value": r.count.to_string(), "provenance": "exact" },
        "log_count": exact(r.log_count),
        "per_site": exact(r.per_site),
        "x1_windows": exact(r.x1_windows),
        "y1_windows": exact(r.y1_windows),
        "max_corners": exact(r.max_corners),
        "anchor_corners": exact(r.anchor_corners),
        "lower_log": bound(r.lower_log),
        "upper_log": bound(r.upper_log),
        "alpha_measured": exact(r.alpha_measured),
        "predicted": exact(r.predicted),
        "relative_error": exact(r.relative_error),
    });
    Ok((results, violations, None))
}

fn factor_decompose(p: &FactorDecomposeParams, seed: u64) -> Result<Run, ExperimentError> {
    if p.k == 0 || p.radius > 1 {
        return Err(usage("need k ≥ 1 and radius 0 or 1"));
    }
    let c = hochman_code(p.code, p.k, p.radius)?;
    let windows = (0..p.windows as u64)
        .map(|i| {
            let s = seed.wrapping_add(i);
            build_x_omega_window(
                &OmegaPrefix::random(OMEGA_LEN, s),
                p.window_radius,
                p.k,
                &BlankLabels::Seeded(s),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let r = check_decomposition(&c, p.n, p.k, &windows)?;
    let images = level_square_images(&c, p.n, p.k)?;
    let listed: Vec<_> = images
        .iter()
        .take(IMAGE_LIST_CAP)
        .map(|w| w.to_doc(c.target()))
        .collect();
    let mut violations = Vec::new();
    if r.mismatches > 0 {
        violations.push("decomposition_equality".into());
    }
    if r.projection_mismatches > 0 {
        violations.push("psi1_projection".into());
    }
    if r.inadmissible_images > 0 {
        violations.push("psi1_image_admissible".into());
    }
    let results = json!({
        "code": r.code,
        "m": exact(r.m),
        "images": exact(listed),
        "images_truncated": images.len() > IMAGE_LIST_CAP,
        "windows": exact(r.windows),
        "sites_compared": exact(r.sites_compared),
        "mismatches": exact(r.mismatches),
        "projection_mismatches": exact(r.projection_mismatches),
        "inadmissible_images": exact(r.inadmissible_images),
        "equal": r.passed(),
    });
    Ok((results, violations, None))
}

fn animals(p: &AnimalsParams) -> Result<Run, ExperimentError> {
    if p.n == 0 {
        return Err(usage("n must be at least 1"));
    }
    let counts = count_fixed_animals(p.n)?;
    let mut violations = Vec::new();
    let animal_ok = counts
        .iter()
        .enumerate()
        .all(|(i, &c)| (c as u128) <= 8u128.pow(i as u32 + 1));
    if !animal_ok {
        violations.push("animals_below_8_pow_n".into());
    }
    let mut results = json!({
        "counts": label_all(json!(counts), Label::Exact),
        "bound_check": animal_ok,
    });
    if p.contours {
        let contours = (1..=p.n)
            .map(|i| enumerate_lattice_animals(i, AnimalMode::ContoursSurroundingOrigin))
            .collect::<Result<Vec<_>, _>>()?;
        let ok = contours
            .iter()
            .enumerate()
            .all(|(i, &c)| (c as u128) <= 32u128.pow(i as u32 + 1));
        if !ok {
            violations.push("contours_below_32_pow_n".into());
        }
        results["contour_counts"] = label_all(json!(contours), Label::Exact);
        results["contour_bound_check"] = json!(ok);
    }
    Ok((results, violations, None))
}
