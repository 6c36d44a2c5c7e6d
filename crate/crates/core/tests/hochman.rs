use std::collections::HashSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use sftlab::grid::{Pattern, Shape, Symbol};
use sftlab::hochman::{
    build_level_square, build_x_omega_window, check_containment, chi_square_uniform, count_relabelings,
    derive_allowed_2x2, goheels_ratio, locate_level_subsquares, omega_box, pi_project, relabel_to_y,
    restore_x, sample_mu_prime, side, y_locally_admissible, ymn_pattern_count, BlankLabels, CornerLabeling,
    OmegaPrefix, TileSet, WindowSample, DEFAULT_LEVEL_CAP,
};
use sftlab::sft::is_locally_admissible;

fn plain(n: u32) -> Pattern {
    build_level_square(n, 1, &BlankLabels::default()).unwrap().pattern
}

fn blanks_isolated(p: &Pattern, tiles: TileSet) -> bool {
    p.iter().filter(|&(_, s)| tiles.is_blank(s)).all(|(c, _)| {
        c.king_neighbors()
            .all(|d| p.get_opt(d).is_none_or(|s| !tiles.is_blank(s)))
    })
}

#[test]
fn side_recursion_up_to_cap() {
    for n in 0..DEFAULT_LEVEL_CAP {
        assert_eq!(side(n + 1), 2 * side(n) + 4);
        assert_eq!(side(n), 5 * (1 << n) - 4);
    }
}

#[test]
fn subsquare_counts() {
    let p = plain(6);
    for j in 0..=6 {
        assert_eq!(
            locate_level_subsquares(&p, j, TileSet::x(1)).len(),
            1 << (2 * (6 - j)),
            "j = {j}"
        );
    }
}

#[test]
fn labelled_squares_are_admissible_and_isolated() {
    let rules = derive_allowed_2x2(3);
    for n in 0..=6 {
        let sq = build_level_square(n, 3, &BlankLabels::Seeded(n as u64)).unwrap();
        assert_eq!(
            sq.pattern.shape(),
            &Shape::rect_wh(Default::default(), side(n) as i32, side(n) as i32)
        );
        assert!(is_locally_admissible(&sq.pattern, &rules).unwrap(), "P_{n}");
        assert!(blanks_isolated(&sq.pattern, TileSet::x(3)));
        assert_eq!(sq.blank_sites.len(), 1 << (2 * n));
    }
}

#[test]
fn relabelled_patterns_project_and_restore() {
    let rules = derive_allowed_2x2(1);
    let p = plain(5);
    for n in 0..=3 {
        let y = relabel_to_y(&p, n, 4, &CornerLabeling::Seeded(n as u64)).unwrap();
        assert!(y_locally_admissible(&y, n, 4).unwrap());
        let restored = restore_x(&pi_project(&y, 4).unwrap(), n, 1).unwrap();
        assert!(is_locally_admissible(&restored, &rules).unwrap());
        assert!(restored.positioned_eq(&p));
    }
}

#[test]
fn label_count_identity() {
    for (big, n, m) in [(2u32, 1u32, 2u32), (3, 2, 3), (2, 2, 5)] {
        let p = plain(big);
        let corners = locate_level_subsquares(&p, n, TileSet::x(1)).len();
        let mut seen = HashSet::new();
        for code in 0..(m as u64).pow(corners as u32) {
            let mut c = code;
            let labels = (0..corners)
                .map(|_| {
                    let l = (c % m as u64) as u32 + 1;
                    c /= m as u64;
                    l
                })
                .collect();
            let y = relabel_to_y(&p, n, m, &CornerLabeling::Explicit(labels)).unwrap();
            seen.insert(y.values().to_vec());
        }
        assert_eq!(BigUint::from(seen.len()), count_relabelings(big, n, m));
    }
}

/// Every `N × N` window of every relabelling of `P_big`, collected in a set.
fn naive_window_set(big: u32, n: u32, m: u32, big_n: usize) -> usize {
    let p = plain(big);
    let corners = locate_level_subsquares(&p, n, TileSet::x(1)).len();
    let s = side(big);
    let mut set: HashSet<Vec<Symbol>> = HashSet::new();
    for code in 0..(m as u64).pow(corners as u32) {
        let mut c = code;
        let labels = (0..corners)
            .map(|_| {
                let l = (c % m as u64) as u32 + 1;
                c /= m as u64;
                l
            })
            .collect();
        let y = relabel_to_y(&p, n, m, &CornerLabeling::Explicit(labels)).unwrap();
        let v = y.values();
        for oy in 0..=s - big_n {
            for ox in 0..=s - big_n {
                let mut w = Vec::with_capacity(big_n * big_n);
                for dy in 0..big_n {
                    let start = (oy + dy) * s + ox;
                    w.extend_from_slice(&v[start..start + big_n]);
                }
                set.insert(w);
            }
        }
    }
    set.len()
}

#[test]
fn ymn_counts_match_exact_sets() {
    for (big, n, m, big_n) in [
        (2, 1, 2, 4),
        (2, 1, 3, 7),
        (3, 2, 2, 10),
        (2, 0, 2, 3),
        (3, 2, 3, 20),
        (3, 1, 2, 5),
    ] {
        let fast = ymn_pattern_count(big_n, m, n, big).unwrap();
        assert_eq!(
            fast.count,
            BigUint::from(naive_window_set(big, n, m, big_n)),
            "K={big} n={n} m={m} N={big_n}"
        );
        assert!(fast.lower_holds && fast.upper_holds);
    }
}

#[test]
fn mu_prime_labels_are_uniform_and_independent() {
    let m = 3;
    let window = relabel_to_y(&plain(2), 1, 1, &CornerLabeling::Constant(1)).unwrap();
    let y = TileSet::y(m);
    let corner_sites: Vec<usize> = window
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &s)| TileSet::y(1).is_corner(s))
        .map(|(i, _)| i)
        .collect();
    assert_eq!(corner_sites.len(), 4);
    let mut single = vec![0u64; m as usize];
    let mut pairs = vec![0u64; (m * m) as usize];
    for seed in 0..10_000 {
        let w = sample_mu_prime(&window, m, seed).unwrap();
        let label = |i: usize| match y.decode(w.values()[i]).unwrap() {
            sftlab::hochman::TileSymbol::CornerLabel { i } => i - 1,
            other => panic!("{other} at a corner"),
        };
        single[label(corner_sites[0]) as usize] += 1;
        pairs[(label(corner_sites[0]) * m + label(corner_sites[3])) as usize] += 1;
    }
    assert!(chi_square_uniform(&single).unwrap().p_value > 0.01);
    assert!(chi_square_uniform(&pairs).unwrap().p_value > 0.01);
}

#[test]
fn goheels_ratio_is_exact_on_full_tilings() {
    let sample = [WindowSample {
        pattern: plain(5),
        inner: None,
    }];
    for n2 in 1..=4 {
        for n1 in 0..n2 {
            let r = goheels_ratio(&sample, n1, n2, TileSet::x(1)).unwrap();
            assert_eq!(r, 4f64.powi((n2 - n1) as i32));
        }
    }
}

#[test]
fn containment_on_small_windows() {
    for seed in 0..2 {
        let om = OmegaPrefix::random(16, seed);
        for n in 0..=2 {
            let r = check_containment(&om, n, 60).unwrap();
            assert!(
                r.failures.is_empty(),
                "n = {n}: {:?}",
                &r.failures[..r.failures.len().min(3)]
            );
            assert!(r.boxes_checked > 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn omega_windows_contain_their_boxes(seed in any::<u64>(), radius in 5..60i32) {
        let om = OmegaPrefix::random(14, seed);
        let w = build_x_omega_window(&om, radius, 2, &BlankLabels::Seeded(seed)).unwrap();
        prop_assert!(is_locally_admissible(&w, &derive_allowed_2x2(2)).unwrap());
        prop_assert!(blanks_isolated(&w, TileSet::x(2)));
        let flat = build_x_omega_window(&om, radius, 1, &BlankLabels::default()).unwrap();
        for level in 0..3u32 {
            let lo = omega_box(&om, level as usize).unwrap();
            let p = plain(level);
            for (c, s) in p.iter() {
                if let Some(t) = flat.get_opt(c + lo) {
                    prop_assert_eq!(t, s);
                }
            }
        }
    }
}
