use proptest::prelude::*;
use sftlab::grid::{Alphabet, Coord, Pattern, Shape, Symbol};
use sftlab::sft::{
    count_admissible, glue_search, is_locally_admissible, list_admissible, Block2, BoundaryCondition,
    DistanceRule, SearchOptions, SftRules,
};

fn alphabet(q: u32) -> Alphabet {
    Alphabet::new((0..q).map(|i| i.to_string())).unwrap()
}

/// Tries every assignment of the region and keeps the admissible ones.
fn naive_count(region: &Shape, rules: &SftRules, bc: Option<&BoundaryCondition>) -> u64 {
    let sites = region.to_vec();
    let q = rules.alphabet().len() as u64;
    let total = q.pow(sites.len() as u32);
    let mut n = 0;
    for code in 0..total {
        let mut c = code;
        let p = Pattern::from_pairs(sites.iter().map(|&s| {
            let v = (c % q) as u32;
            c /= q;
            (s, Symbol(v))
        }));
        let full = match bc {
            Some(b) => p.concat_disjoint(&b.fixed).unwrap(),
            None => p,
        };
        if is_locally_admissible(&full, rules).unwrap() {
            n += 1;
        }
    }
    n
}

fn block_rules() -> impl Strategy<Value = SftRules> {
    prop::collection::vec(any::<bool>(), 16).prop_map(|keep| {
        let blocks: Vec<Block2> = (0..16u32)
            .filter(|&i| keep[i as usize])
            .map(|i| {
                [
                    Symbol(i & 1),
                    Symbol(i >> 1 & 1),
                    Symbol(i >> 2 & 1),
                    Symbol(i >> 3 & 1),
                ]
            })
            .collect();
        SftRules::allowed_2x2(alphabet(2), blocks).unwrap()
    })
}

fn distance_rules() -> impl Strategy<Value = SftRules> {
    (1..3u32, 1..3u32).prop_map(|(r1, extra)| {
        SftRules::distance(
            alphabet(3),
            vec![
                DistanceRule::new(vec![Symbol(1), Symbol(2)], vec![Symbol(1), Symbol(2)], r1),
                DistanceRule::new(vec![Symbol(1)], vec![Symbol(2)], r1 + extra),
            ],
        )
        .unwrap()
    })
}

fn count(region: &Shape, rules: &SftRules) -> u64 {
    let c = count_admissible(region, rules, None, SearchOptions::default()).unwrap();
    u64::try_from(c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn block_counts_match_naive(rules in block_rules(), w in 1..5i32, h in 1..4i32) {
        let region = Shape::rect_wh(Coord::ORIGIN, w, h);
        prop_assert_eq!(count(&region, &rules), naive_count(&region, &rules, None));
    }

    #[test]
    fn distance_counts_match_naive(rules in distance_rules(), w in 1..4i32, h in 1..4i32) {
        let region = Shape::rect_wh(Coord::ORIGIN, w, h);
        prop_assert_eq!(count(&region, &rules), naive_count(&region, &rules, None));
    }

    #[test]
    fn boundary_counts_match_naive(rules in distance_rules(), s in 0..3u32, t in 0..3u32) {
        let region = Shape::square(1);
        let bc = BoundaryCondition::new(Pattern::from_pairs([
            (Coord::new(3, 0), Symbol(s)),
            (Coord::new(-2, 2), Symbol(t)),
        ]));
        let fast = count_admissible(&region, &rules, Some(&bc), SearchOptions::default()).unwrap();
        prop_assert_eq!(u64::try_from(fast).unwrap(), naive_count(&region, &rules, Some(&bc)));
    }

    #[test]
    fn forbidding_never_adds_patterns(rules in block_rules(), word in prop::collection::vec(0..2u32, 2), vertical in any::<bool>()) {
        let shape = if vertical { Shape::rect_wh(Coord::ORIGIN, 1, 2) } else { Shape::rect_wh(Coord::ORIGIN, 2, 1) };
        let w = Pattern::new(shape, word.into_iter().map(Symbol).collect()).unwrap();
        let tighter = rules.forbid_word(w).unwrap();
        let region = Shape::rect_wh(Coord::ORIGIN, 3, 3);
        prop_assert!(count(&region, &tighter) <= count(&region, &rules));
    }

    #[test]
    fn listed_patterns_are_admissible(rules in distance_rules(), w in 1..4i32) {
        let region = Shape::rect_wh(Coord::ORIGIN, w, 3);
        let all = list_admissible(&region, &rules, None, SearchOptions::default()).unwrap();
        prop_assert_eq!(all.len() as u64, count(&region, &rules));
        for p in &all {
            prop_assert!(is_locally_admissible(p, &rules).unwrap());
        }
        let distinct: std::collections::HashSet<_> = all.iter().map(|p| p.values().to_vec()).collect();
        prop_assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn glue_fillers_are_sound(
        inner in prop::collection::vec(prop_oneof![Just(0u32), Just(1), Just(2)], 9),
        outer in prop::collection::vec(prop_oneof![Just(0u32), Just(0), Just(1), Just(2)], 56),
        k in 1..3i32,
    ) {
        let rules = SftRules::distance(
            alphabet(3),
            vec![
                DistanceRule::new(vec![Symbol(1), Symbol(2)], vec![Symbol(1), Symbol(2)], 1),
                DistanceRule::new(vec![Symbol(1)], vec![Symbol(2)], 2),
            ],
        )
        .unwrap();
        let inner = Pattern::new(Shape::square(1), inner.into_iter().map(Symbol).collect()).unwrap();
        let ring = Shape::annulus(1 + k, 1 + k + 2);
        let outer = Pattern::from_pairs(ring.iter().zip(outer.into_iter().cycle()).map(|(c, s)| (c, Symbol(s))));
        if let Some(f) = glue_search(&inner, &outer, 1, k, &rules).unwrap() {
            let all = inner.concat_disjoint(&f).unwrap().concat_disjoint(&outer).unwrap();
            prop_assert!(is_locally_admissible(&all, &rules).unwrap());
        }
    }
}

#[test]
fn twenty_free_sites_match_naive() {
    // hard-core rule: no two 1s at l-infinity distance 1
    let rules = SftRules::distance(
        alphabet(2),
        vec![DistanceRule::new(vec![Symbol(1)], vec![Symbol(1)], 1)],
    )
    .unwrap();
    let region = Shape::rect_wh(Coord::ORIGIN, 5, 4);
    assert_eq!(region.len(), 20);
    assert_eq!(count(&region, &rules), naive_count(&region, &rules, None));
}

#[test]
fn glue_finds_zero_filler() {
    let rules = SftRules::distance(
        alphabet(3),
        vec![
            DistanceRule::new(vec![Symbol(1), Symbol(2)], vec![Symbol(1), Symbol(2)], 1),
            DistanceRule::new(vec![Symbol(1)], vec![Symbol(2)], 2),
        ],
    )
    .unwrap();
    let inner = Pattern::from_fn(Shape::square(1), |c| {
        if c == Coord::ORIGIN {
            Symbol(2)
        } else {
            Symbol(0)
        }
    });
    let outer = Pattern::from_fn(Shape::annulus(3, 4), |c| {
        if c.x == 4 && c.y == 0 {
            Symbol(1)
        } else {
            Symbol(0)
        }
    });
    let f = glue_search(&inner, &outer, 1, 2, &rules)
        .unwrap()
        .expect("zeros glue");
    assert_eq!(f.shape(), &Shape::annulus(1, 3));
}
