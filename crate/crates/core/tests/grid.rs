use proptest::prelude::*;
use sftlab::grid::{Alphabet, Coord, Pattern, Shape, Symbol};

fn coord(r: i32) -> impl Strategy<Value = Coord> {
    (-r..=r, -r..=r).prop_map(|(x, y)| Coord::new(x, y))
}

fn rect_pattern() -> impl Strategy<Value = Pattern> {
    (coord(5), 1..6i32, 1..6i32).prop_flat_map(|(lo, w, h)| {
        prop::collection::vec(0..3u32, (w * h) as usize).prop_map(move |v| {
            Pattern::new(Shape::rect_wh(lo, w, h), v.into_iter().map(Symbol).collect()).unwrap()
        })
    })
}

fn site_pattern() -> impl Strategy<Value = Pattern> {
    prop::collection::btree_map(coord(6), 0..3u32, 1..20)
        .prop_map(|m| Pattern::from_pairs(m.into_iter().map(|(c, s)| (c, Symbol(s)))))
}

proptest! {
    #[test]
    fn translation_is_a_group_action(p in rect_pattern(), s in coord(10), t in coord(10)) {
        let once = p.translate(s + t);
        let twice = p.translate(t).translate(s);
        prop_assert!(once.positioned_eq(&twice));
        prop_assert!(p.translate(Coord::ORIGIN).positioned_eq(&p));
        prop_assert!(p.translate(t).translate(-t).positioned_eq(&p));
    }

    #[test]
    fn translate_reads_shifted_sites(p in site_pattern(), t in coord(10)) {
        let q = p.translate(t);
        for (c, s) in q.iter() {
            prop_assert_eq!(p.get(c + t).unwrap(), s);
        }
    }

    #[test]
    fn subpattern_commutes_with_translate(p in rect_pattern(), t in coord(8), seed in any::<u64>()) {
        let sites: Vec<Coord> = p.shape().iter().filter(|c| (c.x * 31 + c.y * 17) as u64 % 3 != seed % 3).collect();
        let s = Shape::from_sites(sites);
        let a = p.subpattern(&s).unwrap().translate(t);
        let b = p.translate(t).subpattern(&s.shifted(-t)).unwrap();
        prop_assert!(a.positioned_eq(&b));
    }

    #[test]
    fn concat_is_commutative_and_associative(
        a in site_pattern(),
        b in site_pattern(),
        c in site_pattern(),
    ) {
        // make the three shapes disjoint by moving them apart
        let b = b.moved_by(Coord::new(20, 0));
        let c = c.moved_by(Coord::new(0, 20));
        let ab = a.concat_disjoint(&b).unwrap();
        prop_assert!(ab.positioned_eq(&b.concat_disjoint(&a).unwrap()));
        let left = ab.concat_disjoint(&c).unwrap();
        let right = a.concat_disjoint(&b.concat_disjoint(&c).unwrap()).unwrap();
        prop_assert!(left.positioned_eq(&right));
    }

    #[test]
    fn json_round_trip(p in prop_oneof![rect_pattern(), site_pattern()]) {
        let a = Alphabet::new(["0", "+", "-"]).unwrap();
        let (a2, q) = Pattern::from_json(&p.to_json(&a)).unwrap();
        prop_assert_eq!(a2, a);
        prop_assert!(q.positioned_eq(&p));
    }
}

#[test]
fn overlapping_concat_is_rejected() {
    let p = Pattern::filled(Shape::square(1), Symbol(0));
    let q = Pattern::filled(Shape::rect_wh(Coord::new(1, 1), 2, 2), Symbol(1));
    assert!(p.concat_disjoint(&q).is_err());
}

#[test]
fn equality_ignores_placement() {
    let p = Pattern::from_fn(Shape::rect_wh(Coord::ORIGIN, 3, 2), |c| {
        Symbol((c.x + c.y) as u32 % 2)
    });
    let q = p.moved_by(Coord::new(-7, 4));
    assert_eq!(p, q);
    assert!(!p.positioned_eq(&q));
}
