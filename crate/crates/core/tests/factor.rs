use proptest::prelude::*;
use sftlab::factor::{
    apply_code, build_psi1, build_psi2_with, check_decomposition, collapse_code, compose, hochman_code,
    identity_code, image_entropy_estimate, level_square_images, parity_code, CodeKind, FactorError,
    SlidingBlockCode,
};
use sftlab::grid::{Coord, Pattern, Shape, Symbol};
use sftlab::hochman::{build_x_omega_window, BlankLabels, OmegaPrefix};
use sftlab::wr::{flip_symbol, spin_flip, wr_alphabet};

fn window(seed: u64, radius: i32, k: u32) -> Pattern {
    build_x_omega_window(
        &OmegaPrefix::random(24, seed),
        radius,
        k,
        &BlankLabels::Seeded(seed),
    )
    .unwrap()
}

fn flip_code() -> SlidingBlockCode {
    let a = wr_alphabet();
    let table = a.symbols().map(flip_symbol).collect();
    SlidingBlockCode::from_table("flip", a.clone(), a, table).unwrap()
}

/// Radius-1 code over `{0,+,-}`: a site becomes `+` when its east neighbour
/// is nonzero.
fn east_nonzero() -> SlidingBlockCode {
    let a = wr_alphabet();
    SlidingBlockCode::from_fn("east", 1, a.clone(), a, |v| {
        Ok(if v.at(Coord::new(1, 0))? == Symbol(0) {
            Symbol(0)
        } else {
            Symbol(1)
        })
    })
}

fn wr_pattern() -> impl Strategy<Value = Pattern> {
    (3..7i32, 3..7i32).prop_flat_map(|(w, h)| {
        prop::collection::vec(0..3u32, (w * h) as usize).prop_map(move |v| {
            Pattern::new(
                Shape::rect_wh(Coord::ORIGIN, w, h),
                v.into_iter().map(Symbol).collect(),
            )
            .unwrap()
        })
    })
}

proptest! {
    #[test]
    fn codes_commute_with_translation(p in wr_pattern(), tx in -9..9i32, ty in -9..9i32) {
        let t = Coord::new(tx, ty);
        for c in [flip_code(), east_nonzero(), compose(&east_nonzero(), &flip_code()).unwrap()] {
            let a = apply_code(&c, &p.translate(t)).unwrap();
            let b = apply_code(&c, &p).unwrap().translate(t);
            prop_assert!(a.positioned_eq(&b), "{}", c.name());
        }
    }

    #[test]
    fn identity_is_neutral(p in wr_pattern()) {
        let id = SlidingBlockCode::identity(wr_alphabet());
        let c = east_nonzero();
        let direct = apply_code(&c, &p).unwrap();
        prop_assert!(apply_code(&compose(&id, &c).unwrap(), &p).unwrap().positioned_eq(&direct));
        prop_assert!(apply_code(&compose(&c, &id).unwrap(), &p).unwrap().positioned_eq(&direct));
    }
}

#[test]
fn radii_add_under_composition() {
    let c = compose(&east_nonzero(), &east_nonzero().shifted(Coord::new(0, 1))).unwrap();
    assert_eq!(c.radius(), 3);
    let p = Pattern::from_fn(Shape::rect_wh(Coord::ORIGIN, 9, 9), |q| {
        Symbol((q.x * q.y) as u32 % 3)
    });
    assert_eq!(apply_code(&c, &p).unwrap().shape(), &p.shape().eroded(3));
}

#[test]
fn flip_twice_is_identity_on_every_three_by_three() {
    let ff = compose(&flip_code(), &flip_code()).unwrap();
    let sq = Shape::square(1);
    for code in 0..3u32.pow(9) {
        let mut c = code;
        let p = Pattern::from_fn(sq.clone(), |_| {
            let s = c % 3;
            c /= 3;
            Symbol(s)
        });
        let twice = apply_code(&ff, &p).unwrap();
        assert!(twice.positioned_eq(&p));
        assert!(apply_code(&flip_code(), &p)
            .unwrap()
            .positioned_eq(&spin_flip(&p)));
    }
}

#[test]
fn mismatched_alphabets_do_not_compose() {
    assert!(matches!(
        compose(&parity_code(3), &collapse_code(3)),
        Err(FactorError::AlphabetMismatch(_))
    ));
}

#[test]
fn image_counts() {
    for k in 1..=4 {
        assert_eq!(level_square_images(&collapse_code(k), 0, k).unwrap().len(), 1);
        assert_eq!(
            level_square_images(&parity_code(k), 0, k).unwrap().len(),
            k.min(2) as usize
        );
        assert_eq!(
            level_square_images(&identity_code(k), 0, k).unwrap().len(),
            k as usize
        );
    }
    // sixteen blanks in a level-2 square
    assert_eq!(level_square_images(&parity_code(2), 1, 2).unwrap().len(), 1 << 16);
    assert!(matches!(
        level_square_images(&identity_code(3), 1, 3),
        Err(FactorError::TooManyLabelings { .. })
    ));
}

#[test]
fn psi2_ignores_the_fill_label() {
    for (k, radius) in [(3, 0), (2, 1)] {
        let c = hochman_code(CodeKind::Parity, k, radius).unwrap();
        let n = radius;
        let images = level_square_images(&c, n, k).unwrap();
        let psi1 = build_psi1(&c, n, k, &images).unwrap();
        let a = build_psi2_with(&c, n, k, &images, 1, false).unwrap();
        let b = build_psi2_with(&c, n, k, &images, 2, false).unwrap();
        for seed in 0..4 {
            let y = apply_code(&psi1, &window(seed, 40, k)).unwrap();
            assert!(apply_code(&a, &y)
                .unwrap()
                .positioned_eq(&apply_code(&b, &y).unwrap()));
        }
    }
}

#[test]
fn decomposition_holds_for_radius_zero_and_one() {
    let windows: Vec<Pattern> = (0..6).map(|s| window(100 + s, 50, 2)).collect();
    for kind in [CodeKind::Identity, CodeKind::Collapse, CodeKind::Parity] {
        let r = check_decomposition(&hochman_code(kind, 2, 0).unwrap(), 0, 2, &windows).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.sites_compared > 0);
    }
    let r = check_decomposition(&hochman_code(CodeKind::Collapse, 2, 1).unwrap(), 1, 2, &windows).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.m, 1);
}

#[test]
fn parity_image_entropy_matches_prediction() {
    let e = image_entropy_estimate(&parity_code(4), 4, 600, 8).unwrap();
    assert_eq!(e.m, 2);
    assert!(e.relative_error < 0.1, "{e:?}");
    assert!(image_entropy_estimate(&parity_code(4).shifted(Coord::new(1, 0)), 4, 40, 6).is_err());
}
