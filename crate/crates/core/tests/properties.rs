use std::collections::HashSet;

use num_rational::BigRational;
use proptest::prelude::*;
use thompson_core::verify::{ball_generators, centralizer_in_ball, enumerate_ball};
use thompson_core::words::{a_map, eval_word_diagram};
use thompson_core::{
    eval_word, generator_map, Breakpoint, Dyadic, Generator, Interval, Letter, PLMap, TreePair,
    Word, WreathElement,
};

fn letter() -> impl Strategy<Value = Letter> {
    (
        prop_oneof![
            4 => Just(Generator::X(0)),
            4 => Just(Generator::X(1)),
            1 => Just(Generator::X(2)),
            1 => Just(Generator::A),
            1 => Just(Generator::B),
        ],
        prop_oneof![Just(1i64), Just(-1), Just(2), Just(-2)],
    )
        .prop_map(|(g, e)| Letter::new(g, e))
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..=max).prop_map(Word::new)
}

fn map(max: usize) -> impl Strategy<Value = PLMap> {
    word(max).prop_map(|w| eval_word(&w))
}

// Elements >= id: products of x0, x1, x2 and b.
fn positive_map() -> impl Strategy<Value = PLMap> {
    prop::collection::vec(
        prop_oneof![
            Just(Generator::X(0)),
            Just(Generator::X(1)),
            Just(Generator::X(2)),
            Just(Generator::B)
        ],
        0..6,
    )
    .prop_map(|gs| {
        eval_word(&Word::new(
            gs.into_iter().map(|g| Letter::new(g, 1)).collect(),
        ))
    })
}

/// Affine copy of `h` on `[p, p + 2^-d]`, identity elsewhere.
fn squeeze(h: &PLMap, p: &Dyadic, d: i64) -> PLMap {
    let lo = p.clone();
    let hi = p + &Dyadic::pow2(-d);
    let inner: Vec<Breakpoint> = h
        .points()
        .iter()
        .map(|b| Breakpoint::new(p + &b.x.mul_pow2(-d), p + &b.y.mul_pow2(-d)))
        .collect();
    PLMap::make(Interval::new(lo, hi).unwrap(), inner)
        .unwrap()
        .extend(&Interval::unit())
        .unwrap()
}

fn dyadic_in_unit() -> impl Strategy<Value = Dyadic> {
    (0i64..=4096).prop_map(|k| Dyadic::new(k, 12))
}

fn wreath_element() -> impl Strategy<Value = WreathElement> {
    (
        -5i64..=5,
        prop::collection::vec((-6i64..=6, -4i64..=4), 0..6),
    )
        .prop_map(|(m, c)| WreathElement::new(m, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_laws(f in map(6), g in map(6), h in map(6)) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert!((&f * &f.inverse()).is_identity());
        prop_assert_eq!(f.inverse().inverse(), f.clone());
    }

    #[test]
    fn support_is_transported(f in map(6), g in map(6)) {
        let conj = g.conjugate(&f).unwrap();
        let moved: Vec<(BigRational, BigRational)> = g
            .support()
            .intervals()
            .iter()
            .map(|iv| (f.evaluate_rational(&iv.lo).unwrap(), f.evaluate_rational(&iv.hi).unwrap()))
            .collect();
        let got: Vec<(BigRational, BigRational)> = conj
            .support()
            .intervals()
            .iter()
            .map(|iv| (iv.lo.clone(), iv.hi.clone()))
            .collect();
        prop_assert_eq!(got, moved);
    }

    #[test]
    fn support_matches_pointwise_motion(f in map(6), a in dyadic_in_unit()) {
        let moved = f.evaluate(&a).unwrap() != a;
        let r = a.to_rational();
        let inside = f.support().intervals().iter().any(|iv| iv.lo < r && r < iv.hi);
        prop_assert_eq!(moved, inside);
    }

    #[test]
    fn disjoint_supports_commute(h1 in map(5), h2 in map(5), f in map(4), g in map(4)) {
        let left = squeeze(&h1, &Dyadic::zero(), 1);
        let right = squeeze(&h2, &Dyadic::new(1, 1), 1);
        prop_assert!(left.support().is_disjoint(&right.support()));
        prop_assert!(left.commutes(&right));
        if f.support().is_disjoint(&g.support()) {
            prop_assert!(f.commutes(&g));
        }
    }

    #[test]
    fn abelianization_is_a_homomorphism(f in map(6), g in map(6)) {
        let (a, b) = f.abelianize();
        let (c, d) = g.abelianize();
        prop_assert_eq!((&f * &g).abelianize(), (a + c, b + d));
    }

    #[test]
    fn nonneg_maps_closed_under_conjugation(f in positive_map(), g in map(6)) {
        prop_assert!(f.is_ge_identity());
        prop_assert!(f.conjugate(&g).unwrap().is_ge_identity());
    }

    #[test]
    fn slope_transport_near_zero(h in map(5), window in 0usize..3) {
        let (p, d) = [(Dyadic::new(1, 5), 5), (Dyadic::new(1, 4), 4), (Dyadic::new(3, 6), 6)][window].clone();
        let g = squeeze(&h, &p, d);
        let a_inv = a_map().inverse();
        let conj = g.conjugate(&a_inv).unwrap();
        let eighth = Dyadic::new(1, 3);
        for bp in g.points() {
            if bp.x.is_positive() && bp.x < eighth {
                let at = a_inv.evaluate(&bp.x).unwrap();
                prop_assert_eq!(conj.slope_right(&at).unwrap(), g.slope_right(&bp.x).unwrap());
            }
        }
    }

    #[test]
    fn evaluate_matches_compose(f in map(6), g in map(6), pts in prop::collection::vec(dyadic_in_unit(), 100)) {
        let fg = &f * &g;
        for a in pts {
            prop_assert_eq!(fg.evaluate(&a).unwrap(), g.evaluate(&f.evaluate(&a).unwrap()).unwrap());
        }
    }

    #[test]
    fn map_text_round_trip(f in map(8)) {
        prop_assert_eq!(f.to_string().parse::<PLMap>().unwrap(), f.clone());
        prop_assert_eq!(PLMap::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn diagrams_round_trip(f in map(8)) {
        let p = TreePair::from_map(&f).unwrap();
        prop_assert!(p.is_reduced());
        prop_assert_eq!(p.to_map(), f.clone());
        let q = TreePair::from_map(&p.to_map()).unwrap();
        prop_assert_eq!(q, p.clone());
        let text = p.to_string();
        prop_assert_eq!(text.parse::<TreePair>().unwrap(), p);
    }

    #[test]
    fn reduce_is_idempotent(f in map(6), leaves in prop::collection::vec(0usize..64, 1..4)) {
        let p = TreePair::from_map(&f).unwrap();
        let mut e = p.clone();
        for l in leaves {
            e = e.expand_leaf(l % e.leaf_count()).unwrap();
        }
        prop_assert_eq!(e.to_map(), f);
        let r = e.reduce();
        prop_assert_eq!(r.reduce(), r.clone());
        prop_assert_eq!(r, p);
    }

    #[test]
    fn diagram_and_breakpoint_evaluation_agree(w in word(8)) {
        prop_assert_eq!(eval_word_diagram(&w).to_map(), eval_word(&w));
    }

    #[test]
    fn eval_is_a_homomorphism(u in word(6), v in word(6)) {
        prop_assert_eq!(eval_word(&u.concat(&v)), &eval_word(&u) * &eval_word(&v));
        prop_assert_eq!(eval_word(&u.inverse()), eval_word(&u).inverse());
        prop_assert_eq!(eval_word(&u.free_reduce()), eval_word(&u));
    }

    #[test]
    fn word_text_round_trip(w in word(10)) {
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }

    #[test]
    fn wreath_embedding_is_a_homomorphism(u in wreath_element(), v in wreath_element()) {
        prop_assert_eq!(u.mul(&v).embed(), &u.embed() * &v.embed());
        prop_assert_eq!(u.inv().embed(), u.embed().inverse());
    }

    #[test]
    fn wreath_round_trip(u in wreath_element()) {
        let f = u.embed();
        prop_assert_eq!(WreathElement::decompose(&f).unwrap(), u.clone());
        prop_assert_eq!(u.to_string().parse::<WreathElement>().unwrap(), u);
    }

    #[test]
    fn decompose_is_sound(f in map(6)) {
        if let Ok(u) = WreathElement::decompose(&f) {
            prop_assert_eq!(u.embed(), f);
        }
    }

    #[test]
    fn base_group_is_free_abelian(c in prop::collection::vec((-6i64..=6, -4i64..=4), 1..6)) {
        let u = WreathElement::new(0, c);
        prop_assert_eq!(u.embed().is_identity(), u.is_identity());
    }
}

#[test]
fn presentation_relations_hold() {
    let b = WreathElement::b().embed();
    for n in -20..=20 {
        assert!(b.commutes(&WreathElement::conj_b(n).embed()), "n = {n}");
    }
}

#[test]
fn powers_of_a_and_b_do_not_commute() {
    for n in 1..=10 {
        let an = WreathElement::a().pow(n).embed();
        let bn = WreathElement::b().pow(n).embed();
        assert!(!an.commutes(&bn), "n = {n}");
    }
}

#[test]
fn claim_holds_on_a_wide_window() {
    for k in -12..=12 {
        let s = thompson_core::support_interval(k);
        let g = WreathElement::conj_b(k).embed().restrict(&s).unwrap();
        assert_eq!(g.initial_slope(), 1, "k = {k}");
        assert!(g.is_gt_identity_interior(), "k = {k}");
    }
}

#[test]
fn support_grid_tiles() {
    let grid: Vec<Interval> = (-8..=8).map(thompson_core::support_interval).collect();
    for w in grid.windows(2) {
        assert_eq!(w[0].hi(), w[1].lo());
    }
}

#[test]
fn balls_grow_and_nest() {
    let mut prev: Option<HashSet<PLMap>> = None;
    for r in 0..=6 {
        let ball = enumerate_ball(r).unwrap();
        for e in &ball {
            assert_eq!(eval_word(&e.witness), e.map);
            assert_eq!(e.length(), e.witness.letters().len() as u64);
            assert!(e.length() <= r as u64);
        }
        let set: HashSet<PLMap> = ball.into_iter().map(|e| e.map).collect();
        if let Some(p) = prev {
            assert!(p.is_subset(&set));
            assert!(set.len() > p.len(), "radius {r}");
        }
        prev = Some(set);
    }
}

#[test]
fn ball_witnesses_are_lexicographically_least() {
    // brute force over every word of length <= 4
    let gens = ball_generators();
    let ball = enumerate_ball(4).unwrap();
    let mut best: std::collections::HashMap<PLMap, Vec<usize>> = Default::default();
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..=4 {
        for w in &frontier {
            let m = eval_word(&Word::new(w.iter().map(|&i| gens[i]).collect()));
            best.entry(m).or_insert_with(|| w.clone());
        }
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..4 {
                let mut v = w.clone();
                v.push(i);
                next.push(v);
            }
        }
        frontier = next;
    }
    assert_eq!(best.len(), ball.len());
    for e in &ball {
        let w = Word::new(best[&e.map].iter().map(|&i| gens[i]).collect());
        assert_eq!(w, e.witness);
    }
}

#[test]
fn x0_centralizer_in_small_balls_is_cyclic() {
    let x0 = generator_map(0);
    for r in 0..=7u32 {
        let found: HashSet<PLMap> = centralizer_in_ball(r, std::slice::from_ref(&x0))
            .unwrap()
            .into_iter()
            .map(|e| e.map)
            .collect();
        let powers: HashSet<PLMap> = (-(r as i64)..=r as i64).map(|m| x0.pow(m)).collect();
        assert_eq!(found, powers, "radius {r}");
    }
}
