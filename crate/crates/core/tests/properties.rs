//! Property suites for the polynomial and basis layers: order axioms, ring
//! axioms, canonicity of reduced bases under presentation noise, and syzygy
//! soundness on random module instances.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

use gcx_core::field::{Coeff, Field};
use gcx_core::groebner::{groebner_basis, normal_form, Budget};
use gcx_core::modules::{syzygies, ModuleOrder, ModuleVector};
use gcx_core::monomial::{Monomial, MonomialOrder};
use gcx_core::parse::parse_polynomial;
use gcx_core::poly::Polynomial;

fn arb_monomial(vars: usize, max_exp: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max_exp, vars).prop_map(Monomial)
}

fn arb_order(vars: usize) -> impl Strategy<Value = MonomialOrder> {
    let front = if vars >= 2 { 1..vars } else { 1..2usize };
    prop_oneof![
        Just(MonomialOrder::lex(vars)),
        Just(MonomialOrder::degrevlex(vars)),
        front.prop_map(move |f| MonomialOrder::elimination(f, vars - f)),
    ]
}

proptest! {
    #[test]
    fn order_is_total_and_antisymmetric(
        ord in arb_order(4),
        u in arb_monomial(4, 6),
        v in arb_monomial(4, 6),
    ) {
        let ab = ord.cmp(&u, &v);
        let ba = ord.cmp(&v, &u);
        prop_assert_eq!(ab, ba.reverse());
        prop_assert_eq!(ab == Ordering::Equal, u == v);
    }

    #[test]
    fn order_is_transitive(
        ord in arb_order(4),
        u in arb_monomial(4, 5),
        v in arb_monomial(4, 5),
        w in arb_monomial(4, 5),
    ) {
        let mut sorted = [u, v, w];
        sorted.sort_by(|a, b| ord.cmp(a, b));
        prop_assert!(ord.cmp(&sorted[0], &sorted[1]) != Ordering::Greater);
        prop_assert!(ord.cmp(&sorted[1], &sorted[2]) != Ordering::Greater);
        prop_assert!(ord.cmp(&sorted[0], &sorted[2]) != Ordering::Greater);
    }

    #[test]
    fn order_is_multiplicative_with_minimal_one(
        ord in arb_order(4),
        u in arb_monomial(4, 5),
        v in arb_monomial(4, 5),
        w in arb_monomial(4, 5),
    ) {
        let uv = ord.cmp(&u, &v);
        prop_assert_eq!(ord.cmp(&u.mul(&w), &v.mul(&w)), uv);
        let one = Monomial::one(4);
        if u != one {
            prop_assert_eq!(ord.cmp(&u, &one), Ordering::Greater);
        }
    }
}

fn arb_coeff(field: Field) -> impl Strategy<Value = Coeff> {
    (-6i64..=6).prop_map(move |n| field.from_i64(n))
}

fn arb_poly(field: Field, vars: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((arb_coeff(field), arb_monomial(vars, 3)), 0..5)
        .prop_map(move |terms| Polynomial::from_terms(field, vars, terms))
}

proptest! {
    #[test]
    fn ring_axioms_rationals(
        a in arb_poly(Field::Rationals, 3),
        b in arb_poly(Field::Rationals, 3),
        c in arb_poly(Field::Rationals, 3),
    ) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn ring_axioms_prime_field(
        a in arb_poly(Field::Prime(7), 3),
        b in arb_poly(Field::Prime(7), 3),
        c in arb_poly(Field::Prime(7), 3),
    ) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn leading_monomials_multiply(
        a in arb_poly(Field::Rationals, 3),
        b in arb_poly(Field::Rationals, 3),
        ord in arb_order(3),
    ) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let prod = a.mul(&b);
        let la = a.leading(&ord).unwrap().mono.clone();
        let lb = b.leading(&ord).unwrap().mono.clone();
        prop_assert_eq!(prod.leading(&ord).unwrap().mono.clone(), la.mul(&lb));
    }

    #[test]
    fn display_parse_roundtrip(p in arb_poly(Field::Rationals, 3)) {
        let names: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
        let printed = format!("{}", p.display(&names));
        let back = parse_polynomial(&printed, Field::Rationals, &names).unwrap();
        prop_assert_eq!(back, p);
    }
}

/// Reduced bases are canonical: shuffling and rescaling the generating set
/// of a fixed ideal cannot change the output.
#[test]
fn reduced_basis_canonical_under_noise() {
    let names: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
    let field = Field::Rationals;
    let parse = |src: &str| parse_polynomial(src, field, &names).unwrap();
    let fixtures: Vec<Vec<Polynomial>> = vec![
        vec![parse("x^2 - y"), parse("x^3 - z"), parse("x*y - z")],
        vec![parse("y^2 - x*z"), parse("z^2 - x^2*y"), parse("y*z - x^3")],
        vec![parse("x + y + z"), parse("x*y + x*z + y*z"), parse("x*y*z - 1")],
    ];
    let order = MonomialOrder::degrevlex(3);
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for gens in &fixtures {
        let reference = groebner_basis(field, gens, &order, &budget).unwrap();
        for _ in 0..100 {
            let mut noisy: Vec<Polynomial> = gens.clone();
            noisy.shuffle(&mut rng);
            for p in noisy.iter_mut() {
                let scale = loop {
                    let s = rng.gen_range(-5i64..=5);
                    if s != 0 {
                        break s;
                    }
                };
                *p = p.scaled(&field.from_i64(scale));
            }
            // occasionally adjoin a redundant combination
            if rng.gen_bool(0.5) {
                let a = noisy[0].clone();
                let b = noisy[1].clone();
                noisy.push(a.mul(&parse("x")).add(&b));
            }
            let gb = groebner_basis(field, &noisy, &order, &budget).unwrap();
            assert_eq!(gb, reference, "reduced basis not canonical");
        }
    }
}

/// Every syzygy row returned annihilates its input exactly, on random
/// module instances.
#[test]
fn syzygy_rows_annihilate() {
    let field = Field::Rationals;
    let vars = 2;
    let budget = Budget::default();
    let order = ModuleOrder::top_degrevlex(vars);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut random_poly = |rng: &mut ChaCha8Rng| {
        let terms: Vec<(Coeff, Monomial)> = (0..rng.gen_range(0..4))
            .map(|_| {
                let c = field.from_i64(rng.gen_range(-3i64..=3));
                let m = Monomial(vec![rng.gen_range(0..3u32), rng.gen_range(0..3u32)]);
                (c, m)
            })
            .collect();
        Polynomial::from_terms(field, vars, terms)
    };
    for case in 0..100 {
        let rank = 1 + (case % 3);
        let count = 2 + (case % 3);
        let vectors: Vec<ModuleVector> = (0..count)
            .map(|_| {
                ModuleVector::new((0..rank).map(|_| random_poly(&mut rng)).collect())
            })
            .collect();
        if vectors.iter().all(|v| v.is_zero()) {
            continue;
        }
        let rows = syzygies(&vectors, &order, &budget).unwrap();
        for row in &rows {
            let mut acc = ModuleVector::zero(field, vars, rank);
            for (c, v) in row.components().iter().zip(&vectors) {
                acc = acc.sub(&v.mul_poly(c).mul_poly(&Polynomial::constant(
                    field,
                    vars,
                    field.from_i64(-1),
                )));
            }
            assert!(acc.is_zero(), "syzygy row fails to annihilate exactly");
        }
    }
}

/// Normal forms are idempotent and detect membership on a fixture with a
/// nontrivial reduction.
#[test]
fn normal_form_contract() {
    let names: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
    let field = Field::Rationals;
    let parse = |src: &str| parse_polynomial(src, field, &names).unwrap();
    let order = MonomialOrder::degrevlex(3);
    let gb = groebner_basis(
        field,
        &[parse("y^2 - x*z"), parse("z^2 - x^2*y"), parse("y*z - x^3")],
        &order,
        &Budget::default(),
    )
    .unwrap();
    let f = parse("y^4 + z^3 - x*y");
    let nf = normal_form(&f, &gb);
    assert_eq!(normal_form(&nf, &gb), nf);
    let member = parse("y^2 - x*z").mul(&parse("z - 7*x"));
    assert!(normal_form(&member, &gb).is_zero());
}
