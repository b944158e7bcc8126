//! Property tests over random expression trees: printer round trip,
//! conjugation, derivative commutation and lowering identities.

mod common;

use common::{rng, sample_box};
use geomlab::expr::{conjugate, eval, parse, Expr, ExprRef};
use geomlab::wirtinger::{derive, derive_key};
use geomlab::{CPoint, Complex64, Sym};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = ExprRef> {
    prop_oneof![
        (-2.0..2.0f64).prop_map(Expr::real),
        ((-2.0..2.0f64), (-2.0..2.0f64))
            .prop_map(|(a, b)| Expr::constant(Complex64::new(a, b))),
        Just(Expr::var(Sym::Z)),
        Just(Expr::var(Sym::ZBar)),
        Just(Expr::var(Sym::W)),
        Just(Expr::var(Sym::WBar)),
    ]
}

/// Random trees over the full node set. Division and log only appear with
/// denominators/arguments of the shape `1 + e*conj(e)`, which keeps them off
/// their singularities; extreme magnitudes are filtered at use sites.
fn arb_expr() -> impl Strategy<Value = ExprRef> {
    leaf().prop_recursive(3, 20, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            inner.clone().prop_map(Expr::neg),
            inner
                .clone()
                .prop_map(|a| Expr::exp(Expr::mul(Expr::real(0.2), a))),
            inner.clone().prop_map(|a| {
                Expr::log(Expr::add(Expr::real(1.0), Expr::mul(a.clone(), conjugate(&a))))
            }),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| {
                Expr::div(
                    a,
                    Expr::add(Expr::real(1.0), Expr::mul(b.clone(), conjugate(&b))),
                )
            }),
            (leaf(), 2..=3i32).prop_map(|(a, n)| Expr::pow(a, n)),
        ]
    })
}

fn tame(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite() && c.norm() < 1e6
}

fn points() -> Vec<CPoint> {
    let mut r = rng(404);
    (0..4).map(|_| sample_box(&mut r, 1.2)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn printed_tree_reparses_identically(e in arb_expr()) {
        let printed = e.to_string();
        let reparsed = parse(&printed).unwrap_or_else(|err| {
            panic!("printed form `{}` failed to parse: {}", printed, err)
        });
        prop_assert_eq!(&reparsed, &e, "printed `{}`", printed);
    }

    #[test]
    fn conjugation_commutes_with_evaluation(e in arb_expr()) {
        let conj = conjugate(&e);
        for p in points() {
            let (Ok(a), Ok(b)) = (eval(&e, p), eval(&conj, p)) else { continue };
            prop_assume!(tame(a) && tame(b));
            let scale = a.norm().max(1.0);
            prop_assert!((b - a.conj()).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn mixed_partials_commute(e in arb_expr(), perm in 0..6usize) {
        let keys: [[Sym; 2]; 6] = [
            [Sym::Z, Sym::ZBar], [Sym::Z, Sym::W], [Sym::Z, Sym::WBar],
            [Sym::ZBar, Sym::W], [Sym::ZBar, Sym::WBar], [Sym::W, Sym::WBar],
        ];
        let key = keys[perm];
        let fwd = derive_key(&e, &key);
        let rev = derive_key(&e, &[key[1], key[0]]);
        for p in points() {
            let (Ok(a), Ok(b)) = (eval(&fwd, p), eval(&rev, p)) else { continue };
            prop_assume!(tame(a) && tame(b));
            let scale = a.norm().max(1.0);
            prop_assert!(
                (a - b).norm() <= 1e-12 * scale,
                "key {:?}: {} vs {}", key, a, b
            );
        }
    }

    #[test]
    fn conjugation_symmetry_of_derivatives(e in arb_expr()) {
        // a conj-closed real tree: r = e * conj(e)
        let real_tree = Expr::mul(e.clone(), conjugate(&e));
        let d_z = derive(&real_tree, Sym::Z);
        let d_zbar = derive(&real_tree, Sym::ZBar);
        for p in points() {
            let (Ok(a), Ok(b)) = (eval(&d_z, p), eval(&d_zbar, p)) else { continue };
            prop_assume!(tame(a) && tame(b));
            let scale = a.norm().max(1.0);
            prop_assert!((a - b.conj()).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn third_and_fourth_order_keys_commute(e in arb_expr(), seed in 0..1_000u64) {
        use rand::Rng;
        let mut r = rng(seed);
        let syms = [Sym::Z, Sym::ZBar, Sym::W, Sym::WBar];
        let len = r.random_range(3..=4usize);
        let mut key: Vec<Sym> = (0..len).map(|_| syms[r.random_range(0..4)]).collect();
        let fwd = derive_key(&e, &key);
        key.reverse();
        let rev = derive_key(&e, &key);
        for p in points().into_iter().take(2) {
            let (Ok(a), Ok(b)) = (eval(&fwd, p), eval(&rev, p)) else { continue };
            prop_assume!(tame(a) && tame(b));
            let scale = a.norm().max(1.0);
            prop_assert!((a - b).norm() <= 1e-11 * scale);
        }
    }
}

#[test]
fn lowering_agrees_with_real_arithmetic() {
    // Re / Im / squared modulus of a few composite expressions, against
    // direct real computation on the evaluated complex value
    let sources = ["z*w+exp(w)", "z^2-wbar", "exp(z)*w", "z+2*i*w"];
    let mut r = rng(505);
    for inner in sources {
        let plain = parse(inner).unwrap();
        let re = parse(&format!("Re({})", inner)).unwrap();
        let im = parse(&format!("Im({})", inner)).unwrap();
        let sq = parse(&format!("|{}|^2", inner)).unwrap();
        for _ in 0..50 {
            let p = sample_box(&mut r, 1.5);
            let v = eval(&plain, p).unwrap();
            let vre = eval(&re, p).unwrap();
            let vim = eval(&im, p).unwrap();
            let vsq = eval(&sq, p).unwrap();
            let scale = v.norm().max(1.0);
            assert!((vre.re - v.re).abs() <= 1e-14 * scale);
            assert!(vre.im.abs() <= 1e-14 * scale);
            assert!((vim.re - v.im).abs() <= 1e-14 * scale);
            assert!(vim.im.abs() <= 1e-14 * scale);
            assert!((vsq.re - v.norm_sqr()).abs() <= 1e-14 * scale * scale);
            assert!(vsq.im.abs() <= 1e-14 * scale * scale);
        }
    }
}

#[test]
fn warren_potential_round_trips_through_the_printer() {
    let ast = parse(geomlab::warren::POTENTIAL_SRC).unwrap();
    let printed = ast.to_string();
    assert_eq!(parse(&printed).unwrap(), ast, "printed `{}`", printed);
}
