//! Property tests of the expression kernel and the jet calculus.

use std::collections::BTreeMap;

use noetherlab_core::atom::atoms::{phi, ETA, T, XI};
use noetherlab_core::atom::{Atom, Label, Sym};
use noetherlab_core::coeff::{rat, Coeff, GammaPoly};
use noetherlab_core::expr::{parse, Base, Exponent, Expr};
use noetherlab_core::jet::{Entropy, Generator, JetFrame};
use noetherlab_core::noether::{noether_identity_residual, variational_commutation_residual};
use proptest::prelude::*;

/// Atoms a random Lagrangian-frame expression may use.
fn pool() -> Vec<Atom> {
    use Label::{Eta, Xi};
    let t = Label::T;
    vec![
        T,
        XI,
        ETA,
        phi(1, &[]),
        phi(2, &[]),
        phi(1, &[t]),
        phi(2, &[t]),
        phi(1, &[Xi]),
        phi(1, &[Eta]),
        phi(2, &[Xi]),
        phi(2, &[Eta]),
        Atom::new(Sym::S),
    ]
}

fn point_pool() -> Vec<Atom> {
    vec![T, XI, ETA, phi(1, &[]), phi(2, &[])]
}

/// A term: integer coefficient, a gamma-dependent flag, a few atom powers
/// drawn from `atoms` and an optional power of `J`.
type TermSpec = (i64, bool, Vec<(usize, i64)>, i64);

fn term_spec(n_atoms: usize, with_j: bool) -> impl Strategy<Value = TermSpec> {
    let j = if with_j { -1i64..=1 } else { 0i64..=0 };
    (-3i64..=3, any::<bool>(), prop::collection::vec((0..n_atoms, prop::sample::select(vec![-1i64, 1, 2])), 0..=3), j)
}

fn build(atoms: &[Atom], spec: &[TermSpec]) -> Expr {
    let mut e = Expr::zero();
    for (c, g, factors, j) in spec {
        let mut t = Expr::int(*c);
        if *g {
            t = t * Expr::constant(Coeff::from_poly(GammaPoly::linear(rat(1, 1), rat(1, 1))));
        }
        for (i, k) in factors {
            t = t * Expr::atom(atoms[*i]).pow_int(*k).unwrap();
        }
        if *j != 0 {
            t = t * Expr::power(Base::J, Exponent::int(*j));
        }
        e = e + t;
    }
    e
}

fn expr(with_j: bool) -> impl Strategy<Value = Expr> {
    let n = pool().len();
    prop::collection::vec(term_spec(n, with_j), 0..=4).prop_map(|s| build(&pool(), &s))
}

fn point_expr() -> impl Strategy<Value = Expr> {
    let n = point_pool().len();
    prop::collection::vec(term_spec(n, false), 0..=3).prop_map(|s| build(&point_pool(), &s))
}

/// Values in `[-2, -0.5] ∪ [0.5, 2]` for every atom of the pool.
fn assignment() -> impl Strategy<Value = BTreeMap<Atom, f64>> {
    let n = pool().len();
    prop::collection::vec((0.5f64..2.0, any::<bool>()), n).prop_map(|v| {
        pool().into_iter().zip(v).map(|(a, (x, neg))| (a, if neg { -x } else { x })).collect()
    })
}

fn jacobian(assign: &BTreeMap<Atom, f64>) -> f64 {
    use Label::{Eta, Xi};
    assign[&phi(1, &[Xi])] * assign[&phi(2, &[Eta])] - assign[&phi(1, &[Eta])] * assign[&phi(2, &[Xi])]
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-8 * (1.0 + a.abs().max(b.abs()))
}

const GAMMA: f64 = 1.4;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_is_idempotent(e in expr(true)) {
        let c = e.canonical();
        prop_assert_eq!(c.canonical(), c);
    }

    #[test]
    fn ring_axioms(a in expr(true), b in expr(true), c in expr(true)) {
        prop_assert!((&a + &b).canonical_eq(&(&b + &a)));
        prop_assert!((&a * &b).canonical_eq(&(&b * &a)));
        prop_assert!(((&a * &b) * c.clone()).canonical_eq(&(a.clone() * (&b * &c))));
        prop_assert!((&a * &(&b + &c)).canonical_eq(&(&a * &b + &a * &c)));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in expr(true), b in expr(true), assign in assignment()) {
        prop_assume!(jacobian(&assign).abs() > 0.1);
        let ev = |e: &Expr| e.eval_f64(&assign, None, GAMMA).unwrap();
        prop_assert!(close(ev(&(&a + &b)), ev(&a) + ev(&b)));
        prop_assert!(close(ev(&(&a * &b)), ev(&a) * ev(&b)));
        // J elimination does not change values
        prop_assert!(close(ev(&a.canonical()), ev(&a)));
    }

    #[test]
    fn print_parse_round_trip(e in expr(true)) {
        let c = e.canonical();
        let back = parse(&c.to_string()).unwrap();
        prop_assert!(back.canonical_eq(&c), "{} -> {}", c, back);
    }

    #[test]
    fn total_derivatives_commute(e in expr(true)) {
        let jet = JetFrame::lagrangian(Entropy::General);
        for (a, b) in [(Label::T, Label::Xi), (Label::Xi, Label::Eta), (Label::T, Label::Eta)] {
            let ab = jet.total_derivative(&jet.total_derivative(&e, a).unwrap(), b).unwrap();
            let ba = jet.total_derivative(&jet.total_derivative(&e, b).unwrap(), a).unwrap();
            prop_assert!(ab.canonical_eq(&ba));
        }
    }

    #[test]
    fn divergences_are_annihilated(a in expr(true), b in expr(true), c in expr(true)) {
        let jet = JetFrame::lagrangian(Entropy::General);
        let div = jet.divergence(&[a, b, c]).unwrap();
        for dep in [Sym::Phi1, Sym::Phi2] {
            prop_assert!(jet.variational_derivative(&div, dep).unwrap().is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn noether_identity_holds(
        xi in [point_expr(), point_expr(), point_expr()],
        eta in [point_expr(), point_expr()],
        f in expr(true),
    ) {
        let jet = JetFrame::lagrangian(Entropy::General);
        let gen = Generator::new(xi, eta);
        prop_assert!(noether_identity_residual(&gen, &f, &jet).unwrap().is_zero());
        for r in variational_commutation_residual(&gen, &f, &jet).unwrap() {
            prop_assert!(r.is_zero());
        }
    }
}
