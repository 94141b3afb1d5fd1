use super::*;
use crate::coeff::rat;

fn general() -> ModelConfig {
    ModelConfig::symbolic(Entropy::General)
}

#[test]
fn gamma_one_is_rejected() {
    assert!(matches!(ModelConfig::at_gamma(rat(1, 1), Entropy::General), Err(ModelError::BadGamma(_))));
    assert!(ModelConfig::at_gamma(rat(7, 5), Entropy::General).is_ok());
}

#[test]
fn lagrangian_parses_from_text() {
    let l = build_lagrangian(&general()).unwrap();
    let text = parse("phi1_t^2/2 + phi2_t^2/2 - J^(1-gamma)*S/(gamma-1)").unwrap();
    assert_eq!(l, text);
}

#[test]
fn euler_lagrange_matches_printed_equations() {
    let sys = euler_lagrange(&general()).unwrap();
    let printed = printed_el(&general()).unwrap();
    assert!(sys.e[0].canonical_eq(&printed[0]), "{}", (&sys.e[0] - &printed[0]).canonical());
    assert!(sys.e[1].canonical_eq(&printed[1]));
}

#[test]
fn solved_forms_annihilate_the_equations() {
    let sys = euler_lagrange(&general()).unwrap();
    for k in 0..2 {
        let r = sys.relations().reduce(&sys.e[k]).unwrap();
        assert!(r.expr.is_empty());
        assert!(r.fired.contains(&format!("EL{}", k + 1)));
    }
}

#[test]
fn isentropic_equations_lose_entropy_gradients() {
    let cfg = ModelConfig::symbolic(Entropy::Isentropic);
    let sys = euler_lagrange(&cfg).unwrap();
    for e in &sys.e {
        assert!(e.atoms().iter().all(|a| !(a.sym == Sym::S && a.order() > 0)));
    }
}

#[test]
fn fixed_gamma_matches_specialized_symbolic() {
    let sym = euler_lagrange(&general()).unwrap();
    for g in [rat(7, 5), rat(5, 3), rat(2, 1), rat(3, 1)] {
        let cfg = ModelConfig::at_gamma(g.clone(), Entropy::General).unwrap();
        let fixed = euler_lagrange(&cfg).unwrap();
        for k in 0..2 {
            let s = sym.e[k].specialize_gamma(&g).unwrap();
            assert!(s.canonical_eq(&fixed.e[k]));
        }
    }
}

#[test]
fn consistency_checks_vanish() {
    for cfg in [general(), ModelConfig::symbolic(Entropy::Isentropic)] {
        let rep = verify_gd_consistency(&cfg).unwrap();
        for (name, r) in &rep.checks {
            assert!(r.is_zero(), "{name}: {}", r.canonical());
        }
    }
}

#[test]
fn relation_needs_its_assumption() {
    let rel = psi_relations(PsiOrientation::Eta);
    let e = parse("psi1_eta").unwrap();
    assert!(matches!(rel.reduce(&e), Err(ModelError::Unassumed { .. })));
    let rel = rel.assume(entropy_gradient_nonzero(Label::Xi));
    let r = rel.reduce(&e).unwrap();
    assert!(r.expr.canonical_eq(&parse("psi1_xi*S_eta/S_xi + xi").unwrap()));
}

#[test]
fn expression_without_relation_atoms_is_unchanged() {
    let sys = euler_lagrange(&general()).unwrap();
    let e = parse("phi1_t*S + J").unwrap();
    assert_eq!(on_shell_reduce(&e, &sys, None).unwrap().expr, e.canonical());
}
