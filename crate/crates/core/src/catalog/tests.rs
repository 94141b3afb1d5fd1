use super::*;
use crate::coeff::rat;

fn iso() -> ModelConfig {
    ModelConfig::symbolic(Entropy::Isentropic)
}

fn general() -> ModelConfig {
    ModelConfig::symbolic(Entropy::General)
}

#[test]
fn builtin_catalog_validates() {
    Catalog::builtin().validate().unwrap();
}

#[test]
fn admitted_generators_isentropic() {
    for (id, g) in generators(&iso()).unwrap() {
        let r = verify_admitted(&g, &iso()).unwrap();
        assert!(r.admitted(), "{id}: {:?}", r.residuals.each_ref().map(|e| e.to_string()));
    }
}

#[test]
fn admitted_generators_general() {
    for (id, g) in generators(&general()).unwrap() {
        let r = verify_admitted(&g, &general()).unwrap();
        assert!(r.admitted(), "{id}: {:?}", r.residuals.each_ref().map(|e| e.to_string()));
    }
}

#[test]
fn gamma_two_generators() {
    for entropy in [Entropy::Isentropic, Entropy::General] {
        let config = ModelConfig::at_gamma(rat(2, 1), entropy).unwrap();
        let ids: Vec<String> = generators(&config).unwrap().into_iter().map(|(id, _)| id).collect();
        assert!(ids.contains(&"X7".to_string()));
        for (id, g) in generators(&config).unwrap() {
            assert!(verify_admitted(&g, &config).unwrap().admitted(), "{id} at gamma = 2");
        }
    }
    let x7 = Catalog::builtin().get("X7").unwrap().generator(&iso()).unwrap();
    let config = ModelConfig::at_gamma(rat(5, 3), Entropy::Isentropic).unwrap();
    assert!(!verify_admitted(&x7, &config).unwrap().admitted());
}

#[test]
fn equivalence_generators_preserve_the_family() {
    let cat = Catalog::builtin();
    for e in cat.of_kind(EntryKind::EquivalenceGenerator) {
        let config = if e.scope.gamma_two { ModelConfig::at_gamma(rat(2, 1), Entropy::General).unwrap() } else { general() };
        let g = e.generator(&config).unwrap();
        let r = verify_admitted(&g, &config).unwrap();
        assert!(r.admitted(), "{}: {:?}", e.id, r.residuals.each_ref().map(|e| e.to_string()));
    }
}

#[test]
fn printed_x9h_is_not_admitted() {
    let e = Catalog::builtin().get("X9h").unwrap().clone();
    let printed = e.printed_generator(&general()).unwrap().unwrap();
    assert!(!verify_admitted(&printed, &general()).unwrap().admitted());
    // the corrected form is X10n - X9n/(2 gamma - 1)
    let cat = Catalog::builtin();
    let x10 = cat.get("X10n").unwrap().generator(&general()).unwrap();
    let x9 = cat.get("X9n").unwrap().generator(&general()).unwrap();
    let k = crate::expr::parse("-1/(2*gamma-1)").unwrap();
    let combo = x10.add(&x9.scale(&k));
    let primary = e.generator(&general()).unwrap();
    for (a, b) in combo.components().into_iter().zip(primary.components()) {
        assert!(a.canonical_eq(b));
    }
}

#[test]
fn x10_alone_is_not_admitted() {
    let x10 = Catalog::builtin().get("X10").unwrap().generator(&iso()).unwrap();
    assert!(!verify_admitted(&x10, &iso()).unwrap().admitted());
}

#[test]
fn classifying_equation_general() {
    let r = classifying_check(&general()).unwrap();
    assert!(r.matches(), "{:?}", r.remainder.each_ref().map(|e| e.to_string()));
}

#[test]
fn classifying_equation_isentropic() {
    let r = classifying_check(&iso()).unwrap();
    assert!(r.matches(), "{:?}", r.remainder.each_ref().map(|e| e.to_string()));
}

#[test]
fn commutators_close_isentropic() {
    let table = commutator_table(&iso()).unwrap();
    assert!(!table.is_empty());
    for (a, b, d) in &table {
        assert!(d.is_some(), "[{a}, {b}] leaves the algebra");
    }
}

#[test]
fn scopes_select_entries() {
    let cat = Catalog::builtin();
    let ids = |c: &ModelConfig| -> Vec<String> {
        cat.applicable(EntryKind::ConservedVector, c).into_iter().map(|e| e.id.clone()).collect()
    };
    let iso_ids = ids(&iso());
    assert!(iso_ids.contains(&"T8t".into()) && iso_ids.contains(&"Th".into()));
    assert!(!iso_ids.contains(&"T7".into()) && !iso_ids.contains(&"T9".into()));
    let gen_ids = ids(&general());
    assert!(gen_ids.contains(&"T9".into()) && gen_ids.contains(&"TF".into()));
    assert!(!gen_ids.contains(&"Th".into()));
}

#[test]
fn classifying_multipliers_decompose_the_residual() {
    for config in [general(), iso()] {
        let r = classifying_check(&config).unwrap();
        let m = r.multipliers.as_ref().expect("decomposition");
        // the multiplier of the classifying expression itself is nonzero
        assert!(m.iter().any(|row| !row[0].is_zero()));
    }
}

#[test]
fn perturbed_classifying_equation_does_not_decompose() {
    let config = general();
    let r = classifying_check(&config).unwrap();
    let c7 = Base::Atom(Atom::new(Sym::Param(Param::C(7))));
    let r0 = r.residuals[0].filter_terms(|m| m.exponent_of(&c7).is_zero());
    let wrong = config.adapt(&crate::expr::parse("h_xi*S_eta - (h_eta - 3*gamma*c9*xi)*S_xi - 2*gamma*c10*S").unwrap()).unwrap();
    assert!(decompose_classifying(&r0, &wrong, &config).unwrap().is_none());
}
