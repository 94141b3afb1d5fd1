use super::*;
use crate::coeff::rat;
use crate::expr::parse;

fn iso() -> ModelConfig {
    ModelConfig::symbolic(Entropy::Isentropic)
}

fn general() -> ModelConfig {
    ModelConfig::symbolic(Entropy::General)
}

fn run(id: &str, config: &ModelConfig) -> NoetherOutcome {
    let cat = Catalog::builtin();
    derive_catalog_vector(cat.get(id).unwrap(), config).unwrap()
}

fn show(o: &NoetherOutcome) -> String {
    format!(
        "{}: div {} scale {:?} vs {} conserved {} ({})\n built {:?}\n witness {:?}",
        o.id,
        o.divergence.passes(),
        o.detected_scale.as_ref().map(|c| c.to_grammar()),
        o.expected_scale.to_grammar(),
        o.conserved(),
        o.conservation.expr,
        o.built.each_ref().map(|e| e.to_string()),
        o.divergence.witness().map(|e| e.to_string()),
    )
}

#[test]
fn isentropic_vectors() {
    for id in ["T1", "T2", "T3", "T4", "T5", "T6", "T8t", "Th"] {
        let o = run(id, &iso());
        assert!(o.ok(), "{}", show(&o));
    }
}

#[test]
fn general_vectors() {
    for id in ["T1", "T2", "T3", "T4", "T5", "T6", "T8", "T9", "TF"] {
        let o = run(id, &general());
        assert!(o.ok(), "{}", show(&o));
    }
}

#[test]
fn gamma_two_vector() {
    for entropy in [Entropy::Isentropic, Entropy::General] {
        let config = ModelConfig::at_gamma(rat(2, 1), entropy).unwrap();
        let o = run("T7", &config);
        assert!(o.ok(), "{}", show(&o));
    }
}

#[test]
fn constraints_isentropic() {
    let d = divergence_constraints(&iso()).unwrap();
    let entry = Catalog::builtin().get("C-divergence-iso").unwrap().clone();
    assert!(constraints_match(&d, &entry, &iso()).unwrap(), "{:?}", d.forms);
}

#[test]
fn constraints_general() {
    let d = divergence_constraints(&general()).unwrap();
    let entry = Catalog::builtin().get("C-divergence-noniso").unwrap().clone();
    assert!(constraints_match(&d, &entry, &general()).unwrap(), "{:?}", d.forms);
}

#[test]
fn certificates_found_by_search() {
    let b = general_certificate(&ModelConfig::at_gamma(rat(2, 1), Entropy::Isentropic).unwrap()).unwrap().unwrap();
    assert!(b.canonical_eq(&parse("c3*phi1 + c4*phi2 + c7*(phi1^2 + phi2^2)/2").unwrap()), "{b}");
}

#[test]
fn noether_identity_for_catalog_generators() {
    let config = general();
    let jet = config.lagrangian_jet();
    let l = build_lagrangian(&config).unwrap();
    for id in ["X6", "X8n", "X9h", "XF"] {
        let g = Catalog::builtin().get(id).unwrap().generator(&config).unwrap();
        assert!(noether_identity_residual(&g, &l, &jet).unwrap().is_zero(), "{id}");
    }
}

#[test]
fn printed_forms_fail() {
    let cat = Catalog::builtin();
    for (id, config) in [("T5", iso()), ("T8t", iso())] {
        let printed = cat.get(id).unwrap().printed_vector(&config).unwrap().unwrap();
        assert!(!verify_conservation_law(&printed, &config).unwrap().expr.is_zero(), "{id}");
    }
}

#[test]
fn commutation_identity_for_catalog_generators() {
    for config in [iso(), general(), ModelConfig::at_gamma(rat(2, 1), Entropy::General).unwrap()] {
        let jet = config.lagrangian_jet();
        let l = config.restrict_entropy(&build_lagrangian(&config).unwrap());
        for (id, g) in crate::catalog::generators(&config).unwrap() {
            let r = variational_commutation_residual(&g, &l, &jet).unwrap();
            assert!(r.iter().all(Expr::is_zero), "{id}: {:?}", r.each_ref().map(|e| e.to_string()));
        }
    }
}

#[test]
fn perturbed_momentum_vector_fails() {
    let config = general();
    let t1 = Catalog::builtin().get("T1").unwrap().vector(&config).unwrap();
    for i in 0..3 {
        let mut t = t1.clone();
        t[i] = &t[i] + &parse("phi1_xi").unwrap();
        assert!(!verify_conservation_law(&t, &config).unwrap().expr.is_zero(), "component {i}");
    }
}

#[test]
fn gamma_two_vector_fails_elsewhere() {
    let at2 = ModelConfig::at_gamma(rat(2, 1), Entropy::Isentropic).unwrap();
    let t7 = Catalog::builtin().get("T7").unwrap().vector(&at2).unwrap();
    let config = ModelConfig::at_gamma(rat(5, 3), Entropy::Isentropic).unwrap();
    let t7_text = Catalog::builtin().get("T7").unwrap().components.clone();
    let t7_other: Vec<Expr> = t7_text.iter().map(|s| parse(s).unwrap()).collect();
    assert!(!verify_conservation_law(&[t7_other[0].clone(), t7_other[1].clone(), t7_other[2].clone()], &config).unwrap().expr.is_zero());
    assert!(verify_conservation_law(&t7, &at2).unwrap().expr.is_zero());
}

#[test]
fn dilation_pencil_selects_the_variational_member() {
    let config = iso();
    let cat = Catalog::builtin();
    let x8 = cat.get("X8").unwrap().generator(&config).unwrap();
    let x9 = cat.get("X9").unwrap().generator(&config).unwrap();
    let good = parse("(gamma-2)/(2*(2*gamma-1))").unwrap();
    let bad = parse("(gamma-2)/(2*gamma-1)").unwrap();
    assert!(divergence_symmetry_test(&x8.add(&x9.scale(&good)), &config).unwrap().passes());
    let t = divergence_symmetry_test(&x8.add(&x9.scale(&bad)), &config).unwrap();
    assert!(!t.passes() && t.witness().is_some());
}

#[test]
fn hand_evaluated_energy_density() {
    // N^t L for the time translation is L − φ1t² − φ2t²
    let config = general();
    let x6 = Catalog::builtin().get("X6").unwrap().generator(&config).unwrap();
    let l = build_lagrangian(&config).unwrap();
    let jet = config.lagrangian_jet();
    let n = jet.noether_operator(&x6, &l, Label::T).unwrap();
    let hand = &l - &parse("phi1_t^2 + phi2_t^2").unwrap();
    assert!(n.canonical_eq(&hand));
}

#[test]
fn relations_fire_for_nonisentropic_vectors() {
    let o = run("T9", &general());
    assert!(o.conservation.fired.contains("psi1") && o.conservation.fired.contains("psi2"));
    assert!(o.conservation.fired.contains("EL1"));
    let o = run("T8t", &iso());
    assert!(o.certificate.iter().all(Expr::is_zero), "T8t needs no certificate");
}
