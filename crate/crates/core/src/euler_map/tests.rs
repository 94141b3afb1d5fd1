use super::*;
use crate::catalog::{Catalog, EntryKind};
use crate::coeff::rat;
use crate::expr::parse_in;
use crate::jet::Entropy;
use crate::noether::detect_scale;

fn mapped_matches(id: &str, config: &ModelConfig) {
    let cat = Catalog::builtin();
    let e = cat.get(id).unwrap();
    assert_eq!(e.kind, EntryKind::EulerianVector);
    let source = cat.get(e.source.as_deref().unwrap()).unwrap();
    let mapped = to_eulerian(&source.vector(config).unwrap()).unwrap_or_else(|err| panic!("{id}: {err}"));
    let printed = e.vector(config).unwrap();
    let scale = detect_scale(&mapped, &printed);
    assert_eq!(
        scale,
        e.scale(config).unwrap(),
        "{id}: mapped {:?}",
        mapped.each_ref().map(|x| x.to_string())
    );
    let r = verify_eulerian_claw(&printed, config).unwrap();
    assert!(r.expr.is_zero(), "{id}: divergence {}", r.expr);
}

#[test]
fn isentropic_eulerian_forms() {
    let config = ModelConfig::symbolic(Entropy::Isentropic);
    for id in ["eT0", "eT1", "eT2", "eT3", "eT4", "eT5", "eT6", "eTh"] {
        mapped_matches(id, &config);
    }
}

#[test]
fn general_eulerian_forms() {
    let config = ModelConfig::symbolic(Entropy::General);
    for id in ["eT0", "eT1", "eT2", "eT3", "eT4", "eT5", "eT6", "eT8-noniso", "eTF"] {
        mapped_matches(id, &config);
    }
}

#[test]
fn gamma_two_eulerian_forms() {
    let iso = ModelConfig::at_gamma(rat(2, 1), Entropy::Isentropic).unwrap();
    mapped_matches("eT7", &iso);
    mapped_matches("eT8", &iso);
    let general = ModelConfig::at_gamma(rat(2, 1), Entropy::General).unwrap();
    mapped_matches("eT7", &general);
}

#[test]
fn vectors_without_eulerian_form() {
    let cat = Catalog::builtin();
    let iso = ModelConfig::at_gamma(rat(5, 3), Entropy::Isentropic).unwrap();
    let t8 = cat.get("T8t").unwrap().vector(&iso).unwrap();
    assert!(matches!(to_eulerian(&t8), Err(MapError::NoEulerianRepresentation { .. })));
    let general = ModelConfig::symbolic(Entropy::General);
    let t9 = cat.get("T9").unwrap().vector(&general).unwrap();
    assert!(matches!(to_eulerian(&t9), Err(MapError::NoEulerianRepresentation { .. })));
}

#[test]
fn printed_energy_flux_is_not_conserved() {
    let config = ModelConfig::symbolic(Entropy::Isentropic);
    let printed = Catalog::builtin().get("eT6").unwrap().printed_vector(&config).unwrap().unwrap();
    assert!(!verify_eulerian_claw(&printed, &config).unwrap().expr.is_zero());
}

#[test]
fn mass_law_maps_to_continuity() {
    let t0 = [Expr::one(), Expr::zero(), Expr::zero()];
    let m = to_eulerian(&t0).unwrap();
    let p = |s: &str| parse_in(Frame::Eulerian, s).unwrap();
    assert!(m[0].canonical_eq(&p("rho")) && m[1].canonical_eq(&p("rho*u")) && m[2].canonical_eq(&p("rho*v")));
}
