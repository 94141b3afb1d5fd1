use super::*;
use noetherlab_core::atom::atoms::phi;
use noetherlab_core::catalog::{Catalog, EntryKind};
use noetherlab_core::coeff::rat;
use noetherlab_core::expr::parse;
use noetherlab_core::jet::Entropy;

fn opts() -> OracleOptions {
    OracleOptions::default()
}

fn vector(id: &str, config: &ModelConfig) -> [Expr; 3] {
    Catalog::builtin().get(id).unwrap().vector(config).unwrap()
}

#[test]
fn zero_has_zero_residual() {
    let config = ModelConfig::symbolic(Entropy::General);
    let r = random_point_check(&Expr::zero(), &Context::free(&config), &opts()).unwrap();
    assert_eq!(r.worst, 0.0);
    assert!(r.passed());
}

#[test]
fn jacobian_identity_holds_at_random_points() {
    let config = ModelConfig::symbolic(Entropy::General);
    let e = parse("J - (phi1_xi*phi2_eta - phi1_eta*phi2_xi)").unwrap();
    let r = random_point_check(&e, &Context::free(&config), &opts()).unwrap();
    assert_eq!(r.trials, 100);
    assert!(r.passed(), "{r:?}");
}

#[test]
fn momentum_is_conserved_numerically() {
    for entropy in [Entropy::Isentropic, Entropy::General] {
        let config = ModelConfig::symbolic(entropy);
        let r = lagrangian_claw_check(&vector("T1", &config), &config, &opts()).unwrap();
        assert!(r.passed(), "{entropy:?}: {r:?}");
    }
}

#[test]
fn gamma_two_vector_fails_elsewhere() {
    for g in [rat(5, 3), rat(5, 2)] {
        let config = ModelConfig::at_gamma(g.clone(), Entropy::Isentropic).unwrap();
        let at2 = ModelConfig::at_gamma(rat(2, 1), Entropy::Isentropic).unwrap();
        let t7 = vector("T7", &at2);
        let r = lagrangian_claw_check(&t7, &config, &opts()).unwrap();
        assert!(!r.passed(), "T7 at {g}: {r:?}");
    }
    let at2 = ModelConfig::at_gamma(rat(2, 1), Entropy::Isentropic).unwrap();
    assert!(lagrangian_claw_check(&vector("T7", &at2), &at2, &opts()).unwrap().passed());
}

#[test]
fn perturbed_momentum_fails() {
    let config = ModelConfig::symbolic(Entropy::General);
    let t1 = vector("T1", &config);
    for k in 0..3 {
        let mut bad = t1.clone();
        bad[k] = &bad[k] + &Expr::atom(phi(1, &[Label::Xi]));
        assert!(!lagrangian_claw_check(&bad, &config, &opts()).unwrap().passed(), "component {k}");
    }
}

#[test]
fn fixed_seed_is_reproducible() {
    let config = ModelConfig::symbolic(Entropy::General);
    let t = vector("T6", &config);
    let a = lagrangian_claw_check(&t, &config, &opts()).unwrap();
    let b = lagrangian_claw_check(&t, &config, &opts()).unwrap();
    assert_eq!(a.worst.to_bits(), b.worst.to_bits());
    let c = lagrangian_claw_check(&t, &config, &OracleOptions { seed: 7, ..opts() }).unwrap();
    assert!(c.passed());
}

#[test]
fn eulerian_energy_is_conserved_numerically() {
    let config = ModelConfig::symbolic(Entropy::General);
    let e = Catalog::builtin().get("eT6").unwrap().vector(&config).unwrap();
    assert!(eulerian_claw_check(&e, &config, &opts()).unwrap().passed());
}

#[test]
fn uniform_flow_is_exact() {
    let sol = ManufacturedSolution::uniform_flow(rat(7, 5));
    let config = sol.config();
    for e in Catalog::builtin().applicable(EntryKind::ConservedVector, &config) {
        let r = manufactured_check(&e.vector(&config).unwrap(), &sol, &manufactured::default_grid(Stencil::Second)).unwrap();
        assert!(r.exact(), "{}: {:?}", e.id, r.norms);
    }
}

#[test]
fn dilation_converges_at_stencil_order() {
    let sol = ManufacturedSolution::dilation(rat(7, 5));
    let config = sol.config();
    let t6 = vector("T6", &config);
    for stencil in [Stencil::Second, Stencil::Fourth] {
        let r = manufactured_check(&t6, &sol, &manufactured::default_grid(stencil)).unwrap();
        let p = r.order.expect("measurable order");
        assert!((p - stencil.order() as f64).abs() < 0.2, "{stencil:?}: {p} {:?}", r.norms);
    }
}

#[test]
fn non_solution_is_rejected() {
    let sol = ManufacturedSolution::non_solution(rat(7, 5));
    let config = sol.config();
    let t6 = vector("T6", &config);
    let grid = manufactured::default_grid(Stencil::Second);
    match manufactured_check(&t6, &sol, &grid) {
        Err(OracleError::Certificate(_, msg)) => assert!(msg.contains("leaves"), "{msg}"),
        other => panic!("{other:?}"),
    }
    let r = manufactured::manufactured_norms(&t6, &sol, &grid).unwrap();
    assert!(r.norms.last().unwrap().1 > 1e-3, "{:?}", r.norms);
}

#[test]
fn coarse_grids_are_rejected() {
    let sol = ManufacturedSolution::dilation(rat(7, 5));
    let t = vector("T1", &sol.config());
    let g = GridSpec::new(vec![8, 16], Stencil::Second);
    assert!(matches!(manufactured_check(&t, &sol, &g), Err(OracleError::GridTooCoarse(_))));
    let g = GridSpec::new(vec![2, 4, 8], Stencil::Fourth);
    assert!(matches!(manufactured_check(&t, &sol, &g), Err(OracleError::GridTooCoarse(_))));
}
