//! A Lagrangian vector is conserved exactly when its Eulerian image is.

use noetherlab_core::atom::atoms::phi;
use noetherlab_core::catalog::{Catalog, EntryKind};
use noetherlab_core::coeff::rat;
use noetherlab_core::euler_map::{to_eulerian, verify_eulerian_claw};
use noetherlab_core::expr::Expr;
use noetherlab_core::jet::Entropy;
use noetherlab_core::model::ModelConfig;
use noetherlab_core::noether::verify_conservation_law;

fn configs() -> Vec<ModelConfig> {
    let mut out = vec![ModelConfig::symbolic(Entropy::Isentropic), ModelConfig::symbolic(Entropy::General)];
    for e in [Entropy::Isentropic, Entropy::General] {
        out.push(ModelConfig::at_gamma(rat(2, 1), e).unwrap());
    }
    out
}

fn check(t: &[Expr; 3], config: &ModelConfig) -> Option<(bool, bool)> {
    let mapped = to_eulerian(t).ok()?;
    let lag = verify_conservation_law(t, config).unwrap().expr.is_zero();
    let eul = verify_eulerian_claw(&mapped, config).unwrap().expr.is_zero();
    Some((lag, eul))
}

#[test]
fn conservation_is_frame_covariant() {
    let cat = Catalog::builtin();
    let mut mapped = 0;
    for config in configs() {
        for e in cat.applicable(EntryKind::ConservedVector, &config) {
            let t = e.vector(&config).unwrap();
            if let Some((lag, eul)) = check(&t, &config) {
                assert!(lag && eul, "{} in {}", e.id, config.describe());
                mapped += 1;
            }
            let mut bad = t.clone();
            bad[0] = &bad[0] + &Expr::atom(phi(1, &[]));
            if let Some((lag, eul)) = check(&bad, &config) {
                assert!(!lag && !eul, "perturbed {} in {}", e.id, config.describe());
            }
        }
    }
    assert!(mapped >= 20);
}
