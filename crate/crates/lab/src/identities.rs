//! Randomized checks of the Noether identity and of the commutation of the
//! variational derivative with symmetry generators.

use noetherlab_core::atom::atoms::{phi, ETA, T, XI};
use noetherlab_core::atom::{Atom, Label, Sym};
use noetherlab_core::catalog::{generators, CatalogError};
use noetherlab_core::expr::{Base, Exponent, Expr};
use noetherlab_core::jet::{Entropy, Generator, JetFrame};
use noetherlab_core::model::{build_lagrangian, ModelConfig};
use noetherlab_core::noether::{noether_identity_residual, variational_commutation_residual};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{run_trials, Context, OracleError, OracleOptions, PointCheck, Sample};

/// Minimum number of randomized pairs for the identity check.
pub const MIN_PAIRS: usize = 20;

fn density_atoms() -> Vec<Atom> {
    let t = Label::T;
    vec![
        T,
        XI,
        ETA,
        phi(1, &[]),
        phi(2, &[]),
        phi(1, &[t]),
        phi(2, &[t]),
        phi(1, &[Label::Xi]),
        phi(1, &[Label::Eta]),
        phi(2, &[Label::Xi]),
        phi(2, &[Label::Eta]),
        Atom::new(Sym::S),
        Atom::deriv(Sym::S, &[Label::Xi]),
    ]
}

fn point_atoms() -> Vec<Atom> {
    vec![T, XI, ETA, phi(1, &[]), phi(2, &[])]
}

fn random_poly(rng: &mut ChaCha8Rng, atoms: &[Atom], terms: usize, with_j: bool) -> Expr {
    let mut e = Expr::zero();
    for _ in 0..rng.gen_range(1..=terms) {
        let mut t = Expr::int(rng.gen_range(-3..=3));
        for _ in 0..rng.gen_range(0..=2) {
            let a = *atoms.choose(rng).expect("nonempty");
            let k = *[1i64, 1, 2, -1].choose(rng).expect("nonempty");
            t = t * Expr::atom(a).pow_int(k).expect("nonzero atom");
        }
        if with_j && rng.gen_bool(0.5) {
            let exp = if rng.gen_bool(0.5) { Exponent::int(rng.gen_range(-1..=1)) } else { Exponent::affine(1, -1) };
            t = t * Expr::power(Base::J, exp);
        }
        e = e + t;
    }
    e
}

/// A random point generator and a random first-order density.
pub fn random_pair(rng: &mut ChaCha8Rng) -> (Generator, Expr) {
    let p = point_atoms();
    let xi = std::array::from_fn(|_| random_poly(rng, &p, 2, false));
    let eta = std::array::from_fn(|_| random_poly(rng, &p, 2, false));
    let f = random_poly(rng, &density_atoms(), 3, true);
    (Generator::new(xi, eta), f)
}

/// Outcome of one identity check.
#[derive(Debug, Clone)]
pub struct IdentityOutcome {
    pub label: String,
    pub symbolic: bool,
    pub numeric: PointCheck,
    pub witness: Option<String>,
}

impl IdentityOutcome {
    pub fn passed(&self, tol: f64) -> bool {
        self.symbolic && self.numeric.worst < tol
    }
}

/// The terms of the Noether identity evaluated separately and summed.
fn numeric_noether_identity(gen: &Generator, f: &Expr, jet: &JetFrame, opts: &OracleOptions, gamma: Option<f64>) -> Result<PointCheck, OracleError> {
    let mut parts = vec![gen.apply(jet, f)?, f * &gen.total_divergence(jet)?];
    let w = gen.characteristic(jet);
    for (k, dep) in [Sym::Phi1, Sym::Phi2].into_iter().enumerate() {
        parts.push(-(&w[k] * &jet.variational_derivative(f, dep)?));
    }
    for l in jet.labels() {
        parts.push(-jet.total_derivative(&jet.noether_operator(gen, f, l)?, l)?);
    }
    let ctx = Context { jet: *jet, relations: Vec::new(), motion: None, gamma };
    run_trials(&ctx, opts, |p| {
        let mut acc = Sample { value: 0.0, scale: 0.0 };
        for e in &parts {
            acc = acc + p.eval(e)?;
        }
        Ok(acc)
    })
}

/// The Noether identity for `pairs` random `(X, F)`, symbolically and at
/// random points.
pub fn noether_identity_checks(pairs: usize, opts: &OracleOptions) -> Result<Vec<IdentityOutcome>, CatalogError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let jet = JetFrame::lagrangian(Entropy::General);
    let mut out = Vec::new();
    for i in 0..pairs.max(MIN_PAIRS) {
        let (gen, f) = random_pair(&mut rng);
        let r = noether_identity_residual(&gen, &f, &jet)?;
        let numeric = numeric_noether_identity(&gen, &f, &jet, &OracleOptions { trials: opts.trials.min(20), ..*opts }, None)
            .map_err(|e| CatalogError::Parse { id: format!("pair {i}"), msg: e.to_string() })?;
        out.push(IdentityOutcome {
            label: format!("pair {i}"),
            symbolic: r.is_zero(),
            numeric,
            witness: (!r.is_zero()).then(|| r.to_string()),
        });
    }
    Ok(out)
}

/// The commutation identity for every admitted point generator of `config`
/// with `F = L`.
pub fn commutation_checks(config: &ModelConfig) -> Result<Vec<(String, bool, Option<String>)>, CatalogError> {
    let jet = config.lagrangian_jet();
    let l = config.restrict_entropy(&build_lagrangian(config)?);
    let mut out = Vec::new();
    for (id, g) in generators(config)? {
        let r = variational_commutation_residual(&g, &l, &jet)?;
        let witness = r.iter().find(|e| !e.is_zero()).map(|e| e.to_string());
        out.push((id, witness.is_none(), witness));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_pairs_satisfy_the_noether_identity() {
        let opts = OracleOptions { trials: 10, ..OracleOptions::default() };
        let out = noether_identity_checks(MIN_PAIRS, &opts).unwrap();
        assert_eq!(out.len(), MIN_PAIRS);
        for o in &out {
            assert!(o.passed(opts.tol), "{}: {:?} {:?}", o.label, o.witness, o.numeric);
        }
    }

    #[test]
    fn catalog_generators_commute_with_the_variational_derivative() {
        for entropy in [Entropy::Isentropic, Entropy::General] {
            for (id, ok, w) in commutation_checks(&ModelConfig::symbolic(entropy)).unwrap() {
                assert!(ok, "{id}: {w:?}");
            }
        }
    }

    #[test]
    fn a_wrong_characteristic_breaks_the_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let jet = JetFrame::lagrangian(Entropy::General);
        let (gen, _) = random_pair(&mut rng);
        let f = Expr::atom(phi(1, &[Label::T])).pow_int(2).unwrap();
        // drop the Noether-operator term by hand
        let mut r = gen.apply(&jet, &f).unwrap() + &f * &gen.total_divergence(&jet).unwrap();
        let w = gen.characteristic(&jet);
        r = r - &w[0] * &jet.variational_derivative(&f, Sym::Phi1).unwrap();
        assert!(!r.canonical().is_zero() || gen.is_zero());
    }
}
