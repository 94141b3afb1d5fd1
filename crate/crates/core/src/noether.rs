//! Divergence-symmetry test, certificate search, the Noether construction of
//! conserved vectors and their verification on the solution manifold.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::atom::{Atom, Label, Param, Sym};
use crate::catalog::{side_relations, Catalog, CatalogError, EntryData, EntryKind};
use crate::coeff::Coeff;
use crate::expr::{rules, Base, Exponent, Expr, Monomial};
use crate::jet::{Entropy, Generator, JetFrame};
use crate::linsolve::{is_param, linear_forms, rref, same_solution_space, solve_columns, LinearForm};
use crate::model::{build_lagrangian, euler_lagrange, on_shell_reduce, ModelConfig, Reduced};

/// `X̃L + L D_i ξ^i`, the quantity that must be a total divergence.
pub fn divergence_expression(gen: &Generator, config: &ModelConfig) -> Result<Expr, CatalogError> {
    let jet = config.lagrangian_jet();
    let l = config.restrict_entropy(&build_lagrangian(config)?);
    let xl = gen.apply(&jet, &l)?;
    let div = gen.total_divergence(&jet)?;
    Ok(reduce_side(&(xl + &l * &div), config)?.canonical())
}

fn reduce_side(e: &Expr, config: &ModelConfig) -> Result<Expr, CatalogError> {
    match side_relations(config) {
        Some(rel) => Ok(rel.reduce(e)?.expr),
        None => Ok(e.canonical()),
    }
}

/// Result of the divergence-symmetry test: `V = X̃L + L D_i ξ^i` and its
/// variational derivatives, which vanish exactly when `V` is a divergence.
#[derive(Debug, Clone)]
pub struct DivergenceTest {
    pub v: Expr,
    pub euler: [Expr; 2],
}

impl DivergenceTest {
    pub fn passes(&self) -> bool {
        self.euler.iter().all(Expr::is_zero)
    }

    /// A nonzero variational derivative, if any, as a witness of failure.
    pub fn witness(&self) -> Option<&Expr> {
        self.euler.iter().find(|e| !e.is_zero())
    }
}

pub fn divergence_symmetry_test(gen: &Generator, config: &ModelConfig) -> Result<DivergenceTest, CatalogError> {
    let jet = config.lagrangian_jet();
    let v = divergence_expression(gen, config)?;
    let mut euler: [Expr; 2] = Default::default();
    for (k, dep) in [Sym::Phi1, Sym::Phi2].into_iter().enumerate() {
        euler[k] = reduce_side(&jet.variational_derivative(&v, dep)?, config)?;
    }
    Ok(DivergenceTest { v, euler })
}

/// Antiderivative of `e` with respect to a point atom, term by term.
fn integrate(e: &Expr, a: &Atom) -> Option<Expr> {
    let base = Base::Atom(*a);
    let mut out = Expr::zero();
    for (m, c) in e.terms() {
        let k = m.exponent_of(&base);
        let k1 = k + Exponent::ONE;
        if k1.is_zero() || k1.is_symbolic() {
            return None;
        }
        let inv = k1.to_coeff().recip()?;
        out = out + Expr::term(m.bump(base, Exponent::ONE), c * &inv);
    }
    Some(out)
}

fn is_jet_free(e: &Expr, syms: &[Sym]) -> bool {
    !e.contains(&Base::J) && e.atoms().iter().all(|a| !(syms.contains(&a.sym) && a.order() > 0))
}

/// Searches for a certificate `B = (b, 0, 0)` with `D_t b = V`, where
/// `b` depends on `t, ξ, η, φ1, φ2` only.
pub fn find_certificate(v: &Expr, config: &ModelConfig) -> Result<Option<[Expr; 3]>, CatalogError> {
    let jet = config.lagrangian_jet();
    let deps = [Sym::Phi1, Sym::Phi2];
    let v = v.canonical();
    if v.is_zero() {
        return Ok(Some(Default::default()));
    }
    let phi = |k: u8| Atom::new(if k == 1 { Sym::Phi1 } else { Sym::Phi2 });
    let phit = |k: u8| Atom::deriv(if k == 1 { Sym::Phi1 } else { Sym::Phi2 }, &[Label::T]);
    let a1 = v.partial(&phit(1));
    let a2 = v.partial(&phit(2));
    if !is_jet_free(&a1, &deps) || !is_jet_free(&a2, &deps) {
        return Ok(None);
    }
    let Some(b1) = integrate(&a1, &phi(1)) else { return Ok(None) };
    let r2 = (a2 - b1.partial(&phi(2))).canonical();
    if !r2.partial(&phi(1)).is_zero() {
        return Ok(None);
    }
    let Some(b2) = integrate(&r2, &phi(2)) else { return Ok(None) };
    let mut b = b1 + b2;
    let r3 = (&v - &jet.total_derivative(&b, Label::T)?).canonical();
    if !is_jet_free(&r3, &deps) || r3.contains_sym(Sym::Phi1) || r3.contains_sym(Sym::Phi2) {
        return Ok(None);
    }
    let Some(b3) = integrate(&r3, &Atom::label(Label::T)) else { return Ok(None) };
    b = (b + b3).canonical();
    let check = (&v - &jet.total_derivative(&b, Label::T)?).canonical();
    Ok(check.is_zero().then(|| [b, Expr::zero(), Expr::zero()]))
}

/// `V − D_i B^i`, reduced with the side relations.
pub fn certificate_residual(v: &Expr, b: &[Expr; 3], config: &ModelConfig) -> Result<Expr, CatalogError> {
    let jet = config.lagrangian_jet();
    reduce_side(&(v - &jet.divergence(b)?), config)
}

/// `T^i = 𝒩^i L − B^i`.
pub fn build_conserved_vector(gen: &Generator, b: &[Expr; 3], config: &ModelConfig) -> Result<[Expr; 3], CatalogError> {
    let jet = config.lagrangian_jet();
    let l = config.restrict_entropy(&build_lagrangian(config)?);
    let mut out: [Expr; 3] = Default::default();
    for (i, lab) in jet.labels().into_iter().enumerate() {
        let n = jet.noether_operator(gen, &l, lab)?;
        out[i] = reduce_side(&(n - b[i].clone()), config)?;
    }
    Ok(out)
}

/// The scale `λ` with `built = λ · printed`, if one exists.
pub fn detect_scale(built: &[Expr; 3], printed: &[Expr; 3]) -> Option<Coeff> {
    let key = |v: &[Expr; 3]| -> BTreeMap<(usize, Monomial), Coeff> {
        let mut out = BTreeMap::new();
        for (i, e) in v.iter().enumerate() {
            for (m, c) in e.canonical().terms() {
                out.insert((i, m.clone()), c.clone());
            }
        }
        out
    };
    let target = key(built);
    let col = key(printed);
    if col.is_empty() {
        return target.is_empty().then(Coeff::zero);
    }
    solve_columns(&[col], &target).map(|x| x[0].clone())
}

/// `D_i T^i` reduced on the solution manifold.
pub fn verify_conservation_law(t: &[Expr; 3], config: &ModelConfig) -> Result<Reduced, CatalogError> {
    let jet = config.lagrangian_jet();
    let sys = euler_lagrange(config)?;
    let div = jet.divergence(t)?;
    Ok(on_shell_reduce(&div, &sys, side_relations(config).as_ref())?)
}

/// Residual of the Noether identity
/// `X̃F + F D_i ξ^i − W^k δF/δφ_k − D_i 𝒩^i F`.
pub fn noether_identity_residual(gen: &Generator, f: &Expr, jet: &JetFrame) -> Result<Expr, CatalogError> {
    let mut r = gen.apply(jet, f)? + f * &gen.total_divergence(jet)?;
    let w = gen.characteristic(jet);
    for (k, dep) in [Sym::Phi1, Sym::Phi2].into_iter().enumerate() {
        r = r - &w[k] * &jet.variational_derivative(f, dep)?;
    }
    for l in jet.labels() {
        let n = jet.noether_operator(gen, f, l)?;
        r = r - jet.total_derivative(&n, l)?;
    }
    Ok(r.canonical())
}

/// Residuals, one per dependent variable `φ_j`, of the commutation identity
/// `δ/δφ_j (X̃F + F D_i ξ^i) = X̃(δF/δφ_j) + δF/δφ_k (∂η^k/∂φ_j − u^k_i ∂ξ^i/∂φ_j + δ_kj D_i ξ^i)`
/// for a point generator and a first-order density.
pub fn variational_commutation_residual(gen: &Generator, f: &Expr, jet: &JetFrame) -> Result<[Expr; 2], CatalogError> {
    let deps = [Sym::Phi1, Sym::Phi2];
    let div = gen.total_divergence(jet)?;
    let lhs_base = gen.apply(jet, f)? + f * &div;
    let ef: Vec<Expr> = deps.iter().map(|d| jet.variational_derivative(f, *d)).collect::<Result<_, _>>()?;
    let mut out: [Expr; 2] = Default::default();
    for (j, dj) in deps.iter().enumerate() {
        let uj = Atom::new(*dj);
        let mut r = jet.variational_derivative(&lhs_base, *dj)? - gen.apply(jet, &ef[j])?;
        for (k, dk) in deps.iter().enumerate() {
            let mut m = gen.eta[k].partial(&uj);
            for (xi, l) in gen.xi.iter().zip(jet.labels()) {
                m = m - Expr::atom(Atom::deriv(*dk, &[l])) * xi.partial(&uj);
            }
            if k == j {
                m = m + div.clone();
            }
            r = r - &ef[k] * &m;
        }
        out[j] = r.canonical();
    }
    Ok(out)
}

/// Everything computed for one catalog conserved vector.
#[derive(Debug, Clone)]
pub struct NoetherOutcome {
    pub id: String,
    pub source: String,
    pub divergence: DivergenceTest,
    pub certificate: [Expr; 3],
    /// True when the certificate was found by search rather than taken from
    /// the catalog.
    pub certificate_found: bool,
    pub built: [Expr; 3],
    pub catalog: [Expr; 3],
    pub expected_scale: Coeff,
    pub detected_scale: Option<Coeff>,
    pub conservation: Reduced,
}

impl NoetherOutcome {
    pub fn scale_matches(&self) -> bool {
        self.detected_scale.as_ref() == Some(&self.expected_scale)
    }

    pub fn conserved(&self) -> bool {
        self.conservation.expr.is_zero()
    }

    pub fn ok(&self) -> bool {
        self.divergence.passes() && self.scale_matches() && self.conserved()
    }
}

/// Runs the full pipeline for a catalog conserved vector: divergence test of
/// the source generator, certificate, Noether construction, scale and
/// on-shell conservation.
pub fn derive_catalog_vector(entry: &EntryData, config: &ModelConfig) -> Result<NoetherOutcome, CatalogError> {
    if entry.kind != EntryKind::ConservedVector {
        return Err(CatalogError::Kind { id: entry.id.clone(), found: entry.kind, expected: EntryKind::ConservedVector });
    }
    let cat = Catalog::builtin();
    let source = entry
        .source
        .clone()
        .ok_or_else(|| CatalogError::Parse { id: entry.id.clone(), msg: "no source generator".into() })?;
    let gen = cat.get(&source)?.generator(config)?;
    let divergence = divergence_symmetry_test(&gen, config)?;
    let (certificate, certificate_found) = match entry.certificate(config)? {
        Some(b) => (b, false),
        None => match find_certificate(&divergence.v, config)? {
            Some(b) => (b, true),
            None => (Default::default(), true),
        },
    };
    let built = build_conserved_vector(&gen, &certificate, config)?;
    let catalog = entry.vector(config)?;
    let expected_scale = entry.scale(config)?.unwrap_or_else(Coeff::one);
    // compare in the same normal form: side relations applied to both
    let mut reduced: [Expr; 3] = Default::default();
    for (r, c) in reduced.iter_mut().zip(&catalog) {
        *r = reduce_side(c, config)?;
    }
    let detected_scale = detect_scale(&built, &reduced);
    let conservation = verify_conservation_law(&catalog, config)?;
    Ok(NoetherOutcome {
        id: entry.id.clone(),
        source,
        divergence,
        certificate,
        certificate_found,
        built,
        catalog,
        expected_scale,
        detected_scale,
        conservation,
    })
}

/// Parameters `c1..c10` that enter the general combination.
fn params() -> Vec<Atom> {
    let mut v: Vec<Atom> = (1..=10).map(|j| Atom::new(Sym::Param(Param::C(j)))).collect();
    v.push(Atom::new(Sym::Param(Param::Ct(10))));
    v
}

/// The general combination of admitted generators used for the divergence
/// constraint: `X1..X6, X8, X9` and `X_h` (isentropic), or `X1..X6, X8`,
/// the compensated dilations and `X_F` (nonisentropic), plus `X7` at
/// `gamma = 2`.
pub fn divergence_combination(config: &ModelConfig) -> Result<Generator, CatalogError> {
    let cat = Catalog::builtin();
    let mut parts: Vec<(&str, Option<u8>)> =
        alloc::vec![("X1", Some(1)), ("X2", Some(2)), ("X3", Some(3)), ("X4", Some(4)), ("X5", Some(5)), ("X6", Some(6)), ("X8", Some(8))];
    match config.entropy {
        Entropy::Isentropic => parts.extend([("X9", Some(9)), ("Xh", None)]),
        Entropy::General => parts.extend([("X9n", Some(9)), ("X10n", Some(10)), ("XF", None)]),
    }
    if config.is_gamma_two() {
        parts.push(("X7", Some(7)));
    }
    let mut g = Generator::zero();
    for (id, c) in parts {
        let x = cat.get(id)?.generator(config)?;
        g = g.add(&match c {
            Some(j) => x.scale(&Expr::atom(Atom::new(Sym::Param(Param::C(j))))),
            None => x,
        });
    }
    Ok(g)
}

/// The constraints on the parameters for the general combination to be a
/// divergence symmetry, in reduced row echelon form.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub forms: Vec<LinearForm>,
    pub nonlinear: bool,
}

pub fn divergence_constraints(config: &ModelConfig) -> Result<ConstraintSystem, CatalogError> {
    let g = divergence_combination(config)?;
    let test = divergence_symmetry_test(&g, config)?;
    let mut forms = Vec::new();
    let mut nonlinear = false;
    for e in &test.euler {
        match linear_forms(&e.canonical(), is_param) {
            Some(f) => forms.extend(f),
            None => nonlinear = true,
        }
    }
    Ok(ConstraintSystem { forms: rref(&forms, &params()), nonlinear })
}

/// Compares the derived divergence constraints with a catalog constraint
/// entry, after rewriting `c10` through `C-c10-shift` when the entry uses
/// the shifted parameter `ct10`.
pub fn constraints_match(derived: &ConstraintSystem, entry: &EntryData, config: &ModelConfig) -> Result<bool, CatalogError> {
    let cat = Catalog::builtin();
    let mut expected = Vec::new();
    for e in entry.components(config)? {
        expected.extend(linear_forms(&e, is_param).unwrap_or_default());
    }
    let uses_shift = expected.iter().any(|f| f.contains_key(&Atom::new(Sym::Param(Param::Ct(10)))));
    let mut derived_forms = derived.forms.clone();
    if uses_shift {
        let shift = cat.get("C-c10-shift")?.components(config)?;
        // c10 − (γ−2)/2 c8 − ct10 = 0, solved for c10
        let c10 = Atom::new(Sym::Param(Param::C(10)));
        let rhs = &Expr::atom(c10) - &shift[0];
        let sub = rules([(Base::Atom(c10), rhs)]);
        derived_forms = derived
            .forms
            .iter()
            .flat_map(|f| {
                let e = crate::linsolve::form_to_expr(f).substitute(&sub).map(|e| e.canonical());
                e.ok().and_then(|e| linear_forms(&e, is_param)).unwrap_or_default()
            })
            .collect();
    }
    Ok(!derived.nonlinear && same_solution_space(&derived_forms, &expected))
}

/// The time component of the certificate for the general combination
/// restricted to `c3, c4, c7`, found by search.
pub fn general_certificate(config: &ModelConfig) -> Result<Option<Expr>, CatalogError> {
    let cat = Catalog::builtin();
    let mut g = Generator::zero();
    for (id, j) in [("X3", 3u8), ("X4", 4), ("X7", 7)] {
        g = g.add(&cat.get(id)?.generator(config)?.scale(&Expr::atom(Atom::new(Sym::Param(Param::C(j))))));
    }
    let v = divergence_expression(&g, config)?;
    Ok(find_certificate(&v, config)?.map(|b| b[0].clone()))
}

#[cfg(test)]
mod tests;
