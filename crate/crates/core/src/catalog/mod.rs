//! Catalog of generators, conserved vectors, Eulerian forms and determining
//! constraints, stored as grammar strings and parsed on demand for a model
//! configuration.
//!
//! Where the published form of an entry is wrong, the primary components hold
//! the corrected form and the literal printed form is kept as an alternate
//! labeled `printed`.

mod data;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::atom::{Atom, Frame, Label, Param, Sym};
use crate::coeff::{rat, Coeff};
use crate::expr::{parse_coeff, parse_in, Base, Expr, Monomial};
use crate::jet::{Entropy, Generator, JetFrame};
use crate::linsolve::solve_columns;
use crate::model::{
    entropy_gradient_nonzero, euler_lagrange, on_shell_reduce, psi_relations, ModelConfig, ModelError,
    PsiOrientation, Relation, RelationSet,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry '{0}'")]
    Unknown(String),
    #[error("entry {id}: {msg}")]
    Parse { id: String, msg: String },
    #[error("entry {id} is a {found:?}, expected {expected:?}")]
    Kind { id: String, found: EntryKind, expected: EntryKind },
    #[error("entry {id} does not apply to {config}")]
    NotApplicable { id: String, config: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl From<crate::jet::JetError> for CatalogError {
    fn from(e: crate::jet::JetError) -> Self {
        CatalogError::Model(e.into())
    }
}

impl From<crate::expr::ExprError> for CatalogError {
    fn from(e: crate::expr::ExprError) -> Self {
        CatalogError::Model(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryKind {
    Generator,
    EquivalenceGenerator,
    ConservedVector,
    EulerianVector,
    Constraint,
}

impl EntryKind {
    pub fn name(self) -> &'static str {
        match self {
            EntryKind::Generator => "generator",
            EntryKind::EquivalenceGenerator => "equivalence-generator",
            EntryKind::ConservedVector => "conserved-vector",
            EntryKind::EulerianVector => "eulerian-vector",
            EntryKind::Constraint => "constraint",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            EntryKind::Generator,
            EntryKind::EquivalenceGenerator,
            EntryKind::ConservedVector,
            EntryKind::EulerianVector,
            EntryKind::Constraint,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// Where an entry holds: entropy mode (`None` = both), whether it needs
/// `gamma = 2`, and whether it is only a building block of the general
/// combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scope {
    pub entropy: Option<Entropy>,
    pub gamma_two: bool,
    pub basis_only: bool,
}

impl Scope {
    pub const fn any() -> Self {
        Scope { entropy: None, gamma_two: false, basis_only: false }
    }
    pub const fn isentropic() -> Self {
        Scope { entropy: Some(Entropy::Isentropic), gamma_two: false, basis_only: false }
    }
    pub const fn general() -> Self {
        Scope { entropy: Some(Entropy::General), gamma_two: false, basis_only: false }
    }
    pub const fn gamma_two() -> Self {
        Scope { entropy: None, gamma_two: true, basis_only: false }
    }
    pub const fn isentropic_gamma_two() -> Self {
        Scope { entropy: Some(Entropy::Isentropic), gamma_two: true, basis_only: false }
    }
    pub const fn basis() -> Self {
        Scope { entropy: None, gamma_two: false, basis_only: true }
    }

    pub fn applies(&self, config: &ModelConfig) -> bool {
        !self.basis_only
            && self.entropy.is_none_or(|e| e == config.entropy)
            && (!self.gamma_two || config.is_gamma_two())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alternate {
    pub label: String,
    pub components: Vec<String>,
}

/// One catalog entry in text form.
///
/// Generator components are `t, xi, eta, phi1, phi2` (plus `S` for
/// equivalence generators); vector components are `t` and the two spatial
/// directions of the entry's frame. `scale` relates the entry to its
/// `source`: for a conserved vector, the vector built by the Noether operator
/// from the source generator equals `scale` times this entry; for an
/// Eulerian vector, the mapped source equals `scale` times this entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryData {
    pub id: String,
    pub kind: EntryKind,
    pub frame: Frame,
    pub scope: Scope,
    pub reference: String,
    pub components: Vec<String>,
    pub source: Option<String>,
    pub scale: Option<String>,
    pub certificate: Option<Vec<String>>,
    pub alternates: Vec<Alternate>,
    pub note: Option<String>,
}

impl EntryData {
    fn parse_list(&self, items: &[String], frame: Frame, config: &ModelConfig) -> Result<Vec<Expr>, CatalogError> {
        items
            .iter()
            .map(|s| {
                let e = parse_in(frame, s)
                    .map_err(|e| CatalogError::Parse { id: self.id.clone(), msg: e.to_string() })?;
                Ok(config.adapt(&e)?)
            })
            .collect()
    }

    /// Primary components, parsed and adapted to `config`.
    pub fn components(&self, config: &ModelConfig) -> Result<Vec<Expr>, CatalogError> {
        self.parse_list(&self.components, self.frame, config)
    }

    pub fn alternate(&self, label: &str, config: &ModelConfig) -> Result<Option<Vec<Expr>>, CatalogError> {
        match self.alternates.iter().find(|a| a.label == label) {
            None => Ok(None),
            Some(a) => self.parse_list(&a.components, self.frame, config).map(Some),
        }
    }

    pub fn scale(&self, config: &ModelConfig) -> Result<Option<Coeff>, CatalogError> {
        let Some(s) = &self.scale else { return Ok(None) };
        let c = parse_coeff(s).map_err(|e| CatalogError::Parse { id: self.id.clone(), msg: e.to_string() })?;
        let e = config.specialize(&Expr::constant(c))?;
        Ok(Some(e.as_constant().unwrap_or_else(Coeff::zero)))
    }

    pub fn certificate(&self, config: &ModelConfig) -> Result<Option<[Expr; 3]>, CatalogError> {
        let Some(b) = &self.certificate else { return Ok(None) };
        let v = self.parse_list(b, Frame::Lagrangian, config)?;
        Ok(Some(self.triple(v)?))
    }

    fn triple(&self, v: Vec<Expr>) -> Result<[Expr; 3], CatalogError> {
        let n = v.len();
        v.try_into().map_err(|_| CatalogError::Parse { id: self.id.clone(), msg: format!("expected 3 components, found {n}") })
    }

    fn expect(&self, kinds: &[EntryKind]) -> Result<(), CatalogError> {
        if kinds.contains(&self.kind) {
            Ok(())
        } else {
            Err(CatalogError::Kind { id: self.id.clone(), found: self.kind, expected: kinds[0] })
        }
    }

    pub fn generator(&self, config: &ModelConfig) -> Result<Generator, CatalogError> {
        self.expect(&[EntryKind::Generator, EntryKind::EquivalenceGenerator])?;
        let v = self.components(config)?;
        generator_from(&self.id, v)
    }

    /// The printed generator, if it differs from the primary one.
    pub fn printed_generator(&self, config: &ModelConfig) -> Result<Option<Generator>, CatalogError> {
        self.expect(&[EntryKind::Generator, EntryKind::EquivalenceGenerator])?;
        match self.alternate("printed", config)? {
            None => Ok(None),
            Some(v) => generator_from(&self.id, v).map(Some),
        }
    }

    pub fn vector(&self, config: &ModelConfig) -> Result<[Expr; 3], CatalogError> {
        self.expect(&[EntryKind::ConservedVector, EntryKind::EulerianVector])?;
        let v = self.components(config)?;
        self.triple(v)
    }

    pub fn printed_vector(&self, config: &ModelConfig) -> Result<Option<[Expr; 3]>, CatalogError> {
        self.expect(&[EntryKind::ConservedVector, EntryKind::EulerianVector])?;
        match self.alternate("printed", config)? {
            None => Ok(None),
            Some(v) => self.triple(v).map(Some),
        }
    }
}

fn generator_from(id: &str, v: Vec<Expr>) -> Result<Generator, CatalogError> {
    let n = v.len();
    if n != 5 && n != 6 {
        return Err(CatalogError::Parse { id: id.into(), msg: format!("expected 5 or 6 components, found {n}") });
    }
    let mut it = v.into_iter();
    let mut next = || it.next().unwrap_or_default();
    let xi = [next(), next(), next()];
    let eta = [next(), next()];
    let g = Generator::new(xi, eta);
    Ok(if n == 6 { g.with_s(next()) } else { g })
}

/// An ordered set of entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<EntryData>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Catalog { entries: data::builtin() }
    }

    pub fn from_entries(entries: Vec<EntryData>) -> Self {
        Catalog { entries }
    }

    pub fn entries(&self) -> &[EntryData] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Result<&EntryData, CatalogError> {
        self.entries.iter().find(|e| e.id == id).ok_or_else(|| CatalogError::Unknown(id.into()))
    }

    pub fn of_kind(&self, kind: EntryKind) -> impl Iterator<Item = &EntryData> {
        self.entries.iter().filter(move |e| e.kind == kind)
    }

    /// Entries of a kind that hold under `config`.
    pub fn applicable(&self, kind: EntryKind, config: &ModelConfig) -> Vec<&EntryData> {
        self.of_kind(kind).filter(|e| e.scope.applies(config)).collect()
    }

    /// The Eulerian entry whose source is `id`.
    pub fn eulerian_of(&self, id: &str) -> Option<&EntryData> {
        self.of_kind(EntryKind::EulerianVector).find(|e| e.source.as_deref() == Some(id))
    }

    /// Checks that every entry parses in its frame, that sources exist and
    /// that component counts match the kind.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let mut seen = BTreeSet::new();
        for e in &self.entries {
            if !seen.insert(e.id.as_str()) {
                return Err(CatalogError::Parse { id: e.id.clone(), msg: "duplicate id".into() });
            }
            let config = validation_config(e);
            match e.kind {
                EntryKind::Generator | EntryKind::EquivalenceGenerator => {
                    e.generator(&config)?;
                    e.printed_generator(&config)?;
                }
                EntryKind::ConservedVector | EntryKind::EulerianVector => {
                    e.vector(&config)?;
                    e.printed_vector(&config)?;
                    e.certificate(&config)?;
                }
                EntryKind::Constraint => {
                    e.components(&config)?;
                }
            }
            e.scale(&config)?;
            if let Some(s) = &e.source {
                self.get(s)?;
            }
        }
        Ok(())
    }
}

fn validation_config(e: &EntryData) -> ModelConfig {
    let entropy = e.scope.entropy.unwrap_or(Entropy::General);
    if e.scope.gamma_two {
        ModelConfig::at_gamma(rat(2, 1), entropy).expect("gamma = 2 is valid")
    } else {
        ModelConfig::symbolic(entropy)
    }
}

/// Generators admitted under `config`, by catalog id.
pub fn generators(config: &ModelConfig) -> Result<Vec<(String, Generator)>, CatalogError> {
    let cat = Catalog::builtin();
    cat.applicable(EntryKind::Generator, config)
        .into_iter()
        .map(|e| Ok((e.id.clone(), e.generator(config)?)))
        .collect()
}

/// Conserved vectors holding under `config`, by catalog id.
pub fn conserved_vectors(config: &ModelConfig) -> Result<Vec<(String, [Expr; 3])>, CatalogError> {
    let cat = Catalog::builtin();
    cat.applicable(EntryKind::ConservedVector, config)
        .into_iter()
        .map(|e| Ok((e.id.clone(), e.vector(config)?)))
        .collect()
}

/// Extra relations used on shell in the nonisentropic case: the defining
/// relations of `ψ1, ψ2`, solved for their η-derivatives under `S_ξ ≠ 0`.
pub fn side_relations(config: &ModelConfig) -> Option<RelationSet> {
    (config.entropy == Entropy::General)
        .then(|| psi_relations(PsiOrientation::Eta).assume(entropy_gradient_nonzero(Label::Xi)))
}

/// Outcome of the symmetry check `X̃E_k = 0` on the solution manifold.
#[derive(Debug, Clone)]
pub struct AdmissionReport {
    pub residuals: [Expr; 2],
    pub fired: BTreeSet<String>,
}

impl AdmissionReport {
    pub fn admitted(&self) -> bool {
        self.residuals.iter().all(Expr::is_zero)
    }
}

/// Applies the prolonged generator to the Euler–Lagrange equations and
/// reduces on shell. Equivalence generators (with an `S` component) are
/// checked with the entropy treated as a dependent variable.
pub fn verify_admitted(gen: &Generator, config: &ModelConfig) -> Result<AdmissionReport, CatalogError> {
    let config = if gen.s.is_some() {
        ModelConfig { entropy: Entropy::General, ..config.clone() }
    } else {
        config.clone()
    };
    let sys = euler_lagrange(&config)?;
    let jet = config.lagrangian_jet();
    let extra = side_relations(&config);
    let mut fired = BTreeSet::new();
    let mut residuals: [Expr; 2] = Default::default();
    for (slot, e) in residuals.iter_mut().zip(&sys.e) {
        let r = gen.apply(&jet, e)?;
        let red = on_shell_reduce(&r, &sys, extra.as_ref())?;
        fired.extend(red.fired);
        *slot = red.expr;
    }
    Ok(AdmissionReport { residuals, fired })
}

fn param(p: Param) -> Expr {
    Expr::atom(Atom::new(Sym::Param(p)))
}

/// `Σ c_j X_j` over the point-symmetry basis `X1..X10` plus the relabeling
/// family `X_h`, with free parameters `c1..c10`.
pub fn general_combination(config: &ModelConfig) -> Result<Generator, CatalogError> {
    let cat = Catalog::builtin();
    let mut g = Generator::zero();
    for j in 1..=10u8 {
        let e = cat.get(&format!("X{j}"))?;
        // X7 is kept at every gamma so that its obstruction shows up
        let x = e.generator(config)?;
        g = g.add(&x.scale(&param(Param::C(j))));
    }
    let xh = cat.get("Xh")?.generator(config)?;
    Ok(g.add(&xh))
}

/// The classifying-equation check for the general combination.
#[derive(Debug, Clone)]
pub struct ClassifyingReport {
    /// `X̃E_k` on shell for the general combination.
    pub residuals: [Expr; 2],
    /// The residuals with `c7 = 0`, reduced modulo the classifying equation.
    pub remainder: [Expr; 2],
    /// The `c7` part divided by `c7`.
    pub c7_part: [Expr; 2],
    /// The `c7` part after setting `gamma = 2` (symbolic gamma only).
    pub c7_at_two: Option<[Expr; 2]>,
    /// Multipliers `(A_k, B_k, C_k)` with `R_k = A_k Q + B_k D_ξ Q + C_k D_η Q`
    /// exactly, where `R_k` is the residual without `c7` and `Q` the
    /// classifying expression (`B_k = C_k = 0` in the isentropic case).
    pub multipliers: Option<[[Expr; 3]; 2]>,
}

impl ClassifyingReport {
    /// True when the residual vanishes exactly modulo the classifying
    /// equation and `c7 (gamma − 2) = 0`.
    pub fn matches(&self) -> bool {
        let rem = self.remainder.iter().all(Expr::is_zero)
            && self.multipliers.as_ref().is_some_and(|m| m.iter().any(|row| !row[0].is_zero()));
        let c7 = match &self.c7_at_two {
            Some(at2) => at2.iter().all(Expr::is_zero) && self.c7_part.iter().any(|e| !e.is_zero()),
            None => true,
        };
        rem && c7
    }
}

/// The classifying equation solved for `h_η`, or, in the isentropic case,
/// `c10 = 0`.
pub fn classifying_relation(config: &ModelConfig) -> Result<RelationSet, CatalogError> {
    let jet = config.lagrangian_jet();
    let mut set = RelationSet::new(jet);
    match config.entropy {
        Entropy::General => {
            let rhs = config.adapt(
                &crate::expr::parse("(h_xi*S_eta + 2*gamma*c9*xi*S_xi - 2*gamma*c10*S)/S_xi").expect("static text"),
            )?;
            let cond = entropy_gradient_nonzero(Label::Xi);
            set = set
                .with(Relation::new("classifying", Atom::deriv(Sym::H, &[Label::Eta]), rhs).requiring(cond.clone()))
                .assume(cond);
        }
        Entropy::Isentropic => {
            set.push(Relation::new("classifying", Atom::new(Sym::Param(Param::C(10))), Expr::zero()));
        }
    }
    Ok(set)
}

pub fn classifying_check(config: &ModelConfig) -> Result<ClassifyingReport, CatalogError> {
    let x = general_combination(config)?;
    let report = verify_admitted(&x, config)?;
    let c7 = Base::Atom(Atom::new(Sym::Param(Param::C(7))));
    let rel = classifying_relation(config)?;
    let mut remainder: [Expr; 2] = Default::default();
    let mut c7_part: [Expr; 2] = Default::default();
    let mut c7_at_two = config.gamma_value().is_none().then(<[Expr; 2]>::default);
    for k in 0..2 {
        let r = &report.residuals[k];
        let without = r.filter_terms(|m| m.exponent_of(&c7).is_zero());
        let with = r - &without;
        remainder[k] = rel.reduce(&without)?.expr;
        let part = with.substitute(&crate::expr::rules([(c7, Expr::one())]))?;
        if let Some(at2) = &mut c7_at_two {
            at2[k] = part.specialize_gamma(&rat(2, 1))?.canonical();
        }
        c7_part[k] = part.canonical();
    }
    let mut multipliers: [[Expr; 3]; 2] = Default::default();
    let mut decomposed = true;
    for (slot, res) in multipliers.iter_mut().zip(&report.residuals) {
        let r = res.filter_terms(|mo| mo.exponent_of(&c7).is_zero());
        match decompose_classifying(&r, &classifying_expression(config)?, config)? {
            Some(x) => *slot = x,
            None => decomposed = false,
        }
    }
    let multipliers = decomposed.then_some(multipliers);
    Ok(ClassifyingReport { residuals: report.residuals, remainder, c7_part, c7_at_two, multipliers })
}

/// Left side of the classifying equation.
pub fn classifying_expression(config: &ModelConfig) -> Result<Expr, CatalogError> {
    let q = crate::expr::parse("h_xi*S_eta - (h_eta - 2*gamma*c9*xi)*S_xi - 2*gamma*c10*S").expect("static text");
    Ok(config.adapt(&q)?)
}

/// Finds `A, B, C` free of `h` with `r = A Q + B D_ξ Q + C D_η Q`, reading
/// them off the coefficients of `h_ξξ`, `h_ηη` and `h_ξ`.
fn decompose_classifying(r: &Expr, q: &Expr, config: &ModelConfig) -> Result<Option<[Expr; 3]>, CatalogError> {
    let jet = config.lagrangian_jet();
    let q = q.clone();
    if config.entropy == Entropy::Isentropic {
        // Q = −2γ c10 S and the residual is linear in c10
        let c10 = Atom::new(Sym::Param(Param::C(10)));
        let a = r.partial(&c10).div(&q.partial(&c10))?.canonical();
        let ok = (r - &(&a * &q)).canonical().is_zero() && !a.contains_sym(Sym::Param(Param::C(10)));
        return Ok(ok.then(|| [a, Expr::zero(), Expr::zero()]));
    }
    let dq = [jet.total_derivative(&q, Label::Xi)?, jet.total_derivative(&q, Label::Eta)?];
    let h = |ls: &[Label]| Atom::deriv(Sym::H, ls);
    let s_xi = Expr::atom(Atom::deriv(Sym::S, &[Label::Xi]));
    let s_eta = Expr::atom(Atom::deriv(Sym::S, &[Label::Eta]));
    // h_ξξ enters only D_ξQ (coefficient S_η); h_ηη only D_ηQ (coefficient −S_ξ)
    let b = r.partial(&h(&[Label::Xi, Label::Xi])).div(&s_eta)?;
    let c = -(r.partial(&h(&[Label::Eta, Label::Eta])).div(&s_xi)?);
    let rest = (r - &(&b * &dq[0]) - &(&c * &dq[1])).canonical();
    let a = rest.partial(&h(&[Label::Xi])).div(&s_eta)?;
    let check = (&rest - &(&a * &q)).canonical();
    let free = [&a, &b, &c].iter().all(|e| !e.contains_sym(Sym::H));
    Ok((check.is_zero() && free).then(|| [a.canonical(), b.canonical(), c.canonical()]))
}

/// Action of a point generator on a point function: jets and `J` do not
/// appear, `φ1, φ2` are coordinates.
fn act(jet: &JetFrame, x: &Generator, f: &Expr) -> Result<Expr, CatalogError> {
    let mut acc = Expr::zero();
    for (c, l) in x.xi.iter().zip(jet.labels()) {
        if !c.is_empty() {
            acc = acc + c * &jet.explicit_partial(f, l)?;
        }
    }
    for (c, s) in x.eta.iter().zip([Sym::Phi1, Sym::Phi2]) {
        if !c.is_empty() {
            acc = acc + c * &f.partial(&Atom::new(s));
        }
    }
    Ok(acc)
}

/// Lie bracket of two point generators.
pub fn commutator(jet: &JetFrame, x: &Generator, y: &Generator) -> Result<Generator, CatalogError> {
    let xs: Vec<&Expr> = x.xi.iter().chain(x.eta.iter()).collect();
    let ys: Vec<&Expr> = y.xi.iter().chain(y.eta.iter()).collect();
    let mut out: Vec<Expr> = Vec::new();
    for (a, b) in xs.into_iter().zip(ys) {
        out.push((act(jet, x, b)? - act(jet, y, a)?).canonical());
    }
    generator_from("commutator", out)
}

/// Decomposition of a generator over a basis plus a remainder of relabeling
/// form `−a_η ∂_ξ + a_ξ ∂_η`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub coefficients: Vec<Coeff>,
    pub remainder: Generator,
}

/// Writes `g` as `Σ k_j basis_j + X_a` where `X_a` moves only the labels and
/// is divergence free with coefficients independent of `t, φ1, φ2`. Returns
/// `None` if no such decomposition exists.
pub fn decompose(jet: &JetFrame, g: &Generator, basis: &[Generator]) -> Result<Option<Decomposition>, CatalogError> {
    // fit on the t, φ1, φ2 components, which the relabeling part leaves alone
    let key = |slot: usize, m: &Monomial| (slot, m.clone());
    let pick = |x: &Generator| -> BTreeMap<(usize, Monomial), Coeff> {
        let mut out = BTreeMap::new();
        for (slot, c) in [(0, &x.xi[0]), (3, &x.eta[0]), (4, &x.eta[1])] {
            for (m, v) in c.canonical().terms() {
                out.insert(key(slot, m), v.clone());
            }
        }
        out
    };
    let cols: Vec<_> = basis.iter().map(pick).collect();
    let Some(k) = solve_columns(&cols, &pick(g)) else { return Ok(None) };
    let mut rem = g.clone();
    for (kj, b) in k.iter().zip(basis) {
        rem = rem.add(&b.scale(&Expr::constant(-kj)));
    }
    let rem = generator_from("remainder", rem.components().into_iter().map(Expr::canonical).collect())?;
    let point_free = |e: &Expr| {
        e.atoms().iter().all(|a| !matches!(a.sym, Sym::Phi1 | Sym::Phi2 | Sym::Label(Label::T)))
    };
    let div = jet.explicit_partial(&rem.xi[1], Label::Xi)? + jet.explicit_partial(&rem.xi[2], Label::Eta)?;
    let ok = [&rem.xi[0], &rem.eta[0], &rem.eta[1]].iter().all(|e| e.is_zero())
        && point_free(&rem.xi[1])
        && point_free(&rem.xi[2])
        && div.is_zero();
    Ok(ok.then_some(Decomposition { coefficients: k, remainder: rem }))
}

/// Every pairwise bracket of the admitted point generators, decomposed over
/// the finite part of the algebra. Entries hold the bracketed ids and the
/// decomposition (or `None` if the bracket leaves the algebra).
pub fn commutator_table(
    config: &ModelConfig,
) -> Result<Vec<(String, String, Option<Decomposition>)>, CatalogError> {
    let jet = config.lagrangian_jet();
    let gens = generators(config)?;
    let finite: Vec<&(String, Generator)> = gens.iter().filter(|(_, g)| is_finite(g)).collect();
    let basis: Vec<Generator> = finite.iter().map(|(_, g)| g.clone()).collect();
    let mut out = Vec::new();
    for (i, (a, x)) in gens.iter().enumerate() {
        for (b, y) in gens.iter().skip(i + 1) {
            if !is_finite(x) && !is_finite(y) {
                // both are families in the same arbitrary function
                continue;
            }
            let c = commutator(&jet, x, y)?;
            out.push((a.clone(), b.clone(), decompose(&jet, &c, &basis)?));
        }
    }
    Ok(out)
}

/// True for generators free of arbitrary functions.
fn is_finite(g: &Generator) -> bool {
    g.components().iter().all(|c| {
        c.atoms().iter().all(|a| !matches!(a.sym, Sym::H | Sym::F(_) | Sym::Psi0 | Sym::Psi1 | Sym::Psi2))
    })
}

#[cfg(test)]
mod tests;
