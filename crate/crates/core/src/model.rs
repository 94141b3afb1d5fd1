//! The variational model of polytropic gas dynamics in mass Lagrangian
//! coordinates: Lagrangian, Euler–Lagrange equations, oriented side relations
//! and on-shell reduction, plus the Eulerian system used for Eulerian
//! conservation laws.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::One;

use crate::atom::{atoms::phi, Atom, Frame, Label, MultiIndex, Sym};
use crate::coeff::Rational;
use crate::expr::{parse, parse_in, Base, Condition, Exponent, Expr, ExprError, Ledger};
use crate::jet::{Entropy, JetError, JetFrame};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("gamma = {0} is not allowed: the model divides by gamma - 1 and needs gamma > 1")]
    BadGamma(String),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("reduction stalled on {0}")]
    Stall(String),
    #[error("relation {relation} needs {condition}, which is not in the assumptions")]
    Unassumed { relation: String, condition: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GammaMode {
    Symbolic,
    Rational(Rational),
}

/// Model configuration: gamma, entropy mode and frame.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelConfig {
    pub gamma: GammaMode,
    pub entropy: Entropy,
    pub frame: Frame,
}

impl ModelConfig {
    pub fn new(gamma: GammaMode, entropy: Entropy) -> Result<Self, ModelError> {
        if let GammaMode::Rational(g) = &gamma {
            if *g <= Rational::one() {
                return Err(ModelError::BadGamma(g.to_string()));
            }
        }
        Ok(ModelConfig { gamma, entropy, frame: Frame::Lagrangian })
    }

    pub fn symbolic(entropy: Entropy) -> Self {
        ModelConfig { gamma: GammaMode::Symbolic, entropy, frame: Frame::Lagrangian }
    }

    pub fn at_gamma(g: Rational, entropy: Entropy) -> Result<Self, ModelError> {
        ModelConfig::new(GammaMode::Rational(g), entropy)
    }

    pub fn in_frame(mut self, frame: Frame) -> Self {
        self.frame = frame;
        self
    }

    pub fn gamma_value(&self) -> Option<&Rational> {
        match &self.gamma {
            GammaMode::Symbolic => None,
            GammaMode::Rational(g) => Some(g),
        }
    }

    pub fn is_gamma_two(&self) -> bool {
        self.gamma_value().is_some_and(|g| *g == Rational::from_integer(2.into()))
    }

    pub fn jet(&self) -> JetFrame {
        JetFrame::new(self.frame, self.entropy)
    }

    pub fn lagrangian_jet(&self) -> JetFrame {
        JetFrame::lagrangian(self.entropy)
    }

    /// Specializes gamma when the configuration fixes it.
    pub fn specialize(&self, e: &Expr) -> Result<Expr, ModelError> {
        match &self.gamma {
            GammaMode::Symbolic => Ok(e.clone()),
            GammaMode::Rational(g) => Ok(e.specialize_gamma(g)?),
        }
    }

    /// Replaces the entropy by a constant in isentropic mode: derivatives of
    /// `S` and `F` terms vanish.
    pub fn restrict_entropy(&self, e: &Expr) -> Expr {
        if self.entropy == Entropy::General {
            return e.clone();
        }
        let mut rules = BTreeMap::new();
        for a in e.atoms() {
            let drop = matches!(a.sym, Sym::S | Sym::ES) && !a.idx.is_empty();
            if drop {
                rules.insert(Base::Atom(a), Expr::zero());
            }
        }
        e.substitute(&rules).unwrap_or_else(|_| e.clone())
    }

    /// Specializes gamma and restricts the entropy.
    pub fn adapt(&self, e: &Expr) -> Result<Expr, ModelError> {
        self.specialize(&self.restrict_entropy(e))
    }

    pub fn describe(&self) -> String {
        let g = match &self.gamma {
            GammaMode::Symbolic => "symbolic".to_string(),
            GammaMode::Rational(g) => g.to_string(),
        };
        let s = match self.entropy {
            Entropy::Isentropic => "isentropic",
            Entropy::General => "general",
        };
        format!("gamma={g}, entropy={s}")
    }
}

/// `(φ1t² + φ2t²)/2 − J^(1−γ) S/(γ−1)`.
pub fn build_lagrangian(config: &ModelConfig) -> Result<Expr, ModelError> {
    let l = parse("phi1_t^2/2 + phi2_t^2/2 - J^(1-gamma)*S/(gamma-1)").expect("static text");
    config.specialize(&l)
}

/// Left-hand sides of the Euler–Lagrange equations as printed, normalized
/// so that the coefficient of `φ_ktt` is `J^γ`.
pub const PRINTED_EL: [&str; 2] = [
    "J^gamma*phi1_tt + S_xi*phi2_eta - S_eta*phi2_xi + gamma*J^(-1)*S*(phi2_eta*(phi1_eta*phi2_xixi - phi2_eta*phi1_xixi) + phi2_xi*(phi1_xi*phi2_etaeta - phi1_etaeta*phi2_xi) + 2*phi2_xi*phi2_eta*phi1_xieta - (phi1_xi*phi2_eta + phi1_eta*phi2_xi)*phi2_xieta)",
    "J^gamma*phi2_tt - S_xi*phi1_eta + S_eta*phi1_xi + gamma*S*J^(-1)*(phi1_eta*(phi2_eta*phi1_xixi - phi1_eta*phi2_xixi) + phi1_xi*(phi2_xi*phi1_etaeta - phi1_xi*phi2_etaeta) + 2*phi1_xi*phi1_eta*phi2_xieta - (phi1_xi*phi2_eta + phi1_eta*phi2_xi)*phi1_xieta)",
];

/// The printed equations, adapted to the configuration.
pub fn printed_el(config: &ModelConfig) -> Result<[Expr; 2], ModelError> {
    let a = config.adapt(&parse(PRINTED_EL[0]).expect("static text"))?;
    let b = config.adapt(&parse(PRINTED_EL[1]).expect("static text"))?;
    Ok([a, b])
}

/// Euler–Lagrange system `E_k = −J^γ δL/δφ_k` with the solved forms of
/// `φ_ktt`.
#[derive(Clone, Debug)]
pub struct ELSystem {
    pub config: ModelConfig,
    pub lagrangian: Expr,
    pub e: [Expr; 2],
    pub solved: [Expr; 2],
}

impl ELSystem {
    pub fn second_time_jets() -> [Atom; 2] {
        [phi(1, &[Label::T, Label::T]), phi(2, &[Label::T, Label::T])]
    }

    /// The relation set that puts expressions on the solution manifold.
    pub fn relations(&self) -> RelationSet {
        let mut r = RelationSet::new(self.config.lagrangian_jet());
        for (k, a) in Self::second_time_jets().into_iter().enumerate() {
            r.push(Relation::new(&format!("EL{}", k + 1), a, self.solved[k].clone()));
        }
        r
    }
}

pub fn euler_lagrange(config: &ModelConfig) -> Result<ELSystem, ModelError> {
    let jet = config.lagrangian_jet();
    let l = build_lagrangian(config)?;
    let l = config.restrict_entropy(&l);
    let jg = Expr::power(Base::J, gamma_exponent());
    let jg = config.specialize(&jg)?;
    let mut e: [Expr; 2] = Default::default();
    let mut solved: [Expr; 2] = Default::default();
    for (k, dep) in [Sym::Phi1, Sym::Phi2].into_iter().enumerate() {
        let ek = -(&jg * &jet.variational_derivative(&l, dep)?);
        let tt = ELSystem::second_time_jets()[k];
        let coeff = ek.partial(&tt);
        if !coeff.partial(&tt).is_empty() {
            return Err(ModelError::Invalid("equation is not affine in the second time jet".into()));
        }
        let rest = &ek - &(&coeff * &Expr::atom(tt));
        solved[k] = -(rest.div(&coeff)?);
        e[k] = ek;
    }
    Ok(ELSystem { config: config.clone(), lagrangian: l, e, solved })
}

fn gamma_exponent() -> Exponent {
    Exponent::affine(0, 1)
}

/// One oriented relation `atom_lead = rhs`; jets of the lead are replaced by
/// the matching total derivatives of `rhs`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub lead: Atom,
    pub rhs: Expr,
    pub requires: Vec<Condition>,
}

impl Relation {
    pub fn new(name: &str, lead: Atom, rhs: Expr) -> Self {
        Relation { name: name.into(), lead, rhs, requires: Vec::new() }
    }

    pub fn requiring(mut self, c: Condition) -> Self {
        self.requires.push(c);
        self
    }

    fn matches(&self, a: &Atom) -> Option<MultiIndex> {
        if a.sym == self.lead.sym {
            a.idx.minus(&self.lead.idx)
        } else {
            None
        }
    }
}

/// Orientation of the entropy-function relations of the nonisentropic case.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PsiOrientation {
    /// Solve for the η-derivatives (divide by `S_ξ`).
    Eta,
    /// Solve for the ξ-derivatives (divide by `S_η`).
    Xi,
}

/// Ordered list of relations with the nonvanishing assumptions they may use.
#[derive(Clone, Debug)]
pub struct RelationSet {
    pub frame: JetFrame,
    relations: Vec<Relation>,
    assumed: Ledger,
    max_passes: usize,
}

/// Result of a reduction with the names of the relations that fired.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub expr: Expr,
    pub fired: BTreeSet<String>,
}

impl RelationSet {
    pub fn new(frame: JetFrame) -> Self {
        RelationSet { frame, relations: Vec::new(), assumed: Ledger::new(), max_passes: 64 }
    }

    pub fn push(&mut self, r: Relation) {
        self.relations.push(r);
    }

    pub fn with(mut self, r: Relation) -> Self {
        self.push(r);
        self
    }

    pub fn extend(mut self, other: &RelationSet) -> Self {
        self.relations.extend(other.relations.iter().cloned());
        self.assumed.extend(&other.assumed);
        self
    }

    pub fn assume(mut self, c: Condition) -> Self {
        self.assumed.insert(c);
        self
    }

    pub fn assumptions(&self) -> &Ledger {
        &self.assumed
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// The relation that rewrites `a`, with the remaining derivative index.
    fn rule_for(&self, a: &Atom) -> Option<(usize, MultiIndex)> {
        self.relations.iter().enumerate().find_map(|(i, r)| r.matches(a).map(|m| (i, m)))
    }

    /// Rewrites every atom covered by a relation until none is left, then
    /// canonicalizes.
    pub fn reduce(&self, e: &Expr) -> Result<Reduced, ModelError> {
        let mut fired = BTreeSet::new();
        let mut cur = e.clone();
        let mut memo: BTreeMap<Atom, Expr> = BTreeMap::new();
        for _ in 0..self.max_passes {
            let mut rules = BTreeMap::new();
            for a in cur.atoms() {
                let Some((i, rest)) = self.rule_for(&a) else { continue };
                let r = &self.relations[i];
                for c in &r.requires {
                    if !self.assumed.contains(c) && !e.ledger().contains(c) {
                        return Err(ModelError::Unassumed {
                            relation: r.name.clone(),
                            condition: c.to_string(),
                        });
                    }
                }
                fired.insert(r.name.clone());
                let repl = match memo.get(&a) {
                    Some(x) => x.clone(),
                    None => {
                        let x = self.frame.total_derivative_multi(&r.rhs, &rest)?;
                        memo.insert(a, x.clone());
                        x
                    }
                };
                rules.insert(Base::Atom(a), repl);
            }
            if rules.is_empty() {
                return Ok(Reduced { expr: cur.canonical(), fired });
            }
            cur = cur.substitute(&rules)?;
        }
        let stuck = cur.atoms().into_iter().find(|a| self.rule_for(a).is_some());
        Err(ModelError::Stall(stuck.map(|a| a.to_string()).unwrap_or_default()))
    }
}

fn s_atom(labels: &[Label]) -> Atom {
    Atom::deriv(Sym::S, labels)
}

/// Condition `S_ξ ≠ 0` (or `S_η ≠ 0`).
pub fn entropy_gradient_nonzero(l: Label) -> Condition {
    Condition::NonZero(Base::Atom(s_atom(&[l])))
}

/// The relations defining `ψ1, ψ2` in the nonisentropic case, oriented.
pub fn psi_relations(orientation: PsiOrientation) -> RelationSet {
    let frame = JetFrame::lagrangian(Entropy::General);
    let p = |s: &str| parse(s).expect("static text");
    let (rules, cond) = match orientation {
        PsiOrientation::Eta => (
            [
                ("psi1", Atom::deriv(Sym::Psi1, &[Label::Eta]), p("psi1_xi*S_eta/S_xi + xi")),
                ("psi2", Atom::deriv(Sym::Psi2, &[Label::Eta]), p("(S_eta*psi2_xi - 2*S)/S_xi")),
            ],
            entropy_gradient_nonzero(Label::Xi),
        ),
        PsiOrientation::Xi => (
            [
                ("psi1", Atom::deriv(Sym::Psi1, &[Label::Xi]), p("(psi1_eta*S_xi - xi*S_xi)/S_eta")),
                ("psi2", Atom::deriv(Sym::Psi2, &[Label::Xi]), p("(S_xi*psi2_eta + 2*S)/S_eta")),
            ],
            entropy_gradient_nonzero(Label::Eta),
        ),
    };
    let mut set = RelationSet::new(frame);
    for (name, lead, rhs) in rules {
        set.push(Relation::new(name, lead, rhs).requiring(cond.clone()));
    }
    set
}

/// The Eulerian system solved for the time derivatives, with the advection
/// equations of `h` and `ψ2` and the algebraic relation for `ψ2_x`.
pub fn eulerian_relations(config: &ModelConfig) -> Result<RelationSet, ModelError> {
    let frame = JetFrame::eulerian(config.entropy);
    let p = |s: &str| parse_in(Frame::Eulerian, s).expect("static text");
    let mut set = RelationSet::new(frame);
    let mut add = |name: &str, lead: Atom, rhs: Expr| -> Result<(), ModelError> {
        let rhs = config.adapt(&rhs)?;
        set.push(Relation::new(name, lead, rhs));
        Ok(())
    };
    let t = [Label::T];
    add("mass", Atom::deriv(Sym::Rho, &t), p("-(u*rho_x + v*rho_y + rho*(u_x + v_y))"))?;
    add(
        "momentum-x",
        Atom::deriv(Sym::U, &t),
        p("-(u*u_x + v*u_y) - S_x*rho^(gamma-1) - gamma*S*rho^(gamma-2)*rho_x"),
    )?;
    add(
        "momentum-y",
        Atom::deriv(Sym::V, &t),
        p("-(u*v_x + v*v_y) - S_y*rho^(gamma-1) - gamma*S*rho^(gamma-2)*rho_y"),
    )?;
    if config.entropy == Entropy::General {
        add("entropy", Atom::deriv(Sym::ES, &t), p("-(u*S_x + v*S_y)"))?;
    }
    add("h-advection", Atom::deriv(Sym::EH, &t), p("-(u*h_x + v*h_y)"))?;
    add("psi2-advection", Atom::deriv(Sym::EPsi2, &t), p("-(u*psi2_x + v*psi2_y)"))?;
    if config.entropy == Entropy::General {
        let cond = Condition::NonZero(Base::Atom(Atom::deriv(Sym::ES, &[Label::Y])));
        set.push(
            Relation::new(
                "psi2-constraint",
                Atom::deriv(Sym::EPsi2, &[Label::X]),
                config.adapt(&p("(2*rho*S + psi2_y*S_x)/S_y"))?,
            )
            .requiring(cond),
        );
    }
    Ok(set)
}

/// `on_shell_reduce`: Euler–Lagrange solved forms plus extra relations.
pub fn on_shell_reduce(e: &Expr, sys: &ELSystem, extra: Option<&RelationSet>) -> Result<Reduced, ModelError> {
    let mut set = sys.relations();
    if let Some(x) = extra {
        set = set.extend(x);
    }
    set.reduce(e)
}

/// Named residuals of the consistency checks between the model and the gas
/// dynamics equations in mass Lagrangian coordinates.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub checks: Vec<(String, Expr)>,
}

impl ConsistencyReport {
    pub fn all_zero(&self) -> bool {
        self.checks.iter().all(|(_, r)| r.is_zero())
    }
}

pub fn verify_gd_consistency(config: &ModelConfig) -> Result<ConsistencyReport, ModelError> {
    let jet = config.lagrangian_jet();
    let p = |s: &str| config.adapt(&parse(s).expect("static text"));
    let mut checks = Vec::new();

    // (1/ρ)_t = u_ξ φ2η − φ1η v_ξ − (u_η φ2ξ − φ1ξ v_η) with 1/ρ = J, u = φ1t, v = φ2t
    let lhs = jet.total_derivative(&Expr::jacobian(), Label::T)?;
    let rhs = p("phi1_txi*phi2_eta - phi1_eta*phi2_txi - (phi1_teta*phi2_xi - phi1_xi*phi2_teta)")?;
    checks.push(("specific volume".into(), lhs - rhs));

    // J^γ × momentum equations with p = S J^{−γ} against the printed equations
    let printed = printed_el(config)?;
    let pressure = p("S*J^(-gamma)")?;
    let p_xi = jet.total_derivative(&pressure, Label::Xi)?;
    let p_eta = jet.total_derivative(&pressure, Label::Eta)?;
    let jg = config.specialize(&Expr::power(Base::J, gamma_exponent()))?;
    let m1 = p("phi1_tt")? + p("phi2_eta")? * &p_xi - p("phi2_xi")? * &p_eta;
    let m2 = p("phi2_tt")? - p("phi1_eta")? * &p_xi + p("phi1_xi")? * &p_eta;
    checks.push(("momentum x".into(), &jg * &m1 - printed[0].clone()));
    checks.push(("momentum y".into(), &jg * &m2 - printed[1].clone()));

    // one-dimensional reduction φ2 = η, φ1η = 0, S = S(ξ)
    let mut rules = BTreeMap::new();
    let zero_atoms = [
        phi(1, &[Label::Eta]),
        phi(1, &[Label::Eta, Label::Eta]),
        phi(1, &[Label::Xi, Label::Eta]),
        phi(2, &[Label::Xi]),
        phi(2, &[Label::Xi, Label::Xi]),
        phi(2, &[Label::Xi, Label::Eta]),
        phi(2, &[Label::Eta, Label::Eta]),
        phi(2, &[Label::T, Label::T]),
        s_atom(&[Label::Eta]),
    ];
    for a in zero_atoms {
        rules.insert(Base::Atom(a), Expr::zero());
    }
    rules.insert(Base::Atom(phi(2, &[Label::Eta])), Expr::one());
    rules.insert(Base::J, p("phi1_xi")?);
    let e1 = printed[0].substitute(&rules)?;
    let e2 = printed[1].substitute(&rules)?;
    // u_t + p_ξ with p = S φ1ξ^{−γ}, scaled by φ1ξ^γ
    let p1 = p("S*phi1_xi^(-gamma)")?;
    let one_d = p("phi1_xi^gamma")? * (p("phi1_tt")? + jet.total_derivative(&p1, Label::Xi)?);
    checks.push(("one-dimensional momentum".into(), e1 - one_d));
    checks.push(("one-dimensional transverse equation".into(), e2));
    Ok(ConsistencyReport { checks })
}

#[cfg(test)]
mod tests;
