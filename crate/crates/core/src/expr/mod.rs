//! Exact symbolic expressions over jet variables, function atoms and the
//! symbolic exponent `gamma`.
//!
//! An [`Expr`] is a finite sum of terms `coeff * Π base^exponent` where
//! `coeff ∈ Q(gamma)`, each base is an [`Atom`] or the protected Jacobian `J`,
//! and each exponent is affine in gamma. Denominators are monomials: negative
//! and symbolic exponents are allowed, sums may not be inverted. Terms are
//! kept sorted and combined, so the stored form is unique for a given set of
//! bases.
//!
//! `J` stands for `phi1_xi*phi2_eta - phi1_eta*phi2_xi`. It stays atomic under
//! differentiation; [`Expr::canonical`] removes the remaining dependency by
//! eliminating `phi1_xi` in favour of `J`, which makes zero-testing complete.

mod eval;
mod ledger;
mod parse;
mod print;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};

pub use eval::{EvalError, Scalar};
pub use ledger::{Condition, Ledger};
pub use parse::{parse, parse_coeff, parse_in, ParseError, ParseErrorKind};

use crate::atom::{Atom, Frame, Label, Sym};
use crate::coeff::{Coeff, GammaPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("division by an expression that is not a monomial: {0}")]
    NonMonomialDenominator(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {0} is not affine in gamma")]
    NonAffineExponent(String),
    #[error("non-integer power of an expression that is not a bare monomial: {0}")]
    SymbolicPowerOfSum(String),
    #[error("substitution rules are cyclic through {0}")]
    CyclicRules(String),
    #[error("side condition violated: {0}")]
    LedgerViolation(String),
    #[error("substitution divides by {0}, whose nonvanishing is not assumed")]
    UnassumedDivision(String),
}

/// Exponent `a + b*gamma`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Exponent {
    pub a: Rational64,
    pub b: Rational64,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent::int(0);
    pub const ONE: Exponent = Exponent::int(1);

    pub const fn int(n: i64) -> Self {
        Exponent { a: Rational64::new_raw(n, 1), b: Rational64::new_raw(0, 1) }
    }

    pub fn new(a: Rational64, b: Rational64) -> Self {
        Exponent { a, b }
    }

    /// `a + b*gamma` with integer parts.
    pub fn affine(a: i64, b: i64) -> Self {
        Exponent { a: Rational64::from_integer(a), b: Rational64::from_integer(b) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_symbolic(&self) -> bool {
        !self.b.is_zero()
    }

    pub fn as_integer(&self) -> Option<i64> {
        if self.b.is_zero() && self.a.is_integer() {
            Some(self.a.to_integer())
        } else {
            None
        }
    }

    pub fn is_negative_integer(&self) -> bool {
        self.as_integer().is_some_and(|n| n < 0)
    }

    /// Needs a nonzero base to make sense.
    pub fn needs_nonzero_base(&self) -> bool {
        !matches!(self.as_integer(), Some(n) if n >= 0)
    }

    pub fn scale(&self, k: Rational64) -> Exponent {
        Exponent { a: self.a * k, b: self.b * k }
    }

    pub fn mul(&self, rhs: &Exponent) -> Result<Exponent, ExprError> {
        if !self.is_symbolic() {
            Ok(rhs.scale(self.a))
        } else if !rhs.is_symbolic() {
            Ok(self.scale(rhs.a))
        } else {
            Err(ExprError::NonAffineExponent("product of two gamma-dependent exponents".into()))
        }
    }

    pub fn to_coeff(&self) -> Coeff {
        Coeff::from_poly(GammaPoly::linear(small_to_big(self.a), small_to_big(self.b)))
    }

    pub fn from_coeff(c: &Coeff) -> Option<Exponent> {
        if !c.is_polynomial() || c.num().degree().unwrap_or(0) > 1 {
            return None;
        }
        let cs = c.num().coeffs();
        let a = cs.first().map(big_to_small).unwrap_or(Some(Rational64::zero()))?;
        let b = cs.get(1).map(big_to_small).unwrap_or(Some(Rational64::zero()))?;
        Some(Exponent { a, b })
    }

    pub fn specialize(&self, g: &Rational) -> Option<Exponent> {
        let v = small_to_big(self.a) + small_to_big(self.b) * g;
        Some(Exponent { a: big_to_small(&v)?, b: Rational64::zero() })
    }

    pub fn eval_f64(&self, gamma: f64) -> f64 {
        let f = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
        f(self.a) + f(self.b) * gamma
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        Exponent { a: self.a + rhs.a, b: self.b + rhs.b }
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent { a: -self.a, b: -self.b }
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, rhs: Exponent) -> Exponent {
        self + (-rhs)
    }
}

fn small_to_big(r: Rational64) -> Rational {
    Rational::new((*r.numer()).into(), (*r.denom()).into())
}

fn big_to_small(r: &Rational) -> Option<Rational64> {
    Some(Rational64::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

/// A power base: an atom, or the protected Jacobian.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Base {
    Atom(Atom),
    J,
}

impl From<Atom> for Base {
    fn from(a: Atom) -> Self {
        Base::Atom(a)
    }
}

impl Base {
    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Base::Atom(a) => Some(a),
            Base::J => None,
        }
    }
}

/// The four first-order jets `J` is built from, with `∂J/∂jet` as
/// `(sign, other jet)`.
pub fn jacobian_parts() -> [(Atom, i64, Atom); 4] {
    use crate::atom::atoms::phi;
    [
        (phi(1, &[Label::Xi]), 1, phi(2, &[Label::Eta])),
        (phi(2, &[Label::Eta]), 1, phi(1, &[Label::Xi])),
        (phi(1, &[Label::Eta]), -1, phi(2, &[Label::Xi])),
        (phi(2, &[Label::Xi]), -1, phi(1, &[Label::Eta])),
    ]
}

/// `phi1_xi*phi2_eta - phi1_eta*phi2_xi`, expanded.
pub fn jacobian_expanded() -> Expr {
    use crate::atom::atoms::phi;
    let a = Expr::atom(phi(1, &[Label::Xi])) * Expr::atom(phi(2, &[Label::Eta]));
    let b = Expr::atom(phi(1, &[Label::Eta])) * Expr::atom(phi(2, &[Label::Xi]));
    a - b
}

/// Product of base powers, sorted by base, no zero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<(Base, Exponent)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn single(b: Base, e: Exponent) -> Self {
        if e.is_zero() {
            Monomial::one()
        } else {
            Monomial(alloc::vec![(b, e)])
        }
    }

    pub fn factors(&self) -> &[(Base, Exponent)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent_of(&self, b: &Base) -> Exponent {
        self.0
            .binary_search_by(|(x, _)| x.cmp(b))
            .map(|i| self.0[i].1)
            .unwrap_or(Exponent::ZERO)
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        if rhs.0.is_empty() {
            return self.clone();
        }
        if self.0.is_empty() {
            return rhs.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + rhs.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < rhs.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = rhs.0[j];
            match a.cmp(&b) {
                core::cmp::Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    let e = ea + eb;
                    if !e.is_zero() {
                        out.push((a, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&rhs.0[j..]);
        Monomial(out)
    }

    /// Adds `delta` to the exponent of `b`.
    pub fn bump(&self, b: Base, delta: Exponent) -> Monomial {
        self.mul(&Monomial::single(b, delta))
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(b, e)| (b, -e)).collect())
    }

    pub fn pow(&self, e: &Exponent) -> Result<Monomial, ExprError> {
        let mut out = Vec::with_capacity(self.0.len());
        for (b, k) in &self.0 {
            let ne = k.mul(e)?;
            if !ne.is_zero() {
                out.push((*b, ne));
            }
        }
        Ok(Monomial(out))
    }

    /// Drops the factors whose base satisfies `pred`, returning them separately.
    pub fn split(&self, mut pred: impl FnMut(&Base) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().partition(|(x, _)| pred(x));
        (Monomial(a), Monomial(b))
    }
}

/// Symbolic expression. Equality (`==`) is structural on the normalized term
/// list; use [`Expr::canonical_eq`] for mathematical equality.
#[derive(Clone, Debug, Default)]
pub struct Expr {
    terms: Vec<(Monomial, Coeff)>,
    ledger: Ledger,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Expr {}

/// Term accumulator used by every arithmetic routine.
#[derive(Default)]
pub(crate) struct Acc {
    map: BTreeMap<Monomial, Coeff>,
    ledger: Ledger,
}

impl Acc {
    pub(crate) fn new() -> Self {
        Acc::default()
    }

    pub(crate) fn push(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.map.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                *o.get_mut() = s;
            }
        }
    }

    pub(crate) fn push_scaled(&mut self, e: &Expr, m: &Monomial, c: &Coeff) {
        self.ledger.extend(&e.ledger);
        for (em, ec) in &e.terms {
            self.push(em.mul(m), ec * c);
        }
    }

    pub(crate) fn note(&mut self, l: &Ledger) {
        self.ledger.extend(l);
    }

    pub(crate) fn finish(self) -> Expr {
        let mut ledger = self.ledger;
        let mut terms = Vec::with_capacity(self.map.len());
        for (m, c) in self.map {
            if c.is_zero() {
                continue;
            }
            ledger.record_term(&m, &c);
            terms.push((m, c));
        }
        Expr { terms, ledger }
    }
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Expr::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Expr::constant(Coeff::from_i64(n))
    }

    pub fn rational(r: Rational) -> Self {
        Expr::constant(Coeff::from_rational(r))
    }

    pub fn gamma() -> Self {
        Expr::constant(Coeff::gamma())
    }

    pub fn atom(a: Atom) -> Self {
        Expr::term(Monomial::single(Base::Atom(a), Exponent::ONE), Coeff::one())
    }

    pub fn label(l: Label) -> Self {
        Expr::atom(Atom::label(l))
    }

    pub fn from_base_atom(b: Base) -> Self {
        Expr::power(b, Exponent::ONE)
    }

    pub fn jacobian() -> Self {
        Expr::power(Base::J, Exponent::ONE)
    }

    pub fn power(b: Base, e: Exponent) -> Self {
        Expr::term(Monomial::single(b, e), Coeff::one())
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let mut acc = Acc::new();
        acc.push(m, c);
        acc.finish()
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn ledger(&self) -> &Ledger {
        &self.ledger
    }

    pub fn with_ledger(mut self, l: &Ledger) -> Self {
        self.ledger.extend(l);
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(Coeff::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// The single term, if the expression is a monomial times a coefficient.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Coeff)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn bases(&self) -> BTreeSet<Base> {
        self.terms.iter().flat_map(|(m, _)| m.0.iter().map(|(b, _)| *b)).collect()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.bases().into_iter().filter_map(|b| b.as_atom().copied()).collect()
    }

    pub fn contains(&self, b: &Base) -> bool {
        self.terms.iter().any(|(m, _)| !m.exponent_of(b).is_zero())
    }

    pub fn contains_sym(&self, s: Sym) -> bool {
        self.atoms().iter().any(|a| a.sym == s)
    }

    /// Highest derivative order among atoms of the given symbols.
    pub fn jet_order(&self, syms: &[Sym]) -> usize {
        let mut order = 0;
        for b in self.bases() {
            match b {
                Base::Atom(a) if syms.contains(&a.sym) => order = order.max(a.order()),
                Base::J if syms.contains(&Sym::Phi1) || syms.contains(&Sym::Phi2) => {
                    order = order.max(1)
                }
                _ => {}
            }
        }
        order
    }

    pub fn scale(&self, c: &Coeff) -> Expr {
        let mut acc = Acc::new();
        acc.push_scaled(self, &Monomial::one(), c);
        acc.finish()
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Coeff) -> Expr {
        let mut acc = Acc::new();
        acc.push_scaled(self, m, c);
        acc.finish()
    }

    pub fn pow_int(&self, n: i64) -> Result<Expr, ExprError> {
        if n < 0 {
            return self.inv()?.pow_int(-n);
        }
        let mut result = Expr::one().with_ledger(&self.ledger);
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// General power with an exponent affine in gamma. Non-integer powers
    /// require a bare monomial (unit coefficient).
    pub fn pow(&self, e: &Exponent) -> Result<Expr, ExprError> {
        if let Some(n) = e.as_integer() {
            return self.pow_int(n);
        }
        match self.as_monomial() {
            Some((m, c)) if c.is_one() => {
                Ok(Expr::term(m.pow(e)?, Coeff::one()).with_ledger(&self.ledger))
            }
            _ => Err(ExprError::SymbolicPowerOfSum(self.to_string())),
        }
    }

    pub fn inv(&self) -> Result<Expr, ExprError> {
        match self.terms.as_slice() {
            [] => Err(ExprError::DivisionByZero),
            [(m, c)] => {
                let ci = c.recip().ok_or(ExprError::DivisionByZero)?;
                Ok(Expr::term(m.inverse(), ci).with_ledger(&self.ledger))
            }
            _ => Err(ExprError::NonMonomialDenominator(self.to_string())),
        }
    }

    pub fn div(&self, rhs: &Expr) -> Result<Expr, ExprError> {
        Ok(self * &rhs.inv()?)
    }

    /// Applies a derivation defined on bases (`None` means derivative zero).
    pub fn derive_with(&self, mut d: impl FnMut(&Base) -> Option<Expr>) -> Expr {
        let mut cache: BTreeMap<Base, Option<Expr>> = BTreeMap::new();
        let mut acc = Acc::new();
        acc.note(&self.ledger);
        for (m, c) in &self.terms {
            for &(b, e) in &m.0 {
                let db = cache.entry(b).or_insert_with(|| d(&b));
                let Some(db) = db else { continue };
                if db.is_empty() {
                    continue;
                }
                let rest = m.bump(b, -Exponent::ONE);
                let k = c * &e.to_coeff();
                acc.push_scaled(db, &rest, &k);
            }
        }
        acc.finish()
    }

    /// Partial derivative treating every atom as an independent coordinate;
    /// `J` is differentiated through its definition.
    pub fn partial(&self, a: &Atom) -> Expr {
        let parts = jacobian_parts();
        self.derive_with(|b| match b {
            Base::Atom(x) if x == a => Some(Expr::one()),
            Base::J => parts
                .iter()
                .find(|(p, _, _)| p == a)
                .map(|(_, s, other)| Expr::atom(*other).scale(&Coeff::from_i64(*s))),
            _ => None,
        })
    }

    /// Simultaneous substitution of bases by expressions.
    ///
    /// If the rules touch one of the jets `J` is built from and give no rule
    /// for `J` itself, `J` is replaced by its substituted definition.
    pub fn substitute(&self, rules: &BTreeMap<Base, Expr>) -> Result<Expr, ExprError> {
        self.substitute_impl(rules, None)
    }

    /// Like [`Expr::substitute`], but fails when a substituted base occurs with a
    /// negative or symbolic exponent and its replacement contains a base whose
    /// nonvanishing is neither assumed nor already recorded.
    pub fn substitute_assuming(
        &self,
        rules: &BTreeMap<Base, Expr>,
        assumptions: &Ledger,
    ) -> Result<Expr, ExprError> {
        self.substitute_impl(rules, Some(assumptions))
    }

    fn substitute_impl(
        &self,
        rules: &BTreeMap<Base, Expr>,
        assumptions: Option<&Ledger>,
    ) -> Result<Expr, ExprError> {
        if rules.is_empty() {
            return Ok(self.clone());
        }
        let mut rules_ref: BTreeMap<Base, Expr> = BTreeMap::new();
        let touches_j = !rules.contains_key(&Base::J)
            && self.contains(&Base::J)
            && jacobian_parts().iter().any(|(p, _, _)| rules.contains_key(&Base::Atom(*p)));
        let rules = if touches_j {
            rules_ref.clone_from(rules);
            rules_ref.insert(Base::J, jacobian_expanded().substitute(rules)?);
            &rules_ref
        } else {
            rules
        };

        let mut powers: BTreeMap<(Base, Exponent), Expr> = BTreeMap::new();
        let mut acc = Acc::new();
        acc.note(&self.ledger);
        for (m, c) in &self.terms {
            let (hit, keep) = m.split(|b| rules.contains_key(b));
            if hit.is_one() {
                acc.push(keep, c.clone());
                continue;
            }
            let mut prod = Expr::term(keep, c.clone());
            for &(b, e) in hit.factors() {
                let p = match powers.get(&(b, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let r = &rules[&b];
                        if e.needs_nonzero_base() {
                            if let Some(assumed) = assumptions {
                                for rb in r.bases() {
                                    let cond = Condition::NonZero(rb);
                                    if !assumed.contains(&cond) && !self.ledger.contains(&cond) {
                                        return Err(ExprError::UnassumedDivision(
                                            Expr::power(rb, Exponent::ONE).to_string(),
                                        ));
                                    }
                                }
                            }
                        }
                        let p = r.pow(&e)?;
                        powers.insert((b, e), p.clone());
                        p
                    }
                };
                prod = &prod * &p;
            }
            acc.push_scaled(&prod, &Monomial::one(), &Coeff::one());
        }
        Ok(acc.finish())
    }

    /// Applies acyclic rules until no left-hand side remains.
    pub fn substitute_closure(&self, rules: &BTreeMap<Base, Expr>) -> Result<Expr, ExprError> {
        check_acyclic(rules)?;
        let mut e = self.clone();
        for _ in 0..=rules.len() {
            if !e.bases().iter().any(|b| rules.contains_key(b)) {
                return Ok(e);
            }
            e = e.substitute(rules)?;
        }
        Ok(e)
    }

    /// Canonical form used for equality: `phi1_xi` is eliminated through
    /// `phi1_xi = (J + phi1_eta*phi2_xi)/phi2_eta` whenever it occurs with
    /// nonnegative integer exponents. Idempotent.
    pub fn canonical(&self) -> Expr {
        let target = jacobian_parts()[0].0;
        let tb = Base::Atom(target);
        let mut present = false;
        for (m, _) in &self.terms {
            let e = m.exponent_of(&tb);
            if e.is_zero() {
                continue;
            }
            if !matches!(e.as_integer(), Some(n) if n > 0) {
                return self.clone();
            }
            present = true;
        }
        if !present {
            return self.clone();
        }
        let [_, (p2e, _, _), (p1e, _, _), (p2x, _, _)] = jacobian_parts();
        let repl = &(Expr::jacobian() + Expr::atom(p1e) * Expr::atom(p2x))
            * &Expr::power(Base::Atom(p2e), Exponent::int(-1));
        let mut rules = BTreeMap::new();
        rules.insert(tb, repl);
        // the rule only fires on nonnegative integer powers, so it cannot fail
        let mut rules_keep_j = rules.clone();
        rules_keep_j.insert(Base::J, Expr::jacobian());
        self.substitute(&rules_keep_j).unwrap_or_else(|_| self.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() || self.canonical().terms.is_empty()
    }

    pub fn canonical_eq(&self, other: &Expr) -> bool {
        (self - other).is_zero()
    }

    /// Replaces gamma by an exact rational value.
    pub fn specialize_gamma(&self, g: &Rational) -> Result<Expr, ExprError> {
        let mut ledger = Ledger::default();
        for c in self.ledger.iter() {
            match c {
                Condition::GammaNonZero(p) => {
                    if p.eval(g).is_zero() {
                        return Err(ExprError::LedgerViolation(alloc::format!(
                            "{c} fails at gamma = {g}"
                        )));
                    }
                }
                other => ledger.insert(other.clone()),
            }
        }
        let mut acc = Acc::new();
        acc.note(&ledger);
        for (m, c) in &self.terms {
            let v = c.specialize(g).ok_or_else(|| {
                ExprError::LedgerViolation(alloc::format!(
                    "denominator {} vanishes at gamma = {g}",
                    c.den()
                ))
            })?;
            let mut fs = Vec::with_capacity(m.0.len());
            for (b, e) in &m.0 {
                let se = e.specialize(g).ok_or_else(|| {
                    ExprError::NonAffineExponent("exponent overflow on specialization".to_string())
                })?;
                if !se.is_zero() {
                    fs.push((*b, se));
                }
            }
            let mono = fs.into_iter().fold(Monomial::one(), |acc, (b, e)| acc.bump(b, e));
            acc.push(mono, Coeff::from_rational(v));
        }
        Ok(acc.finish())
    }

    /// Keeps only the terms whose monomial satisfies `pred`.
    pub fn filter_terms(&self, mut pred: impl FnMut(&Monomial) -> bool) -> Expr {
        let mut acc = Acc::new();
        acc.note(&self.ledger);
        for (m, c) in &self.terms {
            if pred(m) {
                acc.push(m.clone(), c.clone());
            }
        }
        acc.finish()
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Coeff) -> Coeff) -> Expr {
        let mut acc = Acc::new();
        acc.note(&self.ledger);
        for (m, c) in &self.terms {
            acc.push(m.clone(), f(c));
        }
        acc.finish()
    }

    /// Sum of expressions.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Expr>) -> Expr {
        let mut acc = Acc::new();
        for e in items {
            acc.push_scaled(e, &Monomial::one(), &Coeff::one());
        }
        acc.finish()
    }

    /// Atoms in `self` that are not in `frame` (parameters and `t` are shared).
    pub fn foreign_atoms(&self, frame: Frame) -> BTreeSet<Atom> {
        self.atoms().into_iter().filter(|a| a.sym.frame().is_some_and(|f| f != frame)).collect()
    }

    /// Checks that a positive-lead sign convention can be imposed: returns
    /// the coefficient of the first term.
    pub fn leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn has_negative_lead(&self) -> bool {
        self.terms.first().is_some_and(|(_, c)| c.num().lead().is_some_and(Signed::is_negative))
    }
}

fn check_acyclic(rules: &BTreeMap<Base, Expr>) -> Result<(), ExprError> {
    // Depth-first search over rule dependencies.
    fn visit(
        b: &Base,
        rules: &BTreeMap<Base, Expr>,
        state: &mut BTreeMap<Base, u8>,
    ) -> Result<(), ExprError> {
        match state.get(b) {
            Some(1) => return Err(ExprError::CyclicRules(Expr::power(*b, Exponent::ONE).to_string())),
            Some(_) => return Ok(()),
            None => {}
        }
        state.insert(*b, 1);
        if let Some(r) = rules.get(b) {
            let mut deps = r.bases();
            if deps.contains(&Base::J) {
                for (p, _, _) in jacobian_parts() {
                    deps.insert(Base::Atom(p));
                }
            }
            for d in deps {
                if rules.contains_key(&d) {
                    visit(&d, rules, state)?;
                }
            }
        }
        state.insert(*b, 2);
        Ok(())
    }
    let mut state = BTreeMap::new();
    for b in rules.keys() {
        visit(b, rules, &mut state)?;
    }
    Ok(())
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        if rhs.terms.is_empty() {
            return self.clone().with_ledger(&rhs.ledger);
        }
        if self.terms.is_empty() {
            return rhs.clone().with_ledger(&self.ledger);
        }
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &rhs.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                core::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        let mut ledger = self.ledger.clone();
        ledger.extend(&rhs.ledger);
        Expr { terms: out, ledger }
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            ledger: self.ledger.clone(),
        }
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut acc = Acc::new();
        acc.note(&self.ledger);
        acc.note(&rhs.ledger);
        let (small, big) = if self.terms.len() <= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        for (m, c) in &small.terms {
            for (m2, c2) in &big.terms {
                acc.push(m.mul(m2), c * c2);
            }
        }
        acc.finish()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                (&self).$f(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

/// Builds a rule map from pairs.
pub fn rules<I: IntoIterator<Item = (Base, Expr)>>(items: I) -> BTreeMap<Base, Expr> {
    items.into_iter().collect()
}

#[cfg(test)]
mod tests;
