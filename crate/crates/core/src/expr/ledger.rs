//! Side conditions attached to expressions.

use alloc::collections::BTreeSet;
use core::fmt;

use super::{Base, Exponent, Expr, Monomial};
use crate::coeff::{Coeff, GammaPoly};

/// A nonvanishing assumption that some result depends on.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Condition {
    /// A monic polynomial in gamma that must not vanish.
    GammaNonZero(GammaPoly),
    /// A base that must not vanish (it appears in a denominator or under a
    /// non-integer power).
    NonZero(Base),
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::GammaNonZero(p) => write!(f, "{p} != 0"),
            Condition::NonZero(b) => write!(f, "{} != 0", Expr::power(*b, Exponent::ONE)),
        }
    }
}

/// Set of side conditions. Merged by union across operations and ignored by
/// equality tests.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Ledger(BTreeSet<Condition>);

impl Ledger {
    pub fn new() -> Self {
        Ledger::default()
    }

    pub fn of(conds: impl IntoIterator<Item = Condition>) -> Self {
        Ledger(conds.into_iter().collect())
    }

    pub fn insert(&mut self, c: Condition) {
        self.0.insert(c);
    }

    pub fn contains(&self, c: &Condition) -> bool {
        self.0.contains(c)
    }

    pub fn extend(&mut self, other: &Ledger) {
        if other.0.is_empty() {
            return;
        }
        self.0.extend(other.0.iter().cloned());
    }

    pub fn iter(&self) -> impl Iterator<Item = &Condition> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Irreducible-enough factors of the gamma conditions, as the set of
    /// polynomials recorded.
    pub fn gamma_conditions(&self) -> impl Iterator<Item = &GammaPoly> {
        self.0.iter().filter_map(|c| match c {
            Condition::GammaNonZero(p) => Some(p),
            _ => None,
        })
    }

    /// Records `gamma - 1 != 0` style conditions for a denominator.
    pub fn record_gamma(&mut self, den: &GammaPoly) {
        if den.degree().unwrap_or(0) > 0 {
            self.0.insert(Condition::GammaNonZero(den.monic().1));
        }
    }

    pub(super) fn record_term(&mut self, m: &Monomial, c: &Coeff) {
        self.record_gamma(c.den());
        for (b, e) in m.factors() {
            if e.needs_nonzero_base() {
                self.0.insert(Condition::NonZero(*b));
            }
        }
    }

    /// The first gamma condition violated at `g`, if any.
    pub fn violated_at(&self, g: &crate::coeff::Rational) -> Option<&Condition> {
        use num_traits::Zero;
        self.0.iter().find(|c| match c {
            Condition::GammaNonZero(p) => p.eval(g).is_zero(),
            _ => false,
        })
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
