//! Floating-point evaluation of expressions.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use core::ops::{Add, Div, Mul, Neg, Sub};

use super::{Base, Condition, Expr};
use crate::atom::Atom;

/// Numeric type expressions can be evaluated in. `f64` is provided here;
/// richer types (dual numbers) implement it elsewhere.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    /// The plain value (the real part for dual numbers).
    fn value(&self) -> f64;
    fn powi(&self, n: i32) -> Self;
    fn powf(&self, e: f64) -> Self;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn value(&self) -> f64 {
        *self
    }
    fn powi(&self, n: i32) -> Self {
        libm::pow(*self, n as f64)
    }
    fn powf(&self, e: f64) -> Self {
        libm::pow(*self, e)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("no value for atom {0}")]
    MissingAtom(String),
    #[error("division by zero: {0} vanishes")]
    DivisionByZero(String),
    #[error("gamma = {gamma} violates side condition {cond}")]
    ExcludedGamma { gamma: f64, cond: String },
    #[error("non-integer power of negative base {0}")]
    Domain(String),
}

impl Expr {
    /// Evaluates with a value for every base; gamma conditions of the ledger
    /// are checked first.
    pub fn eval_with<T: Scalar>(
        &self,
        mut base: impl FnMut(&Base) -> Option<T>,
        gamma: f64,
    ) -> Result<T, EvalError> {
        for c in self.ledger.iter() {
            if let Condition::GammaNonZero(p) = c {
                if p.eval_f64(gamma).abs() < 1e-12 {
                    return Err(EvalError::ExcludedGamma { gamma, cond: c.to_string() });
                }
            }
        }
        let mut cache: BTreeMap<Base, T> = BTreeMap::new();
        let mut total = T::from_f64(0.0);
        for (m, c) in &self.terms {
            let cv = c.eval_f64(gamma);
            if !cv.is_finite() {
                return Err(EvalError::ExcludedGamma {
                    gamma,
                    cond: alloc::format!("{} != 0", c.den()),
                });
            }
            let mut term = T::from_f64(cv);
            for (b, e) in m.factors() {
                let v = match cache.get(b) {
                    Some(v) => v.clone(),
                    None => {
                        let v = base(b).ok_or_else(|| {
                            EvalError::MissingAtom(Expr::power(*b, super::Exponent::ONE).to_string())
                        })?;
                        cache.insert(*b, v.clone());
                        v
                    }
                };
                let name = || Expr::power(*b, super::Exponent::ONE).to_string();
                let p = match e.as_integer() {
                    Some(n) => {
                        if n < 0 && v.value() == 0.0 {
                            return Err(EvalError::DivisionByZero(name()));
                        }
                        v.powi(n as i32)
                    }
                    None => {
                        if v.value() < 0.0 {
                            return Err(EvalError::Domain(name()));
                        }
                        if v.value() == 0.0 {
                            return Err(EvalError::DivisionByZero(name()));
                        }
                        v.powf(e.eval_f64(gamma))
                    }
                };
                term = term * p;
            }
            total = total + term;
        }
        Ok(total)
    }

    /// Evaluates at an atom assignment; `J` is computed from its determinant
    /// unless the assignment says otherwise through `j`.
    pub fn eval_f64(
        &self,
        assign: &BTreeMap<Atom, f64>,
        j: Option<f64>,
        gamma: f64,
    ) -> Result<f64, EvalError> {
        self.eval_with(
            |b| match b {
                Base::Atom(a) => assign.get(a).copied(),
                Base::J => j.or_else(|| {
                    let [(a, _, b), (_, _, _), (c, _, d), (_, _, _)] = super::jacobian_parts();
                    Some(assign.get(&a)? * assign.get(&b)? - assign.get(&c)? * assign.get(&d)?)
                }),
            },
            gamma,
        )
    }
}
