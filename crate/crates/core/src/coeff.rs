//! Exact coefficients: polynomials and rational functions in the adiabatic
//! exponent `gamma`, over the rationals.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Dense polynomial in `gamma`, lowest degree first, without trailing zeros.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct GammaPoly {
    coeffs: Vec<Rational>,
}

impl GammaPoly {
    pub fn zero() -> Self {
        GammaPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        GammaPoly { coeffs: vec![c] }.trim()
    }

    /// `a + b*gamma`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        GammaPoly { coeffs: vec![a, b] }.trim()
    }

    pub fn gamma() -> Self {
        Self::linear(Rational::zero(), Rational::one())
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        GammaPoly { coeffs }.trim()
    }

    fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GammaPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Divides by the leading coefficient; returns `(lead, monic)`.
    pub fn monic(&self) -> (Rational, GammaPoly) {
        match self.lead() {
            None => (Rational::one(), Self::zero()),
            Some(l) => {
                let inv = l.recip();
                (l.clone(), self.scale(&inv))
            }
        }
    }

    pub fn div_rem(&self, d: &GammaPoly) -> (GammaPoly, GammaPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let dl_inv = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &dl_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (GammaPoly { coeffs: quot }.trim(), GammaPoly { coeffs: rem }.trim())
    }

    /// Monic greatest common divisor (zero only if both are zero).
    pub fn gcd(a: &GammaPoly, b: &GammaPoly) -> GammaPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r;
        }
        x.monic().1
    }

    pub fn eval(&self, g: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * g + c;
        }
        acc
    }

    pub fn eval_f64(&self, g: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * g + rational_to_f64(c);
        }
        acc
    }

    fn write_with(&self, f: &mut dyn Write, var: &str, mul: &str) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write_rational(f, &a)?;
                if k > 0 {
                    f.write_str(mul)?;
                }
            }
            match k {
                0 => {}
                1 => f.write_str(var)?,
                _ => write!(f, "{var}^{k}")?,
            }
        }
        Ok(())
    }

    /// Number of nonzero monomials.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

pub(crate) fn write_rational(f: &mut dyn Write, r: &Rational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GammaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, "gamma", "*")
    }
}

impl Add for &GammaPoly {
    type Output = GammaPoly;
    fn add(self, rhs: &GammaPoly) -> GammaPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k);
            let b = rhs.coeffs.get(k);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        GammaPoly { coeffs: out }.trim()
    }
}

impl Neg for &GammaPoly {
    type Output = GammaPoly;
    fn neg(self) -> GammaPoly {
        GammaPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &GammaPoly {
    type Output = GammaPoly;
    fn sub(self, rhs: &GammaPoly) -> GammaPoly {
        self + &(-rhs)
    }
}

impl Mul for &GammaPoly {
    type Output = GammaPoly;
    fn mul(self, rhs: &GammaPoly) -> GammaPoly {
        if self.is_zero() || rhs.is_zero() {
            return GammaPoly::zero();
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        GammaPoly { coeffs: out }.trim()
    }
}

/// Element of Q(gamma): `num/den` with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Coeff {
    num: GammaPoly,
    den: GammaPoly,
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::zero()
    }
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff { num: GammaPoly::zero(), den: GammaPoly::one() }
    }

    pub fn one() -> Self {
        Coeff::from_rational(Rational::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Coeff::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: Rational) -> Self {
        Coeff { num: GammaPoly::constant(r), den: GammaPoly::one() }
    }

    pub fn from_poly(p: GammaPoly) -> Self {
        Coeff { num: p, den: GammaPoly::one() }
    }

    pub fn gamma() -> Self {
        Coeff::from_poly(GammaPoly::gamma())
    }

    /// Builds `num/den`, normalizing. Panics if `den` is zero.
    pub fn ratio(num: GammaPoly, den: GammaPoly) -> Self {
        assert!(!den.is_zero(), "coefficient with zero denominator");
        if num.is_zero() {
            return Coeff::zero();
        }
        if let Some(c) = den.as_constant() {
            let inv = c.recip();
            return Coeff { num: num.scale(&inv), den: GammaPoly::one() };
        }
        let g = GammaPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let (lead, den) = den.monic();
        let inv = lead.recip();
        Coeff { num: num.scale(&inv), den }
    }

    pub fn num(&self) -> &GammaPoly {
        &self.num
    }

    pub fn den(&self) -> &GammaPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The value when the coefficient does not depend on gamma.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn depends_on_gamma(&self) -> bool {
        self.as_rational().is_none()
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Coeff::ratio(self.den.clone(), self.num.clone()))
        }
    }

    pub fn div(&self, rhs: &Coeff) -> Option<Coeff> {
        rhs.recip().map(|r| self * &r)
    }

    /// Exact value at a rational gamma; `None` if the denominator vanishes there.
    pub fn specialize(&self, g: &Rational) -> Option<Rational> {
        let d = self.den.eval(g);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(g) / d)
        }
    }

    pub fn eval_f64(&self, g: f64) -> f64 {
        self.num.eval_f64(g) / self.den.eval_f64(g)
    }

    /// True when the coefficient prints as a single signed rational or monomial
    /// in gamma (no parentheses needed after a leading sign is split off).
    pub fn is_simple(&self) -> bool {
        self.den.is_one() && self.num.term_count() <= 1
    }

    /// Sign of the leading numerator coefficient.
    pub fn is_negative_lead(&self) -> bool {
        self.num.lead().is_some_and(Signed::is_negative)
    }

    pub fn write_grammar(&self, f: &mut dyn Write) -> fmt::Result {
        self.write_styled(f, "gamma", "*")
    }

    pub fn write_pretty(&self, f: &mut dyn Write) -> fmt::Result {
        self.write_styled(f, "γ", "")
    }

    fn write_styled(&self, f: &mut dyn Write, var: &str, mul: &str) -> fmt::Result {
        let paren_num = self.num.term_count() > 1;
        if self.den.is_one() {
            return self.num.write_with(f, var, mul);
        }
        if paren_num {
            f.write_str("(")?;
        }
        self.num.write_with(f, var, mul)?;
        if paren_num {
            f.write_str(")")?;
        }
        f.write_str("/")?;
        let paren_den = self.den.term_count() > 1 || self.den.degree().unwrap_or(0) > 0;
        if paren_den {
            f.write_str("(")?;
        }
        self.den.write_with(f, var, mul)?;
        if paren_den {
            f.write_str(")")?;
        }
        Ok(())
    }

    pub fn to_grammar(&self) -> String {
        let mut s = String::new();
        let _ = self.write_grammar(&mut s);
        s
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_grammar(f)
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return Coeff { num, den: GammaPoly::one() };
            }
            return Coeff::ratio(num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Coeff::ratio(num, &self.den * &rhs.den)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        if self.is_zero() || rhs.is_zero() {
            return Coeff::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Coeff { num: &self.num * &rhs.num, den: GammaPoly::one() };
        }
        Coeff::ratio(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g_minus(c: i64) -> GammaPoly {
        GammaPoly::linear(rat(-c, 1), rat(1, 1))
    }

    #[test]
    fn ratio_cancels_common_factor() {
        let p = &g_minus(1) * &g_minus(2);
        let c = Coeff::ratio(p, g_minus(1));
        assert_eq!(c, Coeff::from_poly(g_minus(2)));
    }

    #[test]
    fn add_with_distinct_denominators() {
        let a = Coeff::ratio(GammaPoly::one(), g_minus(1));
        let b = Coeff::ratio(GammaPoly::one(), g_minus(2));
        let s = &a + &b;
        // 1/(g-1) + 1/(g-2) = (2g-3)/((g-1)(g-2))
        let expect = Coeff::ratio(GammaPoly::linear(rat(-3, 1), rat(2, 1)), &g_minus(1) * &g_minus(2));
        assert_eq!(s, expect);
        assert_eq!(&(&s - &a) - &b, Coeff::zero());
    }

    #[test]
    fn specialize_detects_pole() {
        let a = Coeff::ratio(GammaPoly::one(), g_minus(1));
        assert_eq!(a.specialize(&rat(1, 1)), None);
        assert_eq!(a.specialize(&rat(3, 1)), Some(rat(1, 2)));
    }

    #[test]
    fn printing() {
        let c = Coeff::ratio(GammaPoly::linear(rat(-1, 1), rat(2, 1)), g_minus(1));
        assert_eq!(c.to_grammar(), "(2*gamma - 1)/(gamma - 1)");
        assert_eq!(Coeff::from_rational(rat(-3, 2)).to_grammar(), "-3/2");
    }
}
