//! Printers: the machine grammar (`Display`) and a Unicode rendering.

use alloc::string::String;
use core::fmt::{self, Write};

use num_traits::Signed;

use super::{Base, Exponent, Expr, Monomial};
use crate::coeff::Coeff;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Style {
    Grammar,
    Pretty,
}

fn write_base(f: &mut dyn Write, b: &Base, style: Style) -> fmt::Result {
    match (b, style) {
        (Base::J, _) => f.write_str("J"),
        (Base::Atom(a), Style::Grammar) => a.write_grammar(f),
        (Base::Atom(a), Style::Pretty) => a.write_pretty(f),
    }
}

fn write_exponent(f: &mut dyn Write, e: &Exponent, style: Style) -> fmt::Result {
    if let Some(n) = e.as_integer() {
        if n >= 0 {
            return match style {
                Style::Grammar => write!(f, "^{n}"),
                Style::Pretty => write_superscript(f, n),
            };
        }
    }
    let c = e.to_coeff();
    let single = *e == Exponent::affine(0, 1);
    f.write_str("^")?;
    if !single {
        f.write_str("(")?;
    }
    match style {
        Style::Grammar => c.write_grammar(f)?,
        Style::Pretty => c.write_pretty(f)?,
    }
    if !single {
        f.write_str(")")?;
    }
    Ok(())
}

fn write_superscript(f: &mut dyn Write, n: i64) -> fmt::Result {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut buf = [0u8; 20];
    let mut k = 0;
    let mut m = n.unsigned_abs();
    loop {
        buf[k] = (m % 10) as u8;
        k += 1;
        m /= 10;
        if m == 0 {
            break;
        }
    }
    for d in buf[..k].iter().rev() {
        f.write_char(DIGITS[*d as usize])?;
    }
    Ok(())
}

fn write_coeff(f: &mut dyn Write, c: &Coeff, style: Style) -> fmt::Result {
    match style {
        Style::Grammar => c.write_grammar(f),
        Style::Pretty => c.write_pretty(f),
    }
}

/// Writes `|c| * m` where the sign has been split off by the caller.
fn write_term(f: &mut dyn Write, m: &Monomial, c: &Coeff, style: Style) -> fmt::Result {
    let mul = if style == Style::Grammar { "*" } else { "" };
    let has_factors = !m.is_one();
    let mut wrote = false;
    if !c.is_one() || !has_factors {
        if c.is_polynomial() && c.num().term_count() > 1 {
            f.write_str("(")?;
            write_coeff(f, c, style)?;
            f.write_str(")")?;
        } else {
            write_coeff(f, c, style)?;
        }
        wrote = true;
    }
    for (b, e) in m.factors() {
        if wrote {
            f.write_str(mul)?;
        }
        write_base(f, b, style)?;
        if *e != Exponent::ONE {
            write_exponent(f, e, style)?;
        }
        wrote = true;
    }
    Ok(())
}

fn write_expr(e: &Expr, f: &mut dyn Write, style: Style) -> fmt::Result {
    if e.terms.is_empty() {
        return f.write_str("0");
    }
    let ordered: alloc::vec::Vec<_> = match style {
        Style::Grammar => e.terms.iter().collect(),
        Style::Pretty => e.terms.iter().rev().collect(),
    };
    for (i, (m, c)) in ordered.into_iter().enumerate() {
        let neg = c.num().lead().is_some_and(Signed::is_negative);
        let abs = if neg { -c } else { c.clone() };
        let sep = match style {
            Style::Grammar => ("-", " - ", " + "),
            Style::Pretty => ("−", " − ", " + "),
        };
        if i == 0 {
            if neg {
                f.write_str(sep.0)?;
            }
        } else {
            f.write_str(if neg { sep.1 } else { sep.2 })?;
        }
        write_term(f, m, &abs, style)?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, f, Style::Grammar)
    }
}

impl Expr {
    /// Unicode rendering for humans (`ρu² + ρ^γS`). Not parseable.
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        let _ = write_expr(self, &mut s, Style::Pretty);
        s
    }
}
