//! Text grammar for expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := integer | 'gamma' | atom | '(' expr ')'
//! atom    := name ('_' labels)?
//! labels  := label ('_'? label)*
//! label   := 't' | 'xi' | 'eta' | 'x' | 'y'
//! name    := 't' | 'xi' | 'eta' | 'x' | 'y' | 'J'
//!          | 'phi1' | 'phi2' | 'S' | 'h' | 'psi0' | 'psi1' | 'psi2'
//!          | 'rho' | 'u' | 'v' | 'F' "'"*
//!          | 'c' digits | 'ct' digits | 'lambda'
//! ```
//!
//! Exponents must evaluate to constants affine in gamma. `S`, `h`, `psi2` and
//! `F` denote the Lagrangian functions of `(xi, eta)` in the Lagrangian frame
//! and the Eulerian fields of `(t, x, y)` in the Eulerian frame; `psi0` and
//! `psi1` exist only in the Lagrangian frame.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::BigInt;

use super::{Exponent, Expr, ExprError};
use crate::atom::{Atom, Frame, Label, Param, Sym};
use crate::coeff::{Coeff, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedEnd,
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnknownAtom(String),
    MalformedIndex(String),
    BadExponent(String),
    Expr(ExprError),
}

/// Parse failure at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::UnexpectedEnd => write!(f, "syntax error at end of input"),
            ParseErrorKind::UnexpectedChar(c) => {
                write!(f, "syntax error at position {}: unexpected character '{c}'", self.pos)
            }
            ParseErrorKind::UnexpectedToken(t) => {
                write!(f, "syntax error at position {}: unexpected '{t}'", self.pos)
            }
            ParseErrorKind::UnknownAtom(a) => {
                write!(f, "unknown atom '{a}' at position {}", self.pos)
            }
            ParseErrorKind::MalformedIndex(a) => {
                write!(f, "malformed derivative index in '{a}' at position {}", self.pos)
            }
            ParseErrorKind::BadExponent(e) => {
                write!(f, "exponent at position {} is not affine in gamma: {e}", self.pos)
            }
            ParseErrorKind::Expr(e) => write!(f, "at position {}: {e}", self.pos),
        }
    }
}

impl core::error::Error for ParseError {}

/// Parses in the Lagrangian frame.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_in(Frame::Lagrangian, text)
}

pub fn parse_in(frame: Frame, text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text, pos: 0, frame };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected());
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    frame: Frame,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn unexpected(&self) -> ParseError {
        match self.peek_raw() {
            None => ParseError { pos: self.pos, kind: ParseErrorKind::UnexpectedEnd },
            Some(c) => ParseError { pos: self.pos, kind: ParseErrorKind::UnexpectedChar(c) },
        }
    }

    fn lift(&self, pos: usize, e: ExprError) -> ParseError {
        ParseError { pos, kind: ParseErrorKind::Expr(e) }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    acc = acc.div(&d).map_err(|e| self.lift(at, e))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let e = self.unary()?;
        let exp = e
            .as_constant()
            .and_then(|c| Exponent::from_coeff(&c))
            .ok_or_else(|| ParseError { pos: at, kind: ParseErrorKind::BadExponent(e.to_string()) })?;
        base.pow(&exp).map_err(|err| self.lift(at, err))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let start = match self.peek() {
            None => return Err(self.unexpected()),
            Some(_) => self.pos,
        };
        let c = self.peek_raw().unwrap_or(' ');
        if c == '(' {
            self.pos += 1;
            let e = self.expr()?;
            if self.peek() != Some(')') {
                return Err(self.unexpected());
            }
            self.pos += 1;
            return Ok(e);
        }
        if c.is_ascii_digit() {
            let end = self.src[start..]
                .find(|ch: char| !ch.is_ascii_digit())
                .map_or(self.src.len(), |k| start + k);
            self.pos = end;
            let n: BigInt = self.src[start..end].parse().map_err(|_| self.unexpected())?;
            return Ok(Expr::rational(Rational::from_integer(n)));
        }
        if c.is_ascii_alphabetic() {
            let end = self.src[start..]
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_' || ch == '\''))
                .map_or(self.src.len(), |k| start + k);
            self.pos = end;
            return self.ident(start, &self.src[start..end]);
        }
        Err(self.unexpected())
    }

    fn ident(&self, pos: usize, word: &str) -> Result<Expr, ParseError> {
        let unknown = || ParseError { pos, kind: ParseErrorKind::UnknownAtom(word.to_string()) };
        let malformed = || ParseError { pos, kind: ParseErrorKind::MalformedIndex(word.to_string()) };
        let (name, suffix) = match word.find('_') {
            Some(k) => (&word[..k], Some(&word[k + 1..])),
            None => (word, None),
        };
        let eul = self.frame == Frame::Eulerian;
        let sym = match name {
            "gamma" => {
                return match suffix {
                    None => Ok(Expr::gamma()),
                    Some(_) => Err(malformed()),
                }
            }
            "J" => {
                return match suffix {
                    None => Ok(Expr::jacobian()),
                    Some(_) => Err(malformed()),
                }
            }
            "lambda" => Sym::Param(Param::Lambda),
            "t" => Sym::Label(Label::T),
            "xi" => Sym::Label(Label::Xi),
            "eta" => Sym::Label(Label::Eta),
            "x" => Sym::Label(Label::X),
            "y" => Sym::Label(Label::Y),
            "phi1" => Sym::Phi1,
            "phi2" => Sym::Phi2,
            "rho" => Sym::Rho,
            "u" => Sym::U,
            "v" => Sym::V,
            "S" if eul => Sym::ES,
            "S" => Sym::S,
            "h" if eul => Sym::EH,
            "h" => Sym::H,
            "psi2" if eul => Sym::EPsi2,
            "psi2" => Sym::Psi2,
            "psi0" if !eul => Sym::Psi0,
            "psi1" if !eul => Sym::Psi1,
            _ if name.starts_with('F') && name[1..].chars().all(|ch| ch == '\'') => {
                let n = u8::try_from(name.len() - 1).map_err(|_| unknown())?;
                if eul {
                    Sym::EF(n)
                } else {
                    Sym::F(n)
                }
            }
            _ if name.starts_with("ct") && is_index(&name[2..]) => {
                Sym::Param(Param::Ct(name[2..].parse().map_err(|_| unknown())?))
            }
            _ if name.starts_with('c') && is_index(&name[1..]) => {
                Sym::Param(Param::C(name[1..].parse().map_err(|_| unknown())?))
            }
            _ => return Err(unknown()),
        };
        let mut atom = Atom::new(sym);
        if let Some(s) = suffix {
            let allowed = sym.index_labels();
            let mut rest = s;
            if rest.is_empty() {
                return Err(malformed());
            }
            while !rest.is_empty() {
                if let Some(r) = rest.strip_prefix('_') {
                    rest = r;
                    if rest.is_empty() {
                        return Err(malformed());
                    }
                    continue;
                }
                let label = [Label::Eta, Label::Xi, Label::T, Label::X, Label::Y]
                    .into_iter()
                    .find(|l| rest.starts_with(l.name()))
                    .ok_or_else(malformed)?;
                if !allowed.contains(&label) {
                    return Err(malformed());
                }
                atom = atom.with(label);
                rest = &rest[label.name().len()..];
            }
        }
        if let Sym::Label(l) = sym {
            let ok = match self.frame {
                Frame::Lagrangian => l != Label::X && l != Label::Y,
                Frame::Eulerian => l != Label::Xi && l != Label::Eta,
            };
            if !ok {
                return Err(unknown());
            }
        }
        if matches!(sym, Sym::Phi1 | Sym::Phi2) && eul {
            return Err(unknown());
        }
        if matches!(sym, Sym::Rho | Sym::U | Sym::V) && !eul {
            return Err(unknown());
        }
        Ok(Expr::atom(atom))
    }
}

fn is_index(s: &str) -> bool {
    !s.is_empty() && s.len() <= 2 && s.chars().all(|c| c.is_ascii_digit())
}

/// Parses a coefficient (a constant expression) from text.
pub fn parse_coeff(text: &str) -> Result<Coeff, ParseError> {
    let e = parse(text)?;
    e.as_constant()
        .ok_or_else(|| ParseError { pos: 0, kind: ParseErrorKind::UnexpectedToken(format!("{e}")) })
}
