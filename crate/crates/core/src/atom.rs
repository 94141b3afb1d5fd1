//! Atoms of the expression kernel: independent variables, jet variables,
//! arbitrary functions and free parameters.
//!
//! Atoms are ordered by the derived `Ord`: first by symbol (whose declaration
//! order groups Lagrangian jet variables, coordinates, Lagrangian functions,
//! Eulerian symbols and parameters, in that order), then by multi-index.

use core::fmt::{self, Write};

use Label as L;

/// An independent variable of either frame. `T` is shared by both frames.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Label {
    T,
    Xi,
    Eta,
    X,
    Y,
}

impl Label {
    pub const ALL: [Label; 5] = [Label::T, Label::Xi, Label::Eta, Label::X, Label::Y];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::T => "t",
            Label::Xi => "xi",
            Label::Eta => "eta",
            Label::X => "x",
            Label::Y => "y",
        }
    }

    pub fn pretty(self) -> &'static str {
        match self {
            Label::T => "t",
            Label::Xi => "ξ",
            Label::Eta => "η",
            Label::X => "x",
            Label::Y => "y",
        }
    }
}

/// Derivative multi-index: a multiset of labels stored as per-label counts,
/// so mixed partials commute by construction.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MultiIndex([u8; 5]);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex([0; 5]);

    pub fn of(labels: &[Label]) -> Self {
        labels.iter().fold(Self::EMPTY, |m, &l| m.with(l))
    }

    pub fn with(mut self, l: Label) -> Self {
        self.0[l.index()] += 1;
        self
    }

    pub fn count(&self, l: Label) -> u8 {
        self.0[l.index()]
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.order() == 0
    }

    /// `self ⊇ other` as multisets.
    pub fn contains(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a >= b)
    }

    pub fn minus(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !self.contains(other) {
            return None;
        }
        let mut out = *self;
        for (o, b) in out.0.iter_mut().zip(other.0.iter()) {
            *o -= b;
        }
        Some(out)
    }

    /// Labels with repetition, in label order.
    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        Label::ALL.iter().flat_map(move |&l| core::iter::repeat_n(l, self.count(l) as usize))
    }

    /// Number of distinct orderings of the multiset.
    pub fn arrangements(&self) -> u64 {
        let mut n = 1u64;
        let mut k = 0u64;
        for &c in &self.0 {
            for j in 1..=c as u64 {
                k += 1;
                n = n * k / j;
            }
        }
        n
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Param {
    /// `c1` .. `c10`
    C(u8),
    /// `ct10`: the shifted constant c̃.
    Ct(u8),
    Lambda,
}

/// Frame an atom lives in.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Frame {
    Lagrangian,
    Eulerian,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sym {
    Phi1,
    Phi2,
    Label(Label),
    /// Entropy function of the particle labels.
    S,
    H,
    Psi0,
    Psi1,
    Psi2,
    /// n-th derivative of the arbitrary function F, evaluated at S.
    F(u8),
    Rho,
    U,
    V,
    /// Eulerian entropy S(t, x, y).
    ES,
    EH,
    EPsi2,
    EF(u8),
    Param(Param),
}

impl Sym {
    pub fn frame(self) -> Option<Frame> {
        use Sym::*;
        match self {
            Phi1 | Phi2 | S | H | Psi0 | Psi1 | Psi2 | F(_) => Some(Frame::Lagrangian),
            Label(L::Xi | L::Eta) => Some(Frame::Lagrangian),
            Label(L::X | L::Y) => Some(Frame::Eulerian),
            Rho | U | V | ES | EH | EPsi2 | EF(_) => Some(Frame::Eulerian),
            Label(L::T) | Param(_) => None,
        }
    }

    /// Labels a derivative index on this symbol may contain.
    pub fn index_labels(self) -> &'static [Label] {
        use Sym::*;
        match self {
            Phi1 | Phi2 => &[L::T, L::Xi, L::Eta],
            S | H | Psi0 | Psi1 | Psi2 => &[L::Xi, L::Eta],
            Rho | U | V | ES | EH | EPsi2 => &[L::T, L::X, L::Y],
            _ => &[],
        }
    }

    pub fn is_dependent(self) -> bool {
        matches!(self, Sym::Phi1 | Sym::Phi2 | Sym::Rho | Sym::U | Sym::V)
    }

    pub fn name(self) -> &'static str {
        use Sym::*;
        match self {
            Phi1 => "phi1",
            Phi2 => "phi2",
            Label(l) => l.name(),
            S | ES => "S",
            H | EH => "h",
            Psi0 => "psi0",
            Psi1 => "psi1",
            Psi2 | EPsi2 => "psi2",
            F(_) | EF(_) => "F",
            Rho => "rho",
            U => "u",
            V => "v",
            Param(_) => "c",
        }
    }

    fn pretty_name(self) -> &'static str {
        use Sym::*;
        match self {
            Phi1 => "φ₁",
            Phi2 => "φ₂",
            Label(l) => l.pretty(),
            Psi0 => "ψ₀",
            Psi1 => "ψ₁",
            Psi2 | EPsi2 => "ψ₂",
            Rho => "ρ",
            other => other.name(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub sym: Sym,
    pub idx: MultiIndex,
}

impl Atom {
    pub const fn new(sym: Sym) -> Self {
        Atom { sym, idx: MultiIndex::EMPTY }
    }

    pub fn deriv(sym: Sym, labels: &[Label]) -> Self {
        Atom { sym, idx: MultiIndex::of(labels) }
    }

    pub const fn label(l: Label) -> Self {
        Atom::new(Sym::Label(l))
    }

    pub fn with(self, l: Label) -> Self {
        Atom { sym: self.sym, idx: self.idx.with(l) }
    }

    pub fn order(&self) -> usize {
        self.idx.order()
    }

    pub fn write_grammar(&self, f: &mut dyn Write) -> fmt::Result {
        match self.sym {
            Sym::F(n) | Sym::EF(n) => {
                f.write_str("F")?;
                for _ in 0..n {
                    f.write_char('\'')?;
                }
                return Ok(());
            }
            Sym::Param(Param::C(k)) => return write!(f, "c{k}"),
            Sym::Param(Param::Ct(k)) => return write!(f, "ct{k}"),
            Sym::Param(Param::Lambda) => return f.write_str("lambda"),
            _ => {}
        }
        f.write_str(self.sym.name())?;
        if !self.idx.is_empty() {
            f.write_char('_')?;
            for l in self.idx.labels() {
                f.write_str(l.name())?;
            }
        }
        Ok(())
    }

    pub fn write_pretty(&self, f: &mut dyn Write) -> fmt::Result {
        match self.sym {
            Sym::F(n) | Sym::EF(n) => {
                f.write_str("F")?;
                for _ in 0..n {
                    f.write_char('′')?;
                }
                return Ok(());
            }
            Sym::Param(Param::C(k)) => return write!(f, "c{k}"),
            Sym::Param(Param::Ct(k)) => return write!(f, "c̃{k}"),
            Sym::Param(Param::Lambda) => return f.write_str("λ"),
            _ => {}
        }
        f.write_str(self.sym.pretty_name())?;
        if !self.idx.is_empty() {
            if !matches!(self.sym, Sym::Phi1 | Sym::Phi2) {
                f.write_char('_')?;
            }
            for l in self.idx.labels() {
                f.write_str(l.pretty())?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_grammar(f)
    }
}

/// Handy constructors for frequently used atoms.
pub mod atoms {
    use super::*;

    pub const T: Atom = Atom::label(Label::T);
    pub const XI: Atom = Atom::label(Label::Xi);
    pub const ETA: Atom = Atom::label(Label::Eta);
    pub const X: Atom = Atom::label(Label::X);
    pub const Y: Atom = Atom::label(Label::Y);

    pub fn phi(k: u8, labels: &[Label]) -> Atom {
        let sym = if k == 1 { Sym::Phi1 } else { Sym::Phi2 };
        Atom::deriv(sym, labels)
    }

    pub fn c(k: u8) -> Atom {
        Atom::new(Sym::Param(Param::C(k)))
    }

    pub fn ct(k: u8) -> Atom {
        Atom::new(Sym::Param(Param::Ct(k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_index_is_order_insensitive() {
        let a = Atom::deriv(Sym::Phi1, &[Label::Xi, Label::T]);
        let b = Atom::deriv(Sym::Phi1, &[Label::T, Label::Xi]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "phi1_txi");
    }

    #[test]
    fn arrangements_count_orderings() {
        assert_eq!(MultiIndex::of(&[Label::T, Label::Xi]).arrangements(), 2);
        assert_eq!(MultiIndex::of(&[Label::T, Label::T]).arrangements(), 1);
        assert_eq!(MultiIndex::of(&[Label::T, Label::T, Label::Xi]).arrangements(), 3);
        assert_eq!(MultiIndex::EMPTY.arrangements(), 1);
    }
}
