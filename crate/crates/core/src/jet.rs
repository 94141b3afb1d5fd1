//! Jet-space calculus: total derivatives, variational derivatives, point
//! generators and their prolongation, characteristics and the Noether
//! operator.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::atom::{Atom, Frame, Label, MultiIndex, Sym};
use crate::coeff::{rat, Coeff};
use crate::expr::{jacobian_parts, Base, Expr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JetError {
    #[error("label {0:?} does not belong to the {1:?} frame")]
    LabelNotInFrame(Label, Frame),
    #[error("atom {0} does not belong to the {1:?} frame")]
    ForeignAtom(alloc::string::String, Frame),
    #[error("prolongation of order {0} is not supported (maximum 2)")]
    OrderUnsupported(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Entropy {
    /// `S` is a constant.
    Isentropic,
    /// `S` is an arbitrary function of the particle labels.
    General,
}

/// Independent and dependent variables of one frame, with the dependency
/// declarations of the auxiliary functions.
///
/// Lagrangian: labels `t, xi, eta`, dependents `phi1, phi2`; `S, h, psi0,
/// psi1, psi2` are functions of `(xi, eta)` and `F^(n)` of `S`.
/// Eulerian: labels `t, x, y`, dependents `rho, u, v, S`; `h, psi2` are
/// fields of `(t, x, y)`. In isentropic mode `S` is constant in both frames.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct JetFrame {
    pub frame: Frame,
    pub entropy: Entropy,
}

impl JetFrame {
    pub const fn new(frame: Frame, entropy: Entropy) -> Self {
        JetFrame { frame, entropy }
    }

    pub const fn lagrangian(entropy: Entropy) -> Self {
        JetFrame::new(Frame::Lagrangian, entropy)
    }

    pub const fn eulerian(entropy: Entropy) -> Self {
        JetFrame::new(Frame::Eulerian, entropy)
    }

    pub fn labels(&self) -> [Label; 3] {
        match self.frame {
            Frame::Lagrangian => [Label::T, Label::Xi, Label::Eta],
            Frame::Eulerian => [Label::T, Label::X, Label::Y],
        }
    }

    pub fn has_label(&self, l: Label) -> bool {
        self.labels().contains(&l)
    }

    pub fn dependents(&self) -> &'static [Sym] {
        match (self.frame, self.entropy) {
            (Frame::Lagrangian, _) => &[Sym::Phi1, Sym::Phi2],
            (Frame::Eulerian, Entropy::General) => &[Sym::Rho, Sym::U, Sym::V, Sym::ES],
            (Frame::Eulerian, Entropy::Isentropic) => &[Sym::Rho, Sym::U, Sym::V],
        }
    }

    fn entropy_sym(&self) -> Sym {
        match self.frame {
            Frame::Lagrangian => Sym::S,
            Frame::Eulerian => Sym::ES,
        }
    }

    fn check_atom(&self, a: &Atom) -> Result<(), JetError> {
        match a.sym.frame() {
            Some(f) if f != self.frame => Err(JetError::ForeignAtom(a.to_string(), self.frame)),
            _ => Ok(()),
        }
    }

    /// Derivative of a single base along `l`. `with_jets` selects the total
    /// derivative (jets and `J` differentiate) versus the explicit partial
    /// derivative on point functions (jets and `J` are held fixed).
    fn base_derivative(
        &self,
        b: &Base,
        l: Label,
        with_jets: bool,
        s_dependent: bool,
    ) -> Result<Option<Expr>, JetError> {
        let a = match b {
            Base::J => {
                if self.frame != Frame::Lagrangian {
                    return Err(JetError::ForeignAtom("J".into(), self.frame));
                }
                if !with_jets {
                    return Ok(None);
                }
                let mut d = Expr::zero();
                for (p, s, other) in jacobian_parts() {
                    d = d + Expr::atom(p.with(l)) * Expr::atom(other).scale(&Coeff::from_i64(s));
                }
                return Ok(Some(d));
            }
            Base::Atom(a) => a,
        };
        self.check_atom(a)?;
        let isentropic = self.entropy == Entropy::Isentropic;
        let es = self.entropy_sym();
        match a.sym {
            Sym::Label(x) => Ok((x == l).then(Expr::one)),
            Sym::Param(_) => Ok(None),
            s if s == es && isentropic => Ok(None),
            Sym::F(n) | Sym::EF(n) => {
                if isentropic || (s_dependent && !with_jets) {
                    return Ok(None);
                }
                let ds = self.base_derivative(&Base::Atom(Atom::new(es)), l, with_jets, s_dependent)?;
                let next = Atom::new(if self.frame == Frame::Lagrangian { Sym::F(n + 1) } else { Sym::EF(n + 1) });
                Ok(ds.map(|ds| Expr::atom(next) * ds))
            }
            s => {
                let is_jet = s.is_dependent() || (s_dependent && s == es);
                if is_jet && !with_jets {
                    return Ok(None);
                }
                if s.index_labels().contains(&l) {
                    Ok(Some(Expr::atom(a.with(l))))
                } else {
                    Ok(None)
                }
            }
        }
    }

    fn derive(&self, e: &Expr, l: Label, with_jets: bool, s_dependent: bool) -> Result<Expr, JetError> {
        if !self.has_label(l) {
            return Err(JetError::LabelNotInFrame(l, self.frame));
        }
        let err = RefCell::new(None);
        let out = e.derive_with(|b| match self.base_derivative(b, l, with_jets, s_dependent) {
            Ok(d) => d,
            Err(x) => {
                err.borrow_mut().get_or_insert(x);
                None
            }
        });
        match err.into_inner() {
            Some(x) => Err(x),
            None => Ok(out),
        }
    }

    /// Total derivative `D_l`.
    pub fn total_derivative(&self, e: &Expr, l: Label) -> Result<Expr, JetError> {
        self.derive(e, l, true, false)
    }

    /// Total derivative along every label of a multi-index.
    pub fn total_derivative_multi(&self, e: &Expr, m: &MultiIndex) -> Result<Expr, JetError> {
        let mut out = e.clone();
        for l in m.labels() {
            out = self.total_derivative(&out, l)?;
        }
        Ok(out)
    }

    /// Explicit partial derivative of a point function along a label; jets and
    /// `J` are independent coordinates, auxiliary functions of the labels are
    /// differentiated.
    pub fn explicit_partial(&self, e: &Expr, l: Label) -> Result<Expr, JetError> {
        self.derive(e, l, false, false)
    }

    /// `D_t T^t + D_1 T^1 + D_2 T^2`.
    pub fn divergence(&self, t: &[Expr; 3]) -> Result<Expr, JetError> {
        let mut acc = Expr::zero();
        for (c, l) in t.iter().zip(self.labels()) {
            acc = acc + self.total_derivative(c, l)?;
        }
        Ok(acc)
    }

    /// Jet atoms of the dependent `dep` that `e` depends on, including those
    /// hidden in `J`.
    fn dependent_atoms(&self, e: &Expr, dep: Sym) -> Vec<Atom> {
        let mut atoms: Vec<Atom> = e.atoms().into_iter().filter(|a| a.sym == dep).collect();
        if e.contains(&Base::J) {
            for (p, _, _) in jacobian_parts() {
                if p.sym == dep && !atoms.contains(&p) {
                    atoms.push(p);
                }
            }
        }
        atoms.sort();
        atoms
    }

    /// Partial derivative with respect to a jet atom, treating `F^(n)` as a
    /// function of `S` when `a` is the undifferentiated entropy.
    pub fn jet_partial(&self, e: &Expr, a: &Atom) -> Expr {
        if a.idx.is_empty() && a.sym == self.entropy_sym() && e.atoms().iter().any(|x| matches!(x.sym, Sym::F(_) | Sym::EF(_))) {
            let direct = e.partial(a);
            let chain = e.derive_with(|b| match b {
                Base::Atom(Atom { sym: Sym::F(n), .. }) => Some(Expr::atom(Atom::new(Sym::F(n + 1)))),
                Base::Atom(Atom { sym: Sym::EF(n), .. }) => Some(Expr::atom(Atom::new(Sym::EF(n + 1)))),
                _ => None,
            });
            return direct + chain;
        }
        e.partial(a)
    }

    /// Euler operator `δ/δu = Σ_M (−D)_M ∂/∂u_M`, truncated at the highest
    /// order present.
    pub fn variational_derivative(&self, e: &Expr, dep: Sym) -> Result<Expr, JetError> {
        let mut acc = Expr::zero();
        for a in self.dependent_atoms(e, dep) {
            let mut term = self.jet_partial(e, &a);
            for l in a.idx.labels() {
                term = -self.total_derivative(&term, l)?;
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Higher Euler operator `δ/δu_K` for the ordered index tuple `K`:
    /// `Σ_L (−D)_L ∂/∂u_{KL}` over ordered tuples `L`, where the derivative
    /// with respect to an ordered tuple is `1/N` times the derivative with
    /// respect to the jet atom (`N` = number of orderings of its multiset).
    pub fn higher_euler(&self, e: &Expr, dep: Sym, k: &MultiIndex) -> Result<Expr, JetError> {
        let mut acc = Expr::zero();
        for a in self.dependent_atoms(e, dep) {
            let Some(m) = a.idx.minus(k) else { continue };
            let weight = rat(m.arrangements() as i64, a.idx.arrangements() as i64);
            let mut term = self.jet_partial(e, &a).scale(&Coeff::from_rational(weight));
            for l in m.labels() {
                term = -self.total_derivative(&term, l)?;
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Multi-indices over the frame labels of order `0..=max`.
    pub fn multi_indices(&self, max: usize) -> Vec<MultiIndex> {
        let mut out = alloc::vec![MultiIndex::EMPTY];
        let mut layer = alloc::vec![MultiIndex::EMPTY];
        for _ in 0..max {
            let mut next: Vec<MultiIndex> = Vec::new();
            for m in &layer {
                for l in self.labels() {
                    let n = m.with(l);
                    if !next.contains(&n) {
                        next.push(n);
                    }
                }
            }
            out.extend(next.iter().copied());
            layer = next;
        }
        out
    }

    /// Noether operator `N^i F`.
    pub fn noether_operator(&self, x: &Generator, f: &Expr, i: Label) -> Result<Expr, JetError> {
        let pos = self.labels().iter().position(|&l| l == i).ok_or(JetError::LabelNotInFrame(i, self.frame))?;
        let w = x.characteristic(self);
        let deps = self.dependents_of_generator();
        let order = f.jet_order(deps).max(1);
        let mut acc = &x.xi[pos] * f;
        for (k, dep) in deps.iter().enumerate() {
            for jm in self.multi_indices(order - 1) {
                let kk = jm.with(i);
                let euler = self.higher_euler(f, *dep, &kk)?;
                if euler.is_empty() {
                    continue;
                }
                let dw = self.total_derivative_multi(&w[k], &jm)?;
                let weight = Coeff::from_i64(jm.arrangements() as i64);
                acc = acc + (&dw * &euler).scale(&weight);
            }
        }
        Ok(acc)
    }

    fn dependents_of_generator(&self) -> &'static [Sym] {
        match self.frame {
            Frame::Lagrangian => &[Sym::Phi1, Sym::Phi2],
            Frame::Eulerian => &[Sym::Rho, Sym::U, Sym::V],
        }
    }
}

/// Point generator `xi^t ∂_t + xi^ξ ∂_ξ + xi^η ∂_η + eta^1 ∂_φ1 + eta^2 ∂_φ2`
/// in the Lagrangian frame, optionally with an `S` component (equivalence
/// generators, where `S` is treated as a dependent variable of `(ξ, η)`).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Generator {
    pub xi: [Expr; 3],
    pub eta: [Expr; 2],
    pub s: Option<Expr>,
}

impl Generator {
    pub fn new(xi: [Expr; 3], eta: [Expr; 2]) -> Self {
        Generator { xi, eta, s: None }
    }

    pub fn with_s(mut self, s: Expr) -> Self {
        self.s = Some(s);
        self
    }

    pub fn zero() -> Self {
        Generator::default()
    }

    pub fn is_zero(&self) -> bool {
        self.xi.iter().chain(self.eta.iter()).chain(self.s.iter()).all(Expr::is_zero)
    }

    /// Coefficients in the order `t, ξ, η, φ1, φ2` (and `S` if present).
    pub fn components(&self) -> Vec<&Expr> {
        let mut v: Vec<&Expr> = self.xi.iter().chain(self.eta.iter()).collect();
        if let Some(s) = &self.s {
            v.push(s);
        }
        v
    }

    /// True when no coefficient involves jets of order one or more.
    pub fn is_point(&self) -> bool {
        self.components().iter().all(|c| {
            !c.contains(&Base::J)
                && c.atoms().iter().all(|a| !(a.sym.is_dependent() && a.order() > 0))
        })
    }

    pub fn scale(&self, c: &Expr) -> Generator {
        Generator {
            xi: self.xi.clone().map(|e| c * &e),
            eta: self.eta.clone().map(|e| c * &e),
            s: self.s.as_ref().map(|e| c * e),
        }
    }

    pub fn add(&self, o: &Generator) -> Generator {
        let s = match (&self.s, &o.s) {
            (None, None) => None,
            (a, b) => Some(a.clone().unwrap_or_default() + b.clone().unwrap_or_default()),
        };
        Generator {
            xi: [&self.xi[0] + &o.xi[0], &self.xi[1] + &o.xi[1], &self.xi[2] + &o.xi[2]],
            eta: [&self.eta[0] + &o.eta[0], &self.eta[1] + &o.eta[1]],
            s,
        }
    }

    /// `W^k = eta^k − xi^i u^k_i`.
    pub fn characteristic(&self, frame: &JetFrame) -> [Expr; 2] {
        let deps = [Sym::Phi1, Sym::Phi2];
        core::array::from_fn(|k| {
            let mut w = self.eta[k].clone();
            for (c, l) in self.xi.iter().zip(frame.labels()) {
                w = w - c * &Expr::atom(Atom::deriv(deps[k], &[l]));
            }
            w
        })
    }

    /// Prolongation coefficients of the jets of `φ1, φ2` (and `S` when present)
    /// up to `order`, keyed by jet atom.
    pub fn prolong(&self, frame: &JetFrame, order: usize) -> Result<BTreeMap<Atom, Expr>, JetError> {
        if order > 2 {
            return Err(JetError::OrderUnsupported(order));
        }
        let mut p = Prolongation::new(frame, self);
        let mut out = BTreeMap::new();
        let mut syms = alloc::vec![Sym::Phi1, Sym::Phi2];
        if self.s.is_some() {
            syms.push(Sym::S);
        }
        for sym in syms {
            for m in frame.multi_indices(order) {
                let a = Atom { sym, idx: m };
                if m.labels().all(|l| sym.index_labels().contains(&l)) {
                    out.insert(a, p.zeta(a)?);
                }
            }
        }
        Ok(out)
    }

    /// Applies the prolonged generator to an expression of order at most 2.
    pub fn apply(&self, frame: &JetFrame, e: &Expr) -> Result<Expr, JetError> {
        let s_dep = self.s.is_some();
        let mut acc = Expr::zero();
        for (c, l) in self.xi.iter().zip(frame.labels()) {
            if c.is_empty() {
                continue;
            }
            let d = frame.derive(e, l, false, s_dep)?;
            acc = acc + c * &d;
        }
        let mut p = Prolongation::new(frame, self);
        let mut syms = alloc::vec![Sym::Phi1, Sym::Phi2];
        if s_dep {
            syms.push(Sym::S);
        }
        for sym in syms {
            for a in frame.dependent_atoms(e, sym) {
                if a.order() > 2 {
                    return Err(JetError::OrderUnsupported(a.order()));
                }
                let de = frame.jet_partial(e, &a);
                if de.is_empty() {
                    continue;
                }
                let z = p.zeta(a)?;
                acc = acc + &z * &de;
            }
        }
        Ok(acc)
    }

    /// `D_t xi^t + D_ξ xi^ξ + D_η xi^η`.
    pub fn total_divergence(&self, frame: &JetFrame) -> Result<Expr, JetError> {
        frame.divergence(&self.xi)
    }
}

/// Memoized prolongation `ζ_{M+i} = D_i ζ_M − Σ_j u_{M+j} D_i ξ^j`.
struct Prolongation<'a> {
    frame: &'a JetFrame,
    gen: &'a Generator,
    memo: BTreeMap<Atom, Expr>,
    dxi: BTreeMap<(usize, Label), Expr>,
}

impl<'a> Prolongation<'a> {
    fn new(frame: &'a JetFrame, gen: &'a Generator) -> Self {
        Prolongation { frame, gen, memo: BTreeMap::new(), dxi: BTreeMap::new() }
    }

    fn total(&self, e: &Expr, l: Label) -> Result<Expr, JetError> {
        self.frame.total_derivative(e, l)
    }

    fn zeta(&mut self, a: Atom) -> Result<Expr, JetError> {
        if let Some(z) = self.memo.get(&a) {
            return Ok(z.clone());
        }
        let z = if a.idx.is_empty() {
            match a.sym {
                Sym::Phi1 => self.gen.eta[0].clone(),
                Sym::Phi2 => self.gen.eta[1].clone(),
                Sym::S => self.gen.s.clone().unwrap_or_default(),
                _ => Expr::zero(),
            }
        } else {
            // peel off the last label; any choice gives the same result
            let l = a.idx.labels().last().expect("nonempty index");
            let base = Atom { sym: a.sym, idx: a.idx.minus(&MultiIndex::of(&[l])).expect("contains") };
            let zb = self.zeta(base)?;
            let mut z = if self.gen.s.is_some() {
                self.frame.derive(&zb, l, true, true)?
            } else {
                self.total(&zb, l)?
            };
            for (j, lj) in self.frame.labels().into_iter().enumerate() {
                let key = (j, l);
                let dxi = match self.dxi.get(&key) {
                    Some(d) => d.clone(),
                    None => {
                        let d = if self.gen.s.is_some() {
                            self.frame.derive(&self.gen.xi[j], l, true, true)?
                        } else {
                            self.total(&self.gen.xi[j], l)?
                        };
                        self.dxi.insert(key, d.clone());
                        d
                    }
                };
                if dxi.is_empty() || !a.sym.index_labels().contains(&lj) {
                    continue;
                }
                z = z - Expr::atom(base.with(lj)) * dxi;
            }
            z
        };
        self.memo.insert(a, z.clone());
        Ok(z)
    }
}

#[cfg(test)]
mod tests;
