//! Transfer of conserved vectors from mass Lagrangian coordinates to Eulerian
//! coordinates.
//!
//! With `x = φ1, y = φ2`, `u = φ1t, v = φ2t` and `ρ = 1/J`, a Lagrangian
//! conservation law `D_t T^t + D_ξ T^ξ + D_η T^η = 0` becomes
//! `D_t (ρ T^t) + D_x (ρ (u T^t + φ1ξ T^ξ + φ1η T^η)) + D_y (ρ (v T^t + φ2ξ T^ξ + φ2η T^η)) = 0`.
//! Label functions are advected fields, so `f_ξ = f_x φ1ξ + f_y φ2ξ` and
//! likewise for `η`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::atom::{atoms::phi, Atom, Frame, Label, Sym};
use crate::catalog::CatalogError;
use crate::expr::{Base, Condition, Exponent, Expr};
use crate::jet::Entropy;
use crate::model::{eulerian_relations, ModelConfig, Reduced};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("no Eulerian representation: {atoms:?} remain after the change of variables")]
    NoEulerianRepresentation { atoms: Vec<String> },
    #[error("cannot map {0}: only first derivatives of label functions are supported")]
    Unsupported(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

impl From<crate::expr::ExprError> for MapError {
    fn from(e: crate::expr::ExprError) -> Self {
        MapError::Catalog(e.into())
    }
}

/// The Eulerian counterpart of a Lagrangian label function symbol.
fn eulerian_sym(s: Sym) -> Option<Sym> {
    match s {
        Sym::S => Some(Sym::ES),
        Sym::H => Some(Sym::EH),
        Sym::Psi2 => Some(Sym::EPsi2),
        Sym::F(n) => Some(Sym::EF(n)),
        _ => None,
    }
}

/// Substitution rules of the frame dictionary for the atoms of `e`; `J` is
/// kept.
pub fn dictionary(e: &Expr) -> Result<BTreeMap<Base, Expr>, MapError> {
    let mut rules = BTreeMap::new();
    let t = [Label::T];
    for a in e.atoms() {
        let repl = match a.sym {
            Sym::Phi1 | Sym::Phi2 => {
                let (pos, vel) = if a.sym == Sym::Phi1 { (Label::X, Sym::U) } else { (Label::Y, Sym::V) };
                if a.idx.is_empty() {
                    Expr::label(pos)
                } else if a.idx == crate::atom::MultiIndex::of(&t) {
                    Expr::atom(Atom::new(vel))
                } else if a.order() == 1 {
                    // spatial label gradients stay and must cancel
                    continue;
                } else {
                    return Err(MapError::Unsupported(a.to_string()));
                }
            }
            s => match eulerian_sym(s) {
                None => continue,
                Some(es) => match a.order() {
                    0 => Expr::atom(Atom::new(es)),
                    1 => {
                        let l = a.idx.labels().next().expect("order one");
                        let ex = Expr::atom(Atom::deriv(es, &[Label::X]));
                        let ey = Expr::atom(Atom::deriv(es, &[Label::Y]));
                        ex * Expr::atom(phi(1, &[l])) + ey * Expr::atom(phi(2, &[l]))
                    }
                    _ => return Err(MapError::Unsupported(a.to_string())),
                },
            },
        };
        rules.insert(Base::Atom(a), repl);
    }
    Ok(rules)
}

/// Maps a Lagrangian conserved vector to Eulerian form.
pub fn to_eulerian(t: &[Expr; 3]) -> Result<[Expr; 3], MapError> {
    let grad = |k: u8, l: Label| Expr::atom(phi(k, &[l]));
    let vel = [Expr::atom(phi(1, &[Label::T])), Expr::atom(phi(2, &[Label::T]))];
    let rho = Expr::power(Base::J, Exponent::int(-1));
    let mut lag: [Expr; 3] = Default::default();
    lag[0] = &rho * &t[0];
    for k in 0..2u8 {
        let ku = usize::from(k);
        let flux = &vel[ku] * &t[0] + grad(k + 1, Label::Xi) * t[1].clone() + grad(k + 1, Label::Eta) * t[2].clone();
        lag[ku + 1] = &rho * &flux;
    }
    let mut out: [Expr; 3] = Default::default();
    let j_to_rho = crate::expr::rules([(Base::J, Expr::power(Base::Atom(Atom::new(Sym::Rho)), Exponent::int(-1)))]);
    for (o, e) in out.iter_mut().zip(&lag) {
        let mapped = e.substitute(&dictionary(e)?)?.canonical();
        let leftover: BTreeSet<Atom> = mapped.foreign_atoms(Frame::Eulerian);
        if !leftover.is_empty() {
            return Err(MapError::NoEulerianRepresentation { atoms: leftover.iter().map(|a| a.to_string()).collect() });
        }
        *o = mapped.substitute(&j_to_rho)?.canonical();
    }
    Ok(out)
}

/// `D_t T^t + D_x T^x + D_y T^y` reduced with the Eulerian equations.
pub fn verify_eulerian_claw(t: &[Expr; 3], config: &ModelConfig) -> Result<Reduced, MapError> {
    let mut rel = eulerian_relations(config).map_err(CatalogError::from)?;
    if config.entropy == Entropy::General {
        rel = rel.assume(Condition::NonZero(Base::Atom(Atom::deriv(Sym::ES, &[Label::Y]))));
    }
    let jet = rel.frame;
    let div = jet.divergence(t).map_err(CatalogError::from)?;
    Ok(rel.reduce(&div).map_err(CatalogError::from)?)
}

#[cfg(test)]
mod tests;
