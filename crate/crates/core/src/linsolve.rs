//! Linear algebra over `Q(gamma)`: extracting linear forms in free parameters
//! and row reduction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::atom::{Atom, Sym};
use crate::coeff::Coeff;
use crate::expr::{Base, Expr, Monomial};

/// A linear form `Σ coeff * param` (parameters are atoms such as `c3`).
pub type LinearForm = BTreeMap<Atom, Coeff>;

/// Splits an expression that is linear in the parameter atoms into one linear
/// form per remaining monomial. Returns `None` if some term is not linear in
/// the parameters or has a parameter-free part.
pub fn linear_forms(e: &Expr, is_param: impl Fn(&Atom) -> bool) -> Option<Vec<LinearForm>> {
    let mut groups: BTreeMap<Monomial, LinearForm> = BTreeMap::new();
    for (m, c) in e.terms() {
        let (params, rest) = m.split(|b| matches!(b, Base::Atom(a) if is_param(a)));
        let [(Base::Atom(p), e1)] = params.factors() else { return None };
        if e1.as_integer() != Some(1) {
            return None;
        }
        let slot = groups.entry(rest).or_default();
        let s = slot.get(p).map_or_else(|| c.clone(), |x| x + c);
        if s.is_zero() {
            slot.remove(p);
        } else {
            slot.insert(*p, s);
        }
    }
    Some(groups.into_values().filter(|f| !f.is_empty()).collect())
}

pub fn is_param(a: &Atom) -> bool {
    matches!(a.sym, Sym::Param(_))
}

/// Reduced row echelon form of a set of linear forms, with pivots in the
/// given variable order. Zero rows are dropped; each pivot is normalized to 1.
pub fn rref(forms: &[LinearForm], order: &[Atom]) -> Vec<LinearForm> {
    let mut rows: Vec<LinearForm> = forms.iter().filter(|f| !f.is_empty()).cloned().collect();
    let mut out: Vec<LinearForm> = Vec::new();
    for var in order {
        let Some(pos) = rows.iter().position(|r| r.contains_key(var)) else { continue };
        let pivot_row = rows.swap_remove(pos);
        let inv = pivot_row[var].recip().expect("nonzero pivot");
        let pivot_row = scale_form(&pivot_row, &inv);
        for r in rows.iter_mut().chain(out.iter_mut()) {
            if let Some(f) = r.get(var).cloned() {
                *r = axpy(r, &pivot_row, &(-&f));
            }
        }
        rows.retain(|r| !r.is_empty());
        out.push(pivot_row);
    }
    out.sort_by_key(|r| order.iter().position(|v| r.contains_key(v)).unwrap_or(usize::MAX));
    out
}

fn scale_form(f: &LinearForm, c: &Coeff) -> LinearForm {
    f.iter().map(|(k, v)| (*k, v * c)).filter(|(_, v)| !v.is_zero()).collect()
}

/// `r + c * p`.
fn axpy(r: &LinearForm, p: &LinearForm, c: &Coeff) -> LinearForm {
    let mut out = r.clone();
    for (k, v) in p {
        let s = out.get(k).map_or_else(|| v * c, |x| x + &(v * c));
        if s.is_zero() {
            out.remove(k);
        } else {
            out.insert(*k, s);
        }
    }
    out
}

/// True when two systems of linear forms have the same solution space.
pub fn same_solution_space(a: &[LinearForm], b: &[LinearForm]) -> bool {
    let mut vars: BTreeSet<Atom> = BTreeSet::new();
    for f in a.iter().chain(b) {
        vars.extend(f.keys().copied());
    }
    let order: Vec<Atom> = vars.into_iter().collect();
    rref(a, &order) == rref(b, &order)
}

/// Converts a linear form back into an expression.
pub fn form_to_expr(f: &LinearForm) -> Expr {
    let mut acc = Expr::zero();
    for (a, c) in f {
        acc = acc + Expr::atom(*a).scale(c);
    }
    acc
}

/// Solves `Σ x_j v_j = target` for unknown coefficients `x_j`, where each
/// column and the target are sparse coefficient vectors.
/// Returns a particular solution or `None` if inconsistent.
pub fn solve_columns<K: Ord>(columns: &[BTreeMap<K, Coeff>], target: &BTreeMap<K, Coeff>) -> Option<Vec<Coeff>> {
    use crate::atom::{Param, Sym};
    // encode unknowns as parameter atoms `c1..cn` and the target as `lambda`
    let unknown = |j: usize| Atom::new(Sym::Param(Param::C(j as u8 + 1)));
    let rhs = Atom::new(Sym::Param(Param::Lambda));
    let mut rows: BTreeMap<&K, LinearForm> = BTreeMap::new();
    for (j, col) in columns.iter().enumerate() {
        for (m, c) in col {
            rows.entry(m).or_default().insert(unknown(j), c.clone());
        }
    }
    for (m, c) in target {
        rows.entry(m).or_default().insert(rhs, -c);
    }
    let mut order: Vec<Atom> = (0..columns.len()).map(unknown).collect();
    order.push(rhs);
    let forms: Vec<LinearForm> = rows.into_values().collect();
    let red = rref(&forms, &order);
    let mut x = alloc::vec![Coeff::zero(); columns.len()];
    for row in &red {
        let lead = order.iter().find(|v| row.contains_key(v))?;
        if *lead == rhs {
            return None;
        }
        let j = order.iter().position(|v| v == lead)?;
        // free unknowns are set to zero
        x[j] = row.get(&rhs).map_or_else(Coeff::zero, |c| -c);
    }
    Some(x)
}

/// Monomial-to-coefficient map of an expression.
pub fn coefficient_map(e: &Expr) -> BTreeMap<Monomial, Coeff> {
    e.terms().iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::atoms::c;
    use crate::expr::parse;

    #[test]
    fn extracts_and_reduces_linear_forms() {
        let e = parse("(c9 - c8/2)*phi1 + (2*c9 - c8)*phi2 + c3*S").unwrap();
        let forms = linear_forms(&e, is_param).unwrap();
        assert_eq!(forms.len(), 3);
        let order = [c(3), c(8), c(9)];
        let red = rref(&forms, &order);
        assert_eq!(red.len(), 2);
        let expected = linear_forms(&parse("(2*c8 - 4*c9)*phi1 + c3*phi2").unwrap(), is_param).unwrap();
        assert!(same_solution_space(&forms, &expected));
    }

    #[test]
    fn solves_small_system() {
        let cols = [coefficient_map(&parse("phi1 + phi2").unwrap()), coefficient_map(&parse("phi2").unwrap())];
        let target = coefficient_map(&parse("2*phi1 + 5*phi2").unwrap());
        let x = solve_columns(&cols, &target).unwrap();
        assert_eq!(x, alloc::vec![Coeff::from_i64(2), Coeff::from_i64(3)]);
        let bad = coefficient_map(&parse("S").unwrap());
        assert!(solve_columns(&cols, &bad).is_none());
    }
}
