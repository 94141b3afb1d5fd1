//! Manufactured flows: closed-form motions `φ(t, ξ, η)` with constant
//! entropy, certified against the printed equations of motion, and
//! finite-difference divergence checks of conserved vectors along them.

use std::collections::BTreeMap;

use noetherlab_core::atom::atoms::{ETA, T, XI};
use noetherlab_core::atom::{Atom, Label, Sym};
use noetherlab_core::coeff::{rat, Rational};
use noetherlab_core::expr::{parse, Base, Expr};
use noetherlab_core::jet::Entropy;
use noetherlab_core::model::{printed_el, ModelConfig};

use super::OracleError;

/// An explicit motion of the isentropic gas, with a relabeling function `h`
/// for vectors that need one.
#[derive(Debug, Clone)]
pub struct ManufacturedSolution {
    pub name: String,
    pub phi: [Expr; 2],
    /// The constant entropy.
    pub s: Expr,
    /// `h(ξ, η)`.
    pub h: Expr,
    pub gamma: Rational,
}

fn closed(text: &str) -> Expr {
    parse(text).expect("static text")
}

impl ManufacturedSolution {
    pub fn new(name: &str, phi: [&str; 2], gamma: Rational) -> Self {
        ManufacturedSolution {
            name: name.into(),
            phi: [closed(phi[0]), closed(phi[1])],
            s: Expr::int(1),
            h: closed("xi^2*eta + eta"),
            gamma,
        }
    }

    /// `φ1 = ξ + u0 t, φ2 = η + v0 t`.
    pub fn uniform_flow(gamma: Rational) -> Self {
        Self::new("uniform-flow", ["xi + 3/10*t", "eta - 1/5*t"], gamma)
    }

    /// `φ1 = (1 + bt) ξ, φ2 = (1 + bt) η`.
    pub fn dilation(gamma: Rational) -> Self {
        Self::new("dilation", ["(1 + 1/2*t)*xi", "(1 + 1/2*t)*eta"], gamma)
    }

    /// Not a motion: `φ1 = ξ + t² ξ², φ2 = η`.
    pub fn non_solution(gamma: Rational) -> Self {
        Self::new("non-solution", ["xi + t^2*xi^2", "eta"], gamma)
    }

    pub fn config(&self) -> ModelConfig {
        ModelConfig::at_gamma(self.gamma.clone(), Entropy::Isentropic).expect("gamma > 1")
    }

    /// Closed form of a jet atom along the motion.
    pub fn jet(&self, a: &Atom) -> Result<Expr, OracleError> {
        let base = match a.sym {
            Sym::Phi1 => self.phi[0].clone(),
            Sym::Phi2 => self.phi[1].clone(),
            Sym::S => self.s.clone(),
            Sym::H => self.h.clone(),
            Sym::Label(Label::T | Label::Xi | Label::Eta) | Sym::Param(_) => return Ok(Expr::atom(*a)),
            _ => return Err(OracleError::Unsupported(a.to_string())),
        };
        let mut e = base;
        for l in a.idx.labels() {
            e = e.partial(&Atom::label(l));
        }
        Ok(e.canonical())
    }

    fn jet_rules(&self, e: &Expr) -> Result<BTreeMap<Base, Expr>, OracleError> {
        let mut rules = BTreeMap::new();
        rules.insert(Base::J, Expr::jacobian());
        for a in e.atoms() {
            if !matches!(a.sym, Sym::Label(_)) {
                rules.insert(Base::Atom(a), self.jet(&a)?);
            }
        }
        Ok(rules)
    }

    /// Substitutes the motion into the printed equations of motion and
    /// requires both to vanish identically. `J` is kept as an opaque symbol,
    /// which makes the check sufficient rather than necessary.
    pub fn certify(&self) -> Result<(), OracleError> {
        for (k, e) in printed_el(&self.config())?.iter().enumerate() {
            let r = e
                .substitute(&self.jet_rules(e)?)
                .map_err(|x| OracleError::Certificate(self.name.clone(), x.to_string()))?
                .canonical();
            if !r.is_zero() {
                return Err(OracleError::Certificate(self.name.clone(), format!("equation {} leaves {}", k + 1, r)));
            }
        }
        Ok(())
    }

    /// Compiles `e` to closed forms of its atoms for repeated evaluation.
    fn compile(&self, e: &Expr) -> Result<Compiled, OracleError> {
        let mut atoms = Vec::new();
        for a in e.atoms() {
            if !matches!(a.sym, Sym::Label(_)) {
                atoms.push((a, self.jet(&a)?));
            }
        }
        let grads = [
            self.jet(&Atom::deriv(Sym::Phi1, &[Label::Xi]))?,
            self.jet(&Atom::deriv(Sym::Phi2, &[Label::Eta]))?,
            self.jet(&Atom::deriv(Sym::Phi1, &[Label::Eta]))?,
            self.jet(&Atom::deriv(Sym::Phi2, &[Label::Xi]))?,
        ];
        Ok(Compiled { expr: e.clone(), atoms, grads, gamma: noetherlab_core::coeff::rational_to_f64(&self.gamma) })
    }
}

struct Compiled {
    expr: Expr,
    atoms: Vec<(Atom, Expr)>,
    grads: [Expr; 4],
    gamma: f64,
}

impl Compiled {
    fn eval(&self, x: [f64; 3]) -> Result<f64, OracleError> {
        let coords: BTreeMap<Atom, f64> = [(T, x[0]), (XI, x[1]), (ETA, x[2])].into_iter().collect();
        let ev = |e: &Expr| {
            e.eval_f64(&coords, Some(0.0), self.gamma).map_err(|source| OracleError::Eval {
                source,
                assignment: format!("t={}, xi={}, eta={}", x[0], x[1], x[2]),
            })
        };
        let mut values = coords.clone();
        for (a, e) in &self.atoms {
            values.insert(*a, ev(e)?);
        }
        let g: Vec<f64> = self.grads.iter().map(ev).collect::<Result<_, _>>()?;
        let j = g[0] * g[1] - g[2] * g[3];
        self.expr.eval_f64(&values, Some(j), self.gamma).map_err(|source| OracleError::Eval {
            source,
            assignment: format!("t={}, xi={}, eta={}", x[0], x[1], x[2]),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Second,
    Fourth,
}

impl Stencil {
    pub fn order(self) -> usize {
        match self {
            Stencil::Second => 2,
            Stencil::Fourth => 4,
        }
    }

    fn half_width(self) -> usize {
        self.order() / 2
    }

    /// Offsets and weights of the centered first-derivative stencil.
    fn weights(self) -> &'static [(f64, f64)] {
        match self {
            Stencil::Second => &[(-1.0, -0.5), (1.0, 0.5)],
            Stencil::Fourth => &[(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)],
        }
    }
}

/// A box in `(t, ξ, η)` refined uniformly. Divergences are sampled at the
/// interior nodes of the coarsest grid, which are nodes of every finer grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub lower: [f64; 3],
    pub upper: [f64; 3],
    pub resolutions: Vec<usize>,
    pub stencil: Stencil,
}

impl GridSpec {
    pub fn new(resolutions: Vec<usize>, stencil: Stencil) -> Self {
        GridSpec { lower: [0.0, 0.5, 0.5], upper: [1.0, 1.5, 1.5], resolutions, stencil }
    }

    fn validate(&self) -> Result<(), OracleError> {
        if self.resolutions.len() < 3 {
            return Err(OracleError::GridTooCoarse(format!("{} resolutions, need 3", self.resolutions.len())));
        }
        let min = 2 * self.stencil.half_width() + 1;
        if self.resolutions.iter().any(|&n| n < min) {
            return Err(OracleError::GridTooCoarse(format!("fewer than {min} points per axis")));
        }
        let mut sorted = self.resolutions.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(OracleError::GridTooCoarse("resolutions must be nested".into()));
        }
        Ok(())
    }

    fn probes(&self) -> Vec<[f64; 3]> {
        let n = *self.resolutions.iter().min().expect("validated");
        let hw = self.stencil.half_width();
        let step: Vec<f64> = (0..3).map(|k| (self.upper[k] - self.lower[k]) / n as f64).collect();
        let idx: Vec<usize> = (hw..=n - hw).collect();
        let mut out = Vec::new();
        for &i in &idx {
            for &j in &idx {
                for &k in &idx {
                    let ijk = [i, j, k];
                    out.push(std::array::from_fn(|a| self.lower[a] + ijk[a] as f64 * step[a]));
                }
            }
        }
        out
    }
}

/// Divergence norms per resolution and the observed convergence order.
#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedReport {
    pub solution: String,
    /// `(n, max-norm of the FD divergence)`.
    pub norms: Vec<(usize, f64)>,
    /// Largest component magnitude over the probes, for relative statements.
    pub scale: f64,
    /// Least-squares slope of `log norm` against `log h`, over resolutions
    /// whose norm is above round-off.
    pub order: Option<f64>,
}

impl ManufacturedReport {
    /// Round-off floor below which a norm counts as zero.
    pub fn floor(&self) -> f64 {
        1e-10 * self.scale.max(1.0)
    }

    /// Every norm is at round-off level.
    pub fn exact(&self) -> bool {
        self.norms.iter().all(|(_, n)| *n <= self.floor())
    }

    /// Exact, or converging at `order` within `slack`.
    pub fn converges(&self, order: f64, slack: f64) -> bool {
        self.exact() || self.order.is_some_and(|p| p >= order - slack)
    }
}

fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// FD divergence of `t` along a certified solution.
pub fn manufactured_check(t: &[Expr; 3], sol: &ManufacturedSolution, grid: &GridSpec) -> Result<ManufacturedReport, OracleError> {
    sol.certify()?;
    manufactured_norms(t, sol, grid)
}

/// As [`manufactured_check`] without the certificate; used for negative
/// controls.
pub fn manufactured_norms(t: &[Expr; 3], sol: &ManufacturedSolution, grid: &GridSpec) -> Result<ManufacturedReport, OracleError> {
    grid.validate()?;
    let comps: Vec<Compiled> = t.iter().map(|e| sol.compile(e)).collect::<Result<_, _>>()?;
    let probes = grid.probes();
    let mut scale: f64 = 0.0;
    for p in &probes {
        for c in &comps {
            scale = scale.max(c.eval(*p)?.abs());
        }
    }
    let mut norms = Vec::new();
    for &n in &grid.resolutions {
        let h: Vec<f64> = (0..3).map(|k| (grid.upper[k] - grid.lower[k]) / n as f64).collect();
        let mut worst: f64 = 0.0;
        for p in &probes {
            let mut div = 0.0;
            for (axis, c) in comps.iter().enumerate() {
                let mut d = 0.0;
                for (off, w) in grid.stencil.weights() {
                    let mut q = *p;
                    q[axis] += off * h[axis];
                    d += w * c.eval(q)?;
                }
                div += d / h[axis];
            }
            worst = worst.max(div.abs());
        }
        norms.push((n, worst));
    }
    let mut report = ManufacturedReport { solution: sol.name.clone(), norms, scale, order: None };
    let floor = report.floor();
    let pts: Vec<(f64, f64)> = report
        .norms
        .iter()
        .filter(|(_, v)| *v > floor)
        .map(|(n, v)| ((1.0 / *n as f64).ln(), v.ln()))
        .collect();
    report.order = least_squares_slope(&pts);
    Ok(report)
}

/// The default refinement study: 8, 16 and 32 cells per axis.
pub fn default_grid(stencil: Stencil) -> GridSpec {
    GridSpec::new(vec![8, 16, 32], stencil)
}

/// `gamma = 7/5` and the special value `2`.
pub fn default_gammas() -> [Rational; 2] {
    [rat(7, 5), rat(2, 1)]
}
