//! Verification suites over the catalog. Every check is an independent task;
//! tasks run on a worker pool and records come back in catalog order.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use noetherlab_core::atom::atoms::phi;
use noetherlab_core::atom::{Atom, Frame, Label, Param, Sym};
use noetherlab_core::catalog::{
    classifying_check, classifying_expression, commutator_table, verify_admitted, Catalog,
    EntryData, EntryKind,
};
use noetherlab_core::coeff::{rat, Coeff};
use noetherlab_core::euler_map::{to_eulerian, verify_eulerian_claw, MapError};
use noetherlab_core::expr::Expr;
use noetherlab_core::jet::Entropy;
use noetherlab_core::linsolve::{is_param, linear_forms, LinearForm};
use noetherlab_core::model::{euler_lagrange, printed_el, ModelConfig};
use noetherlab_core::noether::{
    constraints_match, derive_catalog_vector, detect_scale, divergence_combination, divergence_constraints,
    divergence_symmetry_test, general_certificate, verify_conservation_law,
};
use rayon::prelude::*;

use crate::config::{RunConfig, Suite};
use crate::identities::{commutation_checks, noether_identity_checks, MIN_PAIRS};
use crate::oracle::manufactured::{default_grid, manufactured_check};
use crate::oracle::{
    compare_vectors, eulerian_claw_check, lagrangian_claw_check, run_trials, Context,
    ManufacturedSolution, OracleError, OracleOptions, PointCheck, Sample, Stencil,
};
use crate::report::{Record, Status};

type CheckResult = Result<Record, String>;

pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(Catalog::builtin)
}

/// `(a, b, c)` in human-readable form.
pub fn pretty_tuple(v: &[Expr]) -> String {
    let parts: Vec<String> = v.iter().map(Expr::pretty).collect();
    format!("({})", parts.join(", "))
}

fn coeff_text(c: &Coeff) -> String {
    c.to_grammar()
}

/// A deferred check.
pub struct Task {
    id: String,
    check: String,
    config: ModelConfig,
    run: Box<dyn Fn(&ModelConfig) -> CheckResult + Send + Sync>,
}

impl Task {
    fn new(id: &str, check: &str, config: &ModelConfig, run: impl Fn(&ModelConfig) -> CheckResult + Send + Sync + 'static) -> Self {
        Task { id: id.into(), check: check.into(), config: config.clone(), run: Box::new(run) }
    }

    /// Runs the check; errors and panics become error records.
    pub fn execute(&self) -> Record {
        let cfg = self.config.describe();
        match catch_unwind(AssertUnwindSafe(|| (self.run)(&self.config))) {
            Ok(Ok(r)) => r,
            Ok(Err(e)) => Record::error(&self.id, &self.check, &cfg, e),
            Err(p) => {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "internal error".into());
                Record::error(&self.id, &self.check, &cfg, format!("internal error: {msg}"))
            }
        }
    }
}

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn rec(id: &str, check: &str, config: &ModelConfig, ok: bool) -> Record {
    Record::new(id, check, &config.describe(), Status::from_bool(ok))
}

fn first_nonzero(v: &[Expr]) -> Option<String> {
    v.iter().find(|e| !e.is_zero()).map(|e| e.to_string())
}

fn reference(id: &str) -> String {
    catalog().get(id).map(|e| e.reference.clone()).unwrap_or_default()
}

// ---- admitted ----

fn el_task(config: &ModelConfig) -> Task {
    Task::new("EL", "euler-lagrange", config, |c| {
        let sys = euler_lagrange(c).map_err(err)?;
        let printed = printed_el(c).map_err(err)?;
        let diff: Vec<Expr> = (0..2).map(|k| (&sys.e[k] - &printed[k]).canonical()).collect();
        Ok(rec("EL", "euler-lagrange", c, diff.iter().all(Expr::is_zero))
            .reference("equations of motion")
            .witness(first_nonzero(&diff)))
    })
}

fn admitted_task(config: &ModelConfig, id: &str, check: &'static str) -> Task {
    let id_owned = id.to_string();
    Task::new(id, check, config, move |c| {
        let e = catalog().get(&id_owned).map_err(err)?;
        let g = e.generator(c).map_err(err)?;
        let r = verify_admitted(&g, c).map_err(err)?;
        Ok(rec(&id_owned, check, c, r.admitted())
            .reference(&e.reference)
            .fired(r.fired.iter().cloned())
            .witness(first_nonzero(&r.residuals)))
    })
}

fn printed_generator_task(config: &ModelConfig, id: &str) -> Task {
    let id_owned = id.to_string();
    Task::new(id, "printed-form", config, move |c| {
        let e = catalog().get(&id_owned).map_err(err)?;
        let Some(g) = e.printed_generator(c).map_err(err)? else {
            return Err("no printed alternate".into());
        };
        let r = verify_admitted(&g, c).map_err(err)?;
        Ok(rec(&id_owned, "printed-form", c, !r.admitted())
            .reference(&e.reference)
            .detail("the printed generator is not admitted; the corrected form is stored"))
    })
}

fn classifying_task(config: &ModelConfig) -> Task {
    Task::new("C-classifying", "classifying", config, |c| {
        let r = classifying_check(c).map_err(err)?;
        let mut detail = String::from("residual lies in the ideal generated by the classifying expression");
        if r.c7_at_two.is_some() {
            detail.push_str("; the c7 part vanishes exactly at gamma = 2");
        }
        Ok(rec("C-classifying", "classifying", c, r.matches())
            .reference(&reference("C-classifying"))
            .witness(first_nonzero(&r.remainder))
            .detail(detail))
    })
}

fn commutator_task(config: &ModelConfig) -> Task {
    Task::new("algebra", "commutators", config, |c| {
        let table = commutator_table(c).map_err(err)?;
        let open: Vec<String> = table.iter().filter(|t| t.2.is_none()).map(|t| format!("[{}, {}]", t.0, t.1)).collect();
        Ok(rec("algebra", "commutators", c, open.is_empty())
            .reference("closure of the admitted algebra")
            .detail(format!("{} commutators", table.len()))
            .witness((!open.is_empty()).then(|| open.join(" "))))
    })
}

fn admitted_tasks(config: &ModelConfig, out: &mut Vec<Task>) {
    out.push(el_task(config));
    let cat = catalog();
    for e in cat.applicable(EntryKind::Generator, config) {
        out.push(admitted_task(config, &e.id, "admitted"));
        if e.alternates.iter().any(|a| a.label == "printed") {
            out.push(printed_generator_task(config, &e.id));
        }
    }
    if config.entropy == Entropy::General {
        for e in cat.applicable(EntryKind::EquivalenceGenerator, config) {
            out.push(admitted_task(config, &e.id, "equivalence"));
        }
    }
    out.push(classifying_task(config));
    if config.entropy == Entropy::Isentropic {
        out.push(commutator_task(config));
    }
}

// ---- noether ----

fn noether_task(config: &ModelConfig, id: &str) -> Task {
    let id_owned = id.to_string();
    Task::new(id, "noether", config, move |c| {
        let e = catalog().get(&id_owned).map_err(err)?;
        let o = derive_catalog_vector(e, c).map_err(err)?;
        let witness = if !o.divergence.passes() {
            o.divergence.witness().map(|w| w.to_string())
        } else if !o.scale_matches() {
            Some(format!("built {} is not {} times the entry", pretty_tuple(&o.built), coeff_text(&o.expected_scale)))
        } else {
            first_nonzero(std::slice::from_ref(&o.conservation.expr))
        };
        let mut r = rec(&id_owned, "noether", c, o.ok())
            .reference(&e.reference)
            .scale(o.detected_scale.as_ref().map(coeff_text))
            .witness(witness);
        let mut detail = format!("from {}", o.source);
        if o.certificate.iter().any(|b| !b.is_zero()) {
            let how = if o.certificate_found { "found" } else { "given" };
            detail.push_str(&format!(", certificate {how}: {}", pretty_tuple(&o.certificate)));
        }
        r = r.detail(detail);
        Ok(r)
    })
}

fn constraints_task(config: &ModelConfig, id: &str) -> Task {
    let id_owned = id.to_string();
    Task::new(id, "constraints", config, move |c| {
        let e = catalog().get(&id_owned).map_err(err)?;
        let derived = divergence_constraints(c).map_err(err)?;
        let ok = constraints_match(&derived, e, c).map_err(err)?;
        let shown: Vec<String> =
            derived.forms.iter().map(|f| noetherlab_core::linsolve::form_to_expr(f).pretty() + " = 0").collect();
        Ok(rec(&id_owned, "constraints", c, ok).reference(&e.reference).detail(format!("derived: {}", shown.join("; "))))
    })
}

fn certificate_task(config: &ModelConfig, id: &str) -> Task {
    let id_owned = id.to_string();
    Task::new(id, "certificate", config, move |c| {
        let e = catalog().get(&id_owned).map_err(err)?;
        let expected = e.components(c).map_err(err)?;
        let found = general_certificate(c).map_err(err)?;
        let ok = found.as_ref().is_some_and(|b| b.canonical_eq(&expected[0]));
        Ok(rec(&id_owned, "certificate", c, ok)
            .reference(&e.reference)
            .detail(format!("search gives b1 = {}", found.map(|b| b.pretty()).unwrap_or_else(|| "none".into()))))
    })
}

fn noether_tasks(config: &ModelConfig, out: &mut Vec<Task>) {
    let cat = catalog();
    // entries without a source generator (mass) have nothing to derive
    for e in cat.applicable(EntryKind::ConservedVector, config).into_iter().filter(|e| e.source.is_some()) {
        out.push(noether_task(config, &e.id));
    }
    for e in cat.applicable(EntryKind::Constraint, config) {
        if e.id.starts_with("C-divergence") {
            out.push(constraints_task(config, &e.id));
        }
        if e.id.starts_with("C-b1") && config.is_gamma_two() {
            out.push(certificate_task(config, &e.id));
        }
    }
}

// ---- claws ----

fn conservation_task(config: &ModelConfig, id: &str) -> Task {
    let id_owned = id.to_string();
    Task::new(id, "conservation", config, move |c| {
        let e = catalog().get(&id_owned).map_err(err)?;
        let t = e.vector(c).map_err(err)?;
        let r = verify_conservation_law(&t, c).map_err(err)?;
        Ok(rec(&id_owned, "conservation", c, r.expr.is_zero())
            .reference(&e.reference)
            .fired(r.fired.iter().cloned())
            .witness(first_nonzero(std::slice::from_ref(&r.expr))))
    })
}

fn printed_vector_task(config: &ModelConfig, id: &str) -> Task {
    let id_owned = id.to_string();
    Task::new(id, "printed-form", config, move |c| {
        let e = catalog().get(&id_owned).map_err(err)?;
        let Some(t) = e.printed_vector(c).map_err(err)? else {
            return Err("no printed alternate".into());
        };
        let conserved = match e.kind {
            EntryKind::EulerianVector => verify_eulerian_claw(&t, c).map_err(err)?.expr.is_zero(),
            _ => verify_conservation_law(&t, c).map_err(err)?.expr.is_zero(),
        };
        Ok(rec(&id_owned, "printed-form", c, !conserved)
            .reference(&e.reference)
            .detail("the printed vector is not conserved; the corrected form is stored"))
    })
}

/// Whether the printed alternate of `e` differs from the stored form under
/// `config`; a misprint multiplied by a vanishing factor is harmless.
fn printed_differs(e: &EntryData, config: &ModelConfig) -> bool {
    let (Ok(Some(p)), Ok(v)) = (e.printed_vector(config), e.vector(config)) else {
        return e.alternates.iter().any(|a| a.label == "printed");
    };
    p.iter().zip(&v).any(|(a, b)| !a.canonical_eq(b))
}

fn claws_tasks(config: &ModelConfig, out: &mut Vec<Task>) {
    for e in catalog().applicable(EntryKind::ConservedVector, config) {
        out.push(conservation_task(config, &e.id));
        if printed_differs(e, config) {
            out.push(printed_vector_task(config, &e.id));
        }
    }
}

// ---- eulerian ----

fn eulerian_task(config: &ModelConfig, id: &str) -> Task {
    let id_owned = id.to_string();
    Task::new(id, "eulerian", config, move |c| {
        let cat = catalog();
        let e = cat.get(&id_owned).map_err(err)?;
        let source = cat.get(e.source.as_deref().ok_or("no source")?).map_err(err)?;
        let printed = e.vector(c).map_err(err)?;
        let mapped = to_eulerian(&source.vector(c).map_err(err)?).map_err(err)?;
        let scale = detect_scale(&mapped, &printed);
        let expected = e.scale(c).map_err(err)?.unwrap_or_else(Coeff::one);
        let claw = verify_eulerian_claw(&printed, c).map_err(err)?;
        let ok = scale.as_ref() == Some(&expected) && claw.expr.is_zero();
        let witness = if scale.as_ref() != Some(&expected) {
            Some(format!("mapped {} is not {} times the entry", pretty_tuple(&mapped), coeff_text(&expected)))
        } else {
            first_nonzero(std::slice::from_ref(&claw.expr))
        };
        Ok(rec(&id_owned, "eulerian", c, ok)
            .reference(&e.reference)
            .scale(scale.as_ref().map(coeff_text))
            .fired(claw.fired.iter().cloned())
            .witness(witness)
            .detail(format!("from {}", source.id)))
    })
}

fn no_eulerian_task(config: &ModelConfig, id: &str) -> Task {
    let id_owned = id.to_string();
    Task::new(id, "no-eulerian-form", config, move |c| {
        let e = catalog().get(&id_owned).map_err(err)?;
        let t = e.vector(c).map_err(err)?;
        let r = rec(&id_owned, "no-eulerian-form", c, false).reference(&e.reference);
        Ok(match to_eulerian(&t) {
            Err(MapError::NoEulerianRepresentation { atoms }) => {
                Record { status: Status::Pass, ..r }.detail(format!("Lagrangian atoms remain: {}", atoms.join(", ")))
            }
            Err(x) => return Err(err(x)),
            Ok(m) => r.witness(Some(format!("maps to {}", pretty_tuple(&m)))),
        })
    })
}

fn eulerian_tasks(config: &ModelConfig, out: &mut Vec<Task>) {
    let cat = catalog();
    for e in cat.applicable(EntryKind::EulerianVector, config) {
        out.push(eulerian_task(config, &e.id));
        if printed_differs(e, config) {
            out.push(printed_vector_task(config, &e.id));
        }
    }
    for e in cat.applicable(EntryKind::ConservedVector, config) {
        let mapped = cat.of_kind(EntryKind::EulerianVector).any(|x| x.source.as_deref() == Some(&e.id) && x.scope.applies(config));
        if !mapped {
            out.push(no_eulerian_task(config, &e.id));
        }
    }
}

// ---- oracle ----

fn numeric_record(id: &str, check: &str, config: &ModelConfig, pc: &PointCheck, expect_pass: bool) -> Record {
    let ok = pc.passed() == expect_pass;
    let summary = format!("worst relative residual {:.3e} over {} trials (tol {:.0e})", pc.worst, pc.trials, pc.tol);
    let r = rec(id, check, config, ok).seed(pc.seed).reference(&reference(id));
    if ok {
        r.detail(summary)
    } else {
        r.witness(Some(format!("{summary}, worst at gamma = {}", pc.worst_gamma)))
    }
}

fn oracle_task(
    config: &ModelConfig,
    id: &str,
    check: &'static str,
    opts: OracleOptions,
    expect_pass: bool,
    f: impl Fn(&ModelConfig, &OracleOptions) -> Result<PointCheck, String> + Send + Sync + 'static,
) -> Task {
    let id_owned = id.to_string();
    Task::new(id, check, config, move |c| Ok(numeric_record(&id_owned, check, c, &f(c, &opts)?, expect_pass)))
}

fn oe(e: OracleError) -> String {
    e.to_string()
}

/// Parameter values on the solution space of the catalog constraints, at a
/// numeric gamma.
fn constraint_point(forms: &[LinearForm], gamma: f64, free: &mut impl FnMut() -> f64) -> Vec<(Atom, f64)> {
    let mut cols: Vec<Atom> = forms.iter().flat_map(|f| f.keys().copied()).collect();
    cols.sort();
    cols.dedup();
    let mut m: Vec<Vec<f64>> =
        forms.iter().map(|f| cols.iter().map(|a| f.get(a).map_or(0.0, |c| c.eval_f64(gamma))).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols.len() {
        let Some(p) = (row..m.len()).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())) else { break };
        if m[p][col].abs() < 1e-12 {
            continue;
        }
        m.swap(row, p);
        let d = m[row][col];
        m[row].iter_mut().for_each(|x| *x /= d);
        for r in 0..m.len() {
            if r != row {
                let k = m[r][col];
                if k != 0.0 {
                    let src = m[row].clone();
                    m[r].iter_mut().zip(&src).for_each(|(x, s)| *x -= k * s);
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let mut values: Vec<Option<f64>> = vec![None; cols.len()];
    for (c, v) in values.iter_mut().enumerate() {
        if !pivots.iter().any(|p| p.1 == c) {
            *v = Some(free());
        }
    }
    for &(r, c) in &pivots {
        let s: f64 = (0..cols.len()).filter(|&j| j != c).map(|j| m[r][j] * values[j].unwrap_or(0.0)).sum();
        values[c] = Some(-s);
    }
    cols.into_iter().zip(values.into_iter().map(|v| v.unwrap_or(0.0))).collect()
}

fn numeric_constraints(config: &ModelConfig, id: &str, opts: &OracleOptions) -> Result<PointCheck, String> {
    let cat = catalog();
    let mut exprs = cat.get(id).map_err(err)?.components(config).map_err(err)?;
    if exprs.iter().any(|e| e.contains_sym(Sym::Param(Param::Ct(10)))) {
        exprs.extend(cat.get("C-c10-shift").map_err(err)?.components(config).map_err(err)?);
    }
    let mut forms = Vec::new();
    for e in &exprs {
        forms.extend(linear_forms(e, is_param).ok_or("constraint is not linear")?);
    }
    let g = divergence_combination(config).map_err(err)?;
    let test = divergence_symmetry_test(&g, config).map_err(err)?;
    let ctx = Context::lagrangian_side(config);
    let mut rng_state = opts.seed ^ 0x9e37_79b9_7f4a_7c15;
    run_trials(&ctx, opts, |p| {
        let mut free = || {
            // splitmix64 step for the free parameters
            rng_state = rng_state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = rng_state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^= z >> 31;
            0.5 + 1.5 * (z >> 11) as f64 / (1u64 << 53) as f64
        };
        for (a, v) in constraint_point(&forms, p.gamma, &mut free) {
            p.set(a, v);
        }
        let mut worst = Sample { value: 0.0, scale: 0.0 };
        for e in &test.euler {
            let s = p.eval(e)?;
            if s.relative() >= worst.relative() {
                worst = s;
            }
        }
        Ok(worst)
    })
    .map_err(oe)
}

fn numeric_classifying(config: &ModelConfig, opts: &OracleOptions) -> Result<PointCheck, String> {
    let r = classifying_check(config).map_err(err)?;
    let m = r.multipliers.ok_or("no decomposition")?;
    let q = classifying_expression(config).map_err(err)?;
    let jet = config.lagrangian_jet();
    let dq = [jet.total_derivative(&q, Label::Xi).map_err(err)?, jet.total_derivative(&q, Label::Eta).map_err(err)?];
    let c7 = noetherlab_core::expr::Base::Atom(Atom::new(Sym::Param(Param::C(7))));
    let lhs: Vec<Expr> = r.residuals.iter().map(|e| e.filter_terms(|mo| mo.exponent_of(&c7).is_zero())).collect();
    let rhs: Vec<Expr> = m.iter().map(|row| &row[0] * &q + &row[1] * &dq[0] + &row[2] * &dq[1]).collect();
    compare_vectors(&lhs, &rhs, 1.0, &Context::free(config), opts).map_err(oe)
}

fn c7_obstruction(config: &ModelConfig, gamma: f64, opts: &OracleOptions) -> Result<PointCheck, String> {
    let r = classifying_check(config).map_err(err)?;
    let ctx = Context { gamma: Some(gamma), ..Context::free(config) };
    run_trials(&ctx, opts, |p| {
        let a = p.eval(&r.c7_part[0])?;
        let b = p.eval(&r.c7_part[1])?;
        Ok(if a.relative() >= b.relative() { a } else { b })
    })
    .map_err(oe)
}

fn manufactured_tasks(config: &ModelConfig, out: &mut Vec<Task>) {
    let gamma = config.gamma_value().cloned().unwrap_or_else(|| rat(7, 5));
    let sol_config = ModelConfig::at_gamma(gamma.clone(), Entropy::Isentropic).expect("gamma > 1");
    for e in catalog().applicable(EntryKind::ConservedVector, &sol_config) {
        let id = e.id.clone();
        let g = gamma.clone();
        out.push(Task::new(&e.id, "manufactured-uniform", config, move |c| {
            let sol = ManufacturedSolution::uniform_flow(g.clone());
            let t = catalog().get(&id).map_err(err)?.vector(&sol.config()).map_err(err)?;
            let r = manufactured_check(&t, &sol, &default_grid(Stencil::Second)).map_err(oe)?;
            let norms = format!("{:?}", r.norms);
            Ok(rec(&id, "manufactured-uniform", c, r.exact())
                .reference(&reference(&id))
                .detail(format!("FD divergence max-norms {norms}")))
        }));
        let id = e.id.clone();
        let g = gamma.clone();
        out.push(Task::new(&e.id, "manufactured-dilation", config, move |c| {
            let sol = ManufacturedSolution::dilation(g.clone());
            let t = catalog().get(&id).map_err(err)?.vector(&sol.config()).map_err(err)?;
            let mut ok = true;
            let mut detail = Vec::new();
            for stencil in [Stencil::Second, Stencil::Fourth] {
                let r = manufactured_check(&t, &sol, &default_grid(stencil)).map_err(oe)?;
                ok &= r.converges(stencil.order() as f64, 0.2);
                detail.push(match r.order {
                    _ if r.exact() => format!("stencil {}: exact", stencil.order()),
                    Some(p) => format!("stencil {}: order {p:.2}", stencil.order()),
                    None => format!("stencil {}: no order, norms {:?}", stencil.order(), r.norms),
                });
            }
            Ok(rec(&id, "manufactured-dilation", c, ok).reference(&reference(&id)).detail(detail.join(", ")))
        }));
    }
    out.push(Task::new("non-solution", "control-certificate", config, move |c| {
        let sol = ManufacturedSolution::non_solution(gamma.clone());
        let t = catalog().get("T6").map_err(err)?.vector(&sol.config()).map_err(err)?;
        let rejected = matches!(manufactured_check(&t, &sol, &default_grid(Stencil::Second)), Err(OracleError::Certificate(..)));
        Ok(rec("non-solution", "control-certificate", c, rejected)
            .reference("negative control")
            .detail("a field that does not solve the equations of motion is refused"))
    }));
}

fn oracle_tasks(config: &ModelConfig, opts: OracleOptions, out: &mut Vec<Task>) {
    let cat = catalog();
    out.push(oracle_task(config, "EL", "numeric-euler-lagrange", opts, true, |c, o| {
        let sys = euler_lagrange(c).map_err(err)?;
        let printed = printed_el(c).map_err(err)?;
        compare_vectors(&sys.e, &printed, 1.0, &Context::free(c), o).map_err(oe)
    }));
    for e in cat.applicable(EntryKind::ConservedVector, config) {
        let id = e.id.clone();
        out.push(oracle_task(config, &e.id, "numeric-conservation", opts, true, move |c, o| {
            let t = catalog().get(&id).map_err(err)?.vector(c).map_err(err)?;
            lagrangian_claw_check(&t, c, o).map_err(oe)
        }));
        if e.source.is_none() {
            continue;
        }
        let id = e.id.clone();
        out.push(oracle_task(config, &e.id, "numeric-noether", opts, true, move |c, o| {
            let e = catalog().get(&id).map_err(err)?;
            let out = derive_catalog_vector(e, c).map_err(err)?;
            let scaled: Vec<Expr> = out.catalog.iter().map(|x| x.scale(&out.expected_scale)).collect();
            compare_vectors(&out.built, &scaled, 1.0, &Context::lagrangian_side(c), o).map_err(oe)
        }));
    }
    for e in cat.applicable(EntryKind::EulerianVector, config) {
        let id = e.id.clone();
        out.push(oracle_task(config, &e.id, "numeric-conservation", opts, true, move |c, o| {
            let t = catalog().get(&id).map_err(err)?.vector(c).map_err(err)?;
            eulerian_claw_check(&t, c, o).map_err(oe)
        }));
        let id = e.id.clone();
        out.push(oracle_task(config, &e.id, "numeric-map", opts, true, move |c, o| {
            let cat = catalog();
            let e = cat.get(&id).map_err(err)?;
            let source = cat.get(e.source.as_deref().ok_or("no source")?).map_err(err)?;
            let mapped = to_eulerian(&source.vector(c).map_err(err)?).map_err(err)?;
            let lambda = e.scale(c).map_err(err)?.unwrap_or_else(Coeff::one);
            let printed: Vec<Expr> = e.vector(c).map_err(err)?.iter().map(|x| x.scale(&lambda)).collect();
            let ctx = Context::free(&c.clone().in_frame(Frame::Eulerian));
            compare_vectors(&mapped, &printed, 1.0, &ctx, o).map_err(oe)
        }));
    }
    for e in cat.applicable(EntryKind::Constraint, config) {
        if e.id.starts_with("C-divergence") {
            let id = e.id.clone();
            out.push(oracle_task(config, &e.id, "numeric-constraints", opts, true, move |c, o| numeric_constraints(c, &id, o)));
        }
    }
    out.push(oracle_task(config, "C-classifying", "numeric-classifying", opts, true, numeric_classifying));
    if config.gamma_value().is_none() {
        out.push(oracle_task(config, "C-classifying", "numeric-c7-at-two", opts, true, |c, o| c7_obstruction(c, 2.0, o)));
        out.push(oracle_task(config, "C-classifying", "control-c7-elsewhere", opts, false, |c, o| c7_obstruction(c, 5.0 / 3.0, o)));
        for g in [rat(5, 3), rat(5, 2)] {
            let check: &'static str = if g == rat(5, 3) { "control-gamma-5/3" } else { "control-gamma-5/2" };
            out.push(oracle_task(config, "T7", check, opts, false, move |c, o| {
                let at2 = ModelConfig::at_gamma(rat(2, 1), c.entropy).map_err(err)?;
                let t7 = catalog().get("T7").map_err(err)?.vector(&at2).map_err(err)?;
                let cg = ModelConfig::at_gamma(g.clone(), c.entropy).map_err(err)?;
                lagrangian_claw_check(&t7, &cg, o).map_err(oe)
            }));
        }
        for k in 0..3usize {
            let check: &'static str = ["control-perturbed-t", "control-perturbed-xi", "control-perturbed-eta"][k];
            out.push(oracle_task(config, "T1", check, opts, false, move |c, o| {
                let mut t = catalog().get("T1").map_err(err)?.vector(c).map_err(err)?;
                t[k] = &t[k] + &Expr::atom(phi(1, &[Label::Xi]));
                lagrangian_claw_check(&t, c, o).map_err(oe)
            }));
        }
    }
    if config.entropy == Entropy::General && config.gamma_value().is_none() {
        out.push(Task::new("identity", "noether-identity", config, move |c| {
            let outs = noether_identity_checks(MIN_PAIRS, &opts).map_err(err)?;
            let bad: Vec<String> = outs.iter().filter(|o| !o.passed(opts.tol)).map(|o| o.label.clone()).collect();
            let worst = outs.iter().map(|o| o.numeric.worst).fold(0.0, f64::max);
            Ok(rec("identity", "noether-identity", c, bad.is_empty())
                .reference("Noether identity")
                .seed(opts.seed)
                .detail(format!("{} random pairs, symbolic and numeric; worst numeric residual {worst:.3e}", outs.len()))
                .witness((!bad.is_empty()).then(|| bad.join(", "))))
        }));
    }
    out.push(Task::new("identity", "commutation-identity", config, |c| {
        let outs = commutation_checks(c).map_err(err)?;
        let bad: Vec<String> = outs.iter().filter(|o| !o.1).map(|o| o.0.clone()).collect();
        Ok(rec("identity", "commutation-identity", c, bad.is_empty())
            .reference("variational derivative of a symmetry action")
            .detail(format!("{} generators with F = L", outs.len()))
            .witness((!bad.is_empty()).then(|| bad.join(", "))))
    }));
    if config.entropy == Entropy::Isentropic {
        manufactured_tasks(config, out);
    }
}

/// The tasks of one model configuration, in report order.
pub fn tasks_for(config: &ModelConfig, suites: &[Suite], opts: OracleOptions) -> Vec<Task> {
    let mut out = Vec::new();
    for s in suites {
        match s {
            Suite::Admitted => admitted_tasks(config, &mut out),
            Suite::Noether => noether_tasks(config, &mut out),
            Suite::Claws => claws_tasks(config, &mut out),
            Suite::Eulerian => eulerian_tasks(config, &mut out),
            Suite::Oracle => oracle_tasks(config, opts, &mut out),
        }
    }
    out
}

/// Runs the selected suites for every configuration of the run.
pub fn run(run: &RunConfig) -> Vec<Record> {
    let mut tasks = Vec::new();
    for c in run.model_configs() {
        tasks.extend(tasks_for(&c, &run.suites, run.oracle()));
    }
    execute(&tasks)
}

/// Executes tasks on the worker pool; records keep task order.
pub fn execute(tasks: &[Task]) -> Vec<Record> {
    tasks.par_iter().map(Task::execute).collect()
}

/// Numeric checks for a single catalog entry under `config`.
pub fn oracle_entry(entry: &EntryData, config: &ModelConfig, opts: OracleOptions) -> Vec<Task> {
    let all = tasks_for(config, &[Suite::Oracle], opts);
    all.into_iter().filter(|t| t.id == entry.id).collect()
}

#[cfg(test)]
mod tests;
