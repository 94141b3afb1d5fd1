use alloc::collections::BTreeMap;
use alloc::string::ToString;

use super::*;
use crate::atom::atoms::phi;
use crate::coeff::rat;

fn p(s: &str) -> Expr {
    parse(s).unwrap()
}

#[test]
fn parses_half_square() {
    let e = p("phi1_t^2/2");
    assert_eq!(e.len(), 1);
    let (m, c) = e.as_monomial().unwrap();
    assert_eq!(c, &Coeff::from_rational(rat(1, 2)));
    assert_eq!(m.exponent_of(&Base::Atom(phi(1, &[Label::T]))), Exponent::int(2));
}

#[test]
fn trailing_operator_is_a_syntax_error_at_end() {
    let err = parse("phi1_t +").unwrap_err();
    assert_eq!(err.kind, ParseErrorKind::UnexpectedEnd);
    assert_eq!(err.to_string(), "syntax error at end of input");
}

#[test]
fn parse_errors_carry_kind_and_position() {
    let err = parse("phi1_t + foo").unwrap_err();
    assert_eq!(err.kind, ParseErrorKind::UnknownAtom("foo".into()));
    assert_eq!(err.pos, 9);
    assert!(matches!(parse("S_t").unwrap_err().kind, ParseErrorKind::MalformedIndex(_)));
    assert!(matches!(parse("phi1_q").unwrap_err().kind, ParseErrorKind::MalformedIndex(_)));
    assert!(matches!(parse("phi1_").unwrap_err().kind, ParseErrorKind::MalformedIndex(_)));
    assert!(matches!(parse("J^phi1").unwrap_err().kind, ParseErrorKind::BadExponent(_)));
    assert!(matches!(parse("1/(phi1 + phi2)").unwrap_err().kind, ParseErrorKind::Expr(_)));
    assert!(matches!(parse("(phi1").unwrap_err().kind, ParseErrorKind::UnexpectedEnd));
}

#[test]
fn index_separators_are_optional() {
    assert_eq!(p("phi1_t_xi"), p("phi1_xit"));
    assert_eq!(p("phi2_etaeta"), p("phi2_eta_eta"));
}

#[test]
fn jacobian_expands_to_determinant() {
    let j = Expr::jacobian();
    let det = p("phi1_xi*phi2_eta - phi1_eta*phi2_xi");
    assert!(j.canonical_eq(&det));
    assert!(!j.canonical_eq(&p("phi1_xi*phi2_eta")));
}

#[test]
fn symbolic_exponents_add() {
    let e = p("J^(1-gamma)*J^(gamma-1)");
    assert_eq!(e, Expr::one());
    assert!(p("J^(1 - gamma)*J^gamma").canonical_eq(&Expr::jacobian()));
}

#[test]
fn cancellation_records_side_condition() {
    let e = p("(gamma-1)/(gamma-1)");
    assert_eq!(e, Expr::one());
    let l = p("S/(gamma - 1)");
    assert!(l.ledger().contains(&Condition::GammaNonZero(GammaPoly::linear(rat(-1, 1), rat(1, 1)))));
    assert!(p("phi1/phi2_eta").ledger().contains(&Condition::NonZero(Base::Atom(phi(2, &[Label::Eta])))));
}

#[test]
fn canonical_is_idempotent_on_examples() {
    for s in [
        "phi1_xi^2*phi2_eta + J*phi1_xi",
        "J^(-gamma)*phi1_xi*phi2_eta - J^(1-gamma)",
        "phi1_xi^3/phi2_eta^2",
    ] {
        let c = p(s).canonical();
        assert_eq!(c.canonical(), c);
        assert!(c.canonical_eq(&p(s)));
    }
}

#[test]
fn empty_rules_are_identity() {
    let e = p("phi1_t^2/2 - J^(1-gamma)*S/(gamma-1)");
    assert_eq!(e.substitute(&BTreeMap::new()).unwrap(), e);
}

#[test]
fn substitution_expands_jacobian_when_its_parts_change() {
    let e = Expr::jacobian();
    let r = rules([(Base::Atom(phi(1, &[Label::Eta])), Expr::zero())]);
    assert!(e.substitute(&r).unwrap().canonical_eq(&p("phi1_xi*phi2_eta")));
}

#[test]
fn cyclic_rules_are_rejected() {
    let a = Base::Atom(phi(1, &[]));
    let b = Base::Atom(phi(2, &[]));
    let r = rules([(a, Expr::from_base_atom(b)), (b, Expr::from_base_atom(a) + Expr::one())]);
    assert!(matches!(p("phi1").substitute_closure(&r), Err(ExprError::CyclicRules(_))));
}

#[test]
fn unassumed_division_is_rejected() {
    let a = Base::Atom(phi(1, &[]));
    let r = rules([(a, p("S_xi"))]);
    let e = p("1/phi1");
    assert!(matches!(
        e.substitute_assuming(&r, &Ledger::new()),
        Err(ExprError::UnassumedDivision(_))
    ));
    let ok = Ledger::of([Condition::NonZero(Base::Atom(Atom::deriv(Sym::S, &[Label::Xi])))]);
    assert!(e.substitute_assuming(&r, &ok).unwrap().canonical_eq(&p("1/S_xi")));
}

#[test]
fn evaluates_jacobian() {
    let mut a = BTreeMap::new();
    a.insert(phi(1, &[Label::Xi]), 2.0);
    a.insert(phi(2, &[Label::Eta]), 3.0);
    a.insert(phi(1, &[Label::Eta]), 1.0);
    a.insert(phi(2, &[Label::Xi]), 1.0);
    assert_eq!(Expr::jacobian().eval_f64(&a, None, 1.4).unwrap(), 5.0);
    assert_eq!(Expr::zero().eval_f64(&a, None, 1.4).unwrap(), 0.0);
}

#[test]
fn evaluation_at_excluded_gamma_fails() {
    let e = p("1/(gamma-1)");
    assert!(matches!(
        e.eval_f64(&BTreeMap::new(), None, 1.0),
        Err(EvalError::ExcludedGamma { .. })
    ));
    assert!(matches!(e.specialize_gamma(&rat(1, 1)), Err(ExprError::LedgerViolation(_))));
}

#[test]
fn partial_differentiates_jacobian() {
    let e = p("J^(1-gamma)");
    let d = e.partial(&phi(1, &[Label::Xi]));
    assert!(d.canonical_eq(&p("(1-gamma)*J^(-gamma)*phi2_eta")));
    let d = e.partial(&phi(2, &[Label::Xi]));
    assert!(d.canonical_eq(&p("(gamma-1)*J^(-gamma)*phi1_eta")));
}

#[test]
fn printer_round_trips() {
    for s in [
        "phi1_t^2/2 + phi2_t^2/2 - J^(1-gamma)*S/(gamma-1)",
        "2*(1-gamma)*(gamma-2)*xi*phi1_t*phi1_xi + (gamma^2-1)*phi2*phi2_t",
        "-J^(-gamma)*S*phi2_xi + gamma/(2*gamma - 1)*phi1_eta^(1/2)",
        "F''*S_xi^2 - 3/2*c7*lambda + ct10*psi1_eta",
        "J^(2*gamma)*phi1 - J^(-1)",
    ] {
        let e = p(s);
        let printed = e.to_string();
        assert!(p(&printed).canonical_eq(&e), "{s} -> {printed}");
    }
}

#[test]
fn eulerian_frame_names() {
    let e = parse_in(Frame::Eulerian, "rho*u^2 + rho^gamma*S").unwrap();
    assert_eq!(e.pretty(), "ρu² + ρ^γS");
    assert!(parse("rho").is_err());
    assert!(parse_in(Frame::Eulerian, "phi1_t").is_err());
}

#[test]
fn specializing_gamma_evaluates_exponents() {
    let e = p("J^(1-gamma)*S/(gamma-1)");
    let s = e.specialize_gamma(&rat(2, 1)).unwrap();
    assert_eq!(s, p("J^(-1)*S"));
}
