use super::*;
use crate::expr::parse;

const LAG: JetFrame = JetFrame::lagrangian(Entropy::General);

fn p(s: &str) -> Expr {
    parse(s).unwrap()
}

fn lagrangian() -> Expr {
    p("phi1_t^2/2 + phi2_t^2/2 - J^(1-gamma)*S/(gamma-1)")
}

fn gen(xi: [&str; 3], eta: [&str; 2]) -> Generator {
    Generator::new(xi.map(p), eta.map(p))
}

#[test]
fn total_derivative_basics() {
    assert_eq!(LAG.total_derivative(&p("phi1"), Label::Xi).unwrap(), p("phi1_xi"));
    assert!(LAG.total_derivative(&p("S"), Label::T).unwrap().is_zero());
    assert_eq!(LAG.total_derivative(&p("F'"), Label::Eta).unwrap(), p("F''*S_eta"));
    let dj = LAG.total_derivative(&Expr::jacobian(), Label::T).unwrap();
    let expected = p("phi1_txi*phi2_eta + phi1_xi*phi2_teta - phi1_teta*phi2_xi - phi1_eta*phi2_txi");
    assert!(dj.canonical_eq(&expected));
    assert!(matches!(
        LAG.total_derivative(&p("phi1"), Label::X),
        Err(JetError::LabelNotInFrame(Label::X, Frame::Lagrangian))
    ));
}

#[test]
fn isentropic_entropy_is_constant() {
    let iso = JetFrame::lagrangian(Entropy::Isentropic);
    assert!(iso.total_derivative(&p("S*phi1"), Label::Xi).unwrap().canonical_eq(&p("S*phi1_xi")));
}

#[test]
fn euler_operator_examples() {
    let e = LAG.variational_derivative(&p("phi1_t^2/2"), Sym::Phi1).unwrap();
    assert_eq!(e, p("-phi1_tt"));
    let div = LAG.total_derivative(&p("phi1_t*phi2_eta*S + J^(1-gamma)"), Label::Xi).unwrap();
    assert!(LAG.variational_derivative(&div, Sym::Phi1).unwrap().is_zero());
    assert!(LAG.variational_derivative(&div, Sym::Phi2).unwrap().is_zero());
}

#[test]
fn euler_lagrange_of_the_gas_lagrangian() {
    // −D_t(φ1t) − D_ξ(S J^{−γ} φ2η) + D_η(S J^{−γ} φ2ξ), expanded by hand
    let l = lagrangian();
    let d1 = LAG.variational_derivative(&l, Sym::Phi1).unwrap();
    let hand = p("-phi1_tt")
        - LAG.total_derivative(&p("S*J^(-gamma)*phi2_eta"), Label::Xi).unwrap()
        + LAG.total_derivative(&p("S*J^(-gamma)*phi2_xi"), Label::Eta).unwrap();
    assert!(d1.canonical_eq(&hand));
}

#[test]
fn prolongation_examples() {
    let x3 = gen(["0", "0", "0"], ["t", "0"]);
    let pr = x3.prolong(&LAG, 1).unwrap();
    for (a, z) in &pr {
        let expect = if *a == Atom::deriv(Sym::Phi1, &[Label::T]) { Expr::one() } else { Expr::zero() };
        if a.order() == 1 {
            assert_eq!(z, &expect, "{a}");
        }
    }
    let x7 = gen(["t^2", "0", "0"], ["t*phi1", "t*phi2"]);
    let pr = x7.prolong(&LAG, 2).unwrap();
    assert_eq!(pr[&Atom::deriv(Sym::Phi1, &[Label::T])], p("phi1 - t*phi1_t"));
    let xh = gen(["0", "-h_eta", "h_xi"], ["0", "0"]);
    let pr = xh.prolong(&LAG, 1).unwrap();
    assert_eq!(pr[&Atom::deriv(Sym::Phi1, &[Label::Xi])], p("phi1_xi*h_xieta - phi1_eta*h_xixi"));
    assert!(matches!(xh.prolong(&LAG, 3), Err(JetError::OrderUnsupported(3))));
}

#[test]
fn characteristics() {
    let x1 = gen(["0", "0", "0"], ["1", "0"]);
    assert_eq!(x1.characteristic(&LAG), [Expr::one(), Expr::zero()]);
    let x6 = gen(["1", "0", "0"], ["0", "0"]);
    assert_eq!(x6.characteristic(&LAG), [p("-phi1_t"), p("-phi2_t")]);
    let x5 = gen(["0", "0", "0"], ["phi2", "-phi1"]);
    assert_eq!(x5.characteristic(&LAG), [p("phi2"), p("-phi1")]);
}

#[test]
fn noether_operator_for_translation() {
    let x1 = gen(["0", "0", "0"], ["1", "0"]);
    let l = lagrangian();
    assert_eq!(LAG.noether_operator(&x1, &l, Label::T).unwrap(), p("phi1_t"));
    assert!(LAG
        .noether_operator(&x1, &l, Label::Xi)
        .unwrap()
        .canonical_eq(&p("S*phi2_eta*J^(-gamma)")));
    assert!(LAG.noether_operator(&Generator::zero(), &l, Label::Eta).unwrap().is_zero());
}

#[test]
fn noether_identity_for_second_order_density() {
    // X̃F + F D_iξ^i − W^k δF/δφ_k − D_i N^i F = 0 with F of order two
    let x = gen(["t*xi", "phi2", "eta*phi1"], ["t*phi2 + xi", "phi1^2"]);
    let f = p("phi1_txi*phi2_eta + phi1_tt*phi2 + S*phi2_xieta*phi1_t");
    let w = x.characteristic(&LAG);
    let mut r = x.apply(&LAG, &f).unwrap() + &f * &x.total_divergence(&LAG).unwrap();
    for (k, dep) in [Sym::Phi1, Sym::Phi2].into_iter().enumerate() {
        r = r - &w[k] * &LAG.variational_derivative(&f, dep).unwrap();
    }
    let n: [Expr; 3] = LAG.labels().map(|l| LAG.noether_operator(&x, &f, l).unwrap());
    r = r - LAG.divergence(&n).unwrap();
    assert!(r.is_zero(), "{r}");
}
