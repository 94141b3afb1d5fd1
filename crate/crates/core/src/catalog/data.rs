//! The built-in entries, as grammar strings.

use alloc::vec::Vec;

use super::{Alternate, EntryData, EntryKind, Scope};
use crate::atom::Frame;

fn entry(id: &str, kind: EntryKind, scope: Scope, reference: &str, components: &[&str]) -> EntryData {
    let frame = if kind == EntryKind::EulerianVector { Frame::Eulerian } else { Frame::Lagrangian };
    EntryData {
        id: id.into(),
        kind,
        frame,
        scope,
        reference: reference.into(),
        components: components.iter().map(|s| (*s).into()).collect(),
        source: None,
        scale: None,
        certificate: None,
        alternates: Vec::new(),
        note: None,
    }
}

impl EntryData {
    fn with_source(mut self, id: &str, scale: &str) -> Self {
        self.source = Some(id.into());
        self.scale = Some(scale.into());
        self
    }

    fn with_certificate(mut self, b: [&str; 3]) -> Self {
        self.certificate = Some(b.iter().map(|s| (*s).into()).collect());
        self
    }

    fn with_alternate(mut self, label: &str, components: &[&str]) -> Self {
        self.alternates.push(Alternate {
            label: label.into(),
            components: components.iter().map(|s| (*s).into()).collect(),
        });
        self
    }

    fn note(mut self, n: &str) -> Self {
        self.note = Some(n.into());
        self
    }
}

const ISO: Scope = Scope::isentropic();
const GEN: Scope = Scope::general();
const ANY: Scope = Scope::any();

// recurring pieces
const KIN: &str = "(phi1_t^2 + phi2_t^2)";
const KIN_XI: &str = "(phi1_t*phi1_xi + phi2_t*phi2_xi)";
const KIN_ETA: &str = "(phi1_t*phi1_eta + phi2_t*phi2_eta)";

fn s(parts: &[&str]) -> alloc::string::String {
    parts.concat()
}

#[allow(clippy::vec_init_then_push)] // one entry per statement reads as a table
pub(super) fn builtin() -> Vec<EntryData> {
    use EntryKind::{ConservedVector as CV, Constraint, EquivalenceGenerator as EG, EulerianVector as EV, Generator as G};
    let mut v = Vec::new();

    // point symmetries, components t, xi, eta, phi1, phi2
    v.push(entry("X1", G, ANY, "translation of phi1", &["0", "0", "0", "1", "0"]));
    v.push(entry("X2", G, ANY, "translation of phi2", &["0", "0", "0", "0", "1"]));
    v.push(entry("X3", G, ANY, "Galilean boost in x", &["0", "0", "0", "t", "0"]));
    v.push(entry("X4", G, ANY, "Galilean boost in y", &["0", "0", "0", "0", "t"]));
    v.push(entry("X5", G, ANY, "rotation", &["0", "0", "0", "phi2", "-phi1"]));
    v.push(entry("X6", G, ANY, "time translation", &["1", "0", "0", "0", "0"]));
    v.push(entry("X7", G, Scope::gamma_two(), "projective symmetry at gamma = 2", &["t^2", "0", "0", "t*phi1", "t*phi2"]));
    v.push(entry("X8", G, ANY, "time dilation", &["gamma*t", "0", "0", "phi1", "phi2"]));
    v.push(entry("X9", G, ISO, "label dilation", &["0", "2*gamma*xi", "0", "(gamma-1)*phi1", "(gamma-1)*phi2"]));
    v.push(
        entry("X10", G, Scope::basis(), "space dilation", &["0", "0", "0", "phi1", "phi2"])
            .note("admitted only together with a compensating relabeling"),
    );
    v.push(entry("Xh", G, ISO, "relabeling family", &["0", "-h_eta", "h_xi", "0", "0"]));
    v.push(
        entry(
            "X8t",
            G,
            ISO,
            "variational dilation, isentropic",
            &[
                "gamma*t",
                "gamma*(gamma-2)/(2*gamma-1)*xi",
                "0",
                "gamma*(gamma+1)/(2*(2*gamma-1))*phi1",
                "gamma*(gamma+1)/(2*(2*gamma-1))*phi2",
            ],
        )
        .note("X8 + (gamma-2)/(2(2 gamma-1)) X9"),
    );
    v.push(entry(
        "X8n",
        G,
        GEN,
        "variational dilation, nonisentropic",
        &["gamma*t", "-gamma*(gamma-2)/2*psi2_eta", "gamma*(gamma-2)/2*psi2_xi", "gamma/2*phi1", "gamma/2*phi2"],
    ));
    v.push(entry(
        "X9n",
        G,
        GEN,
        "label dilation with entropy compensation",
        &["0", "2*gamma*(xi - psi1_eta)", "2*gamma*psi1_xi", "(gamma-1)*phi1", "(gamma-1)*phi2"],
    ));
    v.push(entry(
        "X10n",
        G,
        GEN,
        "space dilation with entropy compensation",
        &["0", "-gamma*psi2_eta", "gamma*psi2_xi", "phi1", "phi2"],
    ));
    v.push(
        entry(
            "X9h",
            G,
            GEN,
            "variational combination of the compensated dilations",
            &[
                "0",
                "gamma/(2*gamma-1)*(2*(psi1_eta - xi) - (2*gamma-1)*psi2_eta)",
                "gamma/(2*gamma-1)*((2*gamma-1)*psi2_xi - 2*psi1_xi)",
                "gamma/(2*gamma-1)*phi1",
                "gamma/(2*gamma-1)*phi2",
            ],
        )
        .with_alternate(
            "printed",
            &[
                "0",
                "gamma/(2*gamma-1)*(2*(psi1_eta - xi) - (2*gamma-1)*psi2_eta)",
                "gamma/(2*gamma-1)*(2*psi1_xi + (2*gamma-1)*psi2_xi)",
                "gamma/(2*gamma-1)*phi1",
                "gamma/(2*gamma-1)*phi2",
            ],
        )
        .note("equals X10n - X9n/(2 gamma - 1); the printed eta coefficient has the opposite sign on psi1_xi"),
    );
    v.push(entry("XF", G, GEN, "entropy relabeling family", &["0", "-F'*S_eta", "F'*S_xi", "0", "0"]));

    // equivalence generators, components t, xi, eta, phi1, phi2, S
    v.push(entry("Xe1", EG, ANY, "equivalence: translation of phi1", &["0", "0", "0", "1", "0", "0"]));
    v.push(entry("Xe2", EG, ANY, "equivalence: translation of phi2", &["0", "0", "0", "0", "1", "0"]));
    v.push(entry("Xe3", EG, ANY, "equivalence: boost in x", &["0", "0", "0", "t", "0", "0"]));
    v.push(entry("Xe4", EG, ANY, "equivalence: boost in y", &["0", "0", "0", "0", "t", "0"]));
    v.push(entry("Xe5", EG, ANY, "equivalence: rotation", &["0", "0", "0", "phi2", "-phi1", "0"]));
    v.push(entry("Xe6", EG, ANY, "equivalence: time translation", &["1", "0", "0", "0", "0", "0"]));
    v.push(entry("Xe7", EG, ANY, "equivalence: space dilation", &["0", "0", "0", "phi1", "phi2", "2*gamma*S"]));
    v.push(entry("Xe8", EG, ANY, "equivalence: label dilation", &["0", "xi", "eta", "0", "0", "2*(1-gamma)*S"]));
    v.push(entry("Xe9", EG, ANY, "equivalence: time dilation", &["t", "0", "0", "0", "0", "-2*S"]));
    v.push(entry("Xe10", EG, Scope::gamma_two(), "equivalence: projective map at gamma = 2", &["t^2", "0", "0", "t*phi1", "t*phi2", "0"]));
    v.push(entry("Xepsi", EG, ANY, "equivalence: area-preserving relabeling", &["0", "-h_eta", "h_xi", "0", "0", "0"]));

    // conserved vectors, components t, xi, eta
    v.push(entry("T0", CV, ANY, "mass", &["1", "0", "0"]).note("trivial in Lagrangian coordinates"));
    v.push(
        entry("T1", CV, ANY, "momentum x", &["phi1_t", "S*phi2_eta*J^(-gamma)", "-S*phi2_xi*J^(-gamma)"])
            .with_source("X1", "1"),
    );
    v.push(
        entry("T2", CV, ANY, "momentum y", &["phi2_t", "-S*phi1_eta*J^(-gamma)", "S*phi1_xi*J^(-gamma)"])
            .with_source("X2", "1"),
    );
    v.push(
        entry(
            "T3",
            CV,
            ANY,
            "center of mass x",
            &["t*phi1_t - phi1", "t*S*phi2_eta*J^(-gamma)", "-t*S*phi2_xi*J^(-gamma)"],
        )
        .with_source("X3", "1")
        .with_certificate(["phi1", "0", "0"]),
    );
    v.push(
        entry(
            "T4",
            CV,
            ANY,
            "center of mass y",
            &["t*phi2_t - phi2", "-t*S*phi1_eta*J^(-gamma)", "t*S*phi1_xi*J^(-gamma)"],
        )
        .with_source("X4", "1")
        .with_certificate(["phi2", "0", "0"]),
    );
    v.push(
        entry(
            "T5",
            CV,
            ANY,
            "angular momentum",
            &[
                "phi1_t*phi2 - phi1*phi2_t",
                "(phi1*phi1_eta + phi2*phi2_eta)*S*J^(-gamma)",
                "-(phi1*phi1_xi + phi2*phi2_xi)*S*J^(-gamma)",
            ],
        )
        .with_source("X5", "1")
        .with_alternate(
            "printed",
            &["phi1_t*phi2 - phi1*phi2_t", "(phi1*phi1_eta + phi2*phi2_eta)*S*J^(-gamma)", "-(phi1*phi1_xi + phi2*phi2_xi)*S"],
        )
        .note("the printed eta component lacks the factor J^(-gamma)"),
    );
    v.push(
        entry(
            "T6",
            CV,
            ANY,
            "energy",
            &[
                "phi1_t^2 + phi2_t^2 + 2/(gamma-1)*S*J^(1-gamma)",
                "2*(phi1_t*phi2_eta - phi1_eta*phi2_t)*S*J^(-gamma)",
                "2*(phi1_xi*phi2_t - phi1_t*phi2_xi)*S*J^(-gamma)",
            ],
        )
        .with_source("X6", "-1/2"),
    );
    v.push(
        entry(
            "T7",
            CV,
            Scope::gamma_two(),
            "projective conservation law at gamma = 2",
            &[
                "(phi2 - t*phi2_t)^2 + (phi1 - t*phi1_t)^2 + 2*S*J^(-1)*t^2",
                "2*t*S*J^(-2)*((phi2 - t*phi2_t)*phi1_eta - (phi1 - t*phi1_t)*phi2_eta)",
                "2*t*S*J^(-2)*((phi1 - t*phi1_t)*phi2_xi - (phi2 - t*phi2_t)*phi1_xi)",
            ],
        )
        .with_source("X7", "-1/2")
        .with_certificate(["(phi1^2 + phi2^2)/2", "0", "0"]),
    );
    let t8t_t = s(&[
        "2*(1-gamma)*(gamma-2)*xi*",
        KIN_XI,
        " + 2*(1-2*gamma)*t*J^(1-gamma)*S - (2*gamma-1)*(gamma-1)*t*",
        KIN,
        " + (gamma^2-1)*(phi1_t*phi1 + phi2_t*phi2)",
    ]);
    let t8t_t_printed = s(&[
        "2*(1-gamma)*(gamma-2)*xi*(phi1_t*phi1_xi + phi2_t*xi*phi2_xi)",
        " + 2*(1-2*gamma)*t*J^(1-gamma)*S - (2*gamma-1)*(gamma-1)*t*",
        KIN,
        " + (gamma^2-1)*(phi1_t*phi1 + phi2_t*phi2)",
    ]);
    let t8t_xi = s(&[
        "(gamma-2)*xi*((gamma-1)*",
        KIN,
        " - 2*gamma*J^(1-gamma)*S) + S*J^(-gamma)*(gamma-1)*(2*(2*gamma-1)*t*(phi1_eta*phi2_t - phi1_t*phi2_eta)",
        " + (gamma+1)*(phi1*phi2_eta - phi1_eta*phi2))",
    ]);
    let t8t_eta = "S*J^(-gamma)*(gamma-1)*(2*(2*gamma-1)*t*(phi1_t*phi2_xi - phi1_xi*phi2_t) + (gamma+1)*(phi1_xi*phi2 - phi1*phi2_xi))";
    v.push(
        entry("T8t", CV, ISO, "dilation conservation law, isentropic", &[&t8t_t, &t8t_xi, t8t_eta])
            .with_source("X8t", "gamma/(2*(gamma-1)*(2*gamma-1))")
            .with_alternate("printed", &[&t8t_t_printed, &t8t_xi, t8t_eta])
            .note("the printed time component carries a spurious factor xi in phi2_t*xi*phi2_xi"),
    );
    let th_t = s(&["2*(gamma-1)*(", KIN_XI, "*h_eta - ", KIN_ETA, "*h_xi)"]);
    let th_xi = s(&["-h_eta*((gamma-1)*", KIN, " - 2*gamma*S*J^(1-gamma))"]);
    let th_eta = s(&["h_xi*((gamma-1)*", KIN, " - 2*gamma*J^(1-gamma)*S)"]);
    v.push(
        entry("Th", CV, ISO, "relabeling conservation law (vorticity)", &[&th_t, &th_xi, &th_eta])
            .with_source("Xh", "1/(2*(gamma-1))"),
    );
    let p2 = s(&["(", KIN, " - 2*gamma/(gamma-1)*J^(1-gamma)*S)"]);
    let t8_t = s(&[
        "(gamma-2)*(",
        KIN_XI,
        "*psi2_eta - ",
        KIN_ETA,
        "*psi2_xi) + (phi1 - t*phi1_t)*phi1_t + (phi2 - t*phi2_t)*phi2_t - 2/(gamma-1)*t*J^(1-gamma)*S",
    ]);
    let t8_xi = s(&[
        "((phi1 - 2*t*phi1_t)*phi2_eta - (phi2 - 2*t*phi2_t)*phi1_eta)*S*J^(-gamma) - (gamma-2)/2*psi2_eta*",
        &p2,
    ]);
    let t8_eta = s(&[
        "-((phi1 - 2*t*phi1_t)*phi2_xi - (phi2 - 2*t*phi2_t)*phi1_xi)*S*J^(-gamma) + (gamma-2)/2*psi2_xi*",
        &p2,
    ]);
    v.push(
        entry("T8", CV, GEN, "dilation conservation law, nonisentropic", &[&t8_t, &t8_xi, &t8_eta])
            .with_source("X8n", "gamma/2"),
    );
    let t9_t = s(&[
        "-((2*gamma-1)*psi2_xi - 2*psi1_xi)*",
        KIN_ETA,
        " + ((2*gamma-1)*psi2_eta + 2*xi - 2*psi1_eta)*",
        KIN_XI,
        " + phi1*phi1_t + phi2*phi2_t",
    ]);
    let t9_xi = s(&[
        "((2*psi1_eta - 2*xi - (2*gamma-1)*psi2_eta)*",
        &p2,
        " + 2*J^(-gamma)*S*(phi1*phi2_eta - phi1_eta*phi2))/2",
    ]);
    let t9_eta = s(&[
        "(((2*gamma-1)*psi2_xi - 2*psi1_xi)*",
        &p2,
        " - 2*J^(-gamma)*S*(phi1*phi2_xi - phi1_xi*phi2))/2",
    ]);
    v.push(
        entry("T9", CV, GEN, "label dilation conservation law, nonisentropic", &[&t9_t, &t9_xi, &t9_eta])
            .with_source("X9h", "gamma/(2*gamma-1)"),
    );
    let tf_t = s(&["F'*(", KIN_XI, "*S_eta - ", KIN_ETA, "*S_xi)"]);
    let tf_xi = s(&["-F'*S_eta*", &p2, "/2"]);
    let tf_eta = s(&["F'*S_xi*", &p2, "/2"]);
    v.push(
        entry("TF", CV, GEN, "entropy relabeling conservation law", &[&tf_t, &tf_xi, &tf_eta])
            .with_source("XF", "1")
            .note("printed under the label of the psi0 family"),
    );

    // Eulerian forms, components t, x, y
    const E6: &str = "(rho*(u^2 + v^2)/2 + rho^gamma*S/(gamma-1))";
    const XV: &str = "(u*x + v*y)";
    v.push(entry("eT0", EV, ANY, "mass", &["rho", "rho*u", "rho*v"]).with_source("T0", "1"));
    v.push(
        entry("eT1", EV, ANY, "momentum x", &["rho*u", "rho*u^2 + rho^gamma*S", "rho*u*v"]).with_source("T1", "1"),
    );
    v.push(
        entry("eT2", EV, ANY, "momentum y", &["rho*v", "rho*u*v", "rho*v^2 + rho^gamma*S"]).with_source("T2", "1"),
    );
    v.push(
        entry(
            "eT3",
            EV,
            ANY,
            "center of mass x",
            &["rho*(t*u - x)", "rho*u*(t*u - x) + t*rho^gamma*S", "rho*v*(t*u - x)"],
        )
        .with_source("T3", "1"),
    );
    v.push(
        entry(
            "eT4",
            EV,
            ANY,
            "center of mass y",
            &["rho*(t*v - y)", "rho*u*(t*v - y)", "rho*v*(t*v - y) + t*rho^gamma*S"],
        )
        .with_source("T4", "1"),
    );
    v.push(
        entry(
            "eT5",
            EV,
            ANY,
            "angular momentum",
            &[
                "rho*(u*y - v*x)",
                "rho*u*(u*y - v*x) + y*rho^gamma*S",
                "rho*v*(u*y - v*x) - x*rho^gamma*S",
            ],
        )
        .with_source("T5", "1"),
    );
    v.push(
        entry(
            "eT6",
            EV,
            ANY,
            "energy",
            &[E6, &s(&["u*", E6, " + u*rho^gamma*S"]), &s(&["v*", E6, " + v*rho^gamma*S"])],
        )
        .with_source("T6", "2")
        .with_alternate("printed", &[E6, &s(&["u*", E6]), &s(&["v*", E6])])
        .note("the printed fluxes omit the pressure work u p, v p"),
    );
    let e7 = s(&["(2*t*", XV, " - (x^2 + y^2) - (u^2 + v^2)*t^2)"]);
    v.push(
        entry(
            "eT7",
            EV,
            Scope::gamma_two(),
            "projective conservation law at gamma = 2",
            &[
                &s(&["rho*(2*t*", XV, " - (x^2 + y^2) - t^2*(u^2 + v^2 + 2*rho*S))"]),
                &s(&["rho*(u*", &e7, " - 2*t*rho*S*(2*t*u - x))"]),
                &s(&["rho*(v*", &e7, " - 2*t*rho*S*(2*t*v - y))"]),
            ],
        )
        .with_source("T7", "-1"),
    );
    let e8 = s(&["(t*(u^2 + v^2) - ", XV, ")"]);
    v.push(
        entry(
            "eT8",
            EV,
            Scope::isentropic_gamma_two(),
            "dilation conservation law at gamma = 2",
            &[
                &s(&["rho*(", &e8, " + 2*t*rho*S)"]),
                &s(&["rho*(u*", &e8, " + (4*t*u - x)*rho*S)"]),
                &s(&["rho*(v*", &e8, " + (4*t*v - y)*rho*S)"]),
            ],
        )
        .with_source("T8t", "-3"),
    );
    v.push(
        entry(
            "eTh",
            EV,
            ISO,
            "relabeling conservation law (vorticity)",
            &[
                "2*(gamma-1)*(u*h_y - v*h_x)",
                "(gamma-1)*((u^2 - v^2)*h_y - 2*u*v*h_x) + 2*gamma*rho^(gamma-1)*h_y*S",
                "(gamma-1)*((u^2 - v^2)*h_x + 2*u*v*h_y) - 2*gamma*rho^(gamma-1)*h_x*S",
            ],
        )
        .with_source("Th", "1"),
    );
    v.push(
        entry(
            "eT8-noniso",
            EV,
            GEN,
            "dilation conservation law, nonisentropic",
            &[
                &s(&["(gamma-2)*(psi2_y*u - psi2_x*v) - (rho*", &e8, " + 2/(gamma-1)*t*rho^gamma*S)"]),
                &s(&[
                    "-(rho^gamma*S*(2*gamma/(gamma-1)*t*u - x) + rho*u*",
                    &e8,
                    ") + (gamma-2)/2*(psi2_y*(u^2 - v^2 + 2*gamma/(gamma-1)*rho^(gamma-1)*S) - 2*psi2_x*u*v)",
                ]),
                &s(&[
                    "-(rho^gamma*S*(2*gamma/(gamma-1)*t*v - y) + rho*v*",
                    &e8,
                    ") + (gamma-2)/2*(psi2_x*(u^2 - v^2 - 2*gamma/(gamma-1)*rho^(gamma-1)*S) + 2*psi2_y*u*v)",
                ]),
            ],
        )
        .with_source("T8", "1")
        .note("no factor rho multiplies the time component's psi2 terms because rho J = 1"),
    );
    v.push(
        entry(
            "eTF",
            EV,
            GEN,
            "entropy relabeling conservation law",
            &[
                "2*F'*(S_y*u - S_x*v)",
                "F'*((u^2 - v^2)*S_y - 2*S_x*u*v + 2*gamma/(gamma-1)*rho^(gamma-1)*S*S_y)",
                "F'*((u^2 - v^2)*S_x + 2*S_y*u*v - 2*gamma/(gamma-1)*rho^(gamma-1)*S*S_x)",
            ],
        )
        .with_source("TF", "1/2"),
    );

    // determining constraints, each component is an expression equal to zero
    v.push(
        entry(
            "C-classifying",
            Constraint,
            ANY,
            "classifying equation for the relabeling function",
            &["h_xi*S_eta - (h_eta - 2*gamma*c9*xi)*S_xi - 2*gamma*c10*S", "c7*(gamma-2)"],
        ),
    );
    v.push(entry(
        "C-divergence-iso",
        Constraint,
        ISO,
        "divergence symmetry condition, isentropic",
        &["c9 - (gamma-2)/(2*(2*gamma-1))*c8"],
    ));
    v.push(entry(
        "C-divergence-noniso",
        Constraint,
        GEN,
        "divergence symmetry condition, nonisentropic",
        &["(2*gamma-1)*c9 + ct10"],
    ));
    v.push(entry(
        "C-c10-shift",
        Constraint,
        GEN,
        "shift of the space dilation parameter",
        &["c10 - (gamma-2)/2*c8 - ct10"],
    ));
    v.push(
        entry(
            "C-b1-iso",
            Constraint,
            ISO,
            "certificate time component, isentropic",
            &["c3*phi1 + c4*phi2 + c7/(gamma*(gamma-1))*(phi1^2 + phi2^2)"],
        )
        .note("coincides with the nonisentropic form at gamma = 2"),
    );
    v.push(entry(
        "C-b1-noniso",
        Constraint,
        GEN,
        "certificate time component, nonisentropic",
        &["c3*phi1 + c4*phi2 + c7/(2*(gamma-1))*(phi1^2 + phi2^2)"],
    ));
    v
}
