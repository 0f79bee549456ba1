//! The pre-elimination systems and the theorem statements as symbolic rows.
//! Every `I_H` row carries the slack `−2 − log(1/ε)`.

use super::system::{RateInequality, RateInequalitySystem};

pub mod marton {
    pub const IH_U0U1_Y1: &str = "IH(U0U1:Y1)";
    pub const IH_U0U2_Y2: &str = "IH(U0U2:Y2)";
    pub const IH_U1_Y1_U0: &str = "IH(U1:Y1|U0)";
    pub const IH_U2_Y2_U0: &str = "IH(U2:Y2|U0)";
    pub const IMAX: &str = "Imax(U1:U2|U0)";
}

pub mod cmge {
    pub const A: &str = "IH(X1:Y1|U1U2Q)";
    pub const B: &str = "IH(X1:Y1|U2Q)";
    pub const C: &str = "IH(X1U2:Y1|U1Q)";
    pub const D: &str = "IH(X1U2:Y1|Q)";
    pub const E: &str = "IH(X2:Y2|U1U2Q)";
    pub const F: &str = "IH(X2:Y2|U1Q)";
    pub const G: &str = "IH(X2U1:Y2|U2Q)";
    pub const H: &str = "IH(X2U1:Y2|Q)";
    pub const R1P: &str = "R'1";
    pub const R2P: &str = "R'2";
}

pub mod hkea {
    pub const R1P: &str = "R'1";
    pub const R1PP: &str = "R''1";
    pub const R2P: &str = "R'2";
    pub const R2PP: &str = "R''2";
}

fn ih_row(label: &str) -> RateInequality {
    RateInequality::new(label).slack(-2, -1)
}

/// Four `I_H` rows over `{R0, R1, R2, r1, r2}`, the equality
/// `r1 + r2 = I_∞ + 2 log(1/ε)` and the nonnegativity of `r1`, `r2`.
pub fn marton_pre_system() -> RateInequalitySystem {
    use marton::*;
    let mut sys = RateInequalitySystem::new(&["R0", "R1", "R2", "r1", "r2"]);
    sys.push(ih_row("marton.1").coeff("R0", 1).coeff("R1", 1).coeff("r1", 1).term(IH_U0U1_Y1, 1));
    sys.push(ih_row("marton.2").coeff("R0", 1).coeff("R2", 1).coeff("r2", 1).term(IH_U0U2_Y2, 1));
    sys.push(ih_row("marton.3").coeff("R1", 1).coeff("r1", 1).term(IH_U1_Y1_U0, 1));
    sys.push(ih_row("marton.4").coeff("R2", 1).coeff("r2", 1).term(IH_U2_Y2_U0, 1));
    sys.equalities.push(marton_equality());
    sys.nonnegative("r1");
    sys.nonnegative("r2");
    sys
}

pub fn marton_equality() -> RateInequality {
    RateInequality::new("marton.eq")
        .coeff("r1", 1)
        .coeff("r2", 1)
        .term(marton::IMAX, 1)
        .slack(0, 2)
}

/// The five rows of the Marton theorem statement.
pub fn marton_theorem() -> RateInequalitySystem {
    use marton::*;
    let mut sys = RateInequalitySystem::new(&["R0", "R1", "R2"]);
    sys.push(ih_row("theorem.1").coeff("R0", 1).coeff("R1", 1).term(IH_U0U1_Y1, 1));
    sys.push(ih_row("theorem.2").coeff("R0", 1).coeff("R2", 1).term(IH_U0U2_Y2, 1));
    sys.push(
        RateInequality::new("theorem.3")
            .coeff("R0", 1)
            .coeff("R1", 1)
            .coeff("R2", 1)
            .term(IH_U0U2_Y2, 1)
            .term(IH_U1_Y1_U0, 1)
            .term(IMAX, -1)
            .slack(-4, -4),
    );
    sys.push(
        RateInequality::new("theorem.4")
            .coeff("R0", 1)
            .coeff("R1", 1)
            .coeff("R2", 1)
            .term(IH_U0U1_Y1, 1)
            .term(IH_U2_Y2_U0, 1)
            .term(IMAX, -1)
            .slack(-4, -4),
    );
    sys.push(
        RateInequality::new("theorem.5")
            .coeff("R0", 2)
            .coeff("R1", 1)
            .coeff("R2", 1)
            .term(IH_U0U1_Y1, 1)
            .term(IH_U0U2_Y2, 1)
            .term(IMAX, -1)
            .slack(-4, -4),
    );
    sys
}

/// Eight `I_H` rows over `{R1, R2, R'1, R'2}` and the split bounds
/// `0 ≤ R'1 ≤ R1`, `0 ≤ R'2 ≤ R2`.
pub fn cmge_pre_system() -> RateInequalitySystem {
    use cmge::*;
    let mut sys = RateInequalitySystem::new(&["R1", "R2", R1P, R2P]);
    sys.push(ih_row("cmge.1").coeff("R1", 1).coeff(R1P, -1).term(A, 1));
    sys.push(ih_row("cmge.2").coeff("R1", 1).term(B, 1));
    sys.push(ih_row("cmge.3").coeff("R1", 1).coeff(R1P, -1).coeff(R2P, 1).term(C, 1));
    sys.push(ih_row("cmge.4").coeff("R1", 1).coeff(R2P, 1).term(D, 1));
    sys.push(ih_row("cmge.5").coeff("R2", 1).coeff(R2P, -1).term(E, 1));
    sys.push(ih_row("cmge.6").coeff("R2", 1).term(F, 1));
    sys.push(ih_row("cmge.7").coeff("R2", 1).coeff(R2P, -1).coeff(R1P, 1).term(G, 1));
    sys.push(ih_row("cmge.8").coeff("R2", 1).coeff(R1P, 1).term(H, 1));
    sys.nonnegative(R1P);
    sys.push(RateInequality::new("R'1<=R1").coeff(R1P, 1).coeff("R1", -1));
    sys.nonnegative(R2P);
    sys.push(RateInequality::new("R'2<=R2").coeff(R2P, 1).coeff("R2", -1));
    sys
}

/// The nine rows of the CMGE theorem statement, with the printed slack.
pub fn cmge_theorem() -> RateInequalitySystem {
    use cmge::*;
    let mut sys = RateInequalitySystem::new(&["R1", "R2"]);
    let rows: [(&str, i64, i64, &[&str]); 9] = [
        ("theorem.1", 1, 0, &[B]),
        ("theorem.2", 1, 0, &[A, G]),
        ("theorem.3", 0, 1, &[F]),
        ("theorem.4", 0, 1, &[E, C]),
        ("theorem.5", 1, 1, &[D, E]),
        ("theorem.6", 1, 1, &[H, A]),
        ("theorem.7", 1, 1, &[C, G]),
        ("theorem.8", 2, 1, &[D, A, G]),
        ("theorem.9", 1, 2, &[H, E, C]),
    ];
    for (label, c1, c2, terms) in rows {
        let mut r = ih_row(label);
        if c1 != 0 {
            r = r.coeff("R1", c1);
        }
        if c2 != 0 {
            r = r.coeff("R2", c2);
        }
        for t in terms {
            r = r.term(t, 1);
        }
        sys.push(r);
    }
    sys
}

/// The twelve rows of the entanglement-assisted Han–Kobayashi theorem over
/// `{R'1, R''1, R'2, R''2}`.
pub fn hk_ea_system() -> RateInequalitySystem {
    use hkea::*;
    let mut sys = RateInequalitySystem::new(&[R1P, R1PP, R2P, R2PP]);
    let rows: [(&[&str], &str); 12] = [
        (&[R1P], "IH(U1:Y1U2Z1|Q)"),
        (&[R1PP], "IH(Z1:Y1U1U2|Q)"),
        (&[R1P, R1PP], "IH(U1Z1:Y1U2|Q)"),
        (&[R1P, R2P], "IH(U1U2:Y1Z1|Q)"),
        (&[R1PP, R2P], "IH(Z1U2:Y1U1|Q)"),
        (&[R1P, R1PP, R2P], "IH(U1U2Z1:Y1|Q)"),
        (&[R2P], "IH(U2:Y2U1Z2|Q)"),
        (&[R2PP], "IH(Z2:Y2U1U2|Q)"),
        (&[R2P, R2PP], "IH(U2Z2:Y2U1|Q)"),
        (&[R1P, R2P], "IH(U1U2:Y2Z2|Q)"),
        (&[R2PP, R1P], "IH(Z2U1:Y2U2|Q)"),
        (&[R2P, R2PP, R1P], "IH(U1U2Z2:Y2|Q)"),
    ];
    for (i, (vars, term)) in rows.iter().enumerate() {
        let mut r = ih_row(&format!("hk-ea.{}", i + 1)).term(term, 1);
        for v in vars.iter() {
            r = r.coeff(v, 1);
        }
        sys.push(r);
    }
    sys
}
