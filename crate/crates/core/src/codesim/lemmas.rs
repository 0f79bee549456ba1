//! Numerical checks of the operator and classical lemmas used by the
//! decoders.

use serde::Serialize;

use super::pgm::pgm_matrices;
use crate::error::{Error, Result};
use crate::osentropy::{dh_classical, Optimizer};
use crate::qcore::linalg::{self, CMatrix};
use crate::qcore::{DensityMatrix, PovmElement};

/// `min eig([2(I − Π_m) + 4 Σ_{m'≠m} Π_{m'}] − [I − Λ_m])` with `Λ` the PGM
/// of `pis`. Nonnegative when the operator inequality holds.
pub fn hn_check(pis: &[PovmElement], m: usize) -> Result<f64> {
    let Some(first) = pis.first() else {
        return Err(Error::InvalidArgument("empty POVM list".into()));
    };
    if m >= pis.len() {
        return Err(Error::IndexOutOfRange {
            what: "POVM element",
            index: m,
            size: pis.len(),
        });
    }
    let n = first.dim();
    if pis.iter().any(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch("POVM elements of different dimension".into()));
    }
    let mats: Vec<CMatrix> = pis.iter().map(|p| p.matrix().clone()).collect();
    let dec = pgm_matrices(n, &mats);
    let id = linalg::identity(n);
    let mut rhs = (&id - &mats[m]) * linalg::c(2.0);
    for (k, p) in mats.iter().enumerate() {
        if k != m {
            rhs += p * linalg::c(4.0);
        }
    }
    let lhs = &id - &dec.outcomes[m];
    Ok(linalg::min_eigenvalue(&linalg::hermitize(&(rhs - lhs))))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GentleCheck {
    pub accept_prob: f64,
    /// `‖ρ − Λ^{1/2} ρ Λ^{1/2}‖₁`.
    pub distance: f64,
    /// `2 √(1 − Tr[Λρ])`.
    pub bound: f64,
}

impl GentleCheck {
    pub fn slack(&self) -> f64 {
        self.bound - self.distance
    }
}

pub fn gentle_check(lambda: &PovmElement, rho: &DensityMatrix) -> Result<GentleCheck> {
    if lambda.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", lambda.dim(), rho.dim())));
    }
    let s = linalg::psd_sqrt(lambda.matrix());
    let post = &s * rho.matrix() * &s;
    let accept_prob = linalg::trace_re(&post).clamp(0.0, 1.0);
    let distance = linalg::trace_norm(&linalg::hermitize(&(rho.matrix() - post)));
    Ok(GentleCheck {
        accept_prob,
        distance,
        bound: 2.0 * (1.0 - accept_prob).max(0.0).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypicalityReport {
    /// `f(x) = max_i min_j f_ij(x)`.
    pub f: Vec<f64>,
    /// Per `i`: `(Σ_x p_i f, 1 − Σ_j ε_ij)`.
    pub property1: Vec<(f64, f64)>,
    /// Per `j`: `(Σ_x q_j f, Σ_i 2^{−D_H^{ε_ij}(p_i‖q_j)})`.
    pub property2: Vec<(f64, f64)>,
}

impl TypicalityReport {
    /// Smallest margin by which either property holds.
    pub fn min_slack(&self) -> f64 {
        let a = self.property1.iter().map(|(l, r)| l - r);
        let b = self.property2.iter().map(|(l, r)| r - l);
        a.chain(b).fold(f64::INFINITY, f64::min)
    }
}

/// Union over `i` of the intersection over `j` of the optimal threshold
/// tests for `p_i` against `q_j` at level `ε_ij`.
pub fn classical_typicality_povm(ps: &[Vec<f64>], qs: &[Vec<f64>], eps: &[Vec<f64>]) -> Result<TypicalityReport> {
    let n = ps
        .first()
        .or(qs.first())
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidArgument("no distributions".into()))?;
    if ps.iter().chain(qs).any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch("distributions over different sets".into()));
    }
    if eps.len() != ps.len() || eps.iter().any(|r| r.len() != qs.len()) {
        return Err(Error::DimensionMismatch("eps must be t × l".into()));
    }
    let mut f = vec![0.0; n];
    let mut pow = vec![vec![0.0; qs.len()]; ps.len()];
    for (i, p) in ps.iter().enumerate() {
        let mut inter = vec![1.0; n];
        for (j, q) in qs.iter().enumerate() {
            let e = eps[i][j];
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::InvalidArgument(format!("eps[{i}][{j}] = {e} is not in [0, 1]")));
            }
            // At ε = 1 the empty test is optimal and D_H = +∞.
            let (fij, value) = if e >= 1.0 {
                (vec![0.0; n], f64::INFINITY)
            } else {
                let r = dh_classical(p, q, e)?;
                match r.optimizer {
                    Optimizer::ClassicalTest(t) => (t, r.value),
                    _ => unreachable!("classical solver returns a classical test"),
                }
            };
            pow[i][j] = (-value).exp2();
            for (a, b) in inter.iter_mut().zip(&fij) {
                *a = f64::min(*a, *b);
            }
        }
        for (a, b) in f.iter_mut().zip(&inter) {
            *a = f64::max(*a, *b);
        }
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let property1 = ps
        .iter()
        .enumerate()
        .map(|(i, p)| (dot(p, &f), 1.0 - eps[i].iter().sum::<f64>()))
        .collect();
    let property2 = qs
        .iter()
        .enumerate()
        .map(|(j, q)| (dot(q, &f), (0..ps.len()).map(|i| pow[i][j]).sum()))
        .collect();
    Ok(TypicalityReport { f, property1, property2 })
}
