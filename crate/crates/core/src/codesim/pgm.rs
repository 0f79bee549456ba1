//! Pretty good measurement.

use crate::qcore::linalg::{self, CMatrix};
use crate::qcore::PovmElement;

/// Eigenvalues of `Σ Π` below this (relative to the largest) are outside
/// the support.
pub const SUPPORT_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct PgmDecoder {
    /// `Λ_m = S^{-1/2} Π_m S^{-1/2}` with `S = Σ Π_m` inverted on its support.
    pub outcomes: Vec<CMatrix>,
    /// `I` minus the support projector of `S`.
    pub abort: CMatrix,
    pub sources: Vec<CMatrix>,
}

impl PgmDecoder {
    pub fn dim(&self) -> usize {
        self.abort.nrows()
    }

    /// `max |Σ Λ + abort − I|` entrywise.
    pub fn completeness_defect(&self) -> f64 {
        let n = self.dim();
        let mut s = self.abort.clone();
        for l in &self.outcomes {
            s += l;
        }
        linalg::max_abs_diff(&s, &linalg::identity(n))
    }

    pub fn outcome_elements(&self) -> Vec<PovmElement> {
        self.outcomes.iter().cloned().map(PovmElement::from_raw).collect()
    }
}

pub fn pgm_matrices(dim: usize, pis: &[CMatrix]) -> PgmDecoder {
    let mut s = linalg::zeros(dim);
    for p in pis {
        s += p;
    }
    let (inv, proj) = linalg::psd_inv_sqrt_on_support(&s, SUPPORT_TOL);
    let mut outcomes: Vec<CMatrix> = pis.iter().map(|p| linalg::hermitize(&(&inv * p * &inv))).collect();
    // Near-singular directions of `S` amplify rounding; scale back so that
    // `Σ Λ ≤ I` holds and the decoder stays a valid measurement.
    let mut total = linalg::zeros(dim);
    for l in &outcomes {
        total += l;
    }
    let top = -linalg::min_eigenvalue(&(-total));
    if top > 1.0 {
        let k = linalg::c(1.0 / top);
        outcomes.iter_mut().for_each(|l| *l *= k);
    }
    PgmDecoder {
        outcomes,
        abort: linalg::identity(dim) - proj,
        sources: pis.to_vec(),
    }
}

/// PGM over POVM elements of dimension `dim`; an empty list gives the
/// all-abort decoder.
pub fn pgm(dim: usize, pis: &[PovmElement]) -> PgmDecoder {
    let m: Vec<CMatrix> = pis.iter().map(|p| p.matrix().clone()).collect();
    pgm_matrices(dim, &m)
}
