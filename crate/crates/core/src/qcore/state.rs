use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::{self, CMatrix};
use crate::error::{Error, Result};

/// Numerical tolerances used by every validating constructor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub hermitian: f64,
    pub psd: f64,
    /// Normalization slack for probability vectors built in-process.
    pub probability: f64,
    /// Normalization slack accepted when reading a model file.
    pub model_probability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: 1e-10,
            psd: 1e-9,
            probability: 1e-12,
            model_probability: 1e-9,
        }
    }
}

/// Hermitian PSD unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerances(m, &Tolerances::default())
    }

    pub fn with_tolerances(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        linalg::check_hermitian(&m, tol.hermitian)?;
        if m.nrows() == 0 {
            return Err(Error::InvalidState("zero-dimensional matrix".into()));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol.psd || tr.im.abs() > tol.psd {
            return Err(Error::InvalidState(format!("trace {} is not 1", tr)));
        }
        let min = linalg::min_eigenvalue(&m);
        if min < -tol.psd {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix {
            m: linalg::hermitize(&m),
        })
    }

    /// Wrap a matrix that is known to satisfy the invariants.
    pub(crate) fn from_raw(m: CMatrix) -> Self {
        DensityMatrix { m }
    }

    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v = v / Complex64::new(n, 0.0);
        Ok(DensityMatrix {
            m: &v * v.adjoint(),
        })
    }

    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::IndexOutOfRange {
                what: "basis vector",
                index: i,
                size: dim,
            });
        }
        let mut p = vec![0.0; dim];
        p[i] = 1.0;
        Ok(DensityMatrix {
            m: linalg::diag(&p),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            m: linalg::identity(dim) * linalg::c(1.0 / dim as f64),
        }
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        DensityMatrix::new(linalg::diag(probs))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eig_unchecked(&self.m).values
    }

    /// `Tr[ρ Π]`.
    pub fn expectation(&self, op: &CMatrix) -> f64 {
        linalg::trace_product(&self.m, op)
    }
}

/// Hermitian operator with spectrum in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PovmElement {
    m: CMatrix,
}

impl PovmElement {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerances(m, &Tolerances::default())
    }

    pub fn with_tolerances(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        linalg::check_hermitian(&m, tol.hermitian).map_err(|e| match e {
            Error::NotHermitian(d) => Error::InvalidPovm(format!("not Hermitian ({d:e})")),
            other => other,
        })?;
        let e = linalg::eig_unchecked(&m);
        if let (Some(&hi), Some(&lo)) = (e.values.first(), e.values.last()) {
            if lo < -tol.psd || hi > 1.0 + tol.psd {
                return Err(Error::InvalidPovm(format!(
                    "spectrum [{lo:e}, {hi:e}] leaves [0, 1]"
                )));
            }
        }
        Ok(PovmElement {
            m: linalg::hermitize(&m),
        })
    }

    pub(crate) fn from_raw(m: CMatrix) -> Self {
        PovmElement { m }
    }

    pub fn identity(dim: usize) -> Self {
        PovmElement {
            m: linalg::identity(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        PovmElement {
            m: linalg::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }
}
