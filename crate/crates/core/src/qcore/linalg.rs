//! Dense complex linear algebra on small matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigendecomposition of a Hermitian matrix; eigenvalues sorted descending,
/// `vectors` holds the matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> nalgebra::DVectorView<'_, Complex64> {
        self.vectors.column(i)
    }

    /// Rebuild `Σ f(λ_i) v_i v_i†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        self.map_indexed(|_, l| f(l))
    }

    /// Rebuild `Σ f(i, λ_i) v_i v_i†`.
    pub fn map_indexed(&self, f: impl Fn(usize, f64) -> f64) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (i, &l) in self.values.iter().enumerate() {
            let w = f(i, l);
            if w == 0.0 {
                continue;
            }
            let v = self.vectors.column(i);
            out += (&v * v.adjoint()) * Complex64::new(w, 0.0);
        }
        out
    }
}

pub fn zeros(n: usize) -> CMatrix {
    CMatrix::zeros(n, n)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn from_real(rows: &[&[f64]]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| c(rows[i][j]))
}

pub fn diag(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c(values[i]) } else { c(0.0) })
}

/// Largest `|m_ij − conj(m_ji)|`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn check_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let d = hermitian_defect(m);
    if d > tol {
        return Err(Error::NotHermitian(d));
    }
    Ok(())
}

/// `(m + m†) / 2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

pub fn trace_re(m: &CMatrix) -> f64 {
    m.trace().re
}

/// `Re Tr[a b]` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// `Re ⟨v| m |v⟩`.
pub fn expectation(m: &CMatrix, v: nalgebra::DVectorView<'_, Complex64>) -> f64 {
    let mv = m * v;
    v.dotc(&mv).re
}

/// Eigendecomposition of a Hermitian matrix (within 1e-10).
pub fn hermitian_eig(m: &CMatrix) -> Result<Eigen> {
    check_hermitian(m, HERMITIAN_TOL)?;
    Ok(eig_unchecked(m))
}

/// Eigendecomposition of a matrix already known to be Hermitian up to
/// rounding; the input is symmetrized first.
pub(crate) fn eig_unchecked(m: &CMatrix) -> Eigen {
    let n = m.nrows();
    if n == 0 {
        return Eigen {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        };
    }
    if n == 1 {
        return Eigen {
            values: vec![m[(0, 0)].re],
            vectors: identity(1),
        };
    }
    let h = hermitize(m);
    if is_diagonal(&h) {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| h[(b, b)].re.total_cmp(&h[(a, a)].re));
        let values = order.iter().map(|&i| h[(i, i)].re).collect();
        let vectors = CMatrix::from_fn(n, n, |i, j| if order[j] == i { c(1.0) } else { c(0.0) });
        return Eigen { values, vectors };
    }
    let se = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].total_cmp(&se.eigenvalues[a]));
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
    Eigen { values, vectors }
}

fn is_diagonal(m: &CMatrix) -> bool {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)] != Complex64::new(0.0, 0.0) {
                return false;
            }
        }
    }
    true
}

/// Schatten 1-norm: sum of singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone().singular_values().iter().sum()
}

/// Schatten ∞-norm: largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// `‖a − b‖₁` for Hermitian `a`, `b`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "trace distance between {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    check_hermitian(a, HERMITIAN_TOL)?;
    check_hermitian(b, HERMITIAN_TOL)?;
    let e = eig_unchecked(&(a - b));
    Ok(e.values.iter().map(|l| l.abs()).sum())
}

/// Square root of a PSD matrix; negative rounding noise is clipped.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    eig_unchecked(m).map(|l| l.max(0.0).sqrt())
}

/// Inverse square root on the support (eigenvalues above `tol`) together
/// with the projector onto that support.
pub fn psd_inv_sqrt_on_support(m: &CMatrix, tol: f64) -> (CMatrix, CMatrix) {
    let e = eig_unchecked(m);
    let scale = e.values.first().copied().unwrap_or(0.0).abs().max(1.0);
    let cut = tol * scale;
    let inv = e.map(|l| if l > cut { 1.0 / l.sqrt() } else { 0.0 });
    let proj = e.map(|l| if l > cut { 1.0 } else { 0.0 });
    (inv, proj)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    eig_unchecked(m).values.last().copied().unwrap_or(0.0)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
