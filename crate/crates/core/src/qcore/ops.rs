use super::linalg::CMatrix;
use super::state::DensityMatrix;
use crate::error::{Error, Result};

/// Kronecker product of two operators.
pub fn tensor_matrix(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::from_raw(tensor_matrix(a.matrix(), b.matrix()))
}

fn check_dims(m: &CMatrix, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if !m.is_square() || total != m.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {:?} (product {}) do not match a {}x{} operator",
            dims,
            total,
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Mixed-radix digits of `index` in `dims` (most significant first).
fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

fn compose(digits: &[usize], dims: &[usize], pick: impl Iterator<Item = usize>) -> usize {
    let mut idx = 0;
    for k in pick {
        idx = idx * dims[k] + digits[k];
    }
    idx
}

/// Trace out every subsystem not in `keep`. Kept subsystems stay in their
/// original order regardless of the order of `keep`.
pub fn partial_trace_matrix(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    check_dims(m, dims)?;
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() {
            return Err(Error::IndexOutOfRange {
                what: "subsystem list",
                index: k,
                size: dims.len(),
            });
        }
        kept[k] = true;
    }
    let keep_idx: Vec<usize> = (0..dims.len()).filter(|&k| kept[k]).collect();
    let gone_idx: Vec<usize> = (0..dims.len()).filter(|&k| !kept[k]).collect();
    if gone_idx.is_empty() {
        return Ok(m.clone());
    }
    let dk: usize = keep_idx.iter().map(|&k| dims[k]).product();
    let n = m.nrows();
    let mut out = CMatrix::zeros(dk, dk);
    let mut di = vec![0; dims.len()];
    let mut dj = vec![0; dims.len()];
    for i in 0..n {
        digits(i, dims, &mut di);
        let ri = compose(&di, dims, keep_idx.iter().copied());
        let ti = compose(&di, dims, gone_idx.iter().copied());
        for j in 0..n {
            digits(j, dims, &mut dj);
            if compose(&dj, dims, gone_idx.iter().copied()) != ti {
                continue;
            }
            let rj = compose(&dj, dims, keep_idx.iter().copied());
            out[(ri, rj)] += m[(i, j)];
        }
    }
    Ok(out)
}

pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_raw(partial_trace_matrix(
        rho.matrix(),
        dims,
        keep,
    )?))
}

/// Reorder tensor factors: output factor `k` is input factor `order[k]`.
pub fn permute_subsystems(m: &CMatrix, dims: &[usize], order: &[usize]) -> Result<CMatrix> {
    check_dims(m, dims)?;
    let mut seen = vec![false; dims.len()];
    if order.len() != dims.len() {
        return Err(Error::InvalidArgument(format!(
            "permutation {:?} of {} subsystems",
            order,
            dims.len()
        )));
    }
    for &o in order {
        if o >= dims.len() || seen[o] {
            return Err(Error::InvalidArgument(format!("{order:?} is not a permutation")));
        }
        seen[o] = true;
    }
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let n = m.nrows();
    let mut map = vec![0; n];
    let mut d = vec![0; dims.len()];
    let mut nd = vec![0; dims.len()];
    for (i, slot) in map.iter_mut().enumerate() {
        digits(i, dims, &mut d);
        for (k, &o) in order.iter().enumerate() {
            nd[k] = d[o];
        }
        *slot = compose(&nd, &new_dims, 0..dims.len());
    }
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    Ok(out)
}
