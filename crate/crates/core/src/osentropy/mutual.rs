use super::quantum::{dh_block_diagonal, dh_quantum};
use super::EntropyResult;
use crate::error::{Error, Result};
use crate::qcore::{ops, split_state, split_state_general, CqState, DensityMatrix, Split};

/// `I_H^ε(A : B) = D_H^ε(ρ^{AB} ‖ ρ^A ⊗ ρ^B)`.
pub fn ih_mutual(rho: &DensityMatrix, dims: (usize, usize), eps: f64) -> Result<EntropyResult> {
    let d = [dims.0, dims.1];
    let a = ops::partial_trace(rho, &d, &[0])?;
    let b = ops::partial_trace(rho, &d, &[1])?;
    dh_quantum(rho, &ops::tensor(&a, &b), eps)
}

/// `I_H^ε(B : C | A)` for a cq-state classical on `A` (all classical
/// factors) whose quantum register factors as `B ⊗ C`.
pub fn ih_conditional(cq: &CqState, eps: f64) -> Result<EntropyResult> {
    if cq.qdims().len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "conditional mutual information needs a B⊗C register, got dims {:?}",
            cq.qdims()
        )));
    }
    let split = Split {
        cond: (0..cq.num_classical()).collect(),
        left_quantum: vec![0],
        right_quantum: vec![1],
        ..Split::default()
    };
    ih_split_general(cq, &split, eps)
}

/// `I_H^ε(X_{S2} : A X_{S3} | X_{S1})`, measured against `ρ_{(S1,S2,S3)}`.
pub fn ih_split(cq: &CqState, s1: &[usize], s2: &[usize], s3: &[usize], eps: f64) -> Result<EntropyResult> {
    let beta = split_state(cq, s1, s2, s3)?;
    dh_block_diagonal(cq, &beta, eps)
}

/// `I_H^ε(left : right | cond)` where either side may hold classical
/// factors and quantum factors.
pub fn ih_split_general(cq: &CqState, split: &Split, eps: f64) -> Result<EntropyResult> {
    let (alpha, beta) = split_state_general(cq, split)?;
    dh_block_diagonal(&alpha, &beta, eps)
}
