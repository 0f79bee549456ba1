//! One-shot entropic quantities, all in bits.
//!
//! The hypothesis testing family is solved by Neyman–Pearson structure
//! (sorted likelihood ratios classically, bisection on the Lagrange
//! multiplier quantumly). The smoothed max relative entropy is solved by a
//! piecewise-linear threshold search.

mod classical;
mod mutual;
mod quantum;

pub use classical::{dh_classical, dmax_smooth, imax_conditional, imax_reference};
pub use mutual::{ih_conditional, ih_mutual, ih_split, ih_split_general};
pub use quantum::{dh_block_diagonal, dh_blocks, dh_quantum, dual_bound};

use crate::qcore::PovmElement;

/// Optimal object returned alongside a value.
#[derive(Clone, Debug, PartialEq)]
pub enum Optimizer {
    /// A single POVM element `Π`.
    Test(PovmElement),
    /// A block-diagonal test: one element per classical block. Blocks skipped
    /// because they carry no `α` weight get the zero element.
    BlockTest(Vec<PovmElement>),
    /// Classical test `f(x) ∈ [0, 1]`.
    ClassicalTest(Vec<f64>),
    /// Capped subdistribution `P′ ≤ P`.
    Subdistribution(Vec<f64>),
}

/// Value, optimizer and an independent certificate.
///
/// For the hypothesis testing family the certificate is the dual bound in
/// bits: every feasible test has `−log₂ Tr[Πβ] ≤ certificate`, so the value
/// is tight when the two agree. For `dmax_smooth` it is the unused smoothing
/// budget `ε − ‖P − P′‖₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyResult {
    pub value: f64,
    pub optimizer: Optimizer,
    pub certificate: f64,
}

impl EntropyResult {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

fn check_eps_open(eps: f64) -> crate::Result<()> {
    if !(0.0..1.0).contains(&eps) {
        return Err(crate::Error::InvalidArgument(format!("eps = {eps} is not in [0, 1)")));
    }
    Ok(())
}
