//! One-shot achievable rate regions for classical-quantum broadcast and
//! interference channels.
//!
//! The crate is split into four layers:
//!
//! - [`qcore`]: density matrices, POVM elements, cq-states, symbol-indexed
//!   channels and the marginal / split-state builders.
//! - [`osentropy`]: exact small-dimension solvers for the hypothesis testing
//!   relative entropy family and the smooth max relative entropy family.
//! - [`regions`]: symbolic rate-inequality systems, exact Fourier–Motzkin
//!   elimination and the Marton / CMGE / entanglement-assisted HK regions.
//! - [`codesim`]: random codebooks, pretty good measurement decoders and
//!   numerical checks of the operator lemmas the achievability proofs use.
//!
//! All information quantities are reported in bits.

pub mod codesim;
pub mod error;
pub mod osentropy;
pub mod qcore;
pub mod regions;

pub use error::{Error, Result};
