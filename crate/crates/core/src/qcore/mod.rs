//! State algebra: density matrices, POVM elements, cq-states and channels.

pub mod channel;
pub mod cq;
pub mod linalg;
pub mod model;
pub mod ops;
pub mod random;
pub mod state;

pub use channel::{channel_joint, CqChannel, Encoders};
pub use cq::{cq_marginal, split_state, split_state_general, CqState, JointDistribution, Split, TupleIndexer};
pub use linalg::{hermitian_eig, trace_distance, CMatrix, Eigen};
pub use ops::{partial_trace, partial_trace_matrix, permute_subsystems, tensor, tensor_matrix};
pub use state::{DensityMatrix, PovmElement, Tolerances};
