use super::cq::{CqState, JointDistribution, TupleIndexer};
use super::state::DensityMatrix;
use crate::error::{Error, Result};

/// Symbol-indexed channel `x ↦ C(σ_x)` on a product input alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct CqChannel {
    input_alphabets: Vec<usize>,
    outputs: Vec<DensityMatrix>,
    output_dims: Vec<usize>,
}

impl CqChannel {
    /// `outputs` is indexed row-major over `input_alphabets`.
    pub fn new(
        input_alphabets: Vec<usize>,
        outputs: Vec<DensityMatrix>,
        output_dims: Vec<usize>,
    ) -> Result<Self> {
        let ix = TupleIndexer::new(&input_alphabets);
        if outputs.len() != ix.len() {
            let missing = ix.tuple(outputs.len().min(ix.len().saturating_sub(1)));
            return Err(Error::MissingChannelEntry(missing));
        }
        let d: usize = output_dims.iter().product();
        if let Some(o) = outputs.iter().find(|o| o.dim() != d) {
            return Err(Error::DimensionMismatch(format!(
                "channel output of dimension {} but output dims {:?}",
                o.dim(),
                output_dims
            )));
        }
        Ok(CqChannel {
            input_alphabets,
            outputs,
            output_dims,
        })
    }

    /// Build from a partial map; every input tuple must be present.
    pub fn from_fn(
        input_alphabets: Vec<usize>,
        output_dims: Vec<usize>,
        mut f: impl FnMut(&[usize]) -> Option<DensityMatrix>,
    ) -> Result<Self> {
        let ix = TupleIndexer::new(&input_alphabets);
        let outputs = ix
            .iter()
            .map(|t| f(&t).ok_or(Error::MissingChannelEntry(t)))
            .collect::<Result<Vec<_>>>()?;
        CqChannel::new(input_alphabets, outputs, output_dims)
    }

    /// Same output for every input.
    pub fn constant(input_alphabets: Vec<usize>, output: DensityMatrix, output_dims: Vec<usize>) -> Result<Self> {
        let n = TupleIndexer::new(&input_alphabets).len();
        CqChannel::new(input_alphabets, vec![output; n], output_dims)
    }

    pub fn input_alphabets(&self) -> &[usize] {
        &self.input_alphabets
    }

    pub fn output_dims(&self) -> &[usize] {
        &self.output_dims
    }

    pub fn output_dim(&self) -> usize {
        self.output_dims.iter().product()
    }

    pub fn outputs(&self) -> &[DensityMatrix] {
        &self.outputs
    }

    pub fn output(&self, input: &[usize]) -> Result<&DensityMatrix> {
        let ix = TupleIndexer::new(&self.input_alphabets);
        let i = ix
            .checked_index(input)
            .map_err(|_| Error::MissingChannelEntry(input.to_vec()))?;
        Ok(&self.outputs[i])
    }
}

/// Map from auxiliary symbol tuples to channel input tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Encoders {
    /// The auxiliary tuple is the input tuple.
    Identity,
    /// The input tuple is the listed auxiliary factors, in order.
    Project(Vec<usize>),
    /// Explicit table indexed row-major by the auxiliary tuple.
    Table(Vec<Vec<usize>>),
}

impl Encoders {
    pub fn apply(&self, index: usize, tuple: &[usize]) -> Vec<usize> {
        match self {
            Encoders::Identity => tuple.to_vec(),
            Encoders::Project(f) => f.iter().map(|&k| tuple[k]).collect(),
            Encoders::Table(t) => t[index].clone(),
        }
    }
}

/// Joint cq-state with classical part `dist` and quantum part
/// `chan(encoders(u))` at each tuple `u`.
pub fn channel_joint(chan: &CqChannel, dist: &JointDistribution, encoders: &Encoders) -> Result<CqState> {
    let ix = dist.indexer();
    if let Encoders::Table(t) = encoders {
        if t.len() != ix.len() {
            return Err(Error::DimensionMismatch(format!(
                "encoder table has {} entries for {} auxiliary tuples",
                t.len(),
                ix.len()
            )));
        }
    }
    let states = ix
        .iter()
        .enumerate()
        .map(|(i, u)| chan.output(&encoders.apply(i, &u)).cloned())
        .collect::<Result<Vec<_>>>()?;
    Ok(CqState::from_parts(
        dist.alphabets().to_vec(),
        dist.probs().to_vec(),
        states,
        chan.output_dims().to_vec(),
    ))
}
