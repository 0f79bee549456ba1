//! Desk-scale checks of the coding constructions: random codebooks, PGM
//! decoders over Neyman–Pearson tests, and numerical verification of the
//! operator lemmas and the mutual covering lemma.

pub mod cmge;
pub mod covering;
pub mod lemmas;
pub mod marton;
pub mod pgm;
pub mod suites;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use cmge::{interference_errors, sample_split_codebook, simulate_cmge, CmgeInstance, Decoding, SplitCodebook, SplitRates};
pub use covering::{indicator_pair_weights, mutual_covering_tv};
pub use lemmas::{classical_typicality_povm, gentle_check, hn_check, GentleCheck, TypicalityReport};
pub use marton::{broadcast_error, sample_marton_codebook, simulate_marton, MartonCodebook, MartonInstance, MartonRates};
pub use pgm::{pgm, pgm_matrices, PgmDecoder};
pub use suites::{verify_lemmas, SuiteReport};

use crate::error::{Error, Result};
use crate::osentropy::{dh_block_diagonal, Optimizer};
use crate::qcore::linalg::{self, CMatrix};
use crate::qcore::{split_state_general, CqState, Split, TupleIndexer};

/// Default work budget (roughly floating-point operations).
pub const DEFAULT_BUDGET: f64 = 1e8;

/// Which hypothesis test a receiver's PGM is built from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderPolicy {
    /// `ρ^{W Y}` against `ρ^W ⊗ ρ^Y` over all decoded variables `W`.
    #[default]
    JointTest,
    /// The same test conditioned on the common variable (`U0` or `Q`).
    ConditionalTest,
}

impl DecoderPolicy {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "joint" | "joint-test" => Some(DecoderPolicy::JointTest),
            "conditional" | "conditional-test" => Some(DecoderPolicy::ConditionalTest),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DecoderPolicy::JointTest => "joint",
            DecoderPolicy::ConditionalTest => "conditional",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimOptions {
    pub policy: DecoderPolicy,
    pub parallel: bool,
    pub budget: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            policy: DecoderPolicy::JointTest,
            parallel: true,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Seed of codebook `index`: the first output of the ChaCha stream
/// `index` keyed by `master`. Independent of evaluation order.
pub fn codebook_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

pub(crate) fn sample(rng: &mut impl Rng, weights: &[f64]) -> Result<usize> {
    let w = WeightedIndex::new(weights)
        .map_err(|e| Error::InvalidDistribution(format!("cannot sample from {weights:?}: {e}")))?;
    Ok(w.sample(rng))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Stats {
        let (mut n, mut sum, mut min, mut max) = (0usize, 0.0, f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            n += 1;
            sum += v;
            min = min.min(v);
            max = max.max(v);
        }
        if n == 0 {
            return Stats { mean: 0.0, min: 0.0, max: 0.0 };
        }
        Stats { mean: sum / n as f64, min, max }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodebookResult {
    pub index: u64,
    pub rng_seed: u64,
    pub errors: [f64; 2],
    pub pgm_completeness_defect: f64,
}

/// Simulation report. CSV rows follow [`SimReport::CSV_HEADER`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub kind: &'static str,
    pub rates: serde_json::Value,
    pub eps: f64,
    pub n_codebooks: u64,
    pub seed: u64,
    pub decoder: DecoderPolicy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoding: Option<Decoding>,
    pub receivers: [Stats; 2],
    pub max_pgm_completeness_defect: f64,
    pub codebooks: Vec<CodebookResult>,
}

impl SimReport {
    pub const CSV_HEADER: &'static str = "kind,codebook,rng_seed,error1,error2";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for c in &self.codebooks {
            s.push_str(&format!("{},{},{},{},{}\n", self.kind, c.index, c.rng_seed, c.errors[0], c.errors[1]));
        }
        s
    }
}

/// Run `f` on codebook indices `0..n` in order; parallel runs collect in
/// index order so results do not depend on scheduling.
pub(crate) fn run_codebooks<T: Send>(n: u64, parallel: bool, f: impl Fn(u64) -> Result<T> + Sync) -> Result<Vec<T>> {
    let out: Vec<Result<T>> = if parallel {
        (0..n).into_par_iter().map(&f).collect()
    } else {
        (0..n).map(&f).collect()
    };
    out.into_iter().collect()
}

/// One receiver: the per-codeword acceptance operators and the output state
/// for every auxiliary tuple.
#[derive(Clone, Debug)]
pub(crate) struct Receiver {
    /// Ascending classical factors the tests are indexed by.
    support: Vec<usize>,
    support_ix: TupleIndexer,
    tests: Vec<CMatrix>,
    full_ix: TupleIndexer,
    states: Vec<CMatrix>,
    pub dim: usize,
}

impl Receiver {
    /// Tests from `I_H(left : Y | cond)` on output factor `y` at level `eps`.
    pub fn new(cq: &CqState, y: usize, cond: &[usize], left: &[usize], eps: f64) -> Result<Self> {
        let split = Split {
            cond: cond.to_vec(),
            left: left.to_vec(),
            right: Vec::new(),
            left_quantum: Vec::new(),
            right_quantum: vec![y],
        };
        let (alpha, beta) = split_state_general(cq, &split)?;
        let tests = match dh_block_diagonal(&alpha, &beta, eps)?.optimizer {
            Optimizer::BlockTest(t) => t.into_iter().map(|p| p.into_matrix()).collect(),
            _ => unreachable!("block solver returns block tests"),
        };
        let mut support: Vec<usize> = cond.iter().chain(left).copied().collect();
        support.sort_unstable();
        let local = cq.trace_quantum(&[y])?;
        Ok(Receiver {
            support_ix: TupleIndexer::new(alpha.alphabets()),
            support,
            tests,
            full_ix: cq.indexer(),
            dim: local.qdim(),
            states: local.states().iter().map(|s| s.matrix().clone()).collect(),
        })
    }

    pub fn test(&self, full: &[usize]) -> &CMatrix {
        let t: Vec<usize> = self.support.iter().map(|&k| full[k]).collect();
        &self.tests[self.support_ix.index(&t)]
    }

    pub fn state(&self, full: &[usize]) -> &CMatrix {
        &self.states[self.full_ix.index(full)]
    }
}

pub(crate) fn check_budget(what: &'static str, needed: f64, budget: f64) -> Result<()> {
    if needed > budget {
        Err(Error::Budget { what: what.into(), needed, budget })
    } else {
        Ok(())
    }
}

/// `Tr[Λ ρ]` over real parts.
pub(crate) fn success(lambda: &CMatrix, rho: &CMatrix) -> f64 {
    linalg::trace_product(lambda, rho)
}

/// Position of each name in `names`, as a model-level error when absent.
pub(crate) fn positions(names: &[String], wanted: &[&str], field: &str) -> Result<Vec<usize>> {
    wanted
        .iter()
        .map(|w| {
            names
                .iter()
                .position(|n| n == w)
                .ok_or_else(|| Error::model(field, format!("missing variable `{w}`")))
        })
        .collect()
}
