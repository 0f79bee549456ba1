//! Classical-quantum states and the marginal / split-state builders.

use super::linalg::{self, CMatrix};
use super::ops;
use super::state::{DensityMatrix, Tolerances};
use crate::error::{Error, Result};

/// Row-major mixed-radix indexing of symbol tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleIndexer {
    sizes: Vec<usize>,
}

impl TupleIndexer {
    pub fn new(sizes: &[usize]) -> Self {
        TupleIndexer {
            sizes: sizes.to_vec(),
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of tuples; 1 for the empty product.
    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.sizes.len());
        tuple
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&t, &s)| acc * s + t)
    }

    pub fn checked_index(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.sizes.len() {
            return Err(Error::DimensionMismatch(format!(
                "tuple of length {} for {} factors",
                tuple.len(),
                self.sizes.len()
            )));
        }
        for (&t, &s) in tuple.iter().zip(&self.sizes) {
            if t >= s {
                return Err(Error::IndexOutOfRange {
                    what: "alphabet",
                    index: t,
                    size: s,
                });
            }
        }
        Ok(self.index(tuple))
    }

    pub fn tuple(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for k in (0..self.sizes.len()).rev() {
            out[k] = index % self.sizes[k];
            index /= self.sizes[k];
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(move |i| self.tuple(i))
    }
}

fn check_subset(set: &[usize], c: usize) -> Result<()> {
    let mut seen = vec![false; c];
    for &k in set {
        if k >= c {
            return Err(Error::IndexOutOfRange {
                what: "classical factor list",
                index: k,
                size: c,
            });
        }
        if seen[k] {
            return Err(Error::InvalidPartition(format!("factor {k} repeated in {set:?}")));
        }
        seen[k] = true;
    }
    Ok(())
}

fn project(tuple: &[usize], set: &[usize]) -> Vec<usize> {
    set.iter().map(|&k| tuple[k]).collect()
}

fn validate_probs(probs: &[f64], len: usize, tol: f64) -> Result<()> {
    if probs.len() != len {
        return Err(Error::InvalidDistribution(format!(
            "{} probabilities for {} tuples",
            probs.len(),
            len
        )));
    }
    if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
        return Err(Error::InvalidDistribution(format!("entry {p} is not a probability")));
    }
    let s: f64 = probs.iter().sum();
    if (s - 1.0).abs() > tol {
        return Err(Error::InvalidDistribution(format!("probabilities sum to {s}")));
    }
    Ok(())
}

/// Probability table over a product of finite alphabets.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    alphabets: Vec<usize>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(alphabets: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerances(alphabets, probs, &Tolerances::default())
    }

    pub fn with_tolerances(alphabets: Vec<usize>, probs: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if alphabets.contains(&0) {
            return Err(Error::InvalidDistribution("empty alphabet".into()));
        }
        validate_probs(&probs, alphabets.iter().product(), tol.probability)?;
        Ok(JointDistribution { alphabets, probs })
    }

    /// Product of independent factors.
    pub fn product(factors: &[Vec<f64>]) -> Result<Self> {
        let alphabets: Vec<usize> = factors.iter().map(|f| f.len()).collect();
        let ix = TupleIndexer::new(&alphabets);
        let probs = ix
            .iter()
            .map(|t| t.iter().enumerate().map(|(k, &s)| factors[k][s]).product())
            .collect();
        JointDistribution::new(alphabets, probs)
    }

    pub fn alphabets(&self) -> &[usize] {
        &self.alphabets
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn indexer(&self) -> TupleIndexer {
        TupleIndexer::new(&self.alphabets)
    }

    pub fn prob(&self, tuple: &[usize]) -> f64 {
        self.probs[self.indexer().index(tuple)]
    }

    /// Marginal on the factors `set`, in the order given.
    pub fn marginal(&self, set: &[usize]) -> Result<JointDistribution> {
        check_subset(set, self.alphabets.len())?;
        let sizes: Vec<usize> = set.iter().map(|&k| self.alphabets[k]).collect();
        let out_ix = TupleIndexer::new(&sizes);
        let mut probs = vec![0.0; out_ix.len()];
        for (i, t) in self.indexer().iter().enumerate() {
            probs[out_ix.index(&project(&t, set))] += self.probs[i];
        }
        Ok(JointDistribution {
            alphabets: sizes,
            probs,
        })
    }
}

/// `Σ_x p(x) |x⟩⟨x| ⊗ ρ_x`, stored factored.
#[derive(Clone, Debug, PartialEq)]
pub struct CqState {
    alphabets: Vec<usize>,
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
    qdims: Vec<usize>,
}

impl CqState {
    /// `qdims` is the tensor factorization of the quantum register.
    pub fn new(
        alphabets: Vec<usize>,
        probs: Vec<f64>,
        states: Vec<DensityMatrix>,
        qdims: Vec<usize>,
    ) -> Result<Self> {
        Self::with_tolerances(alphabets, probs, states, qdims, &Tolerances::default())
    }

    pub fn with_tolerances(
        alphabets: Vec<usize>,
        probs: Vec<f64>,
        states: Vec<DensityMatrix>,
        qdims: Vec<usize>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if alphabets.contains(&0) {
            return Err(Error::InvalidDistribution("empty alphabet".into()));
        }
        let n: usize = alphabets.iter().product();
        validate_probs(&probs, n, tol.probability)?;
        if states.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} states for {} symbol tuples",
                states.len(),
                n
            )));
        }
        let d: usize = qdims.iter().product();
        if let Some(s) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {} in a cq-state with quantum dims {:?}",
                s.dim(),
                qdims
            )));
        }
        Ok(CqState {
            alphabets,
            probs,
            states,
            qdims,
        })
    }

    pub(crate) fn from_parts(
        alphabets: Vec<usize>,
        probs: Vec<f64>,
        states: Vec<DensityMatrix>,
        qdims: Vec<usize>,
    ) -> Self {
        CqState {
            alphabets,
            probs,
            states,
            qdims,
        }
    }

    /// A purely quantum state (no classical factors).
    pub fn quantum(rho: DensityMatrix, qdims: Vec<usize>) -> Result<Self> {
        CqState::new(Vec::new(), vec![1.0], vec![rho], qdims)
    }

    /// A purely classical state (trivial quantum register).
    pub fn classical(dist: &JointDistribution) -> Self {
        let one = DensityMatrix::from_raw(linalg::identity(1));
        CqState {
            alphabets: dist.alphabets.clone(),
            probs: dist.probs.clone(),
            states: vec![one; dist.probs.len()],
            qdims: Vec::new(),
        }
    }

    pub fn alphabets(&self) -> &[usize] {
        &self.alphabets
    }

    pub fn num_classical(&self) -> usize {
        self.alphabets.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn qdims(&self) -> &[usize] {
        &self.qdims
    }

    pub fn qdim(&self) -> usize {
        self.qdims.iter().product()
    }

    pub fn indexer(&self) -> TupleIndexer {
        TupleIndexer::new(&self.alphabets)
    }

    pub fn distribution(&self) -> JointDistribution {
        JointDistribution {
            alphabets: self.alphabets.clone(),
            probs: self.probs.clone(),
        }
    }

    /// Dense `Σ p(x) |x⟩⟨x| ⊗ ρ_x`; only sensible at small size.
    pub fn block_operator(&self) -> CMatrix {
        let d = self.qdim();
        let n = self.probs.len();
        let mut out = CMatrix::zeros(n * d, n * d);
        for (x, (p, s)) in self.probs.iter().zip(&self.states).enumerate() {
            if *p == 0.0 {
                continue;
            }
            let block = s.matrix() * linalg::c(*p);
            out.view_mut((x * d, x * d), (d, d)).copy_from(&block);
        }
        out
    }

    /// Average quantum state `Σ p(x) ρ_x`.
    pub fn average_state(&self) -> DensityMatrix {
        let d = self.qdim();
        let mut acc = CMatrix::zeros(d, d);
        for (p, s) in self.probs.iter().zip(&self.states) {
            if *p != 0.0 {
                acc += s.matrix() * linalg::c(*p);
            }
        }
        DensityMatrix::from_raw(acc)
    }

    /// Keep only the quantum factors `keep` (original order preserved).
    pub fn trace_quantum(&self, keep: &[usize]) -> Result<CqState> {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.len() == self.qdims.len() {
            return Ok(self.clone());
        }
        let states = self
            .states
            .iter()
            .map(|s| ops::partial_trace(s, &self.qdims, &keep))
            .collect::<Result<Vec<_>>>()?;
        let qdims = keep
            .iter()
            .map(|&k| self.qdims.get(k).copied())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::IndexOutOfRange {
                what: "quantum factor list",
                index: *keep.last().unwrap_or(&0),
                size: self.qdims.len(),
            })?;
        Ok(CqState {
            alphabets: self.alphabets.clone(),
            probs: self.probs.clone(),
            states,
            qdims,
        })
    }
}

/// Marginal cq-state on the classical factors `set` (in the order given):
/// `p(x_S)` and `ρ_{x_S} = Σ p(x'|x_S) ρ_{x_S x'}`. Symbols with zero mass
/// get the unweighted average over their completions.
pub fn cq_marginal(cq: &CqState, set: &[usize]) -> Result<CqState> {
    let c = cq.num_classical();
    check_subset(set, c)?;
    if set.len() == c && set.iter().enumerate().all(|(i, &k)| i == k) {
        return Ok(cq.clone());
    }
    let sizes: Vec<usize> = set.iter().map(|&k| cq.alphabets[k]).collect();
    let out_ix = TupleIndexer::new(&sizes);
    let d = cq.qdim();
    let m = out_ix.len();
    let mut probs = vec![0.0; m];
    let mut weighted = vec![CMatrix::zeros(d, d); m];
    let mut plain = vec![CMatrix::zeros(d, d); m];
    let mut counts = vec![0usize; m];
    for (i, t) in cq.indexer().iter().enumerate() {
        let j = out_ix.index(&project(&t, set));
        let p = cq.probs[i];
        let s = cq.states[i].matrix();
        probs[j] += p;
        if p != 0.0 {
            weighted[j] += s * linalg::c(p);
        }
        plain[j] += s;
        counts[j] += 1;
    }
    let states = (0..m)
        .map(|j| {
            let mat = if probs[j] > 0.0 {
                &weighted[j] / linalg::c(probs[j])
            } else {
                &plain[j] / linalg::c(counts[j] as f64)
            };
            DensityMatrix::from_raw(linalg::hermitize(&mat))
        })
        .collect();
    Ok(CqState {
        alphabets: sizes,
        probs,
        states,
        qdims: cq.qdims.clone(),
    })
}

/// Roles for a decoupled reference state. Classical factors not listed in
/// `cond`, `left` or `right` are marginalized; quantum factors not listed in
/// `left_quantum` or `right_quantum` are traced out.
///
/// The reference law is `p(x_c) p(x_l|x_c) p(x_r|x_c)` with quantum part
/// `ρ^{QL}_{x_c x_l} ⊗ ρ^{QR}_{x_c x_r}` (factors restored to their
/// original order).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Split {
    pub cond: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub left_quantum: Vec<usize>,
    pub right_quantum: Vec<usize>,
}

impl Split {
    fn classical_support(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .cond
            .iter()
            .chain(&self.left)
            .chain(&self.right)
            .copied()
            .collect();
        v.sort_unstable();
        v
    }

    fn quantum_support(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .left_quantum
            .iter()
            .chain(&self.right_quantum)
            .copied()
            .collect();
        v.sort_unstable();
        v
    }

    fn validate(&self, c: usize, q: usize) -> Result<()> {
        let cl = self.classical_support();
        if cl.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPartition(format!(
                "classical roles overlap: {self:?}"
            )));
        }
        if let Some(&k) = cl.iter().find(|&&k| k >= c) {
            return Err(Error::IndexOutOfRange {
                what: "classical factor list",
                index: k,
                size: c,
            });
        }
        let qu = self.quantum_support();
        if qu.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPartition(format!(
                "quantum roles overlap: {self:?}"
            )));
        }
        if let Some(&k) = qu.iter().find(|&&k| k >= q) {
            return Err(Error::IndexOutOfRange {
                what: "quantum factor list",
                index: k,
                size: q,
            });
        }
        Ok(())
    }
}

fn position(sorted: &[usize], k: usize) -> usize {
    sorted.binary_search(&k).expect("factor in support")
}

/// Build the pair `(ρ, σ)` for `I_H(left : right | cond)`: `ρ` is the
/// marginal of `cq` on the listed factors and `σ` the decoupled reference.
/// Both are returned over classical factors in ascending original order.
pub fn split_state_general(cq: &CqState, split: &Split) -> Result<(CqState, CqState)> {
    split.validate(cq.num_classical(), cq.qdims.len())?;
    let ksup = split.classical_support();
    let qsup = split.quantum_support();
    let alpha = cq_marginal(cq, &ksup)?.trace_quantum(&qsup)?;
    if split.left.is_empty() && split.left_quantum.is_empty() {
        return Ok((alpha.clone(), alpha));
    }

    // Positions inside the reduced state.
    let cpos: Vec<usize> = split.cond.iter().map(|&k| position(&ksup, k)).collect();
    let lpos: Vec<usize> = split.left.iter().map(|&k| position(&ksup, k)).collect();
    let rpos: Vec<usize> = split.right.iter().map(|&k| position(&ksup, k)).collect();
    let lq: Vec<usize> = split.left_quantum.iter().map(|&k| position(&qsup, k)).collect();
    let rq: Vec<usize> = split.right_quantum.iter().map(|&k| position(&qsup, k)).collect();

    let cl: Vec<usize> = cpos.iter().chain(&lpos).copied().collect();
    let cr: Vec<usize> = cpos.iter().chain(&rpos).copied().collect();
    let pc = alpha.distribution().marginal(&cpos)?;
    let left = cq_marginal(&alpha, &cl)?.trace_quantum(&lq)?;
    let right = cq_marginal(&alpha, &cr)?.trace_quantum(&rq)?;

    // Tensor order is (left factors, right factors); restore ascending order.
    let mut lq_sorted = lq.clone();
    lq_sorted.sort_unstable();
    let mut rq_sorted = rq.clone();
    rq_sorted.sort_unstable();
    let tensor_order: Vec<usize> = lq_sorted.iter().chain(&rq_sorted).copied().collect();
    let tensor_dims: Vec<usize> = tensor_order.iter().map(|&k| alpha.qdims[k]).collect();
    let order: Vec<usize> = (0..qsup.len())
        .map(|k| tensor_order.iter().position(|&t| t == k).expect("factor present"))
        .collect();
    let identity_order = order.iter().enumerate().all(|(i, &o)| i == o);

    let ix = alpha.indexer();
    let ic = pc.indexer();
    let il = left.indexer();
    let ir = right.indexer();
    let mut probs = Vec::with_capacity(ix.len());
    let mut states = Vec::with_capacity(ix.len());
    for t in ix.iter() {
        let tc = project(&t, &cpos);
        let tl = project(&t, &cl);
        let tr = project(&t, &cr);
        let p_c = pc.probs[ic.index(&tc)];
        let il_idx = il.index(&tl);
        let ir_idx = ir.index(&tr);
        let q = if p_c > 0.0 {
            left.probs[il_idx] * right.probs[ir_idx] / p_c
        } else {
            0.0
        };
        probs.push(q);
        let prod = ops::tensor_matrix(left.states[il_idx].matrix(), right.states[ir_idx].matrix());
        let m = if identity_order {
            prod
        } else {
            ops::permute_subsystems(&prod, &tensor_dims, &order)?
        };
        states.push(DensityMatrix::from_raw(m));
    }
    let beta = CqState {
        alphabets: alpha.alphabets.clone(),
        probs,
        states,
        qdims: alpha.qdims.clone(),
    };
    Ok((alpha, beta))
}

/// `ρ_{(S1,S2,S3)}`: classical law `p(x_{S1}) p(x_{S2}|x_{S1}) p(x_{S3}|x_{S1})`
/// with quantum part `ρ_{x_{S1 ∪ S3}}`. The sets must partition the factors.
pub fn split_state(cq: &CqState, s1: &[usize], s2: &[usize], s3: &[usize]) -> Result<CqState> {
    let c = cq.num_classical();
    let mut all: Vec<usize> = s1.iter().chain(s2).chain(s3).copied().collect();
    all.sort_unstable();
    if all != (0..c).collect::<Vec<_>>() {
        return Err(Error::InvalidPartition(format!(
            "{s1:?}, {s2:?}, {s3:?} do not partition {c} factors"
        )));
    }
    if s2.is_empty() {
        return Ok(cq.clone());
    }
    let split = Split {
        cond: s1.to_vec(),
        left: s2.to_vec(),
        right: s3.to_vec(),
        left_quantum: Vec::new(),
        right_quantum: (0..cq.qdims.len()).collect(),
    };
    Ok(split_state_general(cq, &split)?.1)
}
