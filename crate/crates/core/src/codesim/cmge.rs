//! Rate-split superposition codebooks for the interference channel and
//! their exact decoding error under unique and non-unique decoding.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::pgm::pgm_matrices;
use super::{
    check_budget, codebook_seed, positions, run_codebooks, sample, success, CodebookResult, DecoderPolicy, Receiver,
    SimOptions, SimReport, Stats,
};
use crate::error::{Error, Result};
use crate::qcore::linalg::CMatrix;
use crate::qcore::model::Model;
use crate::qcore::{CqState, JointDistribution};

/// Log₂ sizes of the public and private message parts. `R_i` is
/// `public_i + private_i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SplitRates {
    pub public1: u32,
    pub private1: u32,
    pub public2: u32,
    pub private2: u32,
}

impl SplitRates {
    pub fn new(public1: u32, private1: u32, public2: u32, private2: u32) -> Self {
        SplitRates {
            public1,
            private1,
            public2,
            private2,
        }
    }

    fn check(&self) -> Result<()> {
        let total = self.public1 + self.private1 + self.public2 + self.private2;
        if total > 24 {
            return Err(Error::Budget {
                what: "split codebook size".into(),
                needed: 2f64.powi(total as i32),
                budget: 2f64.powi(24),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decoding {
    /// Accept over every candidate of the other sender's public part.
    #[default]
    NonUnique,
    /// Also require the other sender's public part to be correct.
    Unique,
}

impl Decoding {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "non-unique" | "nonunique" => Some(Decoding::NonUnique),
            "unique" => Some(Decoding::Unique),
            _ => None,
        }
    }
}

/// `q`, `u_i(m'_i)` and `x_i(m'_i, m''_i)`; indices are zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitCodebook {
    pub rates: SplitRates,
    pub q: usize,
    pub u1: Vec<usize>,
    pub x1: Vec<Vec<usize>>,
    pub u2: Vec<usize>,
    pub x2: Vec<Vec<usize>>,
    pub rng_seed: u64,
}

/// Conditional law of factor `target` given fixed values of other factors.
fn conditional(dist: &JointDistribution, given: &[(usize, usize)], target: usize) -> Vec<f64> {
    let mut w = vec![0.0; dist.alphabets()[target]];
    for (i, t) in dist.indexer().iter().enumerate() {
        if given.iter().all(|&(k, v)| t[k] == v) {
            w[t[target]] += dist.probs()[i];
        }
    }
    w
}

/// Factors `Q, U1, X1, U2, X2` of `dist` at positions `f`.
fn sample_split(dist: &JointDistribution, f: [usize; 5], rates: SplitRates, seed: u64) -> Result<SplitCodebook> {
    rates.check()?;
    let [fq, fu1, fx1, fu2, fx2] = f;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = sample(&mut rng, &conditional(dist, &[], fq))?;
    let wu1 = conditional(dist, &[(fq, q)], fu1);
    let wu2 = conditional(dist, &[(fq, q)], fu2);
    let u1 = (0..1usize << rates.public1)
        .map(|_| sample(&mut rng, &wu1))
        .collect::<Result<Vec<_>>>()?;
    let x1 = u1
        .iter()
        .map(|&u| {
            let w = conditional(dist, &[(fq, q), (fu1, u)], fx1);
            (0..1usize << rates.private1).map(|_| sample(&mut rng, &w)).collect()
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let u2 = (0..1usize << rates.public2)
        .map(|_| sample(&mut rng, &wu2))
        .collect::<Result<Vec<_>>>()?;
    let x2 = u2
        .iter()
        .map(|&u| {
            let w = conditional(dist, &[(fq, q), (fu2, u)], fx2);
            (0..1usize << rates.private2).map(|_| sample(&mut rng, &w)).collect()
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    Ok(SplitCodebook {
        rates,
        q,
        u1,
        x1,
        u2,
        x2,
        rng_seed: seed,
    })
}

/// Sample a split codebook for `p` over `(Q, U1, X1, U2, X2)`.
pub fn sample_split_codebook(p: &JointDistribution, rates: SplitRates, seed: u64) -> Result<SplitCodebook> {
    if p.alphabets().len() != 5 {
        return Err(Error::InvalidArgument(format!(
            "expected a distribution over (Q, U1, X1, U2, X2), got {} factors",
            p.alphabets().len()
        )));
    }
    sample_split(p, [0, 1, 2, 3, 4], rates, seed)
}

#[derive(Clone, Debug)]
pub struct CmgeInstance {
    dist: JointDistribution,
    /// Positions of `Q, U1, X1, U2, X2` in the model's factor order.
    factors: [usize; 5],
    receivers: [Receiver; 2],
    pub eps: f64,
    pub policy: DecoderPolicy,
}

impl CmgeInstance {
    pub fn new(cq: &CqState, names: &[String], outputs: &[String], eps: f64, policy: DecoderPolicy) -> Result<Self> {
        let f = positions(names, &["Q", "U1", "X1", "U2", "X2"], "names")?;
        let y = positions(outputs, &["Y1", "Y2"], "output_names")?;
        let (q, u1, x1, u2, x2) = (f[0], f[1], f[2], f[3], f[4]);
        // Receiver k decodes (U_k, X_k) together with the other public part.
        let rx = |left: [usize; 3], yk: usize| match policy {
            DecoderPolicy::JointTest => Receiver::new(cq, yk, &[], &[q, left[0], left[1], left[2]], eps),
            DecoderPolicy::ConditionalTest => Receiver::new(cq, yk, &[q], &left, eps),
        };
        Ok(CmgeInstance {
            dist: cq.distribution(),
            factors: [q, u1, x1, u2, x2],
            receivers: [rx([u1, x1, u2], y[0])?, rx([u2, x2, u1], y[1])?],
            eps,
            policy,
        })
    }

    pub fn from_model(model: &Model, eps: f64, policy: DecoderPolicy) -> Result<Self> {
        Self::new(&model.cq_state()?, &model.names, &model.output_names, eps, policy)
    }

    pub fn sample_codebook(&self, rates: SplitRates, seed: u64) -> Result<SplitCodebook> {
        sample_split(&self.dist, self.factors, rates, seed)
    }

    fn full(&self, v: [usize; 5]) -> Vec<usize> {
        let mut t = vec![0; self.dist.alphabets().len()];
        for (k, &pos) in self.factors.iter().enumerate() {
            t[pos] = v[k];
        }
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CmgeErrors {
    pub non_unique: [f64; 2],
    pub unique: [f64; 2],
    pub pgm_completeness_defect: f64,
}

impl CmgeErrors {
    pub fn get(&self, d: Decoding) -> [f64; 2] {
        match d {
            Decoding::NonUnique => self.non_unique,
            Decoding::Unique => self.unique,
        }
    }
}

/// Exact average error of both receivers. Receiver 1's PGM has outcomes
/// `(m'1, m''1, m̃'2)`; non-unique decoding sums the outcomes over `m̃'2`,
/// unique decoding counts only the transmitted `m'2`. Receiver 2 mirrors.
pub fn interference_errors(inst: &CmgeInstance, cb: &SplitCodebook, budget: f64) -> Result<CmgeErrors> {
    let r = cb.rates;
    let sizes = [
        (1usize << r.public1, 1usize << r.private1),
        (1usize << r.public2, 1usize << r.private2),
    ];
    let messages = (sizes[0].0 * sizes[0].1 * sizes[1].0 * sizes[1].1) as f64;
    let mut needed = 0.0;
    for (k, rx) in inst.receivers.iter().enumerate() {
        let d = rx.dim as f64;
        let outcomes = (sizes[k].0 * sizes[k].1 * sizes[1 - k].0) as f64;
        needed += outcomes * d.powi(3) + messages * sizes[1 - k].0 as f64 * d * d;
    }
    check_budget("interference error evaluation", needed, budget)?;

    let mut non_unique = [0.0; 2];
    let mut unique = [0.0; 2];
    let mut defect: f64 = 0.0;
    for (k, rx) in inst.receivers.iter().enumerate() {
        let (own_pub, own_priv) = sizes[k];
        let (other_pub, other_priv) = sizes[1 - k];
        let (own_u, own_x, other_u) = if k == 0 {
            (&cb.u1, &cb.x1, &cb.u2)
        } else {
            (&cb.u2, &cb.x2, &cb.u1)
        };
        // Full tuple for own (m', m'') with the other public index m̃.
        let tuple = |a: usize, b: usize, m: usize, other_x: usize| {
            if k == 0 {
                inst.full([cb.q, own_u[a], own_x[a][b], other_u[m], other_x])
            } else {
                inst.full([cb.q, other_u[m], other_x, own_u[a], own_x[a][b]])
            }
        };
        let idx = |a: usize, b: usize, m: usize| (a * own_priv + b) * other_pub + m;
        let mut pis: Vec<CMatrix> = Vec::with_capacity(own_pub * own_priv * other_pub);
        for a in 0..own_pub {
            for b in 0..own_priv {
                for m in 0..other_pub {
                    pis.push(rx.test(&tuple(a, b, m, 0)).clone());
                }
            }
        }
        let dec = pgm_matrices(rx.dim, &pis);
        defect = defect.max(dec.completeness_defect());
        let other_x = if k == 0 { &cb.x2 } else { &cb.x1 };
        let (mut ok_nu, mut ok_u) = (0.0, 0.0);
        for a in 0..own_pub {
            for b in 0..own_priv {
                for c in 0..other_pub {
                    for e in 0..other_priv {
                        let rho = rx.state(&tuple(a, b, c, other_x[c][e]));
                        for m in 0..other_pub {
                            let s = success(&dec.outcomes[idx(a, b, m)], rho);
                            ok_nu += s;
                            if m == c {
                                ok_u += s;
                            }
                        }
                    }
                }
            }
        }
        non_unique[k] = (1.0 - ok_nu / messages).max(0.0);
        unique[k] = (1.0 - ok_u / messages).max(0.0);
    }
    Ok(CmgeErrors {
        non_unique,
        unique,
        pgm_completeness_defect: defect,
    })
}

pub fn simulate_cmge(
    inst: &CmgeInstance,
    rates: SplitRates,
    decoding: Decoding,
    n_codebooks: u64,
    seed: u64,
    opts: &SimOptions,
) -> Result<SimReport> {
    if n_codebooks == 0 {
        return Err(Error::InvalidArgument("n_codebooks must be at least 1".into()));
    }
    rates.check()?;
    let results = run_codebooks(n_codebooks, opts.parallel, |i| {
        let s = codebook_seed(seed, i);
        let cb = inst.sample_codebook(rates, s)?;
        let e = interference_errors(inst, &cb, opts.budget)?;
        Ok(CodebookResult {
            index: i,
            rng_seed: s,
            errors: e.get(decoding),
            pgm_completeness_defect: e.pgm_completeness_defect,
        })
    })?;
    Ok(SimReport {
        kind: "cmge",
        rates: serde_json::to_value(rates).expect("rates serialize"),
        eps: inst.eps,
        n_codebooks,
        seed,
        decoder: inst.policy,
        decoding: Some(decoding),
        receivers: [
            Stats::of(results.iter().map(|r| r.errors[0])),
            Stats::of(results.iter().map(|r| r.errors[1])),
        ],
        max_pgm_completeness_defect: results.iter().map(|r| r.pgm_completeness_defect).fold(0.0, f64::max),
        codebooks: results,
    })
}
