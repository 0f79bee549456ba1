//! Marton codebooks with a common message and their exact decoding error.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::covering::Conditionals;
use super::pgm::pgm_matrices;
use super::{
    check_budget, codebook_seed, positions, run_codebooks, sample, success, CodebookResult, DecoderPolicy, Receiver,
    SimOptions, SimReport, Stats,
};
use crate::error::{Error, Result};
use crate::qcore::linalg::CMatrix;
use crate::qcore::model::Model;
use crate::qcore::{CqState, JointDistribution};

/// Rates as log₂ sizes: messages `R0, R1, R2` and covering bins `r1, r2`
/// (`bin1`, `bin2`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MartonRates {
    pub r0: u32,
    pub r1: u32,
    pub r2: u32,
    pub bin1: u32,
    pub bin2: u32,
}

impl MartonRates {
    pub fn new(r0: u32, r1: u32, r2: u32, bin1: u32, bin2: u32) -> Self {
        MartonRates { r0, r1, r2, bin1, bin2 }
    }

    fn check(&self) -> Result<()> {
        let total = self.r0 + (self.r1 + self.bin1).max(self.r2 + self.bin2).max(self.r1 + self.r2);
        if total > 24 {
            return Err(Error::Budget {
                what: "marton codebook size".into(),
                needed: 2f64.powi(total as i32),
                budget: 2f64.powi(24),
            });
        }
        Ok(())
    }
}

/// `2^{R0}` pages; page `m0` has `2^{R1+r1}` row symbols and `2^{R2+r2}`
/// column symbols; one indicator pair per rectangle `(m0, m1, m2)`.
/// Indices are zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MartonCodebook {
    pub rates: MartonRates,
    pub pages: Vec<usize>,
    pub rows: Vec<Vec<usize>>,
    pub cols: Vec<Vec<usize>>,
    /// Row-major over `(m0, m1, m2)`.
    pub indicators: Vec<(usize, usize)>,
    pub rng_seed: u64,
}

impl MartonCodebook {
    pub fn indicator(&self, m0: usize, m1: usize, m2: usize) -> (usize, usize) {
        let (n1, n2) = (1usize << self.rates.r1, 1usize << self.rates.r2);
        self.indicators[(m0 * n1 + m1) * n2 + m2]
    }

    /// The `(u0, u1, u2)` entry sent for message `(m0, m1, m2)` with its row
    /// and column positions.
    pub fn entry(&self, m0: usize, m1: usize, m2: usize) -> ([usize; 3], usize, usize) {
        let (k1, k2) = self.indicator(m0, m1, m2);
        let j1 = (m1 << self.rates.bin1) | k1;
        let j2 = (m2 << self.rates.bin2) | k2;
        ([self.pages[m0], self.rows[m0][j1], self.cols[m0][j2]], j1, j2)
    }
}

/// Sample a codebook for `p` over `(U0, U1, U2)`.
pub fn sample_marton_codebook(p: &JointDistribution, rates: MartonRates, seed: u64) -> Result<MartonCodebook> {
    rates.check()?;
    let c = Conditionals::new(p)?;
    sample_with(&c, rates, seed)
}

fn sample_with(c: &Conditionals, rates: MartonRates, seed: u64) -> Result<MartonCodebook> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let [_, n1, n2] = c.sizes;
    let pages_n = 1usize << rates.r0;
    let rows_n = 1usize << (rates.r1 + rates.bin1);
    let cols_n = 1usize << (rates.r2 + rates.bin2);
    let mut pages = Vec::with_capacity(pages_n);
    let mut rows = Vec::with_capacity(pages_n);
    let mut cols = Vec::with_capacity(pages_n);
    for _ in 0..pages_n {
        let u0 = sample(&mut rng, &c.p0)?;
        pages.push(u0);
        let w1 = &c.p1[u0 * n1..(u0 + 1) * n1];
        let w2 = &c.p2[u0 * n2..(u0 + 1) * n2];
        rows.push((0..rows_n).map(|_| sample(&mut rng, w1)).collect::<Result<Vec<_>>>()?);
        cols.push((0..cols_n).map(|_| sample(&mut rng, w2)).collect::<Result<Vec<_>>>()?);
    }
    let (b1, b2) = (1usize << rates.bin1, 1usize << rates.bin2);
    let mut indicators = Vec::with_capacity(pages_n << (rates.r1 + rates.r2));
    for m0 in 0..pages_n {
        for m1 in 0..(1usize << rates.r1) {
            for m2 in 0..(1usize << rates.r2) {
                let band1 = &rows[m0][m1 * b1..(m1 + 1) * b1];
                let band2 = &cols[m0][m2 * b2..(m2 + 1) * b2];
                let w = c.indicator_weights(pages[m0], band1, band2)?;
                let k = sample(&mut rng, &w)?;
                indicators.push((k / b2, k % b2));
            }
        }
    }
    Ok(MartonCodebook {
        rates,
        pages,
        rows,
        cols,
        indicators,
        rng_seed: seed,
    })
}

/// A Marton instance: the `(U0, U1, U2)` law, the cq-state of auxiliaries and
/// outputs, and both receivers' acceptance operators.
#[derive(Clone, Debug)]
pub struct MartonInstance {
    conditionals: Conditionals,
    /// Positions of `U0, U1, U2` in the model's factor order.
    factors: [usize; 3],
    receivers: [Receiver; 2],
    pub eps: f64,
    pub policy: DecoderPolicy,
}

impl MartonInstance {
    /// From a cq-state over `names` (must contain `U0, U1, U2`) with output
    /// factors `outputs` (must contain `Y1, Y2`).
    pub fn new(cq: &CqState, names: &[String], outputs: &[String], eps: f64, policy: DecoderPolicy) -> Result<Self> {
        let f = positions(names, &["U0", "U1", "U2"], "names")?;
        let y = positions(outputs, &["Y1", "Y2"], "output_names")?;
        let dist = cq.distribution().marginal(&f)?;
        let rx = |u: usize, yk: usize| match policy {
            DecoderPolicy::JointTest => Receiver::new(cq, yk, &[], &[f[0], u], eps),
            DecoderPolicy::ConditionalTest => Receiver::new(cq, yk, &[f[0]], &[u], eps),
        };
        Ok(MartonInstance {
            conditionals: Conditionals::new(&dist)?,
            factors: [f[0], f[1], f[2]],
            receivers: [rx(f[1], y[0])?, rx(f[2], y[1])?],
            eps,
            policy,
        })
    }

    pub fn from_model(model: &Model, eps: f64, policy: DecoderPolicy) -> Result<Self> {
        Self::new(&model.cq_state()?, &model.names, &model.output_names, eps, policy)
    }

    fn full(&self, u: [usize; 3]) -> Vec<usize> {
        let n = self.receivers[0].full_ix.sizes().len();
        let mut t = vec![0; n];
        for (k, &pos) in self.factors.iter().enumerate() {
            t[pos] = u[k];
        }
        t
    }

    pub fn sample_codebook(&self, rates: MartonRates, seed: u64) -> Result<MartonCodebook> {
        rates.check()?;
        sample_with(&self.conditionals, rates, seed)
    }
}

/// Exact average error of both receivers, each decoding its full entry
/// `(m0, m_i, k_i)` with the PGM over the per-entry acceptance operators.
/// An error is any decoded entry other than the transmitted one.
pub fn broadcast_error(inst: &MartonInstance, cb: &MartonCodebook, budget: f64) -> Result<([f64; 2], f64)> {
    let r = cb.rates;
    let pages = 1usize << r.r0;
    let (n1, n2) = (1usize << r.r1, 1usize << r.r2);
    let widths = [1usize << (r.r1 + r.bin1), 1usize << (r.r2 + r.bin2)];
    let messages = (pages * n1 * n2) as f64;
    let mut needed = 0.0;
    for (k, rx) in inst.receivers.iter().enumerate() {
        let d = rx.dim as f64;
        needed += (pages * widths[k]) as f64 * d.powi(3) + messages * d * d;
    }
    check_budget("broadcast error evaluation", needed, budget)?;

    let mut errors = [0.0; 2];
    let mut defect: f64 = 0.0;
    for (k, rx) in inst.receivers.iter().enumerate() {
        // Outcome (m0', j') at m0'·width + j'.
        let mut pis: Vec<CMatrix> = Vec::with_capacity(pages * widths[k]);
        for m0 in 0..pages {
            for j in 0..widths[k] {
                let u = if k == 0 {
                    [cb.pages[m0], cb.rows[m0][j], 0]
                } else {
                    [cb.pages[m0], 0, cb.cols[m0][j]]
                };
                pis.push(rx.test(&inst.full(u)).clone());
            }
        }
        let dec = pgm_matrices(rx.dim, &pis);
        defect = defect.max(dec.completeness_defect());
        let mut ok = 0.0;
        for m0 in 0..pages {
            for m1 in 0..n1 {
                for m2 in 0..n2 {
                    let (u, j1, j2) = cb.entry(m0, m1, m2);
                    let j = if k == 0 { j1 } else { j2 };
                    ok += success(&dec.outcomes[m0 * widths[k] + j], rx.state(&inst.full(u)));
                }
            }
        }
        errors[k] = (1.0 - ok / messages).max(0.0);
    }
    Ok((errors, defect))
}

/// Mean, min and max of [`broadcast_error`] over `n_codebooks` codebooks,
/// codebook `i` seeded by [`codebook_seed`]`(seed, i)`.
pub fn simulate_marton(
    inst: &MartonInstance,
    rates: MartonRates,
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
        let (errors, defect) = broadcast_error(inst, &cb, opts.budget)?;
        Ok(CodebookResult {
            index: i,
            rng_seed: s,
            errors,
            pgm_completeness_defect: defect,
        })
    })?;
    Ok(SimReport {
        kind: "marton",
        rates: serde_json::to_value(rates).expect("rates serialize"),
        eps: inst.eps,
        n_codebooks,
        seed,
        decoder: inst.policy,
        decoding: None,
        receivers: [
            Stats::of(results.iter().map(|r| r.errors[0])),
            Stats::of(results.iter().map(|r| r.errors[1])),
        ],
        max_pgm_completeness_defect: results.iter().map(|r| r.pgm_completeness_defect).fold(0.0, f64::max),
        codebooks: results,
    })
}
