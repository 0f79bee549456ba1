//! Randomized lemma suites behind `verify-lemmas`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::covering::{mutual_covering_tv, COVERING_BUDGET};
use super::lemmas::{classical_typicality_povm, gentle_check, hn_check};
use crate::error::Result;
use crate::osentropy::imax_conditional;
use crate::qcore::{random, DensityMatrix, JointDistribution, PovmElement};

pub const HN_TOL: f64 = 1e-9;
pub const GENTLE_TOL: f64 = 1e-9;
pub const TYPICALITY_TOL: f64 = 1e-12;
pub const COVERING_EPS: f64 = 0.3;
pub const COVERING_INSTANCES: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub instances: usize,
    /// Smallest observed margin; the suite passes when it is `≥ −tolerance`.
    pub worst_slack: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SuiteReport {
    fn new(name: &'static str, slacks: &[f64], tolerance: f64) -> Self {
        let worst = slacks.iter().copied().fold(f64::INFINITY, f64::min);
        SuiteReport {
            name,
            instances: slacks.len(),
            worst_slack: worst,
            tolerance,
            passed: !slacks.is_empty() && worst >= -tolerance,
        }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Operator inequality `I − Λ_m ≤ 2(I − Π_m) + 4 Σ_{m'≠m} Π_{m'}`, dimension
/// ≤ 8 and at most 5 elements; one slack per instance (worst `m`).
pub fn hn_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut r = rng(seed, 1);
    let mut slacks = Vec::with_capacity(trials);
    for _ in 0..trials {
        let n = r.random_range(1..=8);
        let k = r.random_range(1..=5);
        let pis: Vec<PovmElement> = (0..k)
            .map(|_| PovmElement::new(random::povm_element(&mut r, n)))
            .collect::<Result<_>>()?;
        let mut worst = f64::INFINITY;
        for m in 0..k {
            worst = worst.min(hn_check(&pis, m)?);
        }
        slacks.push(worst);
    }
    Ok(SuiteReport::new("hayashi-nagaoka", &slacks, HN_TOL))
}

/// `‖ρ − Λ^{1/2}ρΛ^{1/2}‖₁ ≤ 2√(1 − Tr Λρ)`, dimension ≤ 6.
pub fn gentle_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut r = rng(seed, 2);
    let mut slacks = Vec::with_capacity(trials);
    for _ in 0..trials {
        let n = r.random_range(1..=6);
        let lambda = PovmElement::new(random::povm_element(&mut r, n))?;
        let rho = DensityMatrix::new(random::density(&mut r, n))?;
        slacks.push(gentle_check(&lambda, &rho)?.slack());
    }
    Ok(SuiteReport::new("gentle-measurement", &slacks, GENTLE_TOL))
}

/// Binary `U1, U2` given `U0` with uniform conditional marginals and
/// correlation `c`: `p(u1, u2 | u0) = (1 + c·(−1)^{u1+u2}) / 4`.
pub fn correlated_pair(p0: &[f64], corr: &[f64]) -> Result<JointDistribution> {
    let mut probs = Vec::with_capacity(p0.len() * 4);
    for (a, c) in p0.iter().zip(corr) {
        for u1 in 0..2 {
            for u2 in 0..2 {
                let s = if u1 == u2 { 1.0 } else { -1.0 };
                probs.push(a * (1.0 + c * s) / 4.0);
            }
        }
    }
    JointDistribution::new(vec![p0.len(), 2, 2], probs)
}

/// Covering bins for `r1 + r2 = ⌈I_∞ + 2 log₂(1/ε)⌉`, split as evenly as
/// possible with each at least 1.
pub fn covering_bins(p: &JointDistribution, eps: f64) -> Result<(u32, u32, f64)> {
    let imax = imax_conditional(p, &[1], &[2], &[0], eps)?.value;
    let total = (imax + 2.0 * (1.0 / eps).log2()).ceil().max(2.0) as u32;
    let r1 = total.div_ceil(2);
    Ok((r1, total - r1, imax))
}

/// Exact `‖P1 − P2‖₁ ≤ 5ε` at `ε = 0.3` on random correlated binary pairs,
/// plus one conditionally independent instance where the distance must
/// vanish. The suite slack is `5ε − ‖P1 − P2‖₁`, and `−‖P1 − P2‖₁` for the
/// independent case.
pub fn covering_suite(seed: u64, instances: usize) -> Result<SuiteReport> {
    let mut r = rng(seed, 3);
    let mut slacks = Vec::with_capacity(instances + 1);
    for _ in 0..instances {
        let n0 = r.random_range(1..=2);
        let p0 = random::distribution(&mut r, n0, false);
        let corr: Vec<f64> = (0..n0).map(|_| r.random_range(-0.95..0.95)).collect();
        let p = correlated_pair(&p0, &corr)?;
        let (r1, r2, _) = covering_bins(&p, COVERING_EPS)?;
        let tv = mutual_covering_tv(&p, r1, r2, COVERING_BUDGET)?;
        slacks.push(5.0 * COVERING_EPS - tv);
    }
    let indep = correlated_pair(&[0.4, 0.6], &[0.0, 0.0])?;
    let (r1, r2, _) = covering_bins(&indep, COVERING_EPS)?;
    slacks.push(-mutual_covering_tv(&indep, r1, r2, COVERING_BUDGET)?);
    Ok(SuiteReport::new("mutual-covering", &slacks, 0.0))
}

/// Both properties of the union-of-intersections classical test,
/// `t, l ≤ 3`, alphabet ≤ 6.
pub fn typicality_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut r = rng(seed, 4);
    let mut slacks = Vec::with_capacity(trials);
    for _ in 0..trials {
        let n = r.random_range(1..=6);
        let t = r.random_range(1..=3);
        let l = r.random_range(1..=3);
        let ps: Vec<Vec<f64>> = (0..t).map(|_| random::distribution(&mut r, n, true)).collect();
        let qs: Vec<Vec<f64>> = (0..l).map(|_| random::distribution(&mut r, n, true)).collect();
        let eps: Vec<Vec<f64>> = (0..t)
            .map(|_| {
                (0..l)
                    .map(|_| match r.random_range(0..10) {
                        0 => 0.0,
                        1 => 1.0,
                        _ => r.random_range(0.0..0.5),
                    })
                    .collect()
            })
            .collect();
        slacks.push(classical_typicality_povm(&ps, &qs, &eps)?.min_slack());
    }
    Ok(SuiteReport::new("classical-typicality", &slacks, TYPICALITY_TOL))
}

/// All four suites; `trials` instances each for the randomized operator
/// and typicality suites.
pub fn verify_lemmas(seed: u64, trials: usize) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        hn_suite(seed, trials)?,
        gentle_suite(seed, trials)?,
        covering_suite(seed, COVERING_INSTANCES)?,
        typicality_suite(seed, trials)?,
    ])
}
