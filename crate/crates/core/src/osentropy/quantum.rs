use super::{check_eps_open, EntropyResult, Optimizer};
use crate::error::{Error, Result};
use crate::qcore::linalg::{self, CMatrix, Eigen};
use crate::qcore::{CqState, DensityMatrix, PovmElement};

const MAX_ITERS: usize = 200;
const BRACKET_REL: f64 = 1e-12;
/// Type-II mass below this is reported as `+∞`.
const ZERO_BETA: f64 = 1e-15;
const KERNEL_TOL: f64 = 1e-12;
const GROUP_TOL: f64 = 1e-9;

struct Blocks<'a> {
    alpha: Vec<&'a CMatrix>,
    beta: Vec<&'a CMatrix>,
    /// Position of each active block in the caller's list.
    index: Vec<usize>,
    trace_alpha: f64,
    trace_beta: f64,
}

impl<'a> Blocks<'a> {
    fn new(alpha: &'a [CMatrix], beta: &'a [CMatrix]) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} alpha blocks and {} beta blocks",
                alpha.len(),
                beta.len()
            )));
        }
        let mut out = Blocks {
            alpha: Vec::new(),
            beta: Vec::new(),
            index: Vec::new(),
            trace_alpha: 0.0,
            trace_beta: 0.0,
        };
        for (i, (a, b)) in alpha.iter().zip(beta).enumerate() {
            if a.shape() != b.shape() || !a.is_square() {
                return Err(Error::DimensionMismatch(format!(
                    "block {i}: {:?} vs {:?}",
                    a.shape(),
                    b.shape()
                )));
            }
            linalg::check_hermitian(a, linalg::HERMITIAN_TOL)?;
            linalg::check_hermitian(b, linalg::HERMITIAN_TOL)?;
            if a.iter().all(|z| z.norm() == 0.0) {
                continue;
            }
            out.trace_alpha += linalg::trace_re(a);
            out.trace_beta += linalg::trace_re(b);
            out.alpha.push(a);
            out.beta.push(b);
            out.index.push(i);
        }
        Ok(out)
    }

    fn spectra(&self, lambda: f64) -> Vec<Eigen> {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| linalg::eig_unchecked(&(*a - *b * linalg::c(lambda))))
            .collect()
    }

    /// `α`-weight of the strictly positive part of `α − λβ`.
    fn positive_mass(&self, lambda: f64) -> f64 {
        self.spectra(lambda)
            .iter()
            .zip(&self.alpha)
            .map(|(e, a)| {
                (0..e.dim())
                    .filter(|&i| e.values[i] > 0.0)
                    .map(|i| linalg::expectation(a, e.vector(i)))
                    .sum::<f64>()
            })
            .sum()
    }

    fn dual(&self, eps: f64, lambda: f64) -> f64 {
        // ((1−ε) − Tr(α−λβ)_+)/λ, with Tr(α−λβ)_+ = Tr α − λ Tr β + Tr(λβ−α)_+.
        let neg: f64 = self
            .alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| {
                linalg::eig_unchecked(&(*b * linalg::c(lambda) - *a))
                    .values
                    .iter()
                    .filter(|v| **v > 0.0)
                    .sum::<f64>()
            })
            .sum();
        self.trace_beta - ((self.trace_alpha - (1.0 - eps)) + neg) / lambda
    }
}

/// Dual lower bound `((1−ε) − Tr[(α − λβ)_+]) / λ` on `Tr[Πβ]` over all
/// tests with `Tr[Πα] ≥ 1 − ε`, for block-diagonal `α`, `β`.
pub fn dual_bound(alpha: &[CMatrix], beta: &[CMatrix], eps: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda = {lambda} must be positive")));
    }
    Ok(Blocks::new(alpha, beta)?.dual(eps, lambda))
}

fn bits(beta_mass: f64) -> f64 {
    if beta_mass < ZERO_BETA {
        f64::INFINITY
    } else {
        -beta_mass.log2()
    }
}

fn certificate_bits(d: f64) -> f64 {
    if d > 0.0 {
        -d.log2()
    } else {
        f64::INFINITY
    }
}

/// Solve `D_H^ε` for block-diagonal operators `α = ⊕ α_x`, `β = ⊕ β_x`
/// (sub-normalized blocks, `Σ Tr α_x = 1`). Returns the value, one test per
/// block and the dual certificate in bits.
pub fn dh_blocks(alpha: &[CMatrix], beta: &[CMatrix], eps: f64) -> Result<(f64, Vec<CMatrix>, f64)> {
    check_eps_open(eps)?;
    let blocks = Blocks::new(alpha, beta)?;
    let mut tests: Vec<CMatrix> = alpha.iter().map(|a| CMatrix::zeros(a.nrows(), a.nrows())).collect();
    if blocks.alpha.is_empty() {
        return Err(Error::InvalidArgument("alpha is zero".into()));
    }

    if eps == 0.0 {
        let eigs: Vec<Eigen> = blocks.alpha.iter().map(|a| linalg::eig_unchecked(a)).collect();
        let top = eigs
            .iter()
            .filter_map(|e| e.values.first().copied())
            .fold(0.0, f64::max);
        let cut = KERNEL_TOL * top.max(f64::MIN_POSITIVE);
        let mut beta_mass = 0.0;
        for (k, e) in eigs.iter().enumerate() {
            let p = e.map(|l| if l > cut { 1.0 } else { 0.0 });
            beta_mass += linalg::trace_product(&p, blocks.beta[k]);
            tests[blocks.index[k]] = p;
        }
        let value = bits(beta_mass);
        let certificate = if value.is_infinite() {
            f64::INFINITY
        } else {
            let best = (0..=30)
                .map(|k| blocks.dual(0.0, 2f64.powi(-k)))
                .fold(f64::NEG_INFINITY, f64::max);
            certificate_bits(best)
        };
        return Ok((value, tests, certificate));
    }

    let target = 1.0 - eps;

    // α-weight on ker β: a test supported there costs nothing.
    let mut kernel_mass = 0.0;
    let mut kernels = Vec::with_capacity(blocks.alpha.len());
    let btop = blocks
        .beta
        .iter()
        .map(|b| linalg::operator_norm(b))
        .fold(0.0, f64::max);
    for (a, b) in blocks.alpha.iter().zip(&blocks.beta) {
        let e = linalg::eig_unchecked(b);
        let ker = e.map(|l| if l <= KERNEL_TOL * btop.max(1.0) { 1.0 } else { 0.0 });
        kernel_mass += linalg::trace_product(&ker, a);
        kernels.push(ker);
    }
    if kernel_mass >= target {
        let scale = (target / kernel_mass).min(1.0);
        for (k, ker) in kernels.into_iter().enumerate() {
            tests[blocks.index[k]] = ker * linalg::c(scale);
        }
        return Ok((f64::INFINITY, tests, f64::INFINITY));
    }

    let mut lo = 0.0;
    let mut hi = 1.0;
    while blocks.positive_mass(hi) >= target {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::InvalidArgument("Neyman–Pearson multiplier diverged".into()));
        }
    }
    for _ in 0..MAX_ITERS {
        if hi - lo <= BRACKET_REL * hi {
            break;
        }
        let mid = if lo == 0.0 {
            hi / 2.0
        } else if hi / lo > 2.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if blocks.positive_mass(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Greedy fill in descending eigenvalue order of α − hi·β; the crossing
    // group shares one fractional weight.
    let spectra = blocks.spectra(hi);
    let mut entries: Vec<(f64, usize, usize, f64)> = Vec::new();
    for (k, e) in spectra.iter().enumerate() {
        for i in 0..e.dim() {
            let w = linalg::expectation(blocks.alpha[k], e.vector(i)).max(0.0);
            entries.push((e.values[i], k, i, w));
        }
    }
    entries.sort_by(|x, y| y.0.total_cmp(&x.0));
    let scale = entries.iter().map(|e| e.0.abs()).fold(1.0, f64::max);
    let mut weights = vec![0.0; entries.len()];
    let mut have = 0.0;
    let mut s = 0;
    while s < entries.len() {
        let mu = entries[s].0;
        let mut e = s + 1;
        while e < entries.len() && (entries[e].0 - mu).abs() <= GROUP_TOL * scale {
            e += 1;
        }
        let need = target - have;
        if need <= 0.0 {
            break;
        }
        let group: f64 = entries[s..e].iter().map(|x| x.3).sum();
        // Directions without α-weight only add type-II mass.
        if group > ZERO_BETA {
            let w = (need / group).min(1.0);
            weights[s..e].iter_mut().for_each(|x| *x = w);
            have += w * group;
            if w < 1.0 {
                break;
            }
        }
        s = e;
    }
    let mut beta_mass = 0.0;
    for (idx, &(_, kb, i, _)) in entries.iter().enumerate() {
        let w = weights[idx];
        if w == 0.0 {
            continue;
        }
        let v = spectra[kb].vector(i);
        let t = &mut tests[blocks.index[kb]];
        *t += (&v * v.adjoint()) * linalg::c(w);
        beta_mass += w * linalg::expectation(blocks.beta[kb], v);
    }
    for t in tests.iter_mut() {
        *t = linalg::hermitize(t);
    }
    let value = bits(beta_mass);
    let certificate = if value.is_infinite() {
        f64::INFINITY
    } else {
        let mut best = blocks.dual(eps, hi);
        if lo > 0.0 {
            best = best.max(blocks.dual(eps, lo));
            best = best.max(blocks.dual(eps, 0.5 * (lo + hi)));
        }
        certificate_bits(best)
    };
    Ok((value, tests, certificate))
}

/// `D_H^ε(α‖β)` for density matrices.
pub fn dh_quantum(alpha: &DensityMatrix, beta: &DensityMatrix, eps: f64) -> Result<EntropyResult> {
    if alpha.dim() != beta.dim() {
        return Err(Error::DimensionMismatch(format!(
            "alpha has dim {}, beta has dim {}",
            alpha.dim(),
            beta.dim()
        )));
    }
    let (value, mut tests, certificate) = dh_blocks(
        std::slice::from_ref(alpha.matrix()),
        std::slice::from_ref(beta.matrix()),
        eps,
    )?;
    Ok(EntropyResult {
        value,
        optimizer: Optimizer::Test(PovmElement::from_raw(tests.remove(0))),
        certificate,
    })
}

/// `D_H^ε` between two cq-states over the same classical alphabet; solved
/// block by block on the shared classical label.
pub fn dh_block_diagonal(alpha: &CqState, beta: &CqState, eps: f64) -> Result<EntropyResult> {
    if alpha.alphabets() != beta.alphabets() || alpha.qdim() != beta.qdim() {
        return Err(Error::DimensionMismatch(format!(
            "cq-states over {:?}/{} and {:?}/{}",
            alpha.alphabets(),
            alpha.qdim(),
            beta.alphabets(),
            beta.qdim()
        )));
    }
    let d = alpha.qdim();
    let mut a_blocks = Vec::with_capacity(alpha.probs().len());
    let mut b_blocks = Vec::with_capacity(alpha.probs().len());
    for x in 0..alpha.probs().len() {
        let (p, q) = (alpha.probs()[x], beta.probs()[x]);
        a_blocks.push(if p > 0.0 {
            alpha.states()[x].matrix() * linalg::c(p)
        } else {
            CMatrix::zeros(d, d)
        });
        b_blocks.push(if q > 0.0 {
            beta.states()[x].matrix() * linalg::c(q)
        } else {
            CMatrix::zeros(d, d)
        });
    }
    let (value, tests, certificate) = dh_blocks(&a_blocks, &b_blocks, eps)?;
    Ok(EntropyResult {
        value,
        optimizer: Optimizer::BlockTest(tests.into_iter().map(PovmElement::from_raw).collect()),
        certificate,
    })
}
