use super::{check_eps_open, EntropyResult, Optimizer};
use crate::error::{Error, Result};
use crate::qcore::JointDistribution;

fn check_pair(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "distributions of length {} and {}",
            p.len(),
            q.len()
        )));
    }
    for (name, d) in [("P", p), ("Q", q)] {
        if d.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidDistribution(format!("{name} has a negative or non-finite entry")));
        }
        let s: f64 = d.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!("{name} sums to {s}")));
        }
    }
    Ok(())
}

/// Dual bound `((1−ε) − Σ (P − λQ)_+) / λ` on the type-II mass.
fn classical_dual(p: &[f64], q: &[f64], eps: f64, lambda: f64) -> f64 {
    let pos: f64 = p
        .iter()
        .zip(q)
        .map(|(a, b)| (a - lambda * b).max(0.0))
        .sum();
    ((1.0 - eps) - pos) / lambda
}

/// `D_H^ε(P‖Q)` for distributions: optimal likelihood-ratio threshold test.
pub fn dh_classical(p: &[f64], q: &[f64], eps: f64) -> Result<EntropyResult> {
    check_pair(p, q)?;
    check_eps_open(eps)?;
    let n = p.len();
    let mut f = vec![0.0; n];
    let mut lambda = None;
    if eps == 0.0 {
        for i in 0..n {
            if p[i] > 0.0 {
                f[i] = 1.0;
            }
        }
    } else {
        // Descending P/Q; Q-null points first, P-null points never used.
        let mut order: Vec<usize> = (0..n).filter(|&i| p[i] > 0.0).collect();
        order.sort_by(|&a, &b| (p[b] * q[a]).total_cmp(&(p[a] * q[b])));
        let target = 1.0 - eps;
        let mut have = 0.0;
        for &i in &order {
            let need = target - have;
            if need <= 0.0 {
                break;
            }
            if p[i] <= need {
                f[i] = 1.0;
                have += p[i];
            } else {
                f[i] = need / p[i];
                have = target;
            }
            if q[i] > 0.0 {
                lambda = Some(p[i] / q[i]);
            }
        }
    }
    let beta: f64 = f.iter().zip(q).map(|(a, b)| a * b).sum();
    let value = if beta == 0.0 { f64::INFINITY } else { -beta.log2() };
    let certificate = if value.is_infinite() {
        f64::INFINITY
    } else {
        let mut best = f64::NEG_INFINITY;
        let mut candidates: Vec<f64> = lambda.into_iter().collect();
        if eps == 0.0 {
            candidates.extend((0..40).map(|k| 2f64.powi(-k)));
            candidates.extend(p.iter().zip(q).filter(|(_, b)| **b > 0.0).map(|(a, b)| a / b));
        }
        for l in candidates.into_iter().filter(|l| *l > 0.0) {
            best = best.max(classical_dual(p, q, eps, l));
        }
        if best > 0.0 {
            -best.log2()
        } else {
            f64::INFINITY
        }
    };
    Ok(EntropyResult {
        value,
        optimizer: Optimizer::ClassicalTest(f),
        certificate,
    })
}

/// `D_∞^ε(P‖Q)`: `log₂` of the smallest `t` with
/// `Σ_{Q>0} max(P − tQ, 0) + P(Q = 0) ≤ ε`. Returns `−∞` when `t = 0`
/// already works. Points with `P = Q = 0` are ignored.
pub fn dmax_smooth(p: &[f64], q: &[f64], eps: f64) -> Result<EntropyResult> {
    check_pair(p, q)?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("eps = {eps} is not in [0, 1]")));
    }
    let n = p.len();
    let null: f64 = (0..n).filter(|&i| q[i] == 0.0).map(|i| p[i]).sum();
    if null > eps {
        let mut cap = p.to_vec();
        (0..n).filter(|&i| q[i] == 0.0).for_each(|i| cap[i] = 0.0);
        return Ok(EntropyResult {
            value: f64::INFINITY,
            optimizer: Optimizer::Subdistribution(cap),
            certificate: eps - null,
        });
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| q[i] > 0.0 && p[i] > 0.0).collect();
    order.sort_by(|&a, &b| (p[b] * q[a]).total_cmp(&(p[a] * q[b])));
    let mut t = 0.0;
    let (mut a, mut b) = (0.0, 0.0);
    for (k, &i) in order.iter().enumerate() {
        a += p[i];
        b += q[i];
        let next = order.get(k + 1).map_or(0.0, |&j| p[j] / q[j]);
        let cand = (a + null - eps) / b;
        if cand >= next {
            t = cand.max(0.0);
            break;
        }
    }
    let cap: Vec<f64> = (0..n)
        .map(|i| if q[i] == 0.0 { 0.0 } else { p[i].min(t * q[i]) })
        .collect();
    let removed: f64 = p.iter().zip(&cap).map(|(x, y)| x - y).sum();
    Ok(EntropyResult {
        value: if t > 0.0 { t.log2() } else { f64::NEG_INFINITY },
        optimizer: Optimizer::Subdistribution(cap),
        certificate: eps - removed,
    })
}

/// Reference law `P^Z × (P^X|Z) × (P^Y|Z)` on the marginal over the factors
/// `x ∪ y ∪ z` (ascending factor order). Returns `(marginal, reference)`.
pub fn imax_reference(
    dist: &JointDistribution,
    x: &[usize],
    y: &[usize],
    z: &[usize],
) -> Result<(JointDistribution, Vec<f64>)> {
    let mut sup: Vec<usize> = x.iter().chain(y).chain(z).copied().collect();
    sup.sort_unstable();
    if sup.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidPartition(format!("{x:?}, {y:?}, {z:?} overlap")));
    }
    let joint = dist.marginal(&sup)?;
    let pos = |set: &[usize]| -> Vec<usize> {
        set.iter().map(|k| sup.binary_search(k).expect("in support")).collect()
    };
    let (xp, yp, zp) = (pos(x), pos(y), pos(z));
    let xz: Vec<usize> = xp.iter().chain(&zp).copied().collect();
    let yz: Vec<usize> = yp.iter().chain(&zp).copied().collect();
    let pz = joint.marginal(&zp)?;
    let pxz = joint.marginal(&xz)?;
    let pyz = joint.marginal(&yz)?;
    let reference = joint
        .indexer()
        .iter()
        .map(|t| {
            let pick = |set: &[usize]| -> Vec<usize> { set.iter().map(|&k| t[k]).collect() };
            let w = pz.prob(&pick(&zp));
            if w > 0.0 {
                pxz.prob(&pick(&xz)) * pyz.prob(&pick(&yz)) / w
            } else {
                0.0
            }
        })
        .collect();
    Ok((joint, reference))
}

/// `I_∞^ε(X : Y | Z)` with the factor roles given as index lists.
pub fn imax_conditional(
    dist: &JointDistribution,
    x: &[usize],
    y: &[usize],
    z: &[usize],
    eps: f64,
) -> Result<EntropyResult> {
    let (joint, reference) = imax_reference(dist, x, y, z)?;
    dmax_smooth(joint.probs(), &reference, eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_pair() {
        let p = [0.2, 0.3, 0.5];
        let r = dh_classical(&p, &p, 0.5).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!((r.certificate - r.value).abs() < 1e-12);
    }

    #[test]
    fn disjoint_supports_infinite() {
        assert!(dh_classical(&[1.0, 0.0], &[0.0, 1.0], 0.1).unwrap().is_infinite());
        assert!(dmax_smooth(&[1.0, 0.0], &[0.0, 1.0], 0.5).unwrap().is_infinite());
    }

    #[test]
    fn small_example() {
        let r = dh_classical(&[0.7, 0.3], &[0.5, 0.5], 0.1).unwrap();
        assert!((r.value + (5.0f64 / 6.0).log2()).abs() < 1e-12);
    }

    #[test]
    fn dmax_examples() {
        let r = dmax_smooth(&[0.5, 0.5], &[0.5, 0.5], 0.2).unwrap();
        assert!((r.value - 0.8f64.log2()).abs() < 1e-12);
        let r = dmax_smooth(&[0.5, 0.5], &[0.9, 0.1], 0.2).unwrap();
        assert!((r.value - 3f64.log2()).abs() < 1e-12);
        let r = dmax_smooth(&[0.5, 0.5], &[0.5, 0.5], 1.0).unwrap();
        assert_eq!(r.value, f64::NEG_INFINITY);
    }

    #[test]
    fn imax_copy() {
        let d = JointDistribution::new(vec![1, 3, 3], vec![1.0 / 3.0, 0.0, 0.0, 0.0, 1.0 / 3.0, 0.0, 0.0, 0.0, 1.0 / 3.0]).unwrap();
        let r = imax_conditional(&d, &[1], &[2], &[0], 0.0).unwrap();
        assert!((r.value - 3f64.log2()).abs() < 1e-12);
    }
}
