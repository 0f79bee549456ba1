//! Mutual covering: the indicator-pair law and the exact distance between
//! the two constructions.

use crate::error::{Error, Result};
use crate::qcore::JointDistribution;

/// Default enumeration budget for [`mutual_covering_tv`].
pub const COVERING_BUDGET: f64 = 1e7;

/// Tables of `p(u0)`, `p(u1|u0)`, `p(u2|u0)`, `p(u1,u2|u0)` for a
/// distribution over `(U0, U1, U2)`.
#[derive(Clone, Debug)]
pub(crate) struct Conditionals {
    pub sizes: [usize; 3],
    pub p0: Vec<f64>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub p12: Vec<f64>,
}

impl Conditionals {
    pub fn new(p: &JointDistribution) -> Result<Self> {
        let a = p.alphabets();
        if a.len() != 3 {
            return Err(Error::InvalidArgument(format!(
                "expected a distribution over (U0, U1, U2), got {} factors",
                a.len()
            )));
        }
        let (n0, n1, n2) = (a[0], a[1], a[2]);
        let mut p0 = vec![0.0; n0];
        let mut p1 = vec![0.0; n0 * n1];
        let mut p2 = vec![0.0; n0 * n2];
        let mut p12 = vec![0.0; n0 * n1 * n2];
        for (i, t) in p.indexer().iter().enumerate() {
            let w = p.probs()[i];
            p0[t[0]] += w;
            p1[t[0] * n1 + t[1]] += w;
            p2[t[0] * n2 + t[2]] += w;
            p12[i] += w;
        }
        for u0 in 0..n0 {
            let z = p0[u0];
            if z > 0.0 {
                p1[u0 * n1..(u0 + 1) * n1].iter_mut().for_each(|v| *v /= z);
                p2[u0 * n2..(u0 + 1) * n2].iter_mut().for_each(|v| *v /= z);
                p12[u0 * n1 * n2..(u0 + 1) * n1 * n2].iter_mut().for_each(|v| *v /= z);
            }
        }
        Ok(Conditionals {
            sizes: [n0, n1, n2],
            p0,
            p1,
            p2,
            p12,
        })
    }

    pub fn c1(&self, u0: usize, u1: usize) -> f64 {
        self.p1[u0 * self.sizes[1] + u1]
    }

    pub fn c2(&self, u0: usize, u2: usize) -> f64 {
        self.p2[u0 * self.sizes[2] + u2]
    }

    pub fn c12(&self, u0: usize, u1: usize, u2: usize) -> f64 {
        self.p12[(u0 * self.sizes[1] + u1) * self.sizes[2] + u2]
    }

    /// `p(u1,u2|u0) / (p(u1|u0) p(u2|u0))`, zero off the marginal support.
    pub fn ratio(&self, u0: usize, u1: usize, u2: usize) -> f64 {
        let d = self.c1(u0, u1) * self.c2(u0, u2);
        if d > 0.0 {
            self.c12(u0, u1, u2) / d
        } else {
            0.0
        }
    }

    /// Unnormalized weights over `rows × cols`, row-major, and their sum.
    fn weights(&self, u0: usize, rows: &[usize], cols: &[usize]) -> (Vec<f64>, f64) {
        let mut w = Vec::with_capacity(rows.len() * cols.len());
        for &a in rows {
            for &b in cols {
                w.push(self.ratio(u0, a, b));
            }
        }
        let s = w.iter().sum();
        (w, s)
    }
}

/// Law of the indicator pair `(K1, K2)` given the page sample `u0`, the row
/// band `rows` and the column band `cols`, row-major over
/// `[rows.len()] × [cols.len()]`.
pub fn indicator_pair_weights(p: &JointDistribution, u0: usize, rows: &[usize], cols: &[usize]) -> Result<Vec<f64>> {
    let c = Conditionals::new(p)?;
    c.indicator_weights(u0, rows, cols)
}

impl Conditionals {
    pub fn indicator_weights(&self, u0: usize, rows: &[usize], cols: &[usize]) -> Result<Vec<f64>> {
        if u0 >= self.sizes[0] || self.p0[u0] <= 0.0 {
            return Err(Error::InvalidArgument(format!("u0 = {u0} has zero probability")));
        }
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::InvalidArgument("empty band".into()));
        }
        let (mut w, s) = self.weights(u0, rows, cols);
        if s > 0.0 {
            w.iter_mut().for_each(|v| *v /= s);
        } else {
            let u = 1.0 / w.len() as f64;
            w.iter_mut().for_each(|v| *v = u);
        }
        Ok(w)
    }
}

/// Advance an odometer over `base^len`; false once it wraps.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Exact `‖P1 − P2‖₁` between the planted construction (uniform `(K1, K2)`,
/// the planted cell drawn jointly, all other cells independently) and the
/// independent construction with `(K1, K2)` drawn from the same posterior.
pub fn mutual_covering_tv(p: &JointDistribution, r1: u32, r2: u32, budget: f64) -> Result<f64> {
    let c = Conditionals::new(p)?;
    let [n0, n1, n2] = c.sizes;
    if r1 > 16 || r2 > 16 {
        return Err(Error::Budget {
            what: "mutual covering enumeration".into(),
            needed: f64::INFINITY,
            budget,
        });
    }
    let (k1, k2) = (1usize << r1, 1usize << r2);
    let needed = (n1 as f64).powi(k1 as i32) * (n2 as f64).powi(k2 as i32) * (k1 * k2) as f64 * n0 as f64;
    if needed > budget {
        return Err(Error::Budget {
            what: "mutual covering enumeration".into(),
            needed,
            budget,
        });
    }
    let cells = (k1 * k2) as f64;
    let mut total = 0.0;
    let mut rows = vec![0usize; k1];
    let mut cols = vec![0usize; k2];
    for u0 in 0..n0 {
        let pu0 = c.p0[u0];
        if pu0 <= 0.0 {
            continue;
        }
        rows.iter_mut().for_each(|v| *v = 0);
        loop {
            let pr: f64 = rows.iter().map(|&a| c.c1(u0, a)).product();
            if pr > 0.0 {
                cols.iter_mut().for_each(|v| *v = 0);
                loop {
                    let pc: f64 = cols.iter().map(|&b| c.c2(u0, b)).product();
                    let base = pu0 * pr * pc;
                    if base > 0.0 {
                        let (w, s) = c.weights(u0, &rows, &cols);
                        for wk in &w {
                            let p1 = base * wk / cells;
                            let p2 = if s > 0.0 { base * wk / s } else { base / cells };
                            total += (p1 - p2).abs();
                        }
                    }
                    if !advance(&mut cols, n2) {
                        break;
                    }
                }
            }
            if !advance(&mut rows, n1) {
                break;
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_is_uniform_and_zero() {
        let p = JointDistribution::product(&[vec![1.0], vec![0.3, 0.7], vec![0.6, 0.4]]).unwrap();
        let w = indicator_pair_weights(&p, 0, &[0, 1], &[1, 1]).unwrap();
        assert!(w.iter().all(|v| (v - 0.25).abs() < 1e-15));
        assert!(mutual_covering_tv(&p, 1, 1, COVERING_BUDGET).unwrap() < 1e-15);
    }

    #[test]
    fn single_cell() {
        let p = JointDistribution::new(vec![1, 2, 2], vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        assert_eq!(indicator_pair_weights(&p, 0, &[1], &[0]).unwrap(), vec![1.0]);
        // With one cell both constructions draw the pair jointly vs
        // independently: ‖p(u1,u2) − p(u1)p(u2)‖₁.
        let tv = mutual_covering_tv(&p, 0, 0, COVERING_BUDGET).unwrap();
        assert!((tv - 4.0 * 0.15).abs() < 1e-12, "{tv}");
    }

    #[test]
    fn budget_is_enforced() {
        let p = JointDistribution::product(&[vec![1.0], vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        assert!(matches!(mutual_covering_tv(&p, 4, 4, 1e6), Err(Error::Budget { .. })));
    }
}
