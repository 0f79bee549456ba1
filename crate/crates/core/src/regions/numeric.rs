//! Numeric instantiation of a symbolic system: plug in quantity values and ε,
//! then test membership, enumerate vertices and trace 2-D boundaries.

use std::collections::BTreeMap;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;

use super::quantity::Evaluated;
use super::system::{RateInequality, RateInequalitySystem};
use crate::error::{Error, Result};

/// Tolerance for membership and vertex feasibility.
pub const FEAS_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct NumericRow {
    pub label: String,
    /// Coefficients in the order of [`NumericSystem::variables`].
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericSystem {
    pub variables: Vec<String>,
    pub rows: Vec<NumericRow>,
    /// Rate-free conditions `0 ≤ rhs`.
    pub conditions: Vec<NumericRow>,
}

fn to_f64(r: &super::system::Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `Σ w·value + slack(ε)`. A `+∞` term with positive weight makes the row
/// non-binding, one pushing towards `−∞` makes it infeasible, and mixed
/// infinite directions are treated as infeasible.
pub fn rhs_value(row: &RateInequality, values: &BTreeMap<String, f64>, eps: f64) -> Result<f64> {
    let mut finite = row.slack.value(eps);
    let (mut up, mut down) = (false, false);
    for (name, w) in &row.rhs_terms {
        let v = *values
            .get(name)
            .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
        let w = to_f64(w);
        let t = w * v;
        if t == f64::INFINITY {
            up = true;
        } else if t == f64::NEG_INFINITY {
            down = true;
        } else {
            finite += t;
        }
    }
    Ok(if down {
        f64::NEG_INFINITY
    } else if up {
        f64::INFINITY
    } else {
        finite
    })
}

pub fn values_of(quantities: &BTreeMap<String, Evaluated>) -> BTreeMap<String, f64> {
    quantities.iter().map(|(k, v)| (k.clone(), v.value)).collect()
}

pub fn evaluate(sys: &RateInequalitySystem, values: &BTreeMap<String, f64>, eps: f64) -> Result<NumericSystem> {
    let mk = |r: &RateInequality| -> Result<NumericRow> {
        Ok(NumericRow {
            label: r.display(),
            coeffs: sys.variables.iter().map(|v| to_f64(&r.coefficient(v))).collect(),
            rhs: rhs_value(r, values, eps)?,
        })
    };
    let mut rows = sys.inequalities.iter().map(mk).collect::<Result<Vec<_>>>()?;
    // An equality is two opposite inequalities.
    for e in &sys.equalities {
        let r = mk(e)?;
        rows.push(NumericRow {
            label: r.label.clone(),
            coeffs: r.coeffs.iter().map(|c| -c).collect(),
            rhs: -r.rhs,
        });
        rows.push(r);
    }
    Ok(NumericSystem {
        variables: sys.variables.clone(),
        rows,
        conditions: sys.conditions.iter().map(mk).collect::<Result<Vec<_>>>()?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Containment {
    pub inside: bool,
    pub violated: Vec<String>,
}

fn slack_tol(rhs: f64) -> f64 {
    FEAS_TOL * rhs.abs().max(1.0)
}

impl NumericSystem {
    pub fn conditions_hold(&self) -> bool {
        self.conditions.iter().all(|c| c.rhs >= -slack_tol(c.rhs))
    }

    fn feasible(&self, x: &[f64]) -> bool {
        x.iter().all(|v| *v >= -FEAS_TOL)
            && self.conditions_hold()
            && self.rows.iter().all(|r| {
                let lhs: f64 = r.coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
                lhs <= r.rhs + slack_tol(r.rhs)
            })
    }

    /// Membership of a rate tuple given by variable name, with the labels of
    /// violated rows (`R>=0` for a negative coordinate).
    pub fn contains(&self, point: &BTreeMap<String, f64>) -> Result<Containment> {
        let x = self
            .variables
            .iter()
            .map(|v| point.get(v).copied().ok_or_else(|| Error::UnknownVariable(v.clone())))
            .collect::<Result<Vec<_>>>()?;
        let mut violated = Vec::new();
        for (v, val) in self.variables.iter().zip(&x) {
            if *val < -FEAS_TOL {
                violated.push(format!("{v}>=0"));
            }
        }
        for c in &self.conditions {
            if c.rhs < -slack_tol(c.rhs) {
                violated.push(c.label.clone());
            }
        }
        for r in &self.rows {
            let lhs: f64 = r.coeffs.iter().zip(&x).map(|(c, v)| c * v).sum();
            if !(lhs <= r.rhs + slack_tol(r.rhs)) {
                violated.push(r.label.clone());
            }
        }
        Ok(Containment {
            inside: violated.is_empty(),
            violated,
        })
    }

    /// Vertices of `{x ≥ 0 : rows}` by solving every square subsystem of
    /// tight constraints, sorted lexicographically.
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let n = self.variables.len();
        if !self.conditions_hold() || self.rows.iter().any(|r| r.rhs == f64::NEG_INFINITY) {
            return Vec::new();
        }
        let mut cands: Vec<(Vec<f64>, f64)> = self
            .rows
            .iter()
            .filter(|r| r.rhs.is_finite())
            .map(|r| (r.coeffs.clone(), r.rhs))
            .collect();
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = -1.0;
            cands.push((e, 0.0));
        }
        let mut out: Vec<Vec<f64>> = Vec::new();
        for combo in (0..cands.len()).combinations(n) {
            let a = DMatrix::from_fn(n, n, |i, j| cands[combo[i]].0[j]);
            let b = DVector::from_fn(n, |i, _| cands[combo[i]].1);
            let Some(x) = a.clone().lu().solve(&b) else { continue };
            if x.iter().any(|v| !v.is_finite()) || (&a * &x - &b).amax() > 1e-8 * b.amax().max(1.0) {
                continue;
            }
            let x: Vec<f64> = x.iter().map(|v| if v.abs() < 1e-12 { 0.0 } else { *v }).collect();
            if self.feasible(&x)
                && !out
                    .iter()
                    .any(|y| y.iter().zip(&x).all(|(p, q)| (p - q).abs() <= 1e-9 * p.abs().max(1.0)))
            {
                out.push(x);
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        out
    }

    /// The region is empty when a condition fails, a row is infeasible, or
    /// no vertex exists (a nonempty polyhedron inside the orthant always
    /// has one).
    pub fn is_empty(&self) -> bool {
        self.vertices().is_empty()
    }

    /// Boundary of the slice over `free` (two variables) with the others
    /// pinned to `fixed`, traced by rays from the origin at `resolution`
    /// angles in `[0, π/2]`. Unbounded rays are skipped; an empty slice
    /// gives no points.
    pub fn boundary_2d(
        &self,
        free: (&str, &str),
        fixed: &BTreeMap<String, f64>,
        resolution: usize,
    ) -> Result<Vec<(f64, f64)>> {
        let idx = |name: &str| {
            self.variables
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))
        };
        let (i, j) = (idx(free.0)?, idx(free.1)?);
        if i == j {
            return Err(Error::InvalidArgument("the two free variables must differ".into()));
        }
        let mut base = vec![0.0; self.variables.len()];
        for (k, v) in self.variables.iter().enumerate() {
            if k != i && k != j {
                base[k] = fixed.get(v).copied().unwrap_or(0.0);
            }
        }
        if !self.feasible(&base) {
            return Ok(Vec::new());
        }
        let steps = resolution.max(2);
        let mut pts = Vec::with_capacity(steps);
        for s in 0..steps {
            let th = std::f64::consts::FRAC_PI_2 * s as f64 / (steps - 1) as f64;
            let (dx, dy) = (th.cos(), th.sin());
            let mut tmax = f64::INFINITY;
            for r in &self.rows {
                let slope = r.coeffs[i] * dx + r.coeffs[j] * dy;
                if slope <= 1e-15 {
                    continue;
                }
                let used: f64 = r.coeffs.iter().zip(&base).map(|(c, v)| c * v).sum();
                tmax = tmax.min(((r.rhs - used) / slope).max(0.0));
            }
            if tmax.is_finite() {
                pts.push((tmax * dx, tmax * dy));
            }
        }
        Ok(pts)
    }
}
