//! Symbolic rate inequalities with exact rational coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Written as `p/q` (always with a denominator).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p`, `p/q` and decimal-free integers with a sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("`{s}` is not a rational p/q"));
    match s.split_once('/') {
        None => s.parse::<i64>().map(rat).map_err(|_| bad()),
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// `constant + log_eps · log₂(1/ε)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slack {
    pub constant: Rational,
    pub log_eps: Rational,
}

impl Slack {
    pub fn new(constant: i64, log_eps: i64) -> Self {
        Slack {
            constant: rat(constant),
            log_eps: rat(log_eps),
        }
    }

    pub fn zero() -> Self {
        Slack::new(0, 0)
    }

    pub fn scale(&self, k: Rational) -> Slack {
        Slack {
            constant: self.constant * k,
            log_eps: self.log_eps * k,
        }
    }

    pub fn add(&self, o: &Slack) -> Slack {
        Slack {
            constant: self.constant + o.constant,
            log_eps: self.log_eps + o.log_eps,
        }
    }

    pub fn value(&self, eps: f64) -> f64 {
        let c = *self.constant.numer() as f64 / *self.constant.denom() as f64;
        let l = *self.log_eps.numer() as f64 / *self.log_eps.denom() as f64;
        if l == 0.0 {
            c
        } else {
            c + l * (1.0 / eps).log2()
        }
    }

    /// Componentwise `≥`: as a right-hand side, `self` is weaker.
    pub fn dominates(&self, o: &Slack) -> bool {
        self.constant >= o.constant && self.log_eps >= o.log_eps
    }
}

impl fmt::Display for Slack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·log(1/ε)", self.constant, self.log_eps)
    }
}

fn add_scaled(into: &mut BTreeMap<String, Rational>, from: &BTreeMap<String, Rational>, k: Rational) {
    for (name, c) in from {
        let e = into.entry(name.clone()).or_insert_with(Rational::zero);
        *e += *c * k;
    }
    into.retain(|_, c| !c.is_zero());
}

/// `Σ coeffs·R ≤ Σ rhs_terms·I + slack`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateInequality {
    pub coeffs: BTreeMap<String, Rational>,
    pub rhs_terms: BTreeMap<String, Rational>,
    pub slack: Slack,
    /// Labels of the source rows combined into this one.
    pub provenance: BTreeSet<String>,
}

impl RateInequality {
    pub fn new(label: &str) -> Self {
        RateInequality {
            coeffs: BTreeMap::new(),
            rhs_terms: BTreeMap::new(),
            slack: Slack::zero(),
            provenance: std::iter::once(label.to_string()).collect(),
        }
    }

    pub fn coeff(mut self, var: &str, c: i64) -> Self {
        add_scaled(&mut self.coeffs, &[(var.to_string(), rat(c))].into_iter().collect(), rat(1));
        self
    }

    pub fn term(mut self, name: &str, c: i64) -> Self {
        add_scaled(&mut self.rhs_terms, &[(name.to_string(), rat(c))].into_iter().collect(), rat(1));
        self
    }

    pub fn slack(mut self, constant: i64, log_eps: i64) -> Self {
        self.slack = Slack::new(constant, log_eps);
        self
    }

    pub fn coefficient(&self, var: &str) -> Rational {
        self.coeffs.get(var).copied().unwrap_or_else(Rational::zero)
    }

    pub fn is_rate_free(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `k·self + m·other` (both multipliers nonnegative for inequalities).
    pub fn combine(&self, k: Rational, other: &RateInequality, m: Rational) -> RateInequality {
        let mut coeffs = BTreeMap::new();
        add_scaled(&mut coeffs, &self.coeffs, k);
        add_scaled(&mut coeffs, &other.coeffs, m);
        let mut rhs_terms = BTreeMap::new();
        add_scaled(&mut rhs_terms, &self.rhs_terms, k);
        add_scaled(&mut rhs_terms, &other.rhs_terms, m);
        RateInequality {
            coeffs,
            rhs_terms,
            slack: self.slack.scale(k).add(&other.slack.scale(m)),
            provenance: self.provenance.union(&other.provenance).cloned().collect(),
        }
    }

    /// Coefficients and terms divided by the absolute leading coefficient
    /// (first rate variable, else first term). Returns the key and the
    /// normalized slack.
    pub fn canonical(&self) -> (Vec<(String, Rational)>, Vec<(String, Rational)>, Slack) {
        let lead = self
            .coeffs
            .values()
            .next()
            .or_else(|| self.rhs_terms.values().next())
            .map(|c| c.abs())
            .unwrap_or_else(|| rat(1));
        let inv = rat(1) / lead;
        (
            self.coeffs.iter().map(|(k, v)| (k.clone(), *v * inv)).collect(),
            self.rhs_terms.iter().map(|(k, v)| (k.clone(), *v * inv)).collect(),
            self.slack.scale(inv),
        )
    }

    /// Same normalized coefficients and terms.
    pub fn same_shape(&self, o: &RateInequality) -> bool {
        let (a, b, _) = self.canonical();
        let (c, d, _) = o.canonical();
        a == c && b == d
    }

    pub fn display(&self) -> String {
        fn side(m: &BTreeMap<String, Rational>) -> String {
            let mut s = String::new();
            for (i, (k, v)) in m.iter().enumerate() {
                let neg = v.is_negative();
                let a = v.abs();
                if i == 0 {
                    if neg {
                        s.push('-');
                    }
                } else {
                    s.push_str(if neg { " - " } else { " + " });
                }
                if a != rat(1) {
                    s.push_str(&format!("{a} "));
                }
                s.push_str(k);
            }
            s
        }
        let lhs = if self.coeffs.is_empty() { "0".to_string() } else { side(&self.coeffs) };
        let mut rhs = side(&self.rhs_terms);
        let c = self.slack.constant;
        let l = self.slack.log_eps;
        if !c.is_zero() || rhs.is_empty() {
            if rhs.is_empty() {
                rhs = format!("{c}");
            } else {
                rhs.push_str(&format!(" {} {}", if c.is_negative() { "-" } else { "+" }, c.abs()));
            }
        }
        if !l.is_zero() {
            let a = l.abs();
            let w = if a == rat(1) { String::new() } else { format!("{a} ") };
            rhs.push_str(&format!(" {} {w}log(1/eps)", if l.is_negative() { "-" } else { "+" }));
        }
        format!("{lhs} <= {rhs}")
    }
}

/// Inequalities and equalities over named rate variables. Rows whose rate
/// coefficients all cancel are kept separately as `conditions` (`0 ≤ rhs`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RateInequalitySystem {
    pub variables: Vec<String>,
    pub inequalities: Vec<RateInequality>,
    pub equalities: Vec<RateInequality>,
    pub conditions: Vec<RateInequality>,
}

impl RateInequalitySystem {
    pub fn new(variables: &[&str]) -> Self {
        RateInequalitySystem {
            variables: variables.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: RateInequality) {
        if row.is_rate_free() {
            self.conditions.push(row);
        } else {
            self.inequalities.push(row);
        }
    }

    /// `−var ≤ 0`.
    pub fn nonnegative(&mut self, var: &str) {
        self.push(RateInequality::new(&format!("{var}>=0")).coeff(var, -1));
    }

    pub fn validate(&self) -> Result<()> {
        for row in self.inequalities.iter().chain(&self.equalities).chain(&self.conditions) {
            if let Some(v) = row.coeffs.keys().find(|v| !self.variables.contains(v)) {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        Ok(())
    }

    /// Every information-quantity name used on a right-hand side.
    pub fn quantity_names(&self) -> BTreeSet<String> {
        self.inequalities
            .iter()
            .chain(&self.equalities)
            .chain(&self.conditions)
            .flat_map(|r| r.rhs_terms.keys().cloned())
            .collect()
    }

    /// Drop exact duplicates and rows whose normalized right-hand side is
    /// componentwise weaker than another row of the same shape.
    pub fn remove_redundant(&mut self) {
        self.inequalities = prune(std::mem::take(&mut self.inequalities));
        self.conditions = prune(std::mem::take(&mut self.conditions));
    }
}

fn prune(rows: Vec<RateInequality>) -> Vec<RateInequality> {
    let keyed: Vec<_> = rows.iter().map(|r| r.canonical()).collect();
    let mut keep = vec![true; rows.len()];
    for i in 0..rows.len() {
        for j in 0..rows.len() {
            if i == j || !keep[j] || keyed[i].0 != keyed[j].0 || keyed[i].1 != keyed[j].1 {
                continue;
            }
            let (si, sj) = (keyed[i].2, keyed[j].2);
            // Row i is implied by row j; ties keep the earlier row.
            if si.dominates(&sj) && (si != sj || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    rows.into_iter().zip(keep).filter(|(_, k)| *k).map(|(r, _)| r).collect()
}

/// Serialized form used by system files and region reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowDoc {
    pub coeffs: BTreeMap<String, String>,
    #[serde(default)]
    pub rhs_terms: BTreeMap<String, String>,
    #[serde(default = "zero_slack")]
    pub slack: [String; 2],
    #[serde(default)]
    pub provenance: Vec<String>,
}

fn zero_slack() -> [String; 2] {
    ["0/1".to_string(), "0/1".to_string()]
}

impl RowDoc {
    pub fn from_row(r: &RateInequality) -> Self {
        RowDoc {
            coeffs: r.coeffs.iter().map(|(k, v)| (k.clone(), format_rational(v))).collect(),
            rhs_terms: r.rhs_terms.iter().map(|(k, v)| (k.clone(), format_rational(v))).collect(),
            slack: [format_rational(&r.slack.constant), format_rational(&r.slack.log_eps)],
            provenance: r.provenance.iter().cloned().collect(),
        }
    }

    pub fn to_row(&self, default_label: &str) -> Result<RateInequality> {
        let parse_map = |m: &BTreeMap<String, String>| -> Result<BTreeMap<String, Rational>> {
            let mut out = BTreeMap::new();
            for (k, v) in m {
                let r = parse_rational(v)?;
                if !r.is_zero() {
                    out.insert(k.clone(), r);
                }
            }
            Ok(out)
        };
        let provenance = if self.provenance.is_empty() {
            std::iter::once(default_label.to_string()).collect()
        } else {
            self.provenance.iter().cloned().collect()
        };
        Ok(RateInequality {
            coeffs: parse_map(&self.coeffs)?,
            rhs_terms: parse_map(&self.rhs_terms)?,
            slack: Slack {
                constant: parse_rational(&self.slack[0])?,
                log_eps: parse_rational(&self.slack[1])?,
            },
            provenance,
        })
    }
}

/// System file: variables, rows and an optional elimination order.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub variables: Vec<String>,
    #[serde(default)]
    pub inequalities: Vec<RowDoc>,
    #[serde(default)]
    pub equalities: Vec<RowDoc>,
    #[serde(default)]
    pub eliminate: Vec<String>,
}

impl SystemDoc {
    pub fn to_system(&self) -> Result<RateInequalitySystem> {
        let mut sys = RateInequalitySystem {
            variables: self.variables.clone(),
            ..Default::default()
        };
        for (i, r) in self.inequalities.iter().enumerate() {
            sys.push(r.to_row(&format!("row{}", i + 1))?);
        }
        for (i, r) in self.equalities.iter().enumerate() {
            sys.equalities.push(r.to_row(&format!("eq{}", i + 1))?);
        }
        sys.validate()?;
        Ok(sys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roundtrip() {
        for s in ["3", "-1/2", "4/6"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn duplicates_and_weaker_rows_pruned() {
        let a = RateInequality::new("a").coeff("x", 1).term("I", 1).slack(-2, -1);
        let b = RateInequality::new("b").coeff("x", 2).term("I", 2).slack(-4, -2);
        let c = RateInequality::new("c").coeff("x", 1).term("I", 1).slack(-1, -1);
        let mut sys = RateInequalitySystem::new(&["x"]);
        sys.push(a.clone());
        sys.push(b);
        sys.push(c);
        sys.remove_redundant();
        assert_eq!(sys.inequalities, vec![a]);
    }

    #[test]
    fn display_reads_naturally() {
        let r = RateInequality::new("a").coeff("R0", 2).coeff("R1", 1).term("I", 1).term("J", -1).slack(-4, -4);
        assert_eq!(r.display(), "2 R0 + R1 <= I - J - 4 - 4 log(1/eps)");
    }
}
