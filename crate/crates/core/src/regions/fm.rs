//! Exact substitution and Fourier–Motzkin elimination.

use num_traits::{Signed, Zero};

use super::system::{rat, RateInequality, RateInequalitySystem};
use crate::error::{Error, Result};

fn check_declared(sys: &RateInequalitySystem, var: &str) -> Result<()> {
    if sys.variables.iter().any(|v| v == var) {
        Ok(())
    } else {
        Err(Error::UnknownVariable(var.to_string()))
    }
}

/// Eliminate `var` using the equality `eq` (which is removed from the
/// system if present) by exact substitution into every row.
pub fn substitute_equality(
    sys: &RateInequalitySystem,
    eq: &RateInequality,
    var: &str,
) -> Result<RateInequalitySystem> {
    check_declared(sys, var)?;
    let a = eq.coefficient(var);
    if a.is_zero() {
        return Err(Error::ZeroCoefficient(var.to_string()));
    }
    let sub = |row: &RateInequality| -> RateInequality {
        let b = row.coefficient(var);
        if b.is_zero() {
            row.clone()
        } else {
            row.combine(rat(1), eq, -b / a)
        }
    };
    let mut out = RateInequalitySystem {
        variables: sys.variables.iter().filter(|v| *v != var).cloned().collect(),
        ..Default::default()
    };
    for row in &sys.inequalities {
        out.push(sub(row));
    }
    out.conditions.extend(sys.conditions.iter().cloned());
    let mut removed = false;
    for e in &sys.equalities {
        if !removed && e == eq {
            removed = true;
            continue;
        }
        let s = sub(e);
        if s.is_rate_free() {
            // An equality that no longer involves rates is two conditions.
            out.conditions.push(s.clone());
            out.conditions.push(s.combine(rat(-1), &s, rat(0)));
        } else {
            out.equalities.push(s);
        }
    }
    Ok(out)
}

/// Project out `var`: each upper bound (positive coefficient) is paired
/// with each lower bound (negative coefficient) as `upper·|b| + lower·a`;
/// rows without `var` are copied. Duplicates and syntactically dominated
/// rows are then removed. An equality involving `var` is substituted
/// instead.
pub fn fm_eliminate(sys: &RateInequalitySystem, var: &str) -> Result<RateInequalitySystem> {
    check_declared(sys, var)?;
    if let Some(eq) = sys.equalities.iter().find(|e| !e.coefficient(var).is_zero()) {
        let mut out = substitute_equality(sys, &eq.clone(), var)?;
        out.remove_redundant();
        return Ok(out);
    }
    let mut out = RateInequalitySystem {
        variables: sys.variables.iter().filter(|v| *v != var).cloned().collect(),
        equalities: sys.equalities.clone(),
        conditions: sys.conditions.clone(),
        ..Default::default()
    };
    let (mut upper, mut lower) = (Vec::new(), Vec::new());
    for row in &sys.inequalities {
        let c = row.coefficient(var);
        if c.is_zero() {
            out.push(row.clone());
        } else if c.is_positive() {
            upper.push(row);
        } else {
            lower.push(row);
        }
    }
    for u in &upper {
        let a = u.coefficient(var);
        for l in &lower {
            let b = l.coefficient(var).abs();
            let combined = u.combine(b, l, a);
            debug_assert!(combined.coefficient(var).is_zero());
            out.push(combined);
        }
    }
    out.remove_redundant();
    Ok(out)
}

/// Eliminate several variables in order.
pub fn fm_eliminate_all(sys: &RateInequalitySystem, vars: &[&str]) -> Result<RateInequalitySystem> {
    let mut cur = sys.clone();
    for v in vars {
        cur = fm_eliminate(&cur, v)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitute_one_row() {
        let mut sys = RateInequalitySystem::new(&["R2", "r1", "r2"]);
        sys.push(RateInequality::new("row").coeff("R2", 1).coeff("r2", 1).term("K", 1));
        let eq = RateInequality::new("eq").coeff("r1", 1).coeff("r2", 1).term("C", 1);
        let out = substitute_equality(&sys, &eq, "r2").unwrap();
        let row = &out.inequalities[0];
        assert_eq!(row.coefficient("R2"), rat(1));
        assert_eq!(row.coefficient("r1"), rat(-1));
        assert_eq!(row.rhs_terms.get("K"), Some(&rat(1)));
        assert_eq!(row.rhs_terms.get("C"), Some(&rat(-1)));
        assert_eq!(out.variables, vec!["R2", "r1"]);
    }

    #[test]
    fn substitute_absent_variable() {
        let mut sys = RateInequalitySystem::new(&["x", "y"]);
        let row = RateInequality::new("row").coeff("x", 1).term("K", 1);
        sys.push(row.clone());
        let eq = RateInequality::new("eq").coeff("y", 2).term("C", 1);
        assert_eq!(substitute_equality(&sys, &eq, "y").unwrap().inequalities, vec![row]);
        assert!(matches!(substitute_equality(&sys, &eq, "x"), Err(Error::ZeroCoefficient(_))));
    }

    #[test]
    fn single_pairing() {
        let mut sys = RateInequalitySystem::new(&["x"]);
        sys.push(RateInequality::new("u").coeff("x", 1).term("a", 1));
        sys.push(RateInequality::new("l").coeff("x", -1).term("b", -1));
        let out = fm_eliminate(&sys, "x").unwrap();
        assert!(out.inequalities.is_empty());
        let c = &out.conditions[0];
        assert_eq!(c.rhs_terms.get("a"), Some(&rat(1)));
        assert_eq!(c.rhs_terms.get("b"), Some(&rat(-1)));
    }

    #[test]
    fn absent_variable_unchanged() {
        let mut sys = RateInequalitySystem::new(&["x", "y"]);
        sys.push(RateInequality::new("u").coeff("x", 1).term("a", 1));
        let out = fm_eliminate(&sys, "y").unwrap();
        assert_eq!(out.inequalities, sys.inequalities);
        assert!(fm_eliminate(&sys, "z").is_err());
    }
}
