//! JSON rendering of region reports. Maps are ordered, so output is
//! byte-stable for identical inputs.

use serde_json::{json, Map, Value};

use super::numeric::{rhs_value, values_of, NumericSystem};
use super::system::{format_rational, RateInequality, RateInequalitySystem};
use super::{Implication, RegionReport};
use crate::error::Result;

/// A real number, with infinities and NaN as strings.
pub fn real(x: f64) -> Value {
    if x == f64::INFINITY {
        Value::String("inf".into())
    } else if x == f64::NEG_INFINITY {
        Value::String("-inf".into())
    } else if x.is_nan() {
        Value::String("nan".into())
    } else {
        json!(x)
    }
}

fn rational_map(m: &std::collections::BTreeMap<String, super::system::Rational>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.clone(), Value::String(format_rational(v)))).collect())
}

pub fn row_json(row: &RateInequality, numeric_rhs: Option<f64>) -> Value {
    let mut o = Map::new();
    o.insert("coeffs".into(), rational_map(&row.coeffs));
    o.insert("rhs_terms".into(), rational_map(&row.rhs_terms));
    o.insert(
        "slack".into(),
        json!([format_rational(&row.slack.constant), format_rational(&row.slack.log_eps)]),
    );
    o.insert("provenance".into(), json!(row.provenance));
    o.insert("text".into(), Value::String(row.display()));
    if let Some(v) = numeric_rhs {
        o.insert("numeric_rhs".into(), real(v));
    }
    Value::Object(o)
}

/// A symbolic system, optionally with numeric right-hand sides.
pub fn system_json(
    sys: &RateInequalitySystem,
    values: Option<(&std::collections::BTreeMap<String, f64>, f64)>,
) -> Result<Value> {
    let rows = |rs: &[RateInequality]| -> Result<Value> {
        rs.iter()
            .map(|r| {
                let v = match values {
                    Some((vals, eps)) => Some(rhs_value(r, vals, eps)?),
                    None => None,
                };
                Ok(row_json(r, v))
            })
            .collect::<Result<Vec<_>>>()
            .map(Value::Array)
    };
    Ok(json!({
        "variables": sys.variables,
        "inequalities": rows(&sys.inequalities)?,
        "equalities": rows(&sys.equalities)?,
        "conditions": rows(&sys.conditions)?,
    }))
}

fn implication_json(i: &Implication) -> Value {
    json!({
        "theorem_row": i.theorem_row.display(),
        "matched": i.matched.as_ref().map(|m| m.display()),
        "implies": i.implies,
        "slack_difference": i.slack_difference.as_ref().map(|s| {
            json!([format_rational(&s.constant), format_rational(&s.log_eps)])
        }),
    })
}

fn numeric_json(n: &NumericSystem) -> Value {
    json!({
        "conditions_hold": n.conditions_hold(),
        "rows": n.rows.iter().map(|r| json!({
            "label": r.label,
            "coeffs": r.coeffs.iter().map(|c| real(*c)).collect::<Vec<_>>(),
            "rhs": real(r.rhs),
        })).collect::<Vec<_>>(),
    })
}

pub fn region_json(r: &RegionReport) -> Result<Value> {
    let values = values_of(&r.quantities);
    let info: Vec<Value> = r
        .quantities
        .values()
        .map(|q| {
            json!({
                "name": q.quantity.name,
                "spec": {
                    "kind": q.quantity.kind,
                    "left": q.quantity.left,
                    "right": q.quantity.right,
                    "cond": q.quantity.cond,
                    "eps": r.eps,
                },
                "value": real(q.value),
                "certificate": real(q.certificate),
            })
        })
        .collect();
    let trace = r
        .trace
        .iter()
        .map(|t| Ok(json!({ "step": t.step, "system": system_json(&t.system, None)? })))
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "kind": r.kind.as_str(),
        "eps": r.eps,
        "template": r.template.as_str(),
        "pre_system": system_json(&r.pre_system, None)?,
        "trace": trace,
        "system": system_json(&r.system, Some((&values, r.eps)))?,
        "theorem_comparison": r.implications.iter().map(implication_json).collect::<Vec<_>>(),
        "info_quantities": info,
        "numeric": numeric_json(&r.numeric),
        "vertices": r.vertices.iter().map(|v| v.iter().map(|x| real(*x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "empty": r.empty,
        "derived_rates": r.derived_rates.as_ref().map(|d| d.iter().map(|(a, b)| json!([real(*a), real(*b)])).collect::<Vec<_>>()),
    }))
}
