//! Named information quantities such as `IH(U0U1:Y1)` or `Imax(U1:U2|U0)`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::osentropy::{self, EntropyResult};
use crate::qcore::model::Model;
use crate::qcore::{CqState, Split};

/// A cq-state whose classical factors and quantum factors carry names.
#[derive(Clone, Debug)]
pub struct NamedCq {
    pub cq: CqState,
    pub classical: Vec<String>,
    pub quantum: Vec<String>,
}

impl NamedCq {
    pub fn new(cq: CqState, classical: Vec<String>, quantum: Vec<String>) -> Result<Self> {
        if classical.len() != cq.num_classical() || quantum.len() != cq.qdims().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} classical / {} quantum names for a cq-state with {} / {} factors",
                classical.len(),
                quantum.len(),
                cq.num_classical(),
                cq.qdims().len()
            )));
        }
        let all: BTreeSet<&String> = classical.iter().chain(&quantum).collect();
        if all.len() != classical.len() + quantum.len() {
            return Err(Error::InvalidArgument("duplicate factor names".into()));
        }
        Ok(NamedCq { cq, classical, quantum })
    }

    pub fn from_model(model: &Model) -> Result<Self> {
        NamedCq::new(model.cq_state()?, model.names.clone(), model.output_names.clone())
    }

    pub fn names(&self) -> Vec<&str> {
        self.classical.iter().chain(&self.quantum).map(String::as_str).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuantityKind {
    /// `I_H^ε(left : right | cond)`.
    #[serde(rename = "IH")]
    Hypothesis,
    /// `I_∞^ε(left : right | cond)`, classical factors only.
    #[serde(rename = "Imax")]
    MaxMutual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfoQuantity {
    pub name: String,
    pub kind: QuantityKind,
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub cond: Vec<String>,
}

/// Split a run like `U1U2Q` into known names, longest match first.
fn tokenize(s: &str, known: &[&str], whole: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let m = known
            .iter()
            .filter(|k| !k.is_empty() && rest.starts_with(**k))
            .max_by_key(|k| k.len())
            .ok_or_else(|| Error::QuantityParse(whole.to_string(), format!("unknown variable at `{rest}`")))?;
        out.push(m.to_string());
        rest = rest[m.len()..].trim_start();
    }
    Ok(out)
}

impl InfoQuantity {
    pub fn parse(name: &str, known: &[&str]) -> Result<Self> {
        let err = |m: &str| Error::QuantityParse(name.to_string(), m.to_string());
        let (head, body) = name.split_once('(').ok_or_else(|| err("expected `IH(...)` or `Imax(...)`"))?;
        let kind = match head.trim() {
            "IH" => QuantityKind::Hypothesis,
            "Imax" => QuantityKind::MaxMutual,
            other => return Err(err(&format!("unknown quantity `{other}`"))),
        };
        let body = body.trim_end().strip_suffix(')').ok_or_else(|| err("missing `)`"))?;
        let (pair, cond) = match body.split_once('|') {
            Some((p, c)) => (p, c),
            None => (body, ""),
        };
        let (l, r) = pair.split_once(':').ok_or_else(|| err("missing `:`"))?;
        let left = tokenize(l, known, name)?;
        let right = tokenize(r, known, name)?;
        let cond = tokenize(cond, known, name)?;
        if left.is_empty() || right.is_empty() {
            return Err(err("both sides of `:` must be nonempty"));
        }
        let all: BTreeSet<&String> = left.iter().chain(&right).chain(&cond).collect();
        if all.len() != left.len() + right.len() + cond.len() {
            return Err(err("a variable appears twice"));
        }
        Ok(InfoQuantity {
            name: name.to_string(),
            kind,
            left,
            right,
            cond,
        })
    }

    /// Factor roles inside `state`.
    pub fn split(&self, state: &NamedCq) -> Result<Split> {
        let mut split = Split::default();
        let place = |names: &[String], classical: &mut Vec<usize>, quantum: Option<&mut Vec<usize>>| -> Result<()> {
            let mut quantum = quantum;
            for n in names {
                if let Some(i) = state.classical.iter().position(|c| c == n) {
                    classical.push(i);
                } else if let Some(i) = state.quantum.iter().position(|c| c == n) {
                    match quantum.as_deref_mut() {
                        Some(q) => q.push(i),
                        None => {
                            return Err(Error::QuantityParse(
                                self.name.clone(),
                                format!("cannot condition on quantum system `{n}`"),
                            ))
                        }
                    }
                } else {
                    return Err(Error::UnknownVariable(n.clone()));
                }
            }
            Ok(())
        };
        place(&self.left, &mut split.left, Some(&mut split.left_quantum))?;
        place(&self.right, &mut split.right, Some(&mut split.right_quantum))?;
        place(&self.cond, &mut split.cond, None)?;
        Ok(split)
    }

    pub fn evaluate(&self, state: &NamedCq, eps: f64) -> Result<EntropyResult> {
        let split = self.split(state)?;
        match self.kind {
            QuantityKind::Hypothesis => osentropy::ih_split_general(&state.cq, &split, eps),
            QuantityKind::MaxMutual => {
                if !(split.left_quantum.is_empty() && split.right_quantum.is_empty()) {
                    return Err(Error::QuantityParse(
                        self.name.clone(),
                        "Imax is defined for classical variables only".into(),
                    ));
                }
                osentropy::imax_conditional(&state.cq.distribution(), &split.left, &split.right, &split.cond, eps)
            }
        }
    }
}

/// An evaluated quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluated {
    pub quantity: InfoQuantity,
    pub value: f64,
    pub certificate: f64,
}

/// Evaluate every named quantity; independent evaluations run in parallel
/// and results are keyed by name.
pub fn evaluate_all(
    names: &BTreeSet<String>,
    state: &NamedCq,
    eps: f64,
    parallel: bool,
) -> Result<BTreeMap<String, Evaluated>> {
    let known = state.names();
    let parsed = names
        .iter()
        .map(|n| InfoQuantity::parse(n, &known))
        .collect::<Result<Vec<_>>>()?;
    let eval = |q: &InfoQuantity| -> Result<(String, Evaluated)> {
        let r = q.evaluate(state, eps)?;
        Ok((
            q.name.clone(),
            Evaluated {
                quantity: q.clone(),
                value: r.value,
                certificate: r.certificate,
            },
        ))
    };
    let results: Vec<Result<(String, Evaluated)>> = if parallel {
        parsed.par_iter().map(eval).collect()
    } else {
        parsed.iter().map(eval).collect()
    };
    results.into_iter().collect()
}
