//! JSON model files: an auxiliary distribution, a symbol-indexed channel and
//! the encoder map between them.
//!
//! ```json
//! {
//!   "kind": "marton",
//!   "names": ["U0", "U1", "U2"],
//!   "alphabets": [["0"], ["0", "1"], ["0", "1"]],
//!   "distribution": [[[0.25, 0.25], [0.25, 0.25]]],
//!   "input_alphabets": [["0", "1", "2", "3"]],
//!   "encoders": {"0,0,0": "0", "0,0,1": "1", "0,1,0": "2", "0,1,1": "3"},
//!   "channel": {"0": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]], "...": []},
//!   "output_dims": [2, 2],
//!   "output_names": ["Y1", "Y2"]
//! }
//! ```
//!
//! Instead of `encoders`, `input_factors` may name the auxiliary factors that
//! are fed to the channel directly. Without either, the auxiliary tuple is
//! the input tuple (for `cmge` the default is `["X1", "X2"]`).

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use super::channel::{channel_joint, CqChannel, Encoders};
use super::cq::{CqState, JointDistribution, TupleIndexer};
use super::linalg::CMatrix;
use super::state::{DensityMatrix, Tolerances};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Marton,
    Cmge,
    HkEa,
}

impl ModelKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "marton" => Some(ModelKind::Marton),
            "cmge" => Some(ModelKind::Cmge),
            "hk-ea" | "hkea" => Some(ModelKind::HkEa),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Marton => "marton",
            ModelKind::Cmge => "cmge",
            ModelKind::HkEa => "hk-ea",
        }
    }

    pub fn default_names(self) -> (Vec<&'static str>, Vec<&'static str>) {
        match self {
            ModelKind::Marton => (vec!["U0", "U1", "U2"], vec!["Y1", "Y2"]),
            ModelKind::Cmge => (vec!["Q", "U1", "X1", "U2", "X2"], vec!["Y1", "Y2"]),
            ModelKind::HkEa => (vec!["Q", "U1", "U2"], vec!["Y1", "Z1", "Y2", "Z2"]),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    kind: Option<String>,
    names: Option<Vec<String>>,
    alphabets: Vec<Vec<Value>>,
    distribution: Value,
    input_alphabets: Option<Vec<Vec<Value>>>,
    input_factors: Option<Vec<String>>,
    encoders: Option<BTreeMap<String, String>>,
    channel: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
    output_dims: Vec<usize>,
    output_names: Option<Vec<String>>,
}

/// A loaded, validated model.
#[derive(Clone, Debug)]
pub struct Model {
    pub kind: Option<ModelKind>,
    pub names: Vec<String>,
    pub symbols: Vec<Vec<String>>,
    pub distribution: JointDistribution,
    pub input_symbols: Vec<Vec<String>>,
    pub channel: CqChannel,
    pub encoders: Encoders,
    pub output_names: Vec<String>,
}

fn symbol(v: &Value, field: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::model(field, format!("symbol {v} is not a string or number"))),
    }
}

fn symbols(raw: &[Vec<Value>], field: &str) -> Result<Vec<Vec<String>>> {
    raw.iter()
        .enumerate()
        .map(|(i, a)| {
            let f = format!("{field}[{i}]");
            if a.is_empty() {
                return Err(Error::model(&f, "empty alphabet"));
            }
            let s = a.iter().map(|v| symbol(v, &f)).collect::<Result<Vec<_>>>()?;
            let mut sorted = s.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != s.len() {
                return Err(Error::model(&f, "duplicate symbol"));
            }
            Ok(s)
        })
        .collect()
}

fn flatten(v: &Value, sizes: &[usize], path: &mut String, out: &mut Vec<f64>) -> Result<()> {
    match sizes.split_first() {
        None => match v.as_f64() {
            Some(x) if x >= 0.0 && x.is_finite() => {
                out.push(x);
                Ok(())
            }
            _ => Err(Error::model(
                format!("distribution{path}"),
                format!("{v} is not a nonnegative number"),
            )),
        },
        Some((&n, rest)) => {
            let arr = v.as_array().filter(|a| a.len() == n).ok_or_else(|| {
                Error::model(
                    format!("distribution{path}"),
                    format!("expected an array of length {n}"),
                )
            })?;
            for (i, item) in arr.iter().enumerate() {
                let len = path.len();
                path.push_str(&format!("[{i}]"));
                flatten(item, rest, path, out)?;
                path.truncate(len);
            }
            Ok(())
        }
    }
}

fn lookup(syms: &[Vec<String>], key: &str, field: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = if syms.is_empty() && key.is_empty() {
        Vec::new()
    } else {
        key.split(',').map(str::trim).collect()
    };
    if parts.len() != syms.len() {
        return Err(Error::model(
            field,
            format!("key `{key}` has {} symbols, expected {}", parts.len(), syms.len()),
        ));
    }
    parts
        .iter()
        .zip(syms)
        .map(|(p, a)| {
            a.iter()
                .position(|s| s == p)
                .ok_or_else(|| Error::model(field, format!("unknown symbol `{p}` in key `{key}`")))
        })
        .collect()
}

impl Model {
    pub fn load(path: impl AsRef<Path>) -> Result<Model> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::model("file", format!("cannot read {}: {e}", path.display())))?;
        Model::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Model> {
        Model::from_json_str_with(text, &Tolerances::default())
    }

    pub fn from_json_str_with(text: &str, tol: &Tolerances) -> Result<Model> {
        let raw: RawModel =
            serde_json::from_str(text).map_err(|e| Error::model("document", e.to_string()))?;
        let kind = match raw.kind.as_deref() {
            None => None,
            Some(k) => Some(
                ModelKind::parse(k).ok_or_else(|| Error::model("kind", format!("unknown kind `{k}`")))?,
            ),
        };
        let syms = symbols(&raw.alphabets, "alphabets")?;
        let c = syms.len();
        let names = match (raw.names, kind) {
            (Some(n), _) => n,
            (None, Some(k)) => k.default_names().0.iter().map(|s| s.to_string()).collect(),
            (None, None) => (0..c).map(|i| format!("X{i}")).collect(),
        };
        if names.len() != c {
            return Err(Error::model(
                "names",
                format!("{} names for {} alphabets", names.len(), c),
            ));
        }

        let sizes: Vec<usize> = syms.iter().map(Vec::len).collect();
        let mut probs = Vec::new();
        flatten(&raw.distribution, &sizes, &mut String::new(), &mut probs)?;
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tol.model_probability {
            return Err(Error::model(
                "distribution",
                format!("probabilities sum to {total}, expected 1"),
            ));
        }
        probs.iter_mut().for_each(|p| *p /= total);
        let distribution = JointDistribution::with_tolerances(sizes.clone(), probs, tol)
            .map_err(|e| Error::model("distribution", e.to_string()))?;

        let input_factors = match (&raw.input_factors, &raw.encoders, kind) {
            (Some(f), _, _) => Some(f.clone()),
            (None, None, Some(ModelKind::Cmge)) => Some(vec!["X1".to_string(), "X2".to_string()]),
            _ => None,
        };
        if raw.encoders.is_some() && raw.input_factors.is_some() {
            return Err(Error::model("encoders", "give either `encoders` or `input_factors`"));
        }
        let (input_symbols, encoders) = if let Some(map) = &raw.encoders {
            let inputs = symbols(
                raw.input_alphabets
                    .as_deref()
                    .ok_or_else(|| Error::model("input_alphabets", "required with `encoders`"))?,
                "input_alphabets",
            )?;
            let ix = TupleIndexer::new(&sizes);
            let mut table: Vec<Option<Vec<usize>>> = vec![None; ix.len()];
            for (k, v) in map {
                let aux = lookup(&syms, k, "encoders")?;
                let input = lookup(&inputs, v, "encoders")?;
                table[ix.index(&aux)] = Some(input);
            }
            let table = table
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    t.ok_or_else(|| {
                        let tuple: Vec<&str> = ix
                            .tuple(i)
                            .iter()
                            .enumerate()
                            .map(|(k, &s)| syms[k][s].as_str())
                            .collect();
                        Error::model("encoders", format!("no entry for `{}`", tuple.join(",")))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            (inputs, Encoders::Table(table))
        } else if let Some(f) = input_factors {
            let idx = f
                .iter()
                .map(|n| {
                    names
                        .iter()
                        .position(|m| m == n)
                        .ok_or_else(|| Error::model("input_factors", format!("unknown factor `{n}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let inputs = match &raw.input_alphabets {
                Some(a) => symbols(a, "input_alphabets")?,
                None => idx.iter().map(|&k| syms[k].clone()).collect(),
            };
            (inputs, Encoders::Project(idx))
        } else {
            let inputs = match &raw.input_alphabets {
                Some(a) => symbols(a, "input_alphabets")?,
                None => syms.clone(),
            };
            if inputs.iter().map(Vec::len).ne(sizes.iter().copied()) {
                return Err(Error::model(
                    "input_alphabets",
                    "identity encoding needs input alphabets matching the auxiliary ones",
                ));
            }
            (inputs, Encoders::Identity)
        };

        let in_sizes: Vec<usize> = input_symbols.iter().map(Vec::len).collect();
        let d: usize = raw.output_dims.iter().product();
        if raw.output_dims.is_empty() || raw.output_dims.contains(&0) {
            return Err(Error::model("output_dims", "dimensions must be positive"));
        }
        let in_ix = TupleIndexer::new(&in_sizes);
        let mut outputs: Vec<Option<DensityMatrix>> = vec![None; in_ix.len()];
        for (key, rows) in &raw.channel {
            let field = format!("channel[\"{key}\"]");
            let t = lookup(&input_symbols, key, &field)?;
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::model(&field, format!("expected a {d}x{d} matrix")));
            }
            let m = CMatrix::from_fn(d, d, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
            let rho = DensityMatrix::with_tolerances(m, tol).map_err(|e| Error::model(&field, e.to_string()))?;
            outputs[in_ix.index(&t)] = Some(rho);
        }
        let outputs = outputs
            .into_iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| {
                    let tuple: Vec<&str> = in_ix
                        .tuple(i)
                        .iter()
                        .enumerate()
                        .map(|(k, &s)| input_symbols[k][s].as_str())
                        .collect();
                    Error::model("channel", format!("no entry for input `{}`", tuple.join(",")))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let channel = CqChannel::new(in_sizes, outputs, raw.output_dims.clone())?;

        let output_names = match (raw.output_names, kind) {
            (Some(n), _) => n,
            (None, Some(k)) => k.default_names().1.iter().map(|s| s.to_string()).collect(),
            (None, None) => (0..raw.output_dims.len()).map(|i| format!("B{i}")).collect(),
        };
        if output_names.len() != raw.output_dims.len() {
            return Err(Error::model(
                "output_names",
                format!("{} names for {} output factors", output_names.len(), raw.output_dims.len()),
            ));
        }
        Ok(Model {
            kind,
            names,
            symbols: syms,
            distribution,
            input_symbols,
            channel,
            encoders,
            output_names,
        })
    }

    /// The joint cq-state of auxiliaries and channel outputs.
    pub fn cq_state(&self) -> Result<CqState> {
        channel_joint(&self.channel, &self.distribution, &self.encoders)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BIT: &str = r#"{
        "alphabets": [["0", "1"]],
        "distribution": [0.5, 0.5],
        "channel": {
            "0": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
            "1": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]
        },
        "output_dims": [2]
    }"#;

    #[test]
    fn loads_identity_model() {
        let m = Model::from_json_str(BIT).unwrap();
        let cq = m.cq_state().unwrap();
        assert_eq!(cq.states()[1], DensityMatrix::basis(2, 1).unwrap());
        assert_eq!(m.names, vec!["X0"]);
    }

    #[test]
    fn bad_sum_names_distribution() {
        let text = BIT.replace("[0.5, 0.5]", "[0.5, 0.4]");
        let err = Model::from_json_str(&text).unwrap_err();
        assert!(matches!(err, Error::Model { ref field, .. } if field == "distribution"));
    }

    #[test]
    fn missing_channel_entry_named() {
        let text = BIT.replace(
            r#""1": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]"#,
            r#""0 ": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]"#,
        );
        assert!(Model::from_json_str(&text).is_err());
    }

    #[test]
    fn non_density_output_rejected() {
        let text = BIT.replace("[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]", "[[[2, 0], [0, 0]], [[0, 0], [0, 0]]]");
        let err = Model::from_json_str(&text).unwrap_err();
        assert!(matches!(err, Error::Model { ref field, .. } if field.starts_with("channel")));
    }
}
