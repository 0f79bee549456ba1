//! Symbolic rate-inequality systems, exact elimination, and the three
//! rate regions assembled from channel instances.

pub mod fm;
pub mod numeric;
pub mod quantity;
pub mod report;
pub mod system;
pub mod theorems;

use std::collections::BTreeMap;

pub use fm::{fm_eliminate, fm_eliminate_all, substitute_equality};
pub use numeric::{Containment, NumericRow, NumericSystem};
pub use quantity::{evaluate_all, Evaluated, InfoQuantity, NamedCq, QuantityKind};
pub use system::{format_rational, parse_rational, rat, RateInequality, RateInequalitySystem, Rational, Slack, SystemDoc};
pub use theorems::{cmge_pre_system, cmge_theorem, hk_ea_system, marton_pre_system, marton_theorem};

use crate::error::{Error, Result};
use crate::qcore::model::{Model, ModelKind};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Template {
    /// The full eliminated system.
    #[default]
    Fm,
    /// The rows exactly as the theorem states them.
    Paper,
}

impl Template {
    pub fn as_str(self) -> &'static str {
        match self {
            Template::Fm => "fm",
            Template::Paper => "paper",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegionOptions {
    pub template: Template,
    pub parallel: bool,
}

impl Default for RegionOptions {
    fn default() -> Self {
        RegionOptions {
            template: Template::Fm,
            parallel: true,
        }
    }
}

/// How one theorem row relates to the eliminated system.
#[derive(Clone, Debug, PartialEq)]
pub struct Implication {
    pub theorem_row: RateInequality,
    /// Eliminated row with identical coefficients and rhs terms, if any.
    pub matched: Option<RateInequality>,
    /// True when the matched row's slack is at least as strong.
    pub implies: bool,
    /// Theorem slack minus eliminated slack (zero on exact reproduction).
    pub slack_difference: Option<Slack>,
}

pub fn implication_report(eliminated: &RateInequalitySystem, theorem: &RateInequalitySystem) -> Vec<Implication> {
    theorem
        .inequalities
        .iter()
        .map(|t| {
            let matched = eliminated
                .inequalities
                .iter()
                .filter(|r| r.coeffs == t.coeffs && r.rhs_terms == t.rhs_terms)
                .max_by(|a, b| {
                    // Prefer the strongest-slack candidate.
                    let ka = (a.slack.constant, a.slack.log_eps);
                    let kb = (b.slack.constant, b.slack.log_eps);
                    ka.cmp(&kb).reverse()
                })
                .cloned();
            let implies = matched.as_ref().is_some_and(|m| t.slack.dominates(&m.slack));
            let slack_difference = matched.as_ref().map(|m| t.slack.add(&m.slack.scale(rat(-1))));
            Implication {
                theorem_row: t.clone(),
                matched,
                implies,
                slack_difference,
            }
        })
        .collect()
}

/// A named intermediate system in the elimination.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub step: String,
    pub system: RateInequalitySystem,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionReport {
    pub kind: ModelKind,
    pub eps: f64,
    pub template: Template,
    pub pre_system: RateInequalitySystem,
    pub trace: Vec<TraceStep>,
    /// The emitted symbolic system (eliminated or theorem-verbatim).
    pub system: RateInequalitySystem,
    pub theorem: RateInequalitySystem,
    pub implications: Vec<Implication>,
    pub quantities: BTreeMap<String, Evaluated>,
    pub numeric: NumericSystem,
    pub vertices: Vec<Vec<f64>>,
    pub empty: bool,
    /// `(R1, R2) = (R'1 + R''1, R'2 + R''2)` at each vertex, for HK-EA.
    pub derived_rates: Option<Vec<(f64, f64)>>,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {eps}")))
    }
}

fn assemble(
    kind: ModelKind,
    state: &NamedCq,
    eps: f64,
    opts: RegionOptions,
    pre: RateInequalitySystem,
    trace: Vec<TraceStep>,
    eliminated: RateInequalitySystem,
    theorem: RateInequalitySystem,
) -> Result<RegionReport> {
    check_eps(eps)?;
    let mut names = pre.quantity_names();
    names.extend(theorem.quantity_names());
    let quantities = evaluate_all(&names, state, eps, opts.parallel)?;
    let system = match opts.template {
        Template::Fm => eliminated.clone(),
        Template::Paper => theorem.clone(),
    };
    let numeric = numeric::evaluate(&system, &numeric::values_of(&quantities), eps)?;
    let vertices = numeric.vertices();
    let implications = implication_report(&eliminated, &theorem);
    Ok(RegionReport {
        kind,
        eps,
        template: opts.template,
        pre_system: pre,
        trace,
        system,
        theorem,
        implications,
        quantities,
        empty: vertices.is_empty(),
        numeric,
        vertices,
        derived_rates: None,
    })
}

/// The Marton pre-system after substituting `r2` through the equality.
pub fn marton_substituted() -> Result<RateInequalitySystem> {
    substitute_equality(&marton_pre_system(), &theorems::marton_equality(), "r2")
}

/// The Marton pre-system with `r2` substituted and `r1` eliminated.
pub fn marton_eliminated() -> Result<RateInequalitySystem> {
    fm_eliminate(&marton_substituted()?, "r1")
}

pub fn marton_region(state: &NamedCq, eps: f64, opts: RegionOptions) -> Result<RegionReport> {
    let sub = marton_substituted()?;
    let elim = fm_eliminate(&sub, "r1")?;
    let trace = vec![
        TraceStep {
            step: "substitute r2".into(),
            system: sub,
        },
        TraceStep {
            step: "eliminate r1".into(),
            system: elim.clone(),
        },
    ];
    assemble(ModelKind::Marton, state, eps, opts, marton_pre_system(), trace, elim, marton_theorem())
}

pub fn cmge_eliminated() -> Result<RateInequalitySystem> {
    fm_eliminate_all(&cmge_pre_system(), &[theorems::cmge::R1P, theorems::cmge::R2P])
}

pub fn cmge_region(state: &NamedCq, eps: f64, opts: RegionOptions) -> Result<RegionReport> {
    let pre = cmge_pre_system();
    let first = fm_eliminate(&pre, theorems::cmge::R1P)?;
    let elim = fm_eliminate(&first, theorems::cmge::R2P)?;
    let trace = vec![
        TraceStep {
            step: "eliminate R'1".into(),
            system: first,
        },
        TraceStep {
            step: "eliminate R'2".into(),
            system: elim.clone(),
        },
    ];
    assemble(ModelKind::Cmge, state, eps, opts, pre, trace, elim, cmge_theorem())
}

pub fn hk_ea_region(state: &NamedCq, eps: f64, opts: RegionOptions) -> Result<RegionReport> {
    let sys = hk_ea_system();
    let mut report = assemble(ModelKind::HkEa, state, eps, opts, sys.clone(), Vec::new(), sys.clone(), sys)?;
    let idx = |v: &str| report.numeric.variables.iter().position(|x| x == v);
    use theorems::hkea::*;
    if let (Some(a), Some(b), Some(c), Some(d)) = (idx(R1P), idx(R1PP), idx(R2P), idx(R2PP)) {
        let mut sums: Vec<(f64, f64)> = Vec::new();
        for v in &report.vertices {
            let s = (v[a] + v[b], v[c] + v[d]);
            if !sums.iter().any(|t| (t.0 - s.0).abs() < 1e-9 && (t.1 - s.1).abs() < 1e-9) {
                sums.push(s);
            }
        }
        sums.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        report.derived_rates = Some(sums);
    }
    Ok(report)
}

/// Dispatch on the model's kind (`fallback` when the model does not name one).
pub fn region_for_model(model: &Model, fallback: Option<ModelKind>, eps: f64, opts: RegionOptions) -> Result<RegionReport> {
    let kind = model
        .kind
        .or(fallback)
        .ok_or_else(|| Error::model("kind", "the model does not name a region kind"))?;
    let state = NamedCq::from_model(model)?;
    match kind {
        ModelKind::Marton => marton_region(&state, eps, opts),
        ModelKind::Cmge => cmge_region(&state, eps, opts),
        ModelKind::HkEa => hk_ea_region(&state, eps, opts),
    }
}
