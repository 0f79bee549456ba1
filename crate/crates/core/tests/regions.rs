mod common;

use std::collections::BTreeMap;

use common::{models, oracles};
use cqrate::regions::theorems::{self, marton as mq};
use cqrate::regions::{
    self, cmge_pre_system, fm_eliminate, fm_eliminate_all, hk_ea_system, marton_pre_system, numeric, rat,
    substitute_equality, InfoQuantity, NumericRow, NumericSystem, QuantityKind, RateInequality, RateInequalitySystem,
    RegionOptions, Slack, SystemDoc, Template,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn opts() -> RegionOptions {
    RegionOptions::default()
}

fn rows_with<'a>(sys: &'a RateInequalitySystem, coeffs: &[(&str, i64)]) -> Vec<&'a RateInequality> {
    let want: BTreeMap<String, _> = coeffs.iter().map(|(k, v)| (k.to_string(), rat(*v))).collect();
    sys.inequalities.iter().filter(|r| r.coeffs == want).collect()
}

#[test]
fn marton_pre_system_shape() {
    let sys = marton_pre_system();
    assert_eq!(sys.inequalities.len() + sys.equalities.len(), 7);
    assert_eq!(sys.equalities.len(), 1);
    assert_eq!(sys.equalities[0].slack, Slack::new(0, 2));
    let ih_rows: Vec<_> = sys.inequalities.iter().filter(|r| !r.rhs_terms.is_empty()).collect();
    assert_eq!(ih_rows.len(), 4);
    assert!(ih_rows.iter().all(|r| r.slack == Slack::new(-2, -1)));
}

#[test]
fn marton_substitution_matches_hand_algebra() {
    let sub = regions::marton_substituted().unwrap();
    assert_eq!(sub.variables, ["R0", "R1", "R2", "r1"]);
    // Hand substitution of r2 = Imax + 2 log(1/eps) − r1.
    let expect = [
        RateInequality::new("marton.1").coeff("R0", 1).coeff("R1", 1).coeff("r1", 1).term(mq::IH_U0U1_Y1, 1).slack(-2, -1),
        RateInequality::new("marton.2")
            .coeff("R0", 1)
            .coeff("R2", 1)
            .coeff("r1", -1)
            .term(mq::IH_U0U2_Y2, 1)
            .term(mq::IMAX, -1)
            .slack(-2, -3),
        RateInequality::new("marton.3").coeff("R1", 1).coeff("r1", 1).term(mq::IH_U1_Y1_U0, 1).slack(-2, -1),
        RateInequality::new("marton.4")
            .coeff("R2", 1)
            .coeff("r1", -1)
            .term(mq::IH_U2_Y2_U0, 1)
            .term(mq::IMAX, -1)
            .slack(-2, -3),
        RateInequality::new("r1>=0").coeff("r1", -1),
        RateInequality::new("r2>=0").coeff("r1", 1).term(mq::IMAX, 1).slack(0, 2),
    ];
    assert_eq!(sub.inequalities.len(), expect.len());
    for e in &expect {
        let found = sub
            .inequalities
            .iter()
            .find(|r| r.coeffs == e.coeffs && r.rhs_terms == e.rhs_terms)
            .unwrap_or_else(|| panic!("missing {}", e.display()));
        assert_eq!(found.slack, e.slack, "{}", e.display());
    }
}

#[test]
fn marton_elimination_reproduces_theorem() {
    let elim = regions::marton_eliminated().unwrap();
    let cases: [(&[(&str, i64)], Vec<(&str, i64)>, Slack); 5] = [
        (&[("R0", 1), ("R1", 1)], vec![(mq::IH_U0U1_Y1, 1)], Slack::new(-2, -1)),
        (&[("R0", 1), ("R2", 1)], vec![(mq::IH_U0U2_Y2, 1)], Slack::new(-2, -1)),
        (
            &[("R0", 1), ("R1", 1), ("R2", 1)],
            vec![(mq::IH_U0U2_Y2, 1), (mq::IH_U1_Y1_U0, 1), (mq::IMAX, -1)],
            Slack::new(-4, -4),
        ),
        (
            &[("R0", 1), ("R1", 1), ("R2", 1)],
            vec![(mq::IH_U0U1_Y1, 1), (mq::IH_U2_Y2_U0, 1), (mq::IMAX, -1)],
            Slack::new(-4, -4),
        ),
        (
            &[("R0", 2), ("R1", 1), ("R2", 1)],
            vec![(mq::IH_U0U1_Y1, 1), (mq::IH_U0U2_Y2, 1), (mq::IMAX, -1)],
            Slack::new(-4, -4),
        ),
    ];
    for (coeffs, terms, slack) in cases {
        let terms: BTreeMap<String, _> = terms.iter().map(|(k, v)| (k.to_string(), rat(*v))).collect();
        let row = rows_with(&elim, coeffs)
            .into_iter()
            .find(|r| r.rhs_terms == terms)
            .unwrap_or_else(|| panic!("no row for {coeffs:?} {terms:?}"));
        assert_eq!(row.slack, slack);
    }
    let r12 = rows_with(&elim, &[("R1", 1), ("R2", 1)]);
    assert_eq!(r12.len(), 1);
    assert_eq!(r12[0].slack, Slack::new(-4, -4));
    assert_eq!(rows_with(&elim, &[("R1", 1)]).len(), 1);
    assert_eq!(rows_with(&elim, &[("R2", 1)]).len(), 1);
    assert_eq!(elim.inequalities.len(), 8);
    let summed = rows_with(&elim, &[("R0", 2), ("R1", 1), ("R2", 1)]);
    let prov: Vec<&str> = summed[0].provenance.iter().map(String::as_str).collect();
    assert_eq!(prov, ["marton.1", "marton.2", "marton.eq"]);
}

#[test]
fn cmge_pre_system_shape() {
    let sys = cmge_pre_system();
    assert_eq!(sys.inequalities.len(), 12);
    assert_eq!(sys.inequalities.iter().filter(|r| r.slack == Slack::new(-2, -1)).count(), 8);
}

#[test]
fn cmge_elimination_implies_theorem() {
    let elim = regions::cmge_eliminated().unwrap();
    let report = regions::implication_report(&elim, &theorems::cmge_theorem());
    assert_eq!(report.len(), 9);
    for imp in &report {
        let m = imp.matched.as_ref().unwrap_or_else(|| panic!("unmatched {}", imp.theorem_row.display()));
        assert!(imp.implies, "{} vs {}", m.display(), imp.theorem_row.display());
    }
}

#[test]
fn hk_ea_template() {
    let sys = hk_ea_system();
    assert_eq!(sys.inequalities.len(), 12);
    assert!(sys.inequalities.iter().all(|r| r.slack == Slack::new(-2, -1)));
}

fn random_system(rng: &mut ChaCha8Rng) -> RateInequalitySystem {
    let nv = rng.random_range(1..=5);
    let names: Vec<String> = (0..nv).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut sys = RateInequalitySystem::new(&refs);
    for k in 0..rng.random_range(1..=10) {
        let mut r = RateInequality::new(&format!("row{k}"));
        for v in &names {
            let c = rng.random_range(-3..=3);
            if c != 0 {
                r = r.coeff(v, c);
            }
        }
        r.slack = Slack {
            constant: rat(rng.random_range(-6..=6)) / rat(rng.random_range(1..=4)),
            log_eps: rat(0),
        };
        sys.push(r);
    }
    sys
}

fn satisfied(row: &RateInequality, point: &BTreeMap<String, num_rational::Ratio<i64>>) -> bool {
    let lhs = row
        .coeffs
        .iter()
        .fold(rat(0), |acc, (v, c)| acc + *c * point.get(v).copied().unwrap_or_else(|| rat(0)));
    lhs <= row.slack.constant
}

#[test]
fn fm_projection_is_exact_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    for _ in 0..200 {
        let sys = random_system(&mut rng);
        let var = sys.variables[0].clone();
        let out = fm_eliminate(&sys, &var).unwrap();
        for _ in 0..20 {
            let point: BTreeMap<String, _> = out
                .variables
                .iter()
                .map(|v| (v.clone(), rat(rng.random_range(-4..=4)) / rat(rng.random_range(1..=3))))
                .collect();
            // Interval of feasible values for the eliminated variable.
            let (mut lo, mut hi): (Option<_>, Option<_>) = (None, None);
            let mut fixed_ok = true;
            for r in sys.inequalities.iter().chain(&sys.conditions) {
                let a = r.coefficient(&var);
                let rest = r
                    .coeffs
                    .iter()
                    .filter(|(v, _)| **v != var)
                    .fold(rat(0), |acc, (v, c)| acc + *c * point[v]);
                let b = r.slack.constant - rest;
                if a.is_zero() {
                    fixed_ok &= rat(0) <= b;
                } else if a.is_positive() {
                    let t = b / a;
                    hi = Some(hi.map_or(t, |h: num_rational::Ratio<i64>| h.min(t)));
                } else {
                    let t = b / a;
                    lo = Some(lo.map_or(t, |l: num_rational::Ratio<i64>| l.max(t)));
                }
            }
            let extends = fixed_ok
                && match (lo, hi) {
                    (Some(l), Some(h)) => l <= h,
                    _ => true,
                };
            let inside = out.inequalities.iter().chain(&out.conditions).all(|r| satisfied(r, &point));
            assert_eq!(inside, extends, "system {:?}", sys.inequalities.iter().map(|r| r.display()).collect::<Vec<_>>());
        }
    }
}

fn canonical_rows(sys: &RateInequalitySystem) -> Vec<String> {
    let mut v: Vec<String> = sys.inequalities.iter().chain(&sys.conditions).map(|r| r.display()).collect();
    v.sort();
    v
}

#[test]
fn cmge_elimination_order_does_not_change_the_projection() {
    use theorems::cmge::{R1P, R2P};
    let a = fm_eliminate_all(&cmge_pre_system(), &[R1P, R2P]).unwrap();
    let b = fm_eliminate_all(&cmge_pre_system(), &[R2P, R1P]).unwrap();
    // Both orders describe the same polyhedron; test on a grid of values.
    let values: BTreeMap<String, f64> = theorems::cmge_pre_system()
        .quantity_names()
        .into_iter()
        .enumerate()
        .map(|(i, n)| (n, 3.0 + 0.7 * i as f64))
        .collect();
    let na = numeric::evaluate(&a, &values, 0.25).unwrap();
    let nb = numeric::evaluate(&b, &values, 0.25).unwrap();
    for i in 0..=20 {
        for j in 0..=20 {
            let p = BTreeMap::from([("R1".to_string(), 0.4 * i as f64), ("R2".to_string(), 0.4 * j as f64)]);
            assert_eq!(na.contains(&p).unwrap().inside, nb.contains(&p).unwrap().inside, "{p:?}");
        }
    }
    assert!(!canonical_rows(&a).is_empty());
}

#[test]
fn substitution_examples() {
    let mut sys = RateInequalitySystem::new(&["R2", "r1", "r2"]);
    sys.push(RateInequality::new("row").coeff("R2", 1).coeff("r2", 1).term("K", 1));
    sys.push(RateInequality::new("other").coeff("R2", 1).term("K", 1));
    let eq = RateInequality::new("eq").coeff("r1", 1).coeff("r2", 1).term("C", 1);
    let out = substitute_equality(&sys, &eq, "r2").unwrap();
    assert_eq!(out.inequalities[0].display(), "R2 - r1 <= -C + K");
    assert_eq!(out.inequalities[1].display(), sys.inequalities[1].display());
}

#[test]
fn system_file_round_trip() {
    let text = r#"{
        "variables": ["x", "y"],
        "inequalities": [
            {"coeffs": {"x": "1", "y": "1"}, "rhs_terms": {"A": "1"}, "slack": ["-1/2", "0"]},
            {"coeffs": {"x": "-1"}, "slack": ["0", "0"]},
            {"coeffs": {"x": "1", "y": "-1"}, "slack": ["1", "0"]}
        ],
        "eliminate": ["x"]
    }"#;
    let doc: SystemDoc = serde_json::from_str(text).unwrap();
    let sys = doc.to_system().unwrap();
    let out = fm_eliminate(&sys, "x").unwrap();
    let rows = canonical_rows(&out);
    assert!(rows.contains(&"y <= A - 1/2".to_string()), "{rows:?}");
    assert!(rows.contains(&"-y <= 1".to_string()), "{rows:?}");
}

#[test]
fn containment_examples() {
    let sys = NumericSystem {
        variables: vec!["R1".into(), "R2".into()],
        rows: vec![
            NumericRow { label: "a".into(), coeffs: vec![1.0, 0.0], rhs: 1.0 },
            NumericRow { label: "b".into(), coeffs: vec![1.0, 1.0], rhs: 1.5 },
        ],
        conditions: vec![],
    };
    let origin = BTreeMap::from([("R1".to_string(), 0.0), ("R2".to_string(), 0.0)]);
    assert!(sys.contains(&origin).unwrap().inside);
    let p = BTreeMap::from([("R1".to_string(), 0.5), ("R2".to_string(), 1.2)]);
    assert_eq!(sys.contains(&p).unwrap().violated, ["b"]);
    let missing = BTreeMap::from([("R1".to_string(), 0.0)]);
    assert!(sys.contains(&missing).is_err());
}

#[test]
fn containment_matches_row_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.random_range(1..=4);
        let variables: Vec<String> = (0..n).map(|i| format!("R{i}")).collect();
        let rows: Vec<NumericRow> = (0..rng.random_range(1..=6))
            .map(|k| NumericRow {
                label: format!("row{k}"),
                coeffs: (0..n).map(|_| rng.random_range(-2.0..2.0)).collect(),
                rhs: rng.random_range(-1.0..3.0),
            })
            .collect();
        let sys = NumericSystem { variables: variables.clone(), rows: rows.clone(), conditions: vec![] };
        for _ in 0..10 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-0.2..2.0)).collect();
            let point: BTreeMap<String, f64> = variables.iter().cloned().zip(x.iter().copied()).collect();
            let mut expect: Vec<String> = variables
                .iter()
                .zip(&x)
                .filter(|(_, v)| **v < -1e-9)
                .map(|(name, _)| format!("{name}>=0"))
                .collect();
            for r in &rows {
                let lhs: f64 = r.coeffs.iter().zip(&x).map(|(a, b)| a * b).sum();
                if lhs > r.rhs + 1e-9 * r.rhs.abs().max(1.0) {
                    expect.push(r.label.clone());
                }
            }
            let got = sys.contains(&point).unwrap();
            assert_eq!(got.violated, expect);
            assert_eq!(got.inside, expect.is_empty());
        }
    }
}

#[test]
fn box_boundary_reaches_the_corner() {
    let sys = NumericSystem {
        variables: vec!["R1".into(), "R2".into()],
        rows: vec![
            NumericRow { label: "a".into(), coeffs: vec![1.0, 0.0], rhs: 1.0 },
            NumericRow { label: "b".into(), coeffs: vec![0.0, 1.0], rhs: 1.0 },
        ],
        conditions: vec![],
    };
    let pts = sys.boundary_2d(("R1", "R2"), &BTreeMap::new(), 65).unwrap();
    assert_eq!(pts.len(), 65);
    assert!((pts[0].0 - 1.0).abs() < 1e-12 && pts[0].1.abs() < 1e-12);
    assert!((pts[32].0 - 1.0).abs() < 1e-12 && (pts[32].1 - 1.0).abs() < 1e-12);
    assert!(pts.iter().all(|(x, y)| (x - 1.0).abs() < 1e-12 || (y - 1.0).abs() < 1e-12));

    let empty = NumericSystem {
        rows: vec![NumericRow { label: "a".into(), coeffs: vec![1.0, 0.0], rhs: -1.0 }],
        ..sys
    };
    assert!(empty.boundary_2d(("R1", "R2"), &BTreeMap::new(), 10).unwrap().is_empty());
}

#[test]
fn useless_channels_give_empty_regions() {
    let lv = (1.0f64 / 0.5).log2();
    let m = regions::marton_region(&models::marton_useless(), 0.5, opts()).unwrap();
    for q in m.quantities.values().filter(|q| q.quantity.kind == QuantityKind::Hypothesis) {
        assert!((q.value - lv).abs() < 1e-9, "{}: {}", q.quantity.name, q.value);
    }
    assert!(m.numeric.rows.iter().all(|r| r.rhs < 0.0));
    assert!(m.empty);
    let c = regions::cmge_region(&models::cmge_useless(), 0.5, opts()).unwrap();
    assert!(c.empty);
    let h = regions::hk_ea_region(&models::hk_ea_useless(), 0.5, opts()).unwrap();
    assert!(h.empty);
    for q in h.quantities.values() {
        assert!((q.value - lv).abs() < 1e-9, "{}: {}", q.quantity.name, q.value);
    }
}

#[test]
fn model_file_regions() {
    let m = models::load("marton_useless.json");
    assert!(regions::region_for_model(&m, None, 0.5, opts()).unwrap().empty);
    let c = models::load("cmge_small.json");
    let r = regions::region_for_model(&c, None, 0.3, opts()).unwrap();
    assert_eq!(r.quantities.len(), 8);
    let h = models::load("hk_ea_small.json");
    let r = regions::region_for_model(&h, None, 0.3, opts()).unwrap();
    assert_eq!(r.quantities.len(), 12);
    assert!(r.derived_rates.is_some());
}

#[test]
fn marton_split_broadcast_region() {
    let state = models::marton_split(3, 3);
    let r = regions::marton_region(&state, 0.5, opts()).unwrap();
    // Each receiver's quantity is log 8 + log 1/(1−ε) = 4 bits; the
    // independent halves give Imax = log(1−ε) = −1.
    for name in [mq::IH_U0U1_Y1, mq::IH_U0U2_Y2, mq::IH_U1_Y1_U0, mq::IH_U2_Y2_U0] {
        let v = r.quantities[name].value;
        assert!((v - 4.0).abs() < 1e-9, "{name}: {v}");
        let split = r.quantities[name].quantity.split(&state).unwrap();
        let p = cqrate::qcore::split_state_general(&state.cq, &split).unwrap();
        let diag = |s: &cqrate::qcore::CqState| -> Vec<f64> {
            s.probs().iter().zip(s.states()).flat_map(|(p, st)| (0..st.dim()).map(move |i| p * st.matrix()[(i, i)].re)).collect()
        };
        let oracle = oracles::dh_threshold_oracle(&diag(&p.0), &diag(&p.1), 0.5);
        assert!((v - oracle).abs() < 1e-9, "{name}: {v} vs {oracle}");
    }
    assert!((r.quantities[mq::IMAX].value + 1.0).abs() < 1e-9);
    assert!(!r.empty);
    let expect: Vec<Vec<f64>> = vec![
        vec![0.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![0.0, 1.0, 0.0],
        vec![0.5, 0.0, 0.0],
    ];
    assert_eq!(r.vertices.len(), expect.len(), "{:?}", r.vertices);
    for (a, b) in r.vertices.iter().zip(&expect) {
        assert!(a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9), "{:?}", r.vertices);
    }
}

#[test]
fn marton_boundary_points_are_tight() {
    let state = models::marton_split(3, 3);
    let r = regions::marton_region(&state, 0.5, opts()).unwrap();
    assert!(!r.empty);
    let fixed = BTreeMap::from([("R0".to_string(), 0.0)]);
    let pts = r.numeric.boundary_2d(("R1", "R2"), &fixed, 40).unwrap();
    assert!(!pts.is_empty());
    for (x, y) in pts {
        let point = |s: f64| {
            BTreeMap::from([("R0".to_string(), 0.0), ("R1".to_string(), x * s), ("R2".to_string(), y * s)])
        };
        assert!(r.numeric.contains(&point(1.0)).unwrap().inside, "({x}, {y})");
        if x.hypot(y) > 1e-3 {
            assert!(!r.numeric.contains(&point(1.0 + 1e-6)).unwrap().inside, "({x}, {y})");
        }
    }
}

#[test]
fn copy_broadcast_has_no_region() {
    // Both receivers see the whole 4-bit input; U1, U2 are its 2-bit halves.
    let cq = models::uniform_cq(&[1, 4, 4], &[16, 16], |t| {
        let y = cqrate::qcore::DensityMatrix::basis(16, 4 * t[1] + t[2]).unwrap();
        cqrate::qcore::tensor(&y, &y)
    });
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let state = regions::NamedCq::new(cq, names(&["U0", "U1", "U2"]), names(&["Y1", "Y2"])).unwrap();
    let r = regions::marton_region(&state, 0.5, opts()).unwrap();
    for name in [mq::IH_U0U1_Y1, mq::IH_U0U2_Y2, mq::IH_U1_Y1_U0, mq::IH_U2_Y2_U0] {
        assert!((r.quantities[name].value - 3.0).abs() < 1e-9, "{name}");
    }
    assert!((r.quantities[mq::IMAX].value + 1.0).abs() < 1e-9);
    assert!(r.empty, "{:?}", r.vertices);
}

#[test]
fn hk_ea_values_match_dense_assembly() {
    let model = models::load("hk_ea_small.json");
    let state = regions::NamedCq::from_model(&model).unwrap();
    for eps in [0.1, 0.3] {
        let r = regions::hk_ea_region(&state, eps, opts()).unwrap();
        for q in r.quantities.values() {
            let split = q.quantity.split(&state).unwrap();
            let oracle = oracles::split_dense_dh(&state.cq, &split, eps);
            assert!((q.value - oracle).abs() < 1e-9, "{}: {} vs {}", q.quantity.name, q.value, oracle);
        }
    }
}

#[test]
fn verbatim_template_uses_theorem_rows() {
    let state = models::marton_split(2, 2);
    let r = regions::marton_region(&state, 0.4, RegionOptions { template: Template::Paper, parallel: false }).unwrap();
    assert_eq!(r.system.inequalities.len(), 5);
    let json = regions::report::region_json(&r).unwrap();
    assert_eq!(json["template"], "paper");
    for row in json["system"]["inequalities"].as_array().unwrap() {
        assert!(!row["provenance"].as_array().unwrap().is_empty());
    }
}

#[test]
fn quantity_parsing() {
    let known = ["Q", "U1", "U2", "Y1", "Z1"];
    let q = InfoQuantity::parse("IH(U1Z1:Y1U2|Q)", &known).unwrap();
    assert_eq!(q.left, ["U1", "Z1"]);
    assert_eq!(q.right, ["Y1", "U2"]);
    assert_eq!(q.cond, ["Q"]);
    assert!(InfoQuantity::parse("IH(U3:Y1)", &known).is_err());
    assert!(InfoQuantity::parse("IH(U1Y1)", &known).is_err());
}

#[test]
fn parallel_and_serial_reports_agree() {
    let model = models::load("cmge_small.json");
    let state = regions::NamedCq::from_model(&model).unwrap();
    let a = regions::cmge_region(&state, 0.2, RegionOptions { template: Template::Fm, parallel: true }).unwrap();
    let b = regions::cmge_region(&state, 0.2, RegionOptions { template: Template::Fm, parallel: false }).unwrap();
    let ja = serde_json::to_string(&regions::report::region_json(&a).unwrap()).unwrap();
    let jb = serde_json::to_string(&regions::report::region_json(&b).unwrap()).unwrap();
    assert_eq!(ja, jb);
}

fn region_volume_proxy(r: &regions::RegionReport) -> usize {
    let mut n = 0;
    for i in 0..=12 {
        for j in 0..=12 {
            let p = BTreeMap::from([
                ("R0".to_string(), 0.0),
                ("R1".to_string(), 0.25 * i as f64),
                ("R2".to_string(), 0.25 * j as f64),
            ]);
            n += r.numeric.contains(&p).unwrap().inside as usize;
        }
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn marton_slack_rows_follow_eps(e1 in 0.05f64..0.6, de in 0.01f64..0.3) {
        // The numeric rhs of every row is the symbolic rhs evaluated at eps.
        let state = models::marton_split(2, 1);
        for eps in [e1, e1 + de] {
            let r = regions::marton_region(&state, eps, RegionOptions { template: Template::Fm, parallel: false }).unwrap();
            let vals = numeric::values_of(&r.quantities);
            for (row, num) in r.system.inequalities.iter().zip(&r.numeric.rows) {
                let v = numeric::rhs_value(row, &vals, eps).unwrap();
                prop_assert!((v - num.rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn slack_value_matches_formula(k1 in -8i64..8, k2 in -8i64..8, eps in 0.01f64..0.99) {
        let s = Slack::new(k1, k2);
        prop_assert!((s.value(eps) - (k1 as f64 + k2 as f64 * (1.0 / eps).log2())).abs() < 1e-12);
    }
}

#[test]
fn smaller_eps_costs_more_slack() {
    // At fixed quantities the slack penalty log(1/ε) shrinks the region.
    let state = models::marton_split(3, 3);
    let strict = regions::marton_region(&state, 0.2, opts()).unwrap();
    let loose = regions::marton_region(&state, 0.6, opts()).unwrap();
    assert!(region_volume_proxy(&strict) <= region_volume_proxy(&loose));
}

#[test]
fn eps_is_validated() {
    let state = models::marton_useless();
    assert!(regions::marton_region(&state, 0.0, opts()).is_err());
    assert!(regions::marton_region(&state, 1.0, opts()).is_err());
}
