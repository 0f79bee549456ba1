//! `cqrate`: one-shot rate regions, entropies, eliminations and codebook
//! simulations from the command line.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cqrate::codesim::{
    self, CmgeInstance, Decoding, DecoderPolicy, MartonInstance, MartonRates, SimOptions, SimReport, SplitRates,
};
use cqrate::osentropy::{self, EntropyResult};
use cqrate::qcore::model::{Model, ModelKind};
use cqrate::qcore::Tolerances;
use cqrate::regions::{self, report, InfoQuantity, NamedCq, RegionOptions, RegionReport, SystemDoc, Template};

const AFTER_HELP: &str = "\
Exit status: 0 on success, 1 when a verification suite fails, 2 on a
validation or file error, 3 when a work budget is exceeded.

Model files are JSON documents with `alphabets`, `distribution`, `channel`,
`output_dims` and `encoders` (optional `kind`, `names`, `output_names`).
System files are JSON documents with `variables`, `inequalities`,
`equalities` and `eliminate`; each row has `coeffs`, `rhs_terms`, `slack`
([constant, log-eps weight]) and `provenance`, with rationals as \"p/q\".

Every flag that takes a value can also be set through an environment
variable prefixed CQRATE_, for example CQRATE_EPS or CQRATE_SEED.";

#[derive(Parser, Debug)]
#[command(name = "cqrate", version, about = "One-shot rate regions for classical-quantum channels", after_help = AFTER_HELP)]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TolArgs {
    /// Hermiticity tolerance used when loading a model.
    #[arg(long, global = true, env = "CQRATE_TOL_HERMITIAN")]
    tol_hermitian: Option<f64>,
    /// Positivity tolerance used when loading a model.
    #[arg(long, global = true, env = "CQRATE_TOL_PSD")]
    tol_psd: Option<f64>,
    /// Normalization tolerance for model distributions.
    #[arg(long, global = true, env = "CQRATE_TOL_PROBABILITY")]
    tol_probability: Option<f64>,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(v) = self.tol_hermitian {
            t.hermitian = v;
        }
        if let Some(v) = self.tol_psd {
            t.psd = v;
        }
        if let Some(v) = self.tol_probability {
            t.model_probability = v;
        }
        t
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a one-shot entropy.
    Entropy {
        #[command(subcommand)]
        what: EntropyCmd,
    },
    /// Rate region of a channel model.
    Region(RegionArgs),
    /// Fourier–Motzkin elimination of a system file.
    Eliminate(EliminateArgs),
    /// Random-codebook simulation with PGM decoders.
    Simulate(SimulateArgs),
    /// Run the operator lemma and covering suites.
    VerifyLemmas(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum EntropyCmd {
    /// A named quantity such as `IH(U1:Y1|U0)` on a model.
    Quantity {
        #[arg(long, env = "CQRATE_MODEL")]
        model: PathBuf,
        #[arg(long)]
        quantity: String,
        #[arg(long, env = "CQRATE_EPS")]
        eps: f64,
        #[arg(long, value_enum, default_value = "json", env = "CQRATE_OUTPUT")]
        output: Format,
    },
    /// Classical hypothesis testing relative entropy `D_H^eps(p||q)`.
    Dh(PairArgs),
    /// Classical smooth max relative entropy `D_max^eps(p||q)`.
    Dmax(PairArgs),
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    q: Vec<f64>,
    #[arg(long, env = "CQRATE_EPS")]
    eps: f64,
    #[arg(long, value_enum, default_value = "json", env = "CQRATE_OUTPUT")]
    output: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RegionKind {
    Marton,
    Cmge,
    HkEa,
}

impl RegionKind {
    fn model_kind(self) -> ModelKind {
        match self {
            RegionKind::Marton => ModelKind::Marton,
            RegionKind::Cmge => ModelKind::Cmge,
            RegionKind::HkEa => ModelKind::HkEa,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TemplateArg {
    Fm,
    Paper,
}

#[derive(Args, Debug)]
struct RegionArgs {
    #[arg(value_enum)]
    kind: RegionKind,
    #[arg(long, env = "CQRATE_MODEL")]
    model: PathBuf,
    #[arg(long, env = "CQRATE_EPS")]
    eps: f64,
    /// `fm` emits the full eliminated system, `paper` the theorem rows.
    #[arg(long, value_enum, default_value = "fm", env = "CQRATE_TEMPLATE")]
    template: TemplateArg,
    /// `csv` emits vertices, or the boundary polyline when `--free` is set.
    #[arg(long, value_enum, default_value = "json", env = "CQRATE_OUTPUT")]
    output: Format,
    /// Evaluate information quantities on one thread.
    #[arg(long)]
    serial: bool,
    /// Two rate variables spanning the boundary slice, e.g. `R1,R2`.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    free: Vec<String>,
    /// Values of the remaining rates on the slice, e.g. `R0=0.5`.
    #[arg(long, value_parser = parse_fix)]
    fix: Vec<(String, f64)>,
    /// Number of boundary rays.
    #[arg(long, default_value_t = 64, env = "CQRATE_RESOLUTION")]
    resolution: usize,
}

fn parse_fix(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value in `{s}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Args, Debug)]
struct EliminateArgs {
    #[arg(long, env = "CQRATE_SYSTEM")]
    system: PathBuf,
    /// Elimination order; overrides the file's `eliminate` list.
    #[arg(long, value_delimiter = ',')]
    eliminate: Vec<String>,
    #[arg(long, value_enum, default_value = "json", env = "CQRATE_OUTPUT")]
    output: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SimKind {
    Marton,
    Cmge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DecoderArg {
    Joint,
    Conditional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DecodingArg {
    NonUnique,
    Unique,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(value_enum)]
    kind: SimKind,
    #[arg(long, env = "CQRATE_MODEL")]
    model: PathBuf,
    #[arg(long, env = "CQRATE_EPS")]
    eps: f64,
    /// Bits per index: `r0,r1,r2,bin1,bin2` (marton) or
    /// `public1,private1,public2,private2` (cmge).
    #[arg(long, value_delimiter = ',', required = true)]
    rates: Vec<u32>,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..), env = "CQRATE_CODEBOOKS")]
    codebooks: u64,
    #[arg(long, default_value_t = 0, env = "CQRATE_SEED")]
    seed: u64,
    #[arg(long, value_enum, default_value = "joint", env = "CQRATE_DECODER")]
    decoder: DecoderArg,
    /// CMGE decoding rule.
    #[arg(long, value_enum, default_value = "non-unique", env = "CQRATE_DECODING")]
    decoding: DecodingArg,
    /// Work budget in floating-point operations.
    #[arg(long, default_value_t = codesim::DEFAULT_BUDGET, env = "CQRATE_BUDGET")]
    budget: f64,
    /// Simulate codebooks on one thread.
    #[arg(long)]
    serial: bool,
    #[arg(long, value_enum, default_value = "json", env = "CQRATE_OUTPUT")]
    output: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0, env = "CQRATE_SEED")]
    seed: u64,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..), env = "CQRATE_TRIALS")]
    trials: u64,
    #[arg(long, value_enum, default_value = "json", env = "CQRATE_OUTPUT")]
    output: Format,
}

enum Failure {
    Suite(String),
    Invalid(String),
    Budget(String),
}

impl From<cqrate::Error> for Failure {
    fn from(e: cqrate::Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Suite(out)) => {
            print!("{out}");
            eprintln!("error: at least one suite failed");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> CliResult<String> {
    let tol = cli.tol.tolerances();
    match &cli.command {
        Command::Entropy { what } => entropy(what, &tol),
        Command::Region(a) => region(a, &tol),
        Command::Eliminate(a) => eliminate(a),
        Command::Simulate(a) => simulate(a, &tol),
        Command::VerifyLemmas(a) => verify(a),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn load_model(path: &Path, tol: &Tolerances) -> CliResult<Model> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("cannot read model {}: {e}", path.display())))?;
    Ok(Model::from_json_str_with(&text, tol)?)
}

fn check_eps(eps: f64) -> CliResult<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("--eps must lie in (0, 1), got {eps}")))
    }
}

/// Reject a model whose declared kind contradicts the subcommand.
fn check_kind(model: &Model, want: ModelKind) -> CliResult<()> {
    match model.kind {
        Some(k) if k != want => Err(Failure::Invalid(format!(
            "model field `kind`: the model is `{}` but `{}` was requested",
            k.as_str(),
            want.as_str()
        ))),
        _ => Ok(()),
    }
}

fn entropy_doc(name: &str, eps: f64, r: &EntropyResult, format: Format) -> String {
    match format {
        Format::Json => pretty(&json!({
            "quantity": name,
            "eps": eps,
            "value": report::real(r.value),
            "certificate": report::real(r.certificate),
        })),
        Format::Csv => format!("quantity,eps,value,certificate\n{name},{eps},{},{}\n", r.value, r.certificate),
    }
}

fn entropy(cmd: &EntropyCmd, tol: &Tolerances) -> CliResult<String> {
    match cmd {
        EntropyCmd::Quantity {
            model,
            quantity,
            eps,
            output,
        } => {
            let model = load_model(model, tol)?;
            let state = NamedCq::from_model(&model)?;
            let q = InfoQuantity::parse(quantity, &state.names())?;
            let r = q.evaluate(&state, *eps)?;
            Ok(entropy_doc(&q.name, *eps, &r, *output))
        }
        EntropyCmd::Dh(a) => {
            let r = osentropy::dh_classical(&a.p, &a.q, a.eps)?;
            Ok(entropy_doc("DH", a.eps, &r, a.output))
        }
        EntropyCmd::Dmax(a) => {
            let r = osentropy::dmax_smooth(&a.p, &a.q, a.eps)?;
            Ok(entropy_doc("Dmax", a.eps, &r, a.output))
        }
    }
}

fn region(a: &RegionArgs, tol: &Tolerances) -> CliResult<String> {
    check_eps(a.eps)?;
    let model = load_model(&a.model, tol)?;
    let kind = a.kind.model_kind();
    check_kind(&model, kind)?;
    let opts = RegionOptions {
        template: match a.template {
            TemplateArg::Fm => Template::Fm,
            TemplateArg::Paper => Template::Paper,
        },
        parallel: !a.serial,
    };
    let r = regions::region_for_model(&model, Some(kind), a.eps, opts)?;
    if !a.free.is_empty() && a.free.len() != 2 {
        return Err(Failure::Invalid(format!("--free takes two variables, got {}", a.free.len())));
    }
    match a.output {
        Format::Json => {
            let mut doc = report::region_json(&r)?;
            if a.free.len() == 2 {
                let pts = boundary(&r, a)?;
                doc["boundary"] = json!({
                    "free": a.free,
                    "fixed": a.fix.iter().map(|(k, v)| (k.clone(), json!(v))).collect::<serde_json::Map<_, _>>(),
                    "points": pts.iter().map(|(x, y)| json!([x, y])).collect::<Vec<_>>(),
                });
            }
            Ok(pretty(&doc))
        }
        Format::Csv if a.free.len() == 2 => {
            let mut s = format!("{},{}\n", a.free[0], a.free[1]);
            for (x, y) in boundary(&r, a)? {
                s.push_str(&format!("{x},{y}\n"));
            }
            Ok(s)
        }
        Format::Csv => {
            let mut s = r.numeric.variables.join(",");
            s.push('\n');
            for v in &r.vertices {
                let row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
            Ok(s)
        }
    }
}

fn boundary(r: &RegionReport, a: &RegionArgs) -> CliResult<Vec<(f64, f64)>> {
    let fixed: BTreeMap<String, f64> = a.fix.iter().cloned().collect();
    for k in fixed.keys() {
        if !r.numeric.variables.contains(k) || a.free.contains(k) {
            return Err(Failure::Invalid(format!("--fix names `{k}`, which is not a pinned rate variable")));
        }
    }
    Ok(r.numeric.boundary_2d((&a.free[0], &a.free[1]), &fixed, a.resolution)?)
}

fn eliminate(a: &EliminateArgs) -> CliResult<String> {
    let text = std::fs::read_to_string(&a.system)
        .map_err(|e| Failure::Invalid(format!("cannot read system {}: {e}", a.system.display())))?;
    let doc: SystemDoc =
        serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("system file: {e}")))?;
    let sys = doc.to_system()?;
    let order: Vec<&str> = if a.eliminate.is_empty() {
        doc.eliminate.iter().map(String::as_str).collect()
    } else {
        a.eliminate.iter().map(String::as_str).collect()
    };
    let out = regions::fm_eliminate_all(&sys, &order)?;
    match a.output {
        Format::Json => Ok(pretty(&json!({
            "eliminated": order,
            "system": report::system_json(&out, None)?,
        }))),
        Format::Csv => {
            let mut s = String::from("kind,text,slack_constant,slack_log_eps,provenance\n");
            let groups = [("inequality", &out.inequalities), ("equality", &out.equalities), ("condition", &out.conditions)];
            for (kind, rows) in groups {
                for r in rows.iter() {
                    let prov: Vec<&str> = r.provenance.iter().map(String::as_str).collect();
                    s.push_str(&format!(
                        "{kind},\"{}\",{},{},{}\n",
                        r.display(),
                        regions::format_rational(&r.slack.constant),
                        regions::format_rational(&r.slack.log_eps),
                        prov.join(";")
                    ));
                }
            }
            Ok(s)
        }
    }
}

fn simulate(a: &SimulateArgs, tol: &Tolerances) -> CliResult<String> {
    check_eps(a.eps)?;
    let model = load_model(&a.model, tol)?;
    let policy = match a.decoder {
        DecoderArg::Joint => DecoderPolicy::JointTest,
        DecoderArg::Conditional => DecoderPolicy::ConditionalTest,
    };
    let opts = SimOptions {
        policy,
        parallel: !a.serial,
        budget: a.budget,
    };
    let rep: SimReport = match a.kind {
        SimKind::Marton => {
            check_kind(&model, ModelKind::Marton)?;
            let [r0, r1, r2, b1, b2] = rates::<5>(&a.rates, "r0,r1,r2,bin1,bin2")?;
            let inst = MartonInstance::from_model(&model, a.eps, policy)?;
            codesim::simulate_marton(&inst, MartonRates::new(r0, r1, r2, b1, b2), a.codebooks, a.seed, &opts)?
        }
        SimKind::Cmge => {
            check_kind(&model, ModelKind::Cmge)?;
            let [p1, v1, p2, v2] = rates::<4>(&a.rates, "public1,private1,public2,private2")?;
            let decoding = match a.decoding {
                DecodingArg::NonUnique => Decoding::NonUnique,
                DecodingArg::Unique => Decoding::Unique,
            };
            let inst = CmgeInstance::from_model(&model, a.eps, policy)?;
            codesim::simulate_cmge(&inst, SplitRates::new(p1, v1, p2, v2), decoding, a.codebooks, a.seed, &opts)?
        }
    };
    match a.output {
        Format::Json => Ok(pretty(&serde_json::to_value(&rep).map_err(|e| Failure::Invalid(e.to_string()))?)),
        Format::Csv => Ok(rep.to_csv()),
    }
}

fn rates<const N: usize>(v: &[u32], names: &str) -> CliResult<[u32; N]> {
    v.try_into()
        .map_err(|_| Failure::Invalid(format!("--rates expects {N} values ({names}), got {}", v.len())))
}

fn verify(a: &VerifyArgs) -> CliResult<String> {
    let suites = codesim::verify_lemmas(a.seed, a.trials as usize)?;
    let passed = suites.iter().all(|s| s.passed);
    let out = match a.output {
        Format::Json => pretty(&json!({
            "seed": a.seed,
            "trials": a.trials,
            "passed": passed,
            "suites": suites.iter().map(|s| json!({
                "name": s.name,
                "instances": s.instances,
                "worst_slack": report::real(s.worst_slack),
                "tolerance": s.tolerance,
                "passed": s.passed,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("suite,instances,worst_slack,tolerance,passed\n");
            for r in &suites {
                s.push_str(&format!("{},{},{},{},{}\n", r.name, r.instances, r.worst_slack, r.tolerance, r.passed));
            }
            s
        }
    };
    if passed {
        Ok(out)
    } else {
        Err(Failure::Suite(out))
    }
}
