//! Argument definitions and command bodies for the `twoxor` binary.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use thiserror::Error;
use twoxor_core::asymptotics::{
    self, prob_fixed_function_limit, prob_input_limit, prob_sat_critical, prob_sat_limit, saddle_g2, single_block_asympt,
    two_block_asympt, AsymptError, InputCriticalVariant, LogValue, RegimeTag, TwoBlockRegime, DEFAULT_R_MAX,
};
use twoxor_core::census::{self, CensusError};
use twoxor_core::partition::IntegerPartition;
use twoxor_core::rational::{parse, q};
use twoxor_core::BigRational;

use crate::config::Config;
use crate::io::{class_probability, csv_table, float_cell, log_value, rational, Method, OutputRecord};
use crate::montecarlo::{self, McError, Z_PASS};
use crate::oracle::{self, OracleError};

#[derive(Debug, Parser)]
#[command(name = "twoxor", version, about = "Exact, asymptotic and simulated distribution of random 2-Xor functions")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Optional `key = value` file (r_max, z_pass, enum_cap).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SatMethod {
    Exact,
    /// Subcritical `(1 − 2m/n)^{1/4}`.
    Limit,
    /// Critical-window Airy sum.
    Critical,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExactOrAsympt {
    Exact,
    Asympt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Derived,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotMethod {
    Exact,
    Limit,
    Mc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Probability that a random expression is satisfiable.
    SatProb {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = SatMethod::Exact)]
        method: SatMethod,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        rmax: Option<usize>,
        /// Worker threads (never changes the result).
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Probability that a uniform assignment satisfies a random satisfiable expression.
    InputProb {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = ExactOrAsympt::Exact)]
        method: ExactOrAsympt,
        /// Critical-window constant to use.
        #[arg(long, value_enum, default_value_t = Variant::Derived)]
        variant: Variant,
        #[arg(long)]
        rmax: Option<usize>,
    },
    /// Probability of one function of a class, e.g. `--partition 3+2+1+1`.
    FuncProb {
        #[arg(long)]
        partition: String,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = ExactOrAsympt::Exact)]
        method: ExactOrAsympt,
    },
    /// Compensation-weighted multigraph counts.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Connected multigraphs only.
        #[arg(long, conflicts_with = "sigma")]
        connected: bool,
        /// Weight σ^{components}, as `p/q`.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long, value_enum, default_value_t = ExactOrAsympt::Exact)]
        method: ExactOrAsympt,
    },
    /// Monte Carlo over random expressions (or the multigraph process).
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Compare against the exact distribution.
        #[arg(long)]
        compare: bool,
        /// Sample multigraphs instead and compare with κ.
        #[arg(long)]
        multigraph: bool,
    },
    /// Exhaustive census of all (4n²)^m expressions.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Exact probability of every class plus FALSE.
    Distribution {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// (α, Pr(Sat)) pairs for m = αn over a grid, as CSV.
    PlotData {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha_min: f64,
        #[arg(long, default_value_t = 0.45)]
        alpha_max: f64,
        #[arg(long, default_value_t = 9)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = PlotMethod::Exact)]
        method: PlotMethod,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("unsupported regime: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Budget(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Unsupported(_) => "unsupported_regime",
            CliError::Budget(_) => "budget_exceeded",
        }
    }

    /// The structured error printed on stdout.
    pub fn to_json(&self) -> String {
        let body = json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } });
        serde_json::to_string_pretty(&body).expect("serializes")
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::Budget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<AsymptError> for CliError {
    fn from(e: AsymptError) -> Self {
        match e {
            AsymptError::InvalidInput(_) => CliError::Usage(e.to_string()),
            _ => CliError::Unsupported(e.to_string()),
        }
    }
}

impl From<McError> for CliError {
    fn from(e: McError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded { .. } => CliError::Budget(e.to_string()),
            OracleError::NoVariables => CliError::Usage(e.to_string()),
        }
    }
}

fn need_n(n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    Ok(())
}

fn inputs(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Flattens a results object into `key,value` rows.
fn flatten(prefix: &str, v: &Value, rows: &mut Vec<Vec<String>>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        Value::String(s) => rows.push(vec![prefix.to_string(), s.clone()]),
        Value::Number(x) => rows.push(vec![prefix.to_string(), float_cell(x.as_f64().unwrap_or(f64::NAN))]),
        other => rows.push(vec![prefix.to_string(), other.to_string()]),
    }
}

/// Either a JSON record or a CSV rendering of it.
enum Output {
    Record(OutputRecord),
    /// Commands with a natural table of their own.
    Table { record: OutputRecord, header: Vec<&'static str>, rows: Vec<Vec<String>> },
}

fn render(out: Output, format: Format) -> String {
    match (out, format) {
        (Output::Record(r), Format::Json) | (Output::Table { record: r, .. }, Format::Json) => r.to_json(),
        (Output::Record(r), Format::Csv) => {
            let mut rows = Vec::new();
            flatten("", &r.results, &mut rows);
            csv_table(&["key", "value"], &rows)
        }
        (Output::Table { header, rows, .. }, Format::Csv) => csv_table(&header, &rows),
    }
}

/// Runs one parsed command and returns what should go to stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let config = match &cli.config {
        Some(p) => Config::load(p).map_err(CliError::Usage)?,
        None => Config::default(),
    };
    let out = match &cli.command {
        Command::SatProb { n, m, method, trials, seed, rmax, parallel } => {
            sat_prob(*n, *m, *method, *trials, *seed, rmax.or(config.r_max).unwrap_or(DEFAULT_R_MAX), *parallel)?
        }
        Command::InputProb { n, m, method, variant, rmax } => {
            input_prob(*n, *m, *method, *variant, rmax.or(config.r_max).unwrap_or(DEFAULT_R_MAX))?
        }
        Command::FuncProb { partition, m, method } => func_prob(partition, *m, *method)?,
        Command::Census { n, m, connected, sigma, method } => census_cmd(*n, *m, *connected, sigma.as_deref(), *method)?,
        Command::Simulate { n, m, trials, seed, parallel, compare, multigraph } => {
            simulate(*n, *m, *trials, *seed, *parallel, *compare, *multigraph, config.z_pass.unwrap_or(Z_PASS))?
        }
        Command::Oracle { n, m, parallel } => {
            let cap = config.enum_cap.unwrap_or_else(oracle::cap_from_env);
            oracle_cmd(*n, *m, *parallel, cap)?
        }
        Command::Distribution { n, m } => distribution(*n, *m)?,
        Command::PlotData { n, alpha_min, alpha_max, steps, method, trials, seed, parallel } => {
            plot_data(*n, *alpha_min, *alpha_max, *steps, *method, *trials, *seed, *parallel)?
        }
    };
    Ok(render(out, cli.format))
}

fn sat_prob(n: usize, m: usize, method: SatMethod, trials: u64, seed: u64, r_max: usize, parallel: usize) -> Result<Output, CliError> {
    need_n(n)?;
    let mut inp = inputs(&[("n", json!(n)), ("m", json!(m)), ("method", json!(format!("{method:?}").to_lowercase()))]);
    let (results, prov, seed_out) = match method {
        SatMethod::Exact => (json!({ "prob_sat": rational(&census::prob_sat_exact(m, n)?) }), Method::Exact, None),
        SatMethod::Limit => {
            let v = prob_sat_limit(n, m)?;
            (json!({ "prob_sat": { "float": v }, "regime": RegimeTag::Subcritical.to_string() }), Method::Asymptotic, None)
        }
        SatMethod::Critical => {
            inp.insert("rmax".into(), json!(r_max));
            let c = prob_sat_critical(n, m, r_max)?;
            let results = json!({
                "prob_sat": { "float": c.value },
                "regime": RegimeTag::Critical { mu: c.mu }.to_string(),
                "mu": c.mu,
                "partial_sum": c.partial_sum,
                "tail_estimate": c.tail,
            });
            (results, Method::Asymptotic, None)
        }
        SatMethod::Mc => {
            inp.insert("trials".into(), json!(trials));
            let r = montecarlo::run_trials(n, m, trials, seed, parallel)?;
            let results = json!({
                "prob_sat": { "float": r.sat_frequency },
                "standard_error": r.standard_errors["sat"],
                "sat_count": r.sat_count,
                "trials": r.trials,
            });
            (results, Method::Montecarlo, Some(seed))
        }
    };
    Ok(Output::Record(OutputRecord::new("sat-prob", inp, results, prov, seed_out)))
}

fn input_prob(n: usize, m: usize, method: ExactOrAsympt, variant: Variant, r_max: usize) -> Result<Output, CliError> {
    need_n(n)?;
    let inp = inputs(&[("n", json!(n)), ("m", json!(m))]);
    let (results, prov) = match method {
        ExactOrAsympt::Exact => (json!({ "prob_input": rational(&census::prob_input_satisfies_exact(m, n)?) }), Method::Exact),
        ExactOrAsympt::Asympt => {
            let v = match variant {
                Variant::Derived => InputCriticalVariant::Derived,
                Variant::Printed => InputCriticalVariant::AsPrinted,
            };
            let (lv, tag) = prob_input_limit(n, m, r_max, v)?;
            (json!({ "prob_input": log_value(lv), "regime": tag.to_string() }), Method::Asymptotic)
        }
    };
    Ok(Output::Record(OutputRecord::new("input-prob", inp, results, prov, None)))
}

/// Picks the asymptotic evaluator matching the shape of `i`.
pub fn asympt_function(i: &IntegerPartition, m: usize) -> Result<(LogValue, RegimeTag), CliError> {
    let n = i.size();
    let parts = i.parts();
    let r = m as i64 - n as i64;
    if parts.len() == 1 {
        let (v, case) = single_block_asympt(n, m)?;
        return Ok((v, RegimeTag::SingleBlock(case)));
    }
    if parts.len() == 2 && i.count(1) == 0 {
        let p = parts[1];
        let single = p * p <= n;
        let regime = match (r <= asymptotics::FIXED_EXCESS_MAX, single) {
            (true, true) => TwoBlockRegime::FixedExcessSingleLarge,
            (true, false) => TwoBlockRegime::FixedExcessTwoLarge,
            (false, true) => TwoBlockRegime::LargeExcessSingleLarge,
            (false, false) => TwoBlockRegime::LargeExcessTwoLarge,
        };
        return Ok((two_block_asympt(n, p, m, regime)?, RegimeTag::TwoBlock(regime)));
    }
    if i.count(2) == parts.len() && 2 * m > n {
        let (_, e) = saddle_g2(n, m - n / 2)?;
        let ln = e.ln - m as f64 * (4.0 * (n * n) as f64).ln();
        return Ok((LogValue::positive(ln), RegimeTag::ProportionalBlocks));
    }
    if i.count(1) > 0 && i.essential() * i.essential() <= n {
        let tail: Vec<(usize, usize)> = i.blocks().filter(|&(l, _)| l >= 2).collect();
        let v = prob_fixed_function_limit(&tail, m as f64 / n as f64, n)?;
        return Ok((v, RegimeTag::FixedFunction));
    }
    Err(CliError::Unsupported(format!("no asymptotic formula covers partition {i} with m = {m}")))
}

fn func_prob(partition: &str, m: usize, method: ExactOrAsympt) -> Result<Output, CliError> {
    let i: IntegerPartition = partition.parse().map_err(|e: twoxor_core::partition::ParsePartitionError| CliError::Usage(e.to_string()))?;
    let n = i.size();
    let inp = inputs(&[("partition", json!(i.to_string())), ("n", json!(n)), ("m", json!(m))]);
    let (results, prov) = match method {
        ExactOrAsympt::Exact => (class_probability(&census::prob_function_exact(&i, m)?), Method::Exact),
        ExactOrAsympt::Asympt => {
            if m + i.num_blocks() < n {
                // below n − ξ clauses the probability is exactly zero
                let zero = q(0);
                (json!({ "prob_function": rational(&zero), "regime": "empty-support" }), Method::Exact)
            } else {
                let (v, tag) = asympt_function(&i, m)?;
                (json!({ "partition": i.to_string(), "prob_function": log_value(v), "regime": tag.to_string() }), Method::Asymptotic)
            }
        }
    };
    Ok(Output::Record(OutputRecord::new("func-prob", inp, results, prov, None)))
}

fn census_cmd(n: usize, m: usize, connected: bool, sigma: Option<&str>, method: ExactOrAsympt) -> Result<Output, CliError> {
    need_n(n)?;
    let mut inp = inputs(&[("n", json!(n)), ("m", json!(m)), ("connected", json!(connected))]);
    let sigma = match sigma {
        Some(s) => {
            let x = parse(s).ok_or_else(|| CliError::Usage(format!("bad σ {s:?}")))?;
            inp.insert("sigma".into(), json!(twoxor_core::rational::to_string(&x)));
            Some(x)
        }
        None => None,
    };
    let (results, prov) = match (method, connected, sigma) {
        (ExactOrAsympt::Exact, true, _) => (json!({ "count": rational(&census::connected_count(m, n)?) }), Method::Exact),
        (ExactOrAsympt::Exact, false, Some(s)) => (json!({ "count": rational(&census::weighted_count(m, n, &s)?) }), Method::Exact),
        (ExactOrAsympt::Exact, false, None) => {
            (json!({ "count": rational(&twoxor_core::multigraph::multigraph_count(m, n)) }), Method::Exact)
        }
        (ExactOrAsympt::Asympt, true, _) => {
            let (v, tag) = asymptotics::connected_asympt(m, n)?;
            (json!({ "count": log_value(v), "regime": tag.to_string() }), Method::Asymptotic)
        }
        (ExactOrAsympt::Asympt, false, _) => {
            return Err(CliError::Unsupported("asymptotics are only provided for connected counts".into()))
        }
    };
    Ok(Output::Record(OutputRecord::new("census", inp, results, prov, None)))
}

#[allow(clippy::too_many_arguments)]
fn simulate(n: usize, m: usize, trials: u64, seed: u64, parallel: usize, compare: bool, multigraph: bool, z_pass: f64) -> Result<Output, CliError> {
    need_n(n)?;
    let inp = inputs(&[("n", json!(n)), ("m", json!(m)), ("trials", json!(trials)), ("multigraph", json!(multigraph))]);
    if multigraph {
        let hist = montecarlo::sample_multigraphs(n, m, trials, seed, parallel)?;
        let total_kappa = twoxor_core::multigraph::multigraph_count(m, n);
        let rows: Vec<Value> = hist
            .iter()
            .map(|(g, &c)| {
                let edges: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
                let expected = g.kappa() / &total_kappa;
                json!({ "edges": edges.join(" "), "count": c, "expected": rational(&expected) })
            })
            .collect();
        let results = json!({ "samples": trials, "multigraphs": rows });
        return Ok(Output::Record(OutputRecord::new("simulate", inp, results, Method::Montecarlo, Some(seed))));
    }
    let report = montecarlo::run_trials(n, m, trials, seed, parallel)?;
    let mut results = serde_json::to_value(&report).expect("serializes");
    if compare {
        let d = census::full_distribution(n, m)?;
        let mut pred: BTreeMap<String, f64> = BTreeMap::new();
        for c in &d.classes {
            pred.insert(c.partition.to_string(), twoxor_core::rational::to_f64(&c.prob_class));
        }
        pred.insert("FALSE".into(), twoxor_core::rational::to_f64(&d.prob_false));
        pred.insert("sat".into(), twoxor_core::rational::to_f64(&d.prob_sat()));
        let table = montecarlo::compare(&report, &pred, z_pass);
        results["comparison"] = serde_json::to_value(table).expect("serializes");
    }
    Ok(Output::Record(OutputRecord::new("simulate", inp, results, Method::Montecarlo, Some(seed))))
}

fn oracle_cmd(n: usize, m: usize, parallel: usize, cap: u64) -> Result<Output, CliError> {
    need_n(n)?;
    let c = oracle::exhaustive_census(n, m, cap, parallel)?;
    let per_class: Vec<Value> = c
        .per_class
        .iter()
        .map(|(i, (funcs, count))| {
            json!({ "partition": i.to_string(), "functions_observed": funcs, "count": count, "prob_class": rational(&c.prob_class(i)) })
        })
        .collect();
    let per_function: Vec<Value> =
        c.per_function.iter().map(|(f, count)| json!({ "function": f.to_string(), "count": count })).collect();
    let results = json!({
        "total": c.total,
        "false_count": c.false_count,
        "prob_sat": rational(&c.prob_sat()),
        "equiprobable_within_classes": c.equiprobable(),
        "per_class": per_class,
        "per_function": per_function,
    });
    let inp = inputs(&[("n", json!(n)), ("m", json!(m))]);
    Ok(Output::Record(OutputRecord::new("oracle", inp, results, Method::Oracle, None)))
}

fn distribution(n: usize, m: usize) -> Result<Output, CliError> {
    need_n(n)?;
    let d = census::full_distribution(n, m)?;
    let classes: Vec<Value> = d.classes.iter().map(class_probability).collect();
    let results = json!({ "classes": classes, "prob_false": rational(&d.prob_false) });
    let cell = |x: &BigRational| (twoxor_core::rational::to_string(x), float_cell(twoxor_core::rational::to_f64(x)));
    let mut rows = Vec::new();
    for c in &d.classes {
        let (pe, pf) = cell(&c.prob_class);
        let (fe, ff) = cell(&c.prob_per_function);
        rows.push(vec![c.partition.to_string(), c.class_size.to_string(), fe, ff, pe, pf]);
    }
    let (pe, pf) = cell(&d.prob_false);
    rows.push(vec!["FALSE".into(), "1".into(), pe.clone(), pf.clone(), pe, pf]);
    let header = vec!["class", "class_size", "prob_function", "prob_function_float", "prob_class", "prob_class_float"];
    let record = OutputRecord::new("distribution", inputs(&[("n", json!(n)), ("m", json!(m))]), results, Method::Exact, None);
    Ok(Output::Table { record, header, rows })
}

#[allow(clippy::too_many_arguments)]
fn plot_data(n: usize, lo: f64, hi: f64, steps: usize, method: PlotMethod, trials: u64, seed: u64, parallel: usize) -> Result<Output, CliError> {
    need_n(n)?;
    if steps < 2 || !(lo >= 0.0 && hi >= lo) {
        return Err(CliError::Usage("need steps ≥ 2 and 0 ≤ alpha-min ≤ alpha-max".into()));
    }
    let mut points = Vec::new();
    for k in 0..steps {
        let alpha = lo + (hi - lo) * k as f64 / (steps - 1) as f64;
        let m = (alpha * n as f64).round() as usize;
        let y = match method {
            PlotMethod::Exact => twoxor_core::rational::to_f64(&census::prob_sat_exact(m, n)?),
            PlotMethod::Limit => prob_sat_limit(n, m)?,
            PlotMethod::Mc => montecarlo::run_trials(n, m, trials, seed, parallel)?.sat_frequency,
        };
        points.push((m as f64 / n as f64, y));
    }
    let rows = points.iter().map(|&(x, y)| vec![float_cell(x), float_cell(y)]).collect();
    let results = json!({ "points": points.iter().map(|&(x, y)| json!({ "x": x, "y": y })).collect::<Vec<_>>() });
    let inp = inputs(&[("n", json!(n)), ("alpha_min", json!(lo)), ("alpha_max", json!(hi)), ("steps", json!(steps))]);
    let prov = match method {
        PlotMethod::Exact => Method::Exact,
        PlotMethod::Limit => Method::Asymptotic,
        PlotMethod::Mc => Method::Montecarlo,
    };
    let seed_out = (method == PlotMethod::Mc).then_some(seed);
    let record = OutputRecord::new("plot-data", inp, results, prov, seed_out);
    Ok(Output::Table { record, header: vec!["x", "y"], rows })
}
