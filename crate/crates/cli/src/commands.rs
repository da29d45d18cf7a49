use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;

use slotoffer::dp::{self, SeqMode, SolveOptions, ValueTable, Variant};
use slotoffer::experiments::{
    emit_policy_map, parse_axes, parse_fixed, run_multiday_table, run_table, EvalMode, MultiDaySpec, TableName,
    TableResult,
};
use slotoffer::fluid;
use slotoffer::model::InstanceDoc;
use slotoffer::policies::PolicyName;
use slotoffer::sim::{self, DemandMode, MultiDayConfig, SimConfig, MULTIDAY_POLICIES};
use slotoffer::{Error, Instance};

use crate::{Command, DemandArg, FormatArg, ModeArg, ModelArg};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Solve { instance, model, exhaustive, partial_covers, out } => {
            let inst = load_instance(&instance)?;
            let mode = if exhaustive { SeqMode::Exhaustive { partial_covers } } else { SeqMode::Permutation };
            let table = solve(&inst, model, mode)?;
            write_json(&out, &table.to_doc())?;
            print_json(&json!({
                "variant": table.variant(),
                "value": table.root_value(),
                "states": table.space().len(),
                "horizon": table.horizon(),
                "out": out,
            }))
        }
        Command::Fluid { instance, scale, out } => {
            let inst = load_instance(&instance)?;
            let solution = fluid::solve_fluid(&fluid::build_fluid(&inst, scale)?)?;
            let pstar = fluid::extract_pstar(&solution)?;
            let doc = json!({
                "scale": scale,
                "objective": solution.objective,
                "pstar": pstar.probabilities(),
                "upsilon": fluid::upsilon(&inst, &pstar),
                "solution": solution,
            });
            write_json(&out, &doc)?;
            print_json(&json!({ "objective": solution.objective, "pstar": pstar.probabilities(), "out": out }))
        }
        Command::Simulate { instance, policy, days, seed } => {
            let inst = load_instance(&instance)?;
            let name: PolicyName = policy.parse()?;
            let policy = name.build(&inst)?;
            let report = sim::simulate_single_day(&inst, policy.as_ref(), &SimConfig { replications: days, seed })?;
            print_json(&json!({
                "policy": name.as_str(),
                "days": days,
                "seed": seed,
                "mean": report.mean,
                "std_error": report.std_error,
                "fill_rate": report.fill_rate,
            }))
        }
        Command::PolicyMap { instance, model, fix, axes, out } => {
            let inst = load_instance(&instance)?;
            let fixed = parse_fixed(&fix)?;
            let axes = parse_axes(&axes)?;
            let table = solve(&inst, model, SeqMode::Permutation)?;
            let map = emit_policy_map(&table, &fixed, axes)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([map.x_axis.as_str(), map.y_axis.as_str(), "n", "action", "unique", "value"])?;
            for c in &map.cells {
                w.write_record([
                    c.x.to_string(),
                    c.y.to_string(),
                    map.n.to_string(),
                    c.action.clone(),
                    c.unique.to_string(),
                    c.value.to_string(),
                ])?;
            }
            emit(out.as_deref(), &w.into_inner()?)
        }
        Command::Table { name, mode, days, seed, format, markdown, out } => {
            let name: TableName = name.parse()?;
            let mode = match mode {
                ModeArg::Exact => EvalMode::Exact,
                ModeArg::Sim => EvalMode::Sim { days, seed },
            };
            let result = run_table(&name.spec(mode, seed)?)?;
            write_table(&result, if markdown { FormatArg::Markdown } else { format }, out.as_deref())
        }
        Command::Multiday { template, policy, demand, acceptable_days, seed, days, warmup, window, daily_demand } => {
            let inst = load_instance(&template)?.with_horizon(daily_demand)?;
            let name: PolicyName = policy.parse()?;
            if !MULTIDAY_POLICIES.contains(&name) {
                let allowed: Vec<&str> = MULTIDAY_POLICIES.iter().map(|p| p.as_str()).collect();
                return Err(Error::PolicyNotApplicable {
                    policy: name.to_string(),
                    reason: format!("multi-day runs support {}", allowed.join(", ")),
                }
                .into());
            }
            let mut config = MultiDayConfig::new(inst, acceptable_days, demand_mode(demand), seed);
            config.days = days;
            config.warmup = warmup;
            config.window = window;
            config.daily_demand = daily_demand;
            let policy = name.build(&config.template)?;
            let report = sim::simulate_multiday(&config, policy.as_ref())?;
            print_json(&json!({
                "policy": name.as_str(),
                "acceptable_days": acceptable_days,
                "seed": seed,
                "recorded_days": report.daily_fills.len(),
                "mean": report.mean,
                "std_error": report.std_error,
                "fill_rate": report.fill_rate,
            }))
        }
        Command::MultidayTable { demand, seed, days, format, markdown, out } => {
            let mut spec = MultiDaySpec::new(demand_mode(demand), seed);
            spec.days = days;
            spec.warmup = spec.warmup.min(days / 6);
            let result = run_multiday_table(&spec)?;
            write_table(&result, if markdown { FormatArg::Markdown } else { format }, out.as_deref())
        }
    }
}

fn demand_mode(d: DemandArg) -> DemandMode {
    match d {
        DemandArg::Det => DemandMode::Det,
        DemandArg::Poisson => DemandMode::Poisson,
    }
}

fn solve(inst: &Instance, model: ModelArg, mode: SeqMode) -> Result<ValueTable> {
    let variant = match model {
        ModelArg::Nonseq => Variant::Nonseq,
        ModelArg::Seq => Variant::Seq,
        ModelArg::Fullinfo => Variant::Fullinfo,
    };
    Ok(dp::solve(inst, variant, mode, &SolveOptions::with_actions())?)
}

fn load_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: InstanceDoc = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Instance::try_from(doc)?)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string(value)?;
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    println!("{value}");
    Ok(())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => Ok(std::io::stdout().write_all(bytes)?),
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    table: &'a str,
    block: &'a str,
    row: &'a str,
    column: &'a str,
    horizon: usize,
    instances: usize,
    scenarios: usize,
    statistic: &'a str,
    value: f64,
}

fn write_table(result: &TableResult, format: FormatArg, out: Option<&Path>) -> Result<()> {
    let bytes = match format {
        FormatArg::Json => serde_json::to_vec_pretty(result)?,
        FormatArg::Markdown => result.to_markdown().into_bytes(),
        FormatArg::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for c in &result.cells {
                for (statistic, value) in [("max", c.max), ("average", c.average), ("median", c.median)] {
                    w.serialize(CsvRow {
                        table: &result.name,
                        block: &c.block,
                        row: &c.row,
                        column: &c.column,
                        horizon: c.horizon,
                        instances: c.instances,
                        scenarios: c.scenarios,
                        statistic,
                        value,
                    })?;
                }
            }
            w.into_inner()?
        }
    };
    emit(out, &bytes)
}

/// `{"error": {"kind": ..., "message": ...}}` for any failure.
pub fn error_json(err: &anyhow::Error) -> String {
    let kind = if let Some(e) = err.downcast_ref::<Error>() {
        e.kind()
    } else if err.downcast_ref::<serde_json::Error>().is_some() {
        "parse"
    } else if err.downcast_ref::<std::io::Error>().is_some() {
        "io"
    } else {
        "error"
    };
    json!({ "error": { "kind": kind, "message": format!("{err:#}") } }).to_string()
}
