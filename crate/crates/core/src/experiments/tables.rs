use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::random::{generate_random_instances, LambdaScheme, RandomInstanceSpec};
use super::scenarios::{bounding_box, enumerate_scenarios, enumerate_scenarios_with_floor};
use crate::dp::{self, SeqMode};
use crate::error::{Error, Result};
use crate::fluid;
use crate::model::{CanonicalModel, ChoiceMatrix, Instance};
use crate::policies::PolicyName;
use crate::sim::{gap_statistics, simulate_single_day, GapFormula, SimConfig};

/// How policy values are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum EvalMode {
    /// Backward induction for every policy.
    Exact,
    /// Heuristics by single-day simulation, optimal policies exactly.
    Sim { days: usize, seed: u64 },
}

impl EvalMode {
    pub fn label(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Sim { .. } => "sim",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Comparison {
    pub base: PolicyName,
    pub other: PolicyName,
    pub formula: GapFormula,
}

impl Comparison {
    pub fn gap(optimal: PolicyName, heuristic: PolicyName) -> Self {
        Self { base: optimal, other: heuristic, formula: GapFormula::Gap }
    }

    pub fn improvement(baseline: PolicyName, improved: PolicyName) -> Self {
        Self { base: baseline, other: improved, formula: GapFormula::Improvement }
    }

    pub fn label(&self) -> String {
        format!("{} vs {}", self.other, self.base)
    }
}

/// One `(row, column)` entry of a table: a set of choice models with their
/// arrival probabilities, all evaluated over the same capacity scenarios.
#[derive(Debug, Clone)]
pub struct CellSpec {
    pub block: String,
    pub row: String,
    pub column: String,
    pub horizon: usize,
    pub instances: Vec<(ChoiceMatrix, Vec<f64>)>,
    pub scenarios: Vec<Vec<u32>>,
    pub comparison: Comparison,
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub name: String,
    pub title: String,
    pub mode: EvalMode,
    pub cells: Vec<CellSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub block: String,
    pub row: String,
    pub column: String,
    pub horizon: usize,
    pub instances: usize,
    pub scenarios: usize,
    pub comparison: String,
    pub formula: GapFormula,
    pub max: f64,
    pub average: f64,
    pub median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableResult {
    pub name: String,
    pub title: String,
    pub mode: EvalMode,
    pub cells: Vec<CellResult>,
}

impl TableResult {
    pub fn cell(&self, block: &str, row: &str, column: &str) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.block == block && c.row == row && c.column == column)
    }

    /// One markdown table per block with max / average / median columns for
    /// every column key.
    pub fn to_markdown(&self) -> String {
        let mut out = format!("## {}\n", self.title);
        for block in unique(self.cells.iter().map(|c| c.block.as_str())) {
            let cells: Vec<&CellResult> = self.cells.iter().filter(|c| c.block == block).collect();
            let columns = unique(cells.iter().map(|c| c.column.as_str()));
            out.push_str(&format!("\n### {block}\n\n| | # of Scenarios |"));
            for col in &columns {
                out.push_str(&format!(" {col} Max | {col} Average | {col} Median |"));
            }
            out.push_str("\n|---|---|");
            out.push_str(&"---|---|---|".repeat(columns.len()));
            out.push('\n');
            for row in unique(cells.iter().map(|c| c.row.as_str())) {
                let in_row: Vec<&&CellResult> = cells.iter().filter(|c| c.row == row).collect();
                let count = in_row.first().map_or(0, |c| c.scenarios * c.instances);
                out.push_str(&format!("| {row} | {count} |"));
                for col in &columns {
                    match in_row.iter().find(|c| c.column == *col) {
                        Some(c) => out.push_str(&format!(" {:.1}% | {:.1}% | {:.1}% |", c.max, c.average, c.median)),
                        None => out.push_str(" | | |"),
                    }
                }
                out.push('\n');
            }
        }
        out
    }
}

fn unique<'a>(items: impl Iterator<Item = &'a str>) -> Vec<&'a str> {
    let mut out: Vec<&str> = Vec::new();
    for s in items {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// Evaluates every cell; cells and scenarios run in parallel and results
/// keep the spec order.
pub fn run_table(spec: &ExperimentSpec) -> Result<TableResult> {
    let cells = spec.cells.par_iter().map(|cell| run_cell(cell, spec.mode)).collect::<Result<Vec<_>>>()?;
    Ok(TableResult { name: spec.name.clone(), title: spec.title.clone(), mode: spec.mode, cells })
}

fn run_cell(cell: &CellSpec, mode: EvalMode) -> Result<CellResult> {
    let mut pairs = Vec::with_capacity(cell.instances.len() * cell.scenarios.len());
    for (omega, lambda) in &cell.instances {
        let base = scenario_values(omega, lambda, cell.horizon, &cell.scenarios, cell.comparison.base, mode)?;
        let other = if cell.comparison.other == cell.comparison.base {
            base.clone()
        } else {
            scenario_values(omega, lambda, cell.horizon, &cell.scenarios, cell.comparison.other, mode)?
        };
        pairs.extend(base.into_iter().zip(other));
    }
    let summary = gap_statistics(&pairs, cell.comparison.formula)?;
    Ok(CellResult {
        block: cell.block.clone(),
        row: cell.row.clone(),
        column: cell.column.clone(),
        horizon: cell.horizon,
        instances: cell.instances.len(),
        scenarios: cell.scenarios.len(),
        comparison: cell.comparison.label(),
        formula: summary.formula,
        max: summary.max,
        average: summary.average,
        median: summary.median,
    })
}

fn is_optimal(policy: PolicyName) -> bool {
    matches!(policy, PolicyName::OptimalNonseq | PolicyName::OptimalSeq | PolicyName::Fullinfo)
}

/// Exact expected fill count of `policy` from `(b, N)` for the instance's
/// own capacity `b`, evaluated over the whole box.
fn exact_table(instance: &Instance, policy: PolicyName) -> Result<dp::ValueTable> {
    match policy {
        PolicyName::OptimalNonseq => dp::solve_nonseq(instance),
        PolicyName::OptimalSeq => dp::solve_seq(instance, SeqMode::Permutation),
        PolicyName::Fullinfo => dp::solve_fullinfo(instance),
        PolicyName::StaticRandomized => dp::evaluate_policy(instance, &fluid::pstar_policy(instance)?),
        other => dp::evaluate_policy(instance, other.build(instance)?.as_ref()),
    }
}

fn cells_of(capacity: &[u32]) -> u128 {
    capacity.iter().map(|&b| u128::from(b) + 1).product()
}

/// Value of `policy` at `(b, N)` for every scenario `b`.
pub fn scenario_values(
    omega: &ChoiceMatrix,
    lambda: &[f64],
    horizon: usize,
    scenarios: &[Vec<u32>],
    policy: PolicyName,
    mode: EvalMode,
) -> Result<Vec<f64>> {
    let instance_at = |b: &[u32]| Instance::new(omega.clone(), lambda.to_vec(), horizon, b.to_vec());
    if let (EvalMode::Sim { days, seed }, false) = (mode, is_optimal(policy)) {
        let config = SimConfig { replications: days, seed };
        return scenarios
            .par_iter()
            .map(|b| {
                let inst = instance_at(b)?;
                Ok(simulate_single_day(&inst, policy.build(&inst)?.as_ref(), &config)?.mean)
            })
            .collect();
    }
    let corner = bounding_box(scenarios);
    let per_scenario: u128 = scenarios.iter().map(|b| cells_of(b)).sum();
    // the fluid policy depends on b, so it cannot share one table
    if policy == PolicyName::StaticRandomized || per_scenario < cells_of(&corner) {
        return scenarios.par_iter().map(|b| exact_table(&instance_at(b)?, policy).map(|t| t.root_value())).collect();
    }
    let table = exact_table(&instance_at(&corner)?, policy)?;
    scenarios.iter().map(|b| table.value(b, horizon)).collect()
}

/// The experiment tables that the command line can regenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableName {
    MGap,
    MPlus1Gap,
    RandomGap,
    DrainN,
    DrainM,
    DrainW,
    SeqVsNonseqN,
    SeqVsNonseqM,
    SeqVsNonseqW,
    DrainCompare,
    PstarGap,
}

impl TableName {
    pub const ALL: [TableName; 11] = [
        Self::MGap,
        Self::MPlus1Gap,
        Self::RandomGap,
        Self::DrainN,
        Self::DrainM,
        Self::DrainW,
        Self::SeqVsNonseqN,
        Self::SeqVsNonseqM,
        Self::SeqVsNonseqW,
        Self::DrainCompare,
        Self::PstarGap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::MGap => "m-gap",
            Self::MPlus1Gap => "mplus1-gap",
            Self::RandomGap => "random-gap",
            Self::DrainN => "drain-n",
            Self::DrainM => "drain-m",
            Self::DrainW => "drain-w",
            Self::SeqVsNonseqN => "seq-vs-nonseq-n",
            Self::SeqVsNonseqM => "seq-vs-nonseq-m",
            Self::SeqVsNonseqW => "seq-vs-nonseq-w",
            Self::DrainCompare => "drain-compare",
            Self::PstarGap => "pstar-gap",
        }
    }

    /// The full experiment definition. `seed` drives random instance
    /// generation and, in simulation mode, the replications.
    pub fn spec(self, mode: EvalMode, seed: u64) -> Result<ExperimentSpec> {
        use CanonicalModel::{MPlus1, M, N, W};
        use PolicyName::{Drain, OfferingAll, OptimalNonseq, OptimalSeq, RandomSeq, StaticRandomized};
        let nonseq_gap = |h| Comparison::gap(OptimalNonseq, h);
        let (title, cells) = match self {
            Self::MGap => (
                "Fill count gap of offering-all in the M model",
                canonical_cells(M, &lambdas_two(), nonseq_gap(OfferingAll))?,
            ),
            Self::MPlus1Gap => (
                "Fill count gap of offering-all in the M+1 model",
                canonical_cells(MPlus1, &lambdas_mplus1(), nonseq_gap(OfferingAll))?,
            ),
            Self::RandomGap => ("Fill count gap of offering-all in random instances", random_cells(seed)?),
            Self::DrainN => (
                "Fill count gap of the drain heuristic in the N model",
                canonical_cells(N, &lambdas_two(), Comparison::gap(OptimalSeq, Drain))?,
            ),
            Self::DrainM => (
                "Fill count gap of the drain heuristic in the M model",
                canonical_cells(M, &lambdas_two(), Comparison::gap(OptimalSeq, Drain))?,
            ),
            Self::DrainW => (
                "Fill count gap of the drain heuristic in the W model",
                canonical_cells(W, &lambdas_w(), Comparison::gap(OptimalSeq, Drain))?,
            ),
            Self::SeqVsNonseqN => (
                "Fill count improvement of sequential offering in the N model",
                canonical_cells(N, &lambdas_n_seq(), Comparison::improvement(OptimalNonseq, OptimalSeq))?,
            ),
            Self::SeqVsNonseqM => (
                "Fill count improvement of sequential offering in the M model",
                canonical_cells(M, &lambdas_two(), Comparison::improvement(OptimalNonseq, OptimalSeq))?,
            ),
            Self::SeqVsNonseqW => (
                "Fill count improvement of sequential offering in the W model",
                canonical_cells(W, &lambdas_w(), Comparison::improvement(OptimalNonseq, OptimalSeq))?,
            ),
            Self::DrainCompare => {
                let mut cells = Vec::new();
                for (model, lambdas) in [(N, lambdas_two()), (M, lambdas_two()), (W, lambdas_w())] {
                    for base in [OfferingAll, RandomSeq] {
                        cells.extend(canonical_cells(model, &lambdas, Comparison::improvement(base, Drain))?);
                    }
                }
                ("Fill count improvement of the drain heuristic", cells)
            }
            Self::PstarGap => (
                "Fill count gap of the fluid static randomized policy in the M model",
                canonical_cells(M, &lambdas_two(), nonseq_gap(StaticRandomized))?,
            ),
        };
        Ok(ExperimentSpec { name: self.as_str().into(), title: title.into(), mode, cells })
    }
}

impl fmt::Display for TableName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| Error::Config(format!("unknown table `{s}`")))
    }
}

/// Horizons used by every single-day table.
pub const HORIZONS: [usize; 4] = [20, 30, 40, 50];

/// Arrival probabilities as exact fractions, with their display label.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaVector {
    pub label: String,
    pub values: Vec<f64>,
}

impl LambdaVector {
    pub fn from_fractions(fractions: &[(u32, u32)]) -> Self {
        let parts: Vec<String> = fractions.iter().map(|(a, b)| format!("{a}/{b}")).collect();
        Self {
            label: format!("({})", parts.join(",")),
            values: fractions.iter().map(|&(a, b)| f64::from(a) / f64::from(b)).collect(),
        }
    }
}

fn lambda_set(sets: &[&[(u32, u32)]]) -> Vec<LambdaVector> {
    sets.iter().map(|f| LambdaVector::from_fractions(f)).collect()
}

/// `(1/2,1/2)`, `(1/3,2/3)`, `(1/4,3/4)`.
pub fn lambdas_two() -> Vec<LambdaVector> {
    lambda_set(&[&[(1, 2), (1, 2)], &[(1, 3), (2, 3)], &[(1, 4), (3, 4)]])
}

/// `(1/2,1/2)`, `(1/4,3/4)`, `(3/4,1/4)`.
pub fn lambdas_n_seq() -> Vec<LambdaVector> {
    lambda_set(&[&[(1, 2), (1, 2)], &[(1, 4), (3, 4)], &[(3, 4), (1, 4)]])
}

pub fn lambdas_mplus1() -> Vec<LambdaVector> {
    lambda_set(&[&[(9, 20), (9, 20), (1, 10)], &[(2, 5), (2, 5), (1, 5)], &[(3, 10), (3, 10), (2, 5)]])
}

pub fn lambdas_w() -> Vec<LambdaVector> {
    lambda_set(&[&[(1, 3), (1, 3), (1, 3)], &[(1, 5), (1, 2), (3, 10)], &[(1, 10), (3, 10), (3, 5)]])
}

fn canonical_cells(model: CanonicalModel, lambdas: &[LambdaVector], comparison: Comparison) -> Result<Vec<CellSpec>> {
    let omega = model.matrix();
    let block = format!("{} ({} model)", comparison.label(), model.name());
    let mut cells = Vec::new();
    for &horizon in &HORIZONS {
        let scenarios = enumerate_scenarios(horizon, omega.slot_types())?;
        for lambda in lambdas {
            cells.push(CellSpec {
                block: block.clone(),
                row: format!("N={horizon}"),
                column: lambda.label.clone(),
                horizon,
                instances: vec![(omega.clone(), lambda.values.clone())],
                scenarios: scenarios.clone(),
                comparison,
            });
        }
    }
    Ok(cells)
}

/// `(J, N, instance count)` rows of the random-instance table.
pub const RANDOM_ROWS: [(usize, usize, usize); 9] = [
    (3, 10, 100),
    (3, 20, 80),
    (3, 30, 40),
    (3, 40, 10),
    (4, 10, 100),
    (4, 20, 10),
    (4, 30, 10),
    (5, 10, 100),
    (5, 20, 10),
];

/// Scenario floor of the random-instance table, in percent of `N`.
pub const RANDOM_FLOOR_PERCENT: usize = 10;

fn random_cells(seed: u64) -> Result<Vec<CellSpec>> {
    let comparison = Comparison::gap(PolicyName::OptimalNonseq, PolicyName::OfferingAll);
    let mut cells = Vec::new();
    for (slots, horizon, count) in RANDOM_ROWS {
        let scenarios = enumerate_scenarios_with_floor(horizon, slots, RANDOM_FLOOR_PERCENT)?;
        for scheme in LambdaScheme::ALL {
            let spec = RandomInstanceSpec { slots, horizon, count, scheme };
            let instances = generate_random_instances(&spec, seed)?
                .into_iter()
                .map(|inst| (inst.omega().clone(), inst.lambda().to_vec()))
                .collect();
            cells.push(CellSpec {
                block: comparison.label(),
                row: format!("J={slots}, N={horizon}"),
                column: scheme.label().into(),
                horizon,
                instances,
                scenarios: scenarios.clone(),
                comparison,
            });
        }
    }
    Ok(cells)
}
