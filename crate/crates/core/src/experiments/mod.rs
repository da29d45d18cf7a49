//! Experiment orchestration: capacity scenario grids, random instances,
//! table reproduction, policy maps and the multi-day grid.

mod multiday;
mod policy_map;
mod random;
mod scenarios;
mod tables;

pub use multiday::{run_multiday_table, MultiDaySpec};
pub use policy_map::{emit_policy_map, parse_axes, parse_fixed, Coord, PolicyMap, PolicyMapCell};
pub use random::{generate_random_instances, random_choice_matrix, LambdaScheme, RandomInstanceSpec};
pub use scenarios::{bounding_box, enumerate_scenarios, enumerate_scenarios_with_floor};
pub use tables::{
    lambdas_mplus1, lambdas_n_seq, lambdas_two, lambdas_w, run_table, scenario_values, CellResult, CellSpec,
    Comparison, EvalMode, ExperimentSpec, LambdaVector, TableName, TableResult, HORIZONS, RANDOM_FLOOR_PERCENT,
    RANDOM_ROWS,
};
