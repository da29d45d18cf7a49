use slotoffer::dp::{solve_nonseq_with, SolveOptions};
use slotoffer::experiments::{
    emit_policy_map, enumerate_scenarios, generate_random_instances, run_table, Coord, EvalMode, LambdaScheme,
    RandomInstanceSpec, TableName,
};
use slotoffer::model::{CanonicalModel, Instance};

fn restricted(name: TableName, mode: EvalMode) -> slotoffer::experiments::ExperimentSpec {
    let mut spec = name.spec(mode, 3).unwrap();
    spec.cells.retain(|c| c.horizon == 20);
    spec
}

#[test]
fn exact_tables_are_deterministic() {
    let spec = restricted(TableName::DrainN, EvalMode::Exact);
    assert_eq!(run_table(&spec).unwrap(), run_table(&spec).unwrap());
}

#[test]
fn simulated_tables_are_seeded_and_close_to_exact() {
    let sim = restricted(TableName::MGap, EvalMode::Sim { days: 1000, seed: 8 });
    let a = run_table(&sim).unwrap();
    assert_eq!(a, run_table(&sim).unwrap());
    let exact = run_table(&restricted(TableName::MGap, EvalMode::Exact)).unwrap();
    for (s, e) in a.cells.iter().zip(&exact.cells) {
        // averages over 45 scenarios of 1000-day means
        assert!((s.average - e.average).abs() < 0.5, "{} {}: {} vs {}", s.row, s.column, s.average, e.average);
    }
}

#[test]
fn mplus1_has_unique_pair_region() {
    let inst = Instance::canonical(CanonicalModel::MPlus1, &[0.475, 0.475, 0.05], 5, &[4, 6, 6]).unwrap();
    let table = solve_nonseq_with(&inst, &SolveOptions::with_actions()).unwrap();
    let map = emit_policy_map(&table, &[(Coord::Slot(0), 4), (Coord::Periods, 5)], (1, 2)).unwrap();
    assert!(map.cells.iter().any(|c| c.unique && c.action == "{1,2}"));
    assert_eq!(map.base_state, vec![4, 0, 0]);
}

#[test]
fn random_instances_over_scenarios_evaluate() {
    let spec = RandomInstanceSpec { slots: 3, horizon: 10, count: 4, scheme: LambdaScheme::Uniform };
    let instances = generate_random_instances(&spec, 1).unwrap();
    for inst in instances {
        for b in enumerate_scenarios(10, 3).unwrap() {
            let v = slotoffer::dp::solve_nonseq(&inst.with_capacity(b).unwrap()).unwrap().root_value();
            assert!(v > 0.0 && v <= 10.0);
        }
    }
}
