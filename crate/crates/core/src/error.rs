use thiserror::Error;

use crate::model::ValidationError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid instance: {}", join(.0))]
    Invalid(Vec<ValidationError>),

    #[error("unknown model `{0}` (expected one of N, W, M, M+1)")]
    UnknownModel(String),

    #[error("unknown policy `{0}`")]
    UnknownPolicy(String),

    #[error("state space of {cells} cells exceeds the budget of {budget}")]
    StateSpaceTooLarge { cells: u128, budget: u128 },

    #[error("exhaustive sequential search supports at most {max} available slot types, state has {got}")]
    ExhaustiveTooLarge { got: usize, max: usize },

    #[error("fluid LP needs {vars} variables, budget is {budget}")]
    LpTooLarge { vars: u128, budget: u128 },

    #[error("policy returned infeasible action {action} at m={m:?}, n={n}")]
    InfeasibleAction { action: String, m: Vec<u32>, n: usize },

    #[error("policy `{policy}` is not applicable: {reason}")]
    PolicyNotApplicable { policy: String, reason: String },

    #[error("state m={m:?}, n={n} lies outside the solved lattice")]
    OutOfLattice { m: Vec<u32>, n: usize },

    #[error("no capacity vectors satisfy the scenario constraints (N={horizon}, J={slots})")]
    InfeasibleScenarios { horizon: usize, slots: usize },

    #[error("gap statistics need a non-empty list of pairs with positive reference values")]
    DegenerateStatistics,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("LP solver failed: {0}")]
    Solver(String),
}

impl Error {
    /// Stable machine-readable tag of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Invalid(_) => "invalid_instance",
            Self::UnknownModel(_) => "unknown_model",
            Self::UnknownPolicy(_) => "unknown_policy",
            Self::StateSpaceTooLarge { .. } => "state_space_too_large",
            Self::ExhaustiveTooLarge { .. } => "exhaustive_too_large",
            Self::LpTooLarge { .. } => "lp_too_large",
            Self::InfeasibleAction { .. } => "infeasible_action",
            Self::PolicyNotApplicable { .. } => "policy_not_applicable",
            Self::OutOfLattice { .. } => "out_of_lattice",
            Self::InfeasibleScenarios { .. } => "infeasible_scenarios",
            Self::DegenerateStatistics => "degenerate_statistics",
            Self::Config(_) => "config",
            Self::Solver(_) => "solver",
        }
    }
}

fn join(errors: &[ValidationError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
