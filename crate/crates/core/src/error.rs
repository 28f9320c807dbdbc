use thiserror::Error;

use crate::integrator::Trajectory;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("directed cycle of zero-transit arcs through {0}")]
    ZeroCycle(String),
    #[error("node {0} is not on any s-t connection")]
    Unreachable(String),
    #[error("arc {0} has non-positive capacity")]
    NonPositiveCapacity(String),
    #[error("arc {0} has negative transit time")]
    NegativeTransit(String),
    #[error("duplicate arc id {0}")]
    DuplicateArc(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("unknown arc {0}")]
    UnknownArc(String),

    #[error("no thin flow found for a valid configuration (internal error)")]
    NoSolution,
    #[error("partition search exceeded its budget ({0} nodes)")]
    SearchExhausted(usize),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("labeling is not feasible: {0}")]
    InfeasibleLabeling(String),
    #[error("non-positive event time {0} (internal error)")]
    NonPositiveEvent(String),
    #[error("phase cap of {cap} exceeded")]
    PhaseCapExceeded { cap: usize, partial: Box<Trajectory> },
    #[error("zero label derivative at node {0} (internal error)")]
    DivisionByZeroRate(String),

    #[error("steady-state primal infeasible (internal error)")]
    PrimalInfeasible,
    #[error("duality gap: primal {primal} vs dual {dual}")]
    DualityGap { primal: String, dual: String },
    #[error("dual assignment infeasible at {0}")]
    FeasibilityViolation(String),
    #[error("steady-direction characterizations disagree: {0}")]
    EquivalenceBroken(String),
    #[error("theorem check failed: {0}")]
    TheoremViolated(String),

    #[error("start labeling not in the local feasible set: {0}")]
    NotInLocalFeasibleSet(String),
    #[error("switch time unreachable: {0}")]
    SwitchTimeUnreachable(String),
    #[error("perturbed instance invalid: {0}")]
    InvalidPerturbation(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
