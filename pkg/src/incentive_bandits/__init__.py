"""Repeated principal-agent games with hidden agent rewards.

A library and CLI for simulating a principal who must steer a
utility-maximizing agent with per-action incentives while only ever observing
which action the agent picks. Includes the set-membership estimator of the
agent's normalized mean rewards, the adaptive epsilon-greedy incentive policy,
the full-information oracle benchmark, truthful and rent-maximizing agents,
and a replication harness with regret accounting.
"""

__version__ = "0.1.0"

from .exceptions import (
    ConfigError,
    DomainError,
    GuardError,
    InconsistentHistory,
    NoRentError,
    SimulationError,
)
from .model import ProblemInstance, best_response, normalize
from .estimator import (
    ConstraintPolytope,
    CoordinateBounds,
    contains,
    diameter,
    observe,
    point_estimate,
    polytope_from_json,
    polytope_to_json,
    solve,
)
from .policy import (
    ExploitationPlan,
    OracleIncentives,
    PolicyState,
    beta_width,
    epsilon_schedule,
    exploitation_plan,
    init_round_incentives,
    oracle_incentives,
)
from .agents import (
    AgentBehavior,
    AgentMode,
    RentCase,
    RentConstruction,
    construct_rent,
    rent_feasible,
    rent_gain,
    strategic_agent,
    truthful_agent,
)
from .harness import (
    AggregateSummary,
    Phase,
    RoundRecord,
    RunResult,
    aggregate,
    default_checkpoints,
    regret_increment,
    run_game,
    run_replications,
)
from .config import (
    ExperimentConfig,
    load_config,
    random_instance,
    table1_n5,
    table1_n10,
)

__all__ = [
    "__version__",
    "ConfigError",
    "DomainError",
    "GuardError",
    "InconsistentHistory",
    "NoRentError",
    "SimulationError",
    "ProblemInstance",
    "best_response",
    "normalize",
    "ConstraintPolytope",
    "CoordinateBounds",
    "contains",
    "diameter",
    "observe",
    "point_estimate",
    "polytope_from_json",
    "polytope_to_json",
    "solve",
    "ExploitationPlan",
    "OracleIncentives",
    "PolicyState",
    "beta_width",
    "epsilon_schedule",
    "exploitation_plan",
    "init_round_incentives",
    "oracle_incentives",
    "AgentBehavior",
    "AgentMode",
    "RentCase",
    "RentConstruction",
    "construct_rent",
    "rent_feasible",
    "rent_gain",
    "strategic_agent",
    "truthful_agent",
    "AggregateSummary",
    "Phase",
    "RoundRecord",
    "RunResult",
    "aggregate",
    "default_checkpoints",
    "regret_increment",
    "run_game",
    "run_replications",
    "ExperimentConfig",
    "load_config",
    "random_instance",
    "table1_n5",
    "table1_n10",
]
