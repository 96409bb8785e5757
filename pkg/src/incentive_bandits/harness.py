"""Repeated-game loop, regret accounting, and replication management.

Regret is measured in expectation (pseudo-regret): each round contributes the
oracle's per-round value minus ``theta0[chosen] - sum(incentives)``, using the
true means rather than the realized noisy rewards. Realized rewards are still
logged for diagnostics. All randomness in a run flows from one seeded
generator, so identical seeds reproduce identical results bit for bit.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .agents import AgentBehavior, AgentMode, strategic_agent, truthful_agent
from .exceptions import DomainError, GuardError, SimulationError
from .model import ProblemInstance
from .policy import (
    ExploitationPlan,
    PolicyState,
    epsilon_schedule,
    exploitation_plan,
    init_round_incentives,
    oracle_incentives,
)

__all__ = [
    "Phase",
    "RoundRecord",
    "CheckpointRow",
    "RunResult",
    "AggregateSummary",
    "default_checkpoints",
    "run_game",
    "run_replications",
    "regret_increment",
    "aggregate",
]


class Phase(str, Enum):
    INIT = "init"
    EXPLORE = "explore"
    EXPLOIT = "exploit"


@dataclass(frozen=True, eq=False)
class RoundRecord:
    """Per-round log entry."""

    t: int
    phase: Phase
    pi: tuple[float, ...]
    chosen: int
    reward: float
    regret_inc: float
    diameter: float
    clamped: bool


@dataclass(frozen=True)
class CheckpointRow:
    """Run state snapshot at one checkpoint round (one CSV line)."""

    t: int
    phase: Phase
    chosen: int
    sum_incentives: float
    regret_cum: float
    diameter: float
    l1_to_oracle: float


@dataclass(frozen=True, eq=False)
class RunResult:
    """Aggregated output of one replication."""

    seed: int
    T: int
    agent_mode: AgentMode
    checkpoints: tuple[int, ...]
    regret_at: tuple[float, ...]
    rows: tuple[CheckpointRow, ...]
    total_regret: float
    l1_final: float
    final_target: int | None
    eta_final: int
    explore_rounds: int
    clamp_rounds: int
    records: tuple[RoundRecord, ...] | None = None


@dataclass(frozen=True, eq=False)
class AggregateSummary:
    """Across-seed mean and population standard deviation of cumulative regret."""

    checkpoints: tuple[int, ...]
    mean_regret: tuple[float, ...]
    sd_regret: tuple[float, ...]
    n_runs: int
    seeds: tuple[int, ...]
    l1_mean: float
    l1_median: float


def default_checkpoints(T: int) -> tuple[int, ...]:
    """Geometric grid {100, 1000, 10000, 20000, 40000} clipped to T, plus T."""
    grid = [c for c in (100, 1_000, 10_000, 20_000, 40_000) if c <= T]
    if T not in grid:
        grid.append(T)
    return tuple(sorted(grid))


def regret_increment(instance: ProblemInstance, pi: Sequence[float] | np.ndarray, chosen: int) -> float:
    """Expected-value regret of one round against the oracle benchmark."""
    oracle = oracle_incentives(instance)
    return float(oracle.value - (instance.theta0[chosen - 1] - float(np.sum(pi))))


def run_game(
    instance: ProblemInstance,
    agent: AgentBehavior,
    *,
    T: int,
    seed: int,
    m: int = 30,
    alpha: float = 1.0,
    checkpoints: Sequence[int] | None = None,
    keep_records: bool = False,
    informed: bool = False,
) -> RunResult:
    """Play one full game of ``T`` rounds and return its metrics.

    Rounds 1..n force one pull per arm; afterwards each round explores with
    probability min(1, m/t) (uniform incentives) and otherwise exploits the
    current estimates. ``informed=True`` switches to the oracle-informed
    diagnostic policy: per-arm means start at the true values and exploitation
    uses the true normalized rewards with zero confidence padding.
    """
    n = instance.n
    if T < n:
        raise DomainError(f"horizon T={T} must be at least n={n}")
    if checkpoints is None:
        checkpoints = default_checkpoints(T)
    marks = tuple(sorted(set(int(c) for c in checkpoints)))
    if not marks or marks[0] < 1 or marks[-1] > T:
        raise DomainError("checkpoints must lie in [1, T]")
    if marks[-1] != T:
        marks = marks + (T,)

    rng = np.random.default_rng(seed)
    state = PolicyState(instance, m=m, alpha=alpha, rng=rng)
    theta0 = instance.theta0_arr
    sd = instance.reward_noise_sd
    oracle = oracle_incentives(instance)

    if informed:
        state.seed_theta(theta0)

    regret_cum = 0.0
    explore_rounds = 0
    clamp_rounds = 0
    last_exploit_pi: np.ndarray | None = None
    last_plan: ExploitationPlan | None = None
    last_diameter = float("nan")
    last_l1 = float("nan")
    records: list[RoundRecord] = []
    rows: list[CheckpointRow] = []
    regret_at: list[float] = []
    mark_idx = 0

    def finish_round(t: int, phase: Phase, pi: np.ndarray, chosen: int, plan: ExploitationPlan | None) -> None:
        nonlocal regret_cum, mark_idx, last_diameter, last_l1, clamp_rounds
        nonlocal last_exploit_pi, last_plan
        reward = float(rng.normal(theta0[chosen - 1], sd))
        state.update_theta(chosen, reward)
        state.record_choice(pi, chosen)
        inc = oracle.value - (theta0[chosen - 1] - float(pi.sum()))
        regret_cum += inc
        diam = float("nan")
        clamped = False
        if plan is not None:
            diam = plan.diameter
            clamped = plan.clamped
            last_diameter = diam
            last_exploit_pi = pi
            last_plan = plan
            last_l1 = float(np.abs(pi - oracle.pi).sum())
            if clamped:
                clamp_rounds += 1
        if keep_records:
            records.append(
                RoundRecord(
                    t=t,
                    phase=phase,
                    pi=tuple(float(x) for x in pi),
                    chosen=chosen,
                    reward=reward,
                    regret_inc=inc,
                    diameter=diam,
                    clamped=clamped,
                )
            )
        if mark_idx < len(marks) and t == marks[mark_idx]:
            rows.append(
                CheckpointRow(
                    t=t,
                    phase=phase,
                    chosen=chosen,
                    sum_incentives=float(pi.sum()),
                    regret_cum=regret_cum,
                    diameter=last_diameter,
                    l1_to_oracle=last_l1,
                )
            )
            regret_at.append(regret_cum)
            mark_idx += 1

    for t in range(1, n + 1):
        pi = init_round_incentives(n, instance.c_high, t)
        chosen = agent.act(pi)
        state.t = t
        finish_round(t, Phase.INIT, pi, chosen, plan=None)

    if np.any(state.pulls == 0):
        missing = int(np.flatnonzero(state.pulls == 0)[0]) + 1
        raise SimulationError(
            f"initialization failed to force action {missing}; the agent's "
            "play vector spans more than the incentive cap"
        )

    for t in range(n + 1, T + 1):
        state.t = t
        explore = rng.random() < epsilon_schedule(t, m)
        plan: ExploitationPlan | None = None
        if not explore:
            try:
                if informed:
                    plan = exploitation_plan(
                        instance.s0, theta0, 0.0, instance.c_low, instance.c_high
                    )
                else:
                    plan = state.exploit_plan()
            except GuardError:
                explore = True
        if explore:
            pi = state.explore_incentives()
            phase = Phase.EXPLORE
        else:
            assert plan is not None
            pi = plan.incentives
            phase = Phase.EXPLOIT
        chosen = agent.act(pi)
        finish_round(t, phase, pi, chosen, plan)
        if phase is Phase.EXPLORE:
            state.eta += 1
            explore_rounds += 1

    return RunResult(
        seed=seed,
        T=T,
        agent_mode=agent.mode,
        checkpoints=marks,
        regret_at=tuple(regret_at),
        rows=tuple(rows),
        total_regret=regret_cum,
        l1_final=last_l1,
        final_target=None if last_plan is None else last_plan.j_star,
        eta_final=state.eta,
        explore_rounds=explore_rounds,
        clamp_rounds=clamp_rounds,
        records=tuple(records) if keep_records else None,
    )


def _agent_for(instance: ProblemInstance, mode: AgentMode | str) -> AgentBehavior:
    mode = AgentMode(mode)
    if mode is AgentMode.TRUTHFUL:
        return truthful_agent(instance)
    return strategic_agent(instance)


def _run_one(args: tuple) -> RunResult:
    instance, mode, T, seed, m, alpha, checkpoints, keep_records = args
    agent = _agent_for(instance, mode)
    return run_game(
        instance,
        agent,
        T=T,
        seed=seed,
        m=m,
        alpha=alpha,
        checkpoints=checkpoints,
        keep_records=keep_records,
    )


def run_replications(
    instance: ProblemInstance,
    agent_mode: AgentMode | str,
    *,
    T: int,
    seeds: Sequence[int],
    m: int = 30,
    alpha: float = 1.0,
    checkpoints: Sequence[int] | None = None,
    keep_records: bool = False,
    workers: int = 1,
) -> list[RunResult]:
    """Run independent replications (one per seed), optionally in parallel.

    Results come back in seed order regardless of worker scheduling.
    """
    if not seeds:
        raise DomainError("at least one seed is required")
    jobs = [
        (instance, AgentMode(agent_mode), T, int(seed), m, alpha,
         None if checkpoints is None else tuple(checkpoints), keep_records)
        for seed in seeds
    ]
    if workers <= 1 or len(jobs) == 1:
        return [_run_one(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs))


def aggregate(results: Sequence[RunResult]) -> AggregateSummary:
    """Across-seed summary: per-checkpoint mean and population sd of regret.

    The standard deviation uses the population convention (divide by the
    number of runs); standard errors for plotting are ``sd / sqrt(n)``.
    """
    if not results:
        raise DomainError("aggregate requires at least one run result")
    marks = results[0].checkpoints
    for r in results[1:]:
        if r.checkpoints != marks:
            raise DomainError("all runs must share the same checkpoints")
    regret = np.array([r.regret_at for r in results], dtype=float)
    l1 = np.array([r.l1_final for r in results], dtype=float)
    return AggregateSummary(
        checkpoints=marks,
        mean_regret=tuple(float(x) for x in regret.mean(axis=0)),
        sd_regret=tuple(float(x) for x in regret.std(axis=0, ddof=0)),
        n_runs=len(results),
        seeds=tuple(r.seed for r in results),
        l1_mean=float(l1.mean()),
        l1_median=float(np.median(l1)),
    )
