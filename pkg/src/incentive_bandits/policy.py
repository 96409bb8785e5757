"""The principal's side of the game.

Implements the adaptive epsilon-greedy incentive policy: per-arm sample means
of the principal's own rewards, uniform-random exploration incentives, and
greedy exploitation incentives padded by a confidence width derived from the
exploration count. Also provides the full-information oracle benchmark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import estimator
from .estimator import ConstraintPolytope, CoordinateBounds
from .exceptions import DomainError, GuardError
from .model import ProblemInstance, as_vector

__all__ = [
    "PolicyState",
    "ExploitationPlan",
    "OracleIncentives",
    "epsilon_schedule",
    "beta_width",
    "init_round_incentives",
    "exploitation_plan",
    "oracle_incentives",
]


def epsilon_schedule(t: int, m: int) -> float:
    """Exploration probability min(1, m/t) at round t."""
    if t < 1:
        raise DomainError("round index must be >= 1")
    if m < 4:
        raise DomainError("exploration parameter must satisfy m >= 4")
    return min(1.0, m / t)


def beta_width(eta: int, alpha: float) -> float:
    """Confidence width sqrt(log(eta - 1) / (alpha * (eta - 1))).

    Defined only once at least three exploration rounds have happened
    (otherwise the log is nonpositive); callers seeing :class:`GuardError`
    must explore instead.
    """
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    if eta < 3:
        raise GuardError(f"confidence width undefined for eta={eta} < 3")
    return math.sqrt(math.log(eta - 1) / (alpha * (eta - 1)))


def init_round_incentives(n: int, c_high: float, t: int) -> np.ndarray:
    """Initialization incentives: the cap on arm t, zero elsewhere.

    Used for rounds 1..n to force one pull of every arm so each per-arm
    reward mean starts with a sample.
    """
    if not 1 <= t <= n:
        raise DomainError(f"initialization round {t} out of range 1..{n}")
    pi = np.zeros(n)
    pi[t - 1] = c_high
    return pi


@dataclass(frozen=True, eq=False)
class ExploitationPlan:
    """One exploitation decision: target arm, incentives, and diagnostics.

    ``incentives`` has a single (possibly clamped) positive entry on
    ``j_star``; ``v_tilde[j]`` is the estimated net reward of steering the
    agent to arm ``j + 1``.
    """

    j_star: int
    incentives: np.ndarray
    v_tilde: np.ndarray
    beta: float
    s_hat: np.ndarray
    diameter: float
    clamped: bool


@dataclass(frozen=True, eq=False)
class OracleIncentives:
    """Full-information benchmark: constant incentives and per-round value."""

    pi: np.ndarray
    j_star: int
    value: float


def exploitation_plan(
    s_hat: np.ndarray,
    theta_hat: np.ndarray,
    beta: float,
    c_low: float,
    c_high: float,
    diam: float = float("nan"),
) -> ExploitationPlan:
    """Greedy incentives for the estimated best arm.

    The estimated net reward of arm j is ``theta_hat[j] - (max s_hat - s_hat[j])
    - 2 beta``; the incentive offered on the winning arm is
    ``max s_hat - s_hat[j*] + 2 beta`` so that the agent prefers j* whenever the
    reward estimate is within ``beta`` of the truth. The incentive is clamped
    into the admissible range, which can bind early on when the coordinate
    bounds are still near the box.
    """
    s_hat = as_vector(s_hat, name="reward estimate")
    theta_hat = as_vector(theta_hat, n=s_hat.shape[0], name="theta estimate")
    top = s_hat.max()
    v_tilde = theta_hat - top + s_hat - 2.0 * beta
    j_star = int(np.argmax(v_tilde)) + 1
    raw = top - s_hat[j_star - 1] + 2.0 * beta
    incentive = min(max(raw, c_low), c_high)
    pi = np.zeros(s_hat.shape[0])
    pi[j_star - 1] = incentive
    return ExploitationPlan(
        j_star=j_star,
        incentives=pi,
        v_tilde=v_tilde,
        beta=beta,
        s_hat=s_hat,
        diameter=diam,
        clamped=bool(incentive != raw),
    )


def oracle_incentives(instance: ProblemInstance) -> OracleIncentives:
    """The constant incentives a full-information principal would post.

    Targets the arm maximizing ``theta0[j] - (max s0 - s0[j])`` and pays the
    minimal steering incentive plus the tie-breaking margin ``varsigma``; the
    per-round value is that net reward minus ``varsigma``.
    """
    s0 = instance.s0
    theta0 = instance.theta0_arr
    v = theta0 - s0.max() + s0
    j_star = int(np.argmax(v)) + 1
    pi = np.zeros(instance.n)
    pi[j_star - 1] = s0.max() - s0[j_star - 1] + instance.varsigma
    return OracleIncentives(pi=pi, j_star=j_star, value=float(v[j_star - 1] - instance.varsigma))


class PolicyState:
    """Mutable per-game state of the adaptive policy.

    Owns the per-arm reward means, pull counts, the exploration counter, the
    constraint polytope, and the random stream. One instance per simulated
    game; distinct replications use independent states.
    """

    def __init__(
        self,
        instance: ProblemInstance,
        m: int,
        alpha: float,
        rng: np.random.Generator,
    ):
        if m < 4:
            raise DomainError("exploration parameter must satisfy m >= 4")
        if alpha <= 0:
            raise DomainError("alpha must be positive")
        self.instance = instance
        self.m = int(m)
        self.alpha = float(alpha)
        self.rng = rng
        self.theta_hat = np.zeros(instance.n)
        self.pulls = np.zeros(instance.n, dtype=np.int64)
        self._reward_sums = np.zeros(instance.n)
        self.eta = 0
        self.t = 0
        self.polytope = ConstraintPolytope.for_instance(instance)
        self._bounds_version: int = -1
        self._bounds: CoordinateBounds | None = None

    def seed_theta(self, theta: np.ndarray) -> None:
        """Pre-load per-arm means (oracle-informed diagnostics only)."""
        theta = as_vector(theta, n=self.instance.n, name="theta")
        self.pulls[:] = 1
        self._reward_sums[:] = theta
        self.theta_hat[:] = theta

    def update_theta(self, chosen: int, reward: float) -> None:
        """Fold one realized reward into the running mean of the chosen arm."""
        if not 1 <= chosen <= self.instance.n:
            raise DomainError(f"chosen action {chosen} out of range")
        c = chosen - 1
        self.pulls[c] += 1
        self._reward_sums[c] += reward
        self.theta_hat[c] = self._reward_sums[c] / self.pulls[c]

    def record_choice(self, pi: np.ndarray, chosen: int) -> None:
        """Feed the observed (incentives, choice) pair into the estimator."""
        self.polytope = estimator.observe(self.polytope, pi, chosen)

    def explore_incentives(self) -> np.ndarray:
        """Draw one uniform exploration incentive vector (does not bump eta)."""
        inst = self.instance
        return self.rng.uniform(inst.c_low, inst.c_high, inst.n)

    def bounds(self) -> CoordinateBounds:
        """Coordinate bounds of the current polytope, cached by version."""
        if self._bounds is None or self._bounds_version != self.polytope.version:
            self._bounds = estimator.solve(self.polytope)
            self._bounds_version = self.polytope.version
        return self._bounds

    def exploit_plan(self) -> ExploitationPlan:
        """Solve the estimator and build the greedy incentive plan.

        Raises :class:`GuardError` while eta < 3 and propagates
        :class:`InconsistentHistory` from the solve.
        """
        beta = beta_width(self.eta, self.alpha)
        b = self.bounds()
        s_hat = estimator.point_estimate(b)
        return exploitation_plan(
            s_hat,
            self.theta_hat,
            beta,
            self.instance.c_low,
            self.instance.c_high,
            diam=estimator.diameter(b),
        )
