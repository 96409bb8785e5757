"""Agent behaviors: truthful play and strategic rent extraction.

A strategic agent commits to a fixed "pretended" reward vector for the whole
horizon and best-responds to incentives as if it were true. Because the
principal's incentives are a best response to whatever vector the choices
reveal, inflating the top of the pretended vector forces the principal to pay
more to steer the agent, transferring the difference as information rent.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .exceptions import DomainError, NoRentError
from .model import ProblemInstance, as_vector, best_response

__all__ = [
    "AgentMode",
    "AgentBehavior",
    "RentCase",
    "RentConstruction",
    "truthful_agent",
    "strategic_agent",
    "principal_target",
    "minimal_steering_incentive",
    "rent_feasible",
    "construct_rent",
    "rent_gain",
]


class AgentMode(str, Enum):
    TRUTHFUL = "truthful"
    STRATEGIC = "strategic"


class RentCase(str, Enum):
    """Which constructive case applies, keyed on whether the agent's and the
    principal's favourite actions coincide."""

    SAME_ARGMAX = "same_argmax"
    DIFFERENT_ARGMAX = "different_argmax"


@dataclass(frozen=True, eq=False)
class AgentBehavior:
    """An agent with a fixed play vector for the entire horizon."""

    mode: AgentMode
    s_play: np.ndarray

    def act(self, pi: Sequence[float] | np.ndarray) -> int:
        """Utility-maximizing action (1-based) under the offered incentives."""
        return best_response(self.s_play, pi)


def truthful_agent(instance: ProblemInstance) -> AgentBehavior:
    return AgentBehavior(mode=AgentMode.TRUTHFUL, s_play=instance.s0)


def strategic_agent(instance: ProblemInstance) -> AgentBehavior:
    """Agent playing the rent-maximizing pretended vector for this instance."""
    construction = construct_rent(instance)
    return AgentBehavior(mode=AgentMode.STRATEGIC, s_play=construction.s_pretend)


def principal_target(s: Sequence[float] | np.ndarray, theta0: Sequence[float] | np.ndarray) -> int:
    """The arm a rational principal steers toward when the agent's rewards are ``s``.

    For each arm the principal nets its own mean reward minus the minimal
    incentive ``max(s) - s[j]`` required to steer the agent there; the target
    is the argmax of that net value (lowest index on ties).
    """
    s_arr = as_vector(s, name="normalized rewards")
    theta = as_vector(theta0, n=s_arr.shape[0], name="theta")
    return int(np.argmax(theta - s_arr.max() + s_arr)) + 1


def minimal_steering_incentive(s: Sequence[float] | np.ndarray, j: int) -> float:
    """Zero-margin payment that lifts arm ``j`` to the top of ``s``."""
    s_arr = as_vector(s, name="normalized rewards")
    if not 1 <= j <= s_arr.shape[0]:
        raise DomainError(f"action {j} out of range")
    return float(s_arr.max() - s_arr[j - 1])


def rent_feasible(
    instance: ProblemInstance,
    s: Sequence[float] | np.ndarray,
    pi: Sequence[float] | np.ndarray,
) -> bool:
    """Whether (pretended rewards, incentives) solve the agent's constraints.

    Feasibility requires a single-arm incentive pattern inside the admissible
    range, agreement between the principal's steering target under ``s`` and
    the agent's utility-maximizer under ``pi``, and the positive entry (if
    any) sitting on that common arm.
    """
    s_arr = as_vector(s, n=instance.n, name="normalized rewards")
    pi_arr = as_vector(pi, n=instance.n, name="incentives")
    positive = np.flatnonzero(pi_arr > 0)
    if positive.size > 1:
        raise DomainError("incentive vector may have at most one positive entry")
    if pi_arr.min() < instance.c_low - 1e-12 or pi_arr.max() > instance.c_high + 1e-12:
        raise DomainError("incentives outside the admissible range")
    a = principal_target(s_arr, instance.theta0_arr)
    b = best_response(s_arr, pi_arr)
    if a != b:
        return False
    if positive.size == 1 and positive[0] + 1 != a:
        return False
    return True


@dataclass(frozen=True, eq=False)
class RentConstruction:
    """A feasible strategic deviation and the incentives it provokes.

    ``target_arm`` is the arm the principal ends up steering to (and paying
    for); ``raised_arm`` is the coordinate of the pretended vector that was
    inflated; ``rent_quantity`` is the structural gap Q the construction
    exploits. The realized utility gain over truthful play is ``Q - 2 varsigma``.
    """

    case: RentCase
    target_arm: int
    raised_arm: int
    rent_quantity: float
    s_pretend: np.ndarray
    pi_expected: np.ndarray


def construct_rent(instance: ProblemInstance) -> RentConstruction:
    """Build the constructive rent-maximizing deviation for this instance.

    Same-argmax case: the agent pretends the principal's runner-up arm is
    almost as attractive as the top one, forcing a payment of (top theta gap)
    minus the margin. Different-argmax case: the agent inflates its own top
    coordinate by the gap between the best and second-best steering values.
    Raises :class:`NoRentError` when the available gap cannot cover the
    2-varsigma margin or the construction leaves the admissible ranges.
    """
    s0 = instance.s0
    theta0 = instance.theta0_arr
    varsigma = instance.varsigma
    kappa0 = int(np.argmax(s0))         # agent's favourite (0-based)
    q0 = int(np.argmax(theta0))         # principal's favourite (0-based)

    if kappa0 == q0:
        others = theta0.copy()
        others[q0] = -np.inf
        q0_bar = int(np.argmax(others))
        quantity = float(theta0[q0] - theta0[q0_bar])
        if quantity <= 2 * varsigma:
            raise NoRentError(
                f"top-two principal rewards differ by {quantity}, "
                f"not enough to cover the 2*varsigma={2 * varsigma} margin"
            )
        s_pretend = s0.copy()
        s_pretend[q0_bar] = s0[q0] + quantity - 2 * varsigma
        pi = np.zeros(instance.n)
        pi[q0] = quantity - varsigma
        construction = RentConstruction(
            case=RentCase.SAME_ARGMAX,
            target_arm=q0 + 1,
            raised_arm=q0_bar + 1,
            rent_quantity=quantity,
            s_pretend=s_pretend,
            pi_expected=pi,
        )
    else:
        v = theta0 - s0.max() + s0
        j_star = int(np.argmax(v))
        others = v.copy()
        others[j_star] = -np.inf
        quantity = float(v[j_star] - others.max())
        if quantity <= 2 * varsigma:
            raise NoRentError(
                f"top-two steering values differ by {quantity}, "
                f"not enough to cover the 2*varsigma={2 * varsigma} margin"
            )
        s_pretend = s0.copy()
        s_pretend[kappa0] = s0[kappa0] + quantity - 2 * varsigma
        pi = np.zeros(instance.n)
        pi[j_star] = s0[kappa0] - s0[j_star] + quantity - varsigma
        construction = RentConstruction(
            case=RentCase.DIFFERENT_ARGMAX,
            target_arm=j_star + 1,
            raised_arm=kappa0 + 1,
            rent_quantity=quantity,
            s_pretend=s_pretend,
            pi_expected=pi,
        )

    bound = instance.s_bound
    if construction.s_pretend.max() > bound + 1e-12 or construction.s_pretend.min() < -bound - 1e-12:
        raise NoRentError("pretended rewards would leave the normalized reward box")
    if construction.pi_expected.max() > instance.c_high + 1e-12:
        raise NoRentError("expected incentive would exceed the admissible cap")
    if not rent_feasible(instance, construction.s_pretend, construction.pi_expected):
        raise NoRentError("construction failed the feasibility check")
    return construction


def truthful_utility(instance: ProblemInstance) -> float:
    """Agent's expected per-round utility under truthful play and oracle incentives."""
    s0 = instance.s0
    return float(s0.max() + instance.varsigma)


def rent_gain(instance: ProblemInstance, construction: RentConstruction) -> float:
    """Realized per-round utility gain of the construction over truthful play.

    Computed from the actual utilities rather than the closed form, so tests
    can cross-check it equals ``rent_quantity - 2 varsigma``.
    """
    s0 = instance.s0
    target = construction.target_arm - 1
    strategic_utility = float(s0[target] + construction.pi_expected[target])
    return strategic_utility - truthful_utility(instance)
