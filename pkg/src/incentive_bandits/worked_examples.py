"""Built-in worked examples with known-correct values.

Two small instances exercise every analytic path end to end: the three-action
case where the principal's and the agent's favourite arms coincide (no
incentive needed under truthful play) and the four-action case where they
differ (the oracle pays a steering incentive). Each check recomputes a
documented quantity through the library and compares against the frozen
value, exactly, at 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .agents import (
    RentCase,
    construct_rent,
    minimal_steering_incentive,
    principal_target,
    rent_feasible,
    rent_gain,
    truthful_utility,
)
from .model import ProblemInstance, best_response
from .policy import oracle_incentives

__all__ = ["Check", "example_three_action", "example_four_action", "run_checks"]

TOL = 1e-9


@dataclass(frozen=True)
class Check:
    name: str
    got: float | int | bool
    want: float | int | bool

    @property
    def ok(self) -> bool:
        return abs(float(self.got) - float(self.want)) <= TOL


def example_three_action() -> ProblemInstance:
    """n=3 with coinciding favourite arms: s0=(0,4,3), theta0=(1,8,2)."""
    return ProblemInstance.make(
        theta0=(1.0, 8.0, 2.0),
        r0=(0.0, 4.0, 3.0),
        r_min=-20.0,
        r_max=50.0,
        gamma=10.0,
        name="example_3action",
    )


def example_four_action() -> ProblemInstance:
    """n=4 with differing favourite arms: s0=(0,4,3,6), theta0=(1,8,7,2)."""
    return ProblemInstance.make(
        theta0=(1.0, 8.0, 7.0, 2.0),
        r0=(0.0, 4.0, 3.0, 6.0),
        r_min=-20.0,
        r_max=50.0,
        gamma=10.0,
        name="example_4action",
    )


def _three_action_checks() -> list[Check]:
    inst = example_three_action()
    s0 = inst.s0
    theta0 = inst.theta0_arr
    zeros = np.zeros(inst.n)
    checks = []

    # Truthful play needs no incentive: both sides already prefer arm 2.
    br = best_response(s0, zeros)
    checks.append(Check("3action truthful choice is arm 2", br, 2))
    checks.append(Check("3action truthful principal net", theta0[br - 1], 8.0))
    checks.append(Check("3action truthful agent utility", s0[br - 1], 4.0))

    # Constructive strategic deviation (same-argmax case).
    con = construct_rent(inst)
    checks.append(Check("3action rent case is same-argmax", con.case is RentCase.SAME_ARGMAX, True))
    checks.append(Check("3action rent quantity", con.rent_quantity, 6.0))
    checks.append(Check("3action expected incentive on arm 2", con.pi_expected[1], 5.9))
    checks.append(Check("3action incentive zero on arm 1", con.pi_expected[0], 0.0))
    checks.append(Check("3action incentive zero on arm 3", con.pi_expected[2], 0.0))
    checks.append(Check("3action pretended third coordinate", con.s_pretend[2], 9.8))
    checks.append(Check("3action construction rent gain", rent_gain(inst, con), 5.8))

    # Documented illustrative variant: pretend s=(0,4,9.5).
    s_var = np.array([0.0, 4.0, 9.5])
    checks.append(Check("3action variant untruthful zero-incentive choice", best_response(s_var, zeros), 3))
    checks.append(
        Check("3action variant zero-incentive principal net", theta0[best_response(s_var, zeros) - 1], 2.0)
    )
    checks.append(Check("3action variant steering target", principal_target(s_var, theta0), 2))
    c_min = minimal_steering_incentive(s_var, 2)
    checks.append(Check("3action variant minimal incentive", c_min, 5.5))
    variant_utility = s0[1] + c_min
    truthful_zero_incentive_utility = s0[br - 1]
    checks.append(Check("3action variant principal net", theta0[1] - c_min, 2.5))
    checks.append(Check("3action variant agent utility", variant_utility, 9.5))
    checks.append(
        Check("3action variant rent over truthful", variant_utility - truthful_zero_incentive_utility, 5.5)
    )
    checks.append(
        Check(
            "3action variant feasible with incentive 5.9",
            rent_feasible(inst, s_var, np.array([0.0, 5.9, 0.0])),
            True,
        )
    )
    return checks


def _four_action_checks() -> list[Check]:
    inst = example_four_action()
    s0 = inst.s0
    theta0 = inst.theta0_arr
    checks = []

    oracle = oracle_incentives(inst)
    checks.append(Check("4action oracle target arm", oracle.j_star, 2))
    checks.append(Check("4action oracle incentive on arm 2", oracle.pi[1], 2.1))
    checks.append(Check("4action oracle incentives elsewhere", float(np.abs(oracle.pi).sum() - oracle.pi[1]), 0.0))
    checks.append(Check("4action oracle per-round value", oracle.value, 5.9))
    checks.append(Check("4action truthful agent utility", truthful_utility(inst), 6.1))
    checks.append(Check("4action truthful feasible", rent_feasible(inst, s0, oracle.pi), True))

    con = construct_rent(inst)
    checks.append(Check("4action rent case is different-argmax", con.case is RentCase.DIFFERENT_ARGMAX, True))
    checks.append(Check("4action rent quantity", con.rent_quantity, 2.0))
    checks.append(Check("4action pretended fourth coordinate", con.s_pretend[3], 7.8))
    checks.append(Check("4action expected incentive on arm 2", con.pi_expected[1], 3.9))
    checks.append(Check("4action strategic principal net", theta0[1] - con.pi_expected[1], 4.1))
    checks.append(Check("4action strategic agent utility", s0[1] + con.pi_expected[1], 7.9))
    checks.append(Check("4action construction rent gain", rent_gain(inst, con), 1.8))
    checks.append(
        Check("4action construction feasible", rent_feasible(inst, con.s_pretend, con.pi_expected), True)
    )
    return checks


def _benchmark_oracle_checks() -> list[Check]:
    from .config import table1_n5, table1_n10

    checks = []
    n5 = table1_n5()
    oracle5 = oracle_incentives(n5)
    v5 = n5.theta0_arr - n5.s0.max() + n5.s0
    for j, want in enumerate((14.0, -52.0, -19.0, 16.0, 15.0)):
        checks.append(Check(f"n5 steering value arm {j + 1}", v5[j], want))
    checks.append(Check("n5 oracle target arm", oracle5.j_star, 4))
    checks.append(Check("n5 oracle incentive", oracle5.pi[3], 10.0 + n5.varsigma))
    checks.append(Check("n5 oracle value", oracle5.value, 16.0 - n5.varsigma))

    n10 = table1_n10()
    oracle10 = oracle_incentives(n10)
    checks.append(Check("n10 oracle target arm", oracle10.j_star, 8))
    checks.append(Check("n10 oracle incentive", oracle10.pi[7], 30.0 + n10.varsigma))
    checks.append(Check("n10 oracle value", oracle10.value, 61.0 - n10.varsigma))
    return checks


def run_checks() -> list[Check]:
    """All golden-value checks; every ``Check.ok`` must be True."""
    return _three_action_checks() + _four_action_checks() + _benchmark_oracle_checks()
