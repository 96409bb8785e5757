"""Domain model: problem instances, reward normalization, and the agent's choice rule.

Conventions used across the package:

* Actions are identified by 1-based indices (matching docs, CSV output, and
  config files); a vector entry for action ``k`` lives at array index ``k - 1``.
* A "normalized" reward vector has its first coordinate pinned to 0, which
  removes the uniform shift that observed choices can never identify.
* All vectors are plain 1-D ``numpy`` arrays of float64.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .exceptions import DomainError

__all__ = [
    "ProblemInstance",
    "normalize",
    "best_response",
    "as_vector",
]


def as_vector(values: Sequence[float] | np.ndarray, n: int | None = None, name: str = "vector") -> np.ndarray:
    """Coerce to a float64 1-D array, optionally enforcing length ``n``."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise DomainError(f"{name} must have length {n}, got {arr.shape[0]}")
    return arr


def normalize(
    r: Sequence[float] | np.ndarray,
    r_min: float | None = None,
    r_max: float | None = None,
) -> np.ndarray:
    """Shift a raw reward vector so its first coordinate is 0.

    When ``r_min``/``r_max`` are given, entries outside ``[r_min, r_max]``
    raise :class:`DomainError`. The result is idempotent on vectors whose
    first entry is already 0.
    """
    arr = as_vector(r, name="reward vector")
    if arr.shape[0] < 1:
        raise DomainError("reward vector must be non-empty")
    if r_min is not None and arr.min() < r_min - 1e-12:
        raise DomainError(f"reward entry {arr.min()} below R_min={r_min}")
    if r_max is not None and arr.max() > r_max + 1e-12:
        raise DomainError(f"reward entry {arr.max()} above R_max={r_max}")
    return arr - arr[0]


def best_response(s: Sequence[float] | np.ndarray, pi: Sequence[float] | np.ndarray) -> int:
    """The agent's utility-maximizing action under incentives ``pi``.

    Returns the 1-based index of ``argmax_a (s[a] + pi[a])``. Exact ties break
    to the lowest index, which keeps simulated runs reproducible; under the
    continuous incentive distributions used by the policies, ties have
    probability zero.
    """
    s_arr = as_vector(s, name="normalized rewards")
    pi_arr = as_vector(pi, name="incentives")
    if s_arr.shape[0] != pi_arr.shape[0]:
        raise DomainError(
            f"length mismatch: rewards have {s_arr.shape[0]} entries, incentives {pi_arr.shape[0]}"
        )
    return int(np.argmax(s_arr + pi_arr)) + 1


def _oracle_values(theta0: np.ndarray, s0: np.ndarray) -> np.ndarray:
    # Net reward of steering the agent to each action with the minimal incentive.
    return theta0 - s0.max() + s0


@dataclass(frozen=True)
class ProblemInstance:
    """A complete description of one repeated principal-agent game.

    Fields mirror the model primitives: ``theta0`` are the principal's mean
    rewards per action, ``r0`` the agent's (private) mean rewards,
    ``[r_min, r_max]`` the declared reward range, ``[c_low, c_high]`` the
    incentive range with ``c_high = r_max + gamma``, ``varsigma`` the oracle's
    tie-breaking margin, and ``reward_noise_sd`` the standard deviation of the
    principal's Gaussian reward noise.
    """

    n: int
    theta0: tuple[float, ...]
    r0: tuple[float, ...]
    r_min: float
    r_max: float
    gamma: float
    c_low: float
    c_high: float
    theta_min: float = 0.0
    theta_max: float = 100.0
    reward_noise_sd: float = 5.0
    varsigma: float = 0.1
    name: str = "custom"

    def __post_init__(self) -> None:
        if self.n < 2:
            raise DomainError("instance requires at least two actions (n >= 2)")
        if len(self.theta0) != self.n or len(self.r0) != self.n:
            raise DomainError("theta0 and r0 must both have length n")
        if self.r_max - self.r_min < 1:
            raise DomainError("reward range must satisfy R_max - R_min >= 1")
        if not (0 < self.gamma <= self.r_max - self.r_min - 1):
            raise DomainError("slack must satisfy 0 < gamma <= R_max - R_min - 1")
        if abs(self.c_high - (self.r_max + self.gamma)) > 1e-9:
            raise DomainError("incentive cap must satisfy C_high = R_max + gamma")
        if not (self.r_min <= self.c_low <= 0.0):
            raise DomainError("incentive floor must satisfy R_min <= C_low <= 0")
        r = np.asarray(self.r0)
        if r.min() < self.r_min - 1e-9 or r.max() > self.r_max + 1e-9:
            raise DomainError("every r0 entry must lie in [R_min, R_max]")
        th = np.asarray(self.theta0)
        if th.min() < self.theta_min - 1e-9 or th.max() > self.theta_max + 1e-9:
            raise DomainError("every theta0 entry must lie in [Theta_min, Theta_max]")
        if self.reward_noise_sd < 0:
            raise DomainError("reward_noise_sd must be nonnegative")
        s0 = r - r[0]
        if s0.max() - s0.min() >= self.c_high:
            raise DomainError(
                "initialization cannot force every action: "
                "max(s0) - min(s0) must be < C_high"
            )
        if self.varsigma < 0:
            raise DomainError("varsigma must be nonnegative")
        v = np.sort(_oracle_values(th.astype(float), s0.astype(float)))[::-1]
        gaps = -np.diff(v)
        positive = gaps[gaps > 0]
        if positive.size and self.varsigma >= positive.min():
            raise DomainError(
                f"varsigma={self.varsigma} must be smaller than the minimum "
                f"positive gap {positive.min()} between net-reward values"
            )

    @classmethod
    def make(
        cls,
        theta0: Sequence[float],
        r0: Sequence[float],
        r_min: float,
        r_max: float,
        gamma: float,
        c_low: float | None = None,
        **kwargs,
    ) -> "ProblemInstance":
        """Build an instance with the default incentive range C = [R_min, R_max + gamma]."""
        return cls(
            n=len(theta0),
            theta0=tuple(float(x) for x in theta0),
            r0=tuple(float(x) for x in r0),
            r_min=float(r_min),
            r_max=float(r_max),
            gamma=float(gamma),
            c_low=float(r_min if c_low is None else c_low),
            c_high=float(r_max) + float(gamma),
            **kwargs,
        )

    @property
    def s0(self) -> np.ndarray:
        """The agent's normalized mean reward vector."""
        return normalize(self.r0)

    @property
    def s_bound(self) -> float:
        """Half-width of the normalized reward box: R_max - R_min."""
        return self.r_max - self.r_min

    @property
    def theta0_arr(self) -> np.ndarray:
        return np.asarray(self.theta0, dtype=float)

    def with_varsigma(self, varsigma: float) -> "ProblemInstance":
        return replace(self, varsigma=varsigma)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "theta0": list(self.theta0),
            "r0": list(self.r0),
            "r_min": self.r_min,
            "r_max": self.r_max,
            "gamma": self.gamma,
            "c_low": self.c_low,
            "c_high": self.c_high,
            "theta_min": self.theta_min,
            "theta_max": self.theta_max,
            "reward_noise_sd": self.reward_noise_sd,
            "varsigma": self.varsigma,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProblemInstance":
        fields_ = {
            "n", "theta0", "r0", "r_min", "r_max", "gamma", "c_low", "c_high",
            "theta_min", "theta_max", "reward_noise_sd", "varsigma", "name",
        }
        unknown = set(data) - fields_
        if unknown:
            raise DomainError(f"unknown instance keys: {sorted(unknown)}")
        kwargs = dict(data)
        kwargs["theta0"] = tuple(float(x) for x in kwargs["theta0"])
        kwargs["r0"] = tuple(float(x) for x in kwargs["r0"])
        return cls(**kwargs)
