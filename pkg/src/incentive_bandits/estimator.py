"""Set-membership estimation of the agent's normalized mean rewards.

Every observed round (incentives ``pi``, chosen action ``i``) certifies the
linear inequalities ``s[a] - s[i] <= pi[i] - pi[a]`` for all ``a != i``.
Rather than storing the full history, the polytope keeps only the tightest
right-hand side per ordered pair (a min-aggregation), which represents exactly
the same feasible set in O(n^2) memory regardless of horizon length.

The feasible set is a difference-constraint system, so per-coordinate extrema
come from shortest paths on a weighted graph (one node per action, reference
node pinned at 0) and infeasibility shows up as a negative cycle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import DomainError, InconsistentHistory
from .model import as_vector

__all__ = [
    "ConstraintPolytope",
    "CoordinateBounds",
    "observe",
    "solve",
    "point_estimate",
    "diameter",
    "contains",
    "polytope_to_json",
    "polytope_from_json",
]

_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ConstraintPolytope:
    """Compressed choice history: tightest pairwise gap bounds plus a box.

    ``gaps[i, a]`` (0-based) is the smallest observed ``pi[i] - pi[a]`` over
    rounds where action ``i + 1`` was chosen, i.e. an upper bound on
    ``s[a] - s[i]``; ``+inf`` where never observed. ``version`` increments only
    when some bound actually tightens, so callers can cache solve results.
    """

    n: int
    gaps: np.ndarray
    box_lo: float
    box_hi: float
    obs_count: int = 0
    version: int = 0

    @classmethod
    def empty(cls, n: int, box_lo: float, box_hi: float) -> "ConstraintPolytope":
        if n < 2:
            raise DomainError("polytope requires n >= 2")
        if box_lo > box_hi:
            raise DomainError("box_lo must not exceed box_hi")
        gaps = np.full((n, n), np.inf)
        return cls(n=n, gaps=gaps, box_lo=float(box_lo), box_hi=float(box_hi))

    @classmethod
    def for_instance(cls, instance) -> "ConstraintPolytope":
        b = instance.s_bound
        return cls.empty(instance.n, -b, b)


@dataclass(frozen=True, eq=False)
class CoordinateBounds:
    """Tightest per-coordinate interval of the feasible polytope.

    Both the all-lower and all-upper corner assignments are themselves feasible
    points (shortest-path potentials), so these bounds are attained.
    """

    lower: np.ndarray
    upper: np.ndarray


def observe(p: ConstraintPolytope, pi: Sequence[float] | np.ndarray, chosen: int) -> ConstraintPolytope:
    """Absorb one round: the chosen action's utility dominated every other.

    Tightens ``gaps[chosen]`` by ``pi[chosen] - pi[a]`` and bumps the version
    only if some entry strictly decreased. Inconsistent data is absorbed
    silently; it surfaces later as a negative cycle in :func:`solve`.
    """
    pi_arr = as_vector(pi, n=p.n, name="incentives")
    if not 1 <= chosen <= p.n:
        raise DomainError(f"chosen action {chosen} out of range 1..{p.n}")
    c = chosen - 1
    candidate = pi_arr[c] - pi_arr
    row = p.gaps[c]
    new_row = np.minimum(row, candidate)
    new_row[c] = np.inf
    tightened = bool(np.any(new_row < row))
    gaps = p.gaps.copy()
    gaps[c] = new_row
    return ConstraintPolytope(
        n=p.n,
        gaps=gaps,
        box_lo=p.box_lo,
        box_hi=p.box_hi,
        obs_count=p.obs_count + 1,
        version=p.version + 1 if tightened else p.version,
    )


def _edges(p: ConstraintPolytope) -> list[tuple[int, int, float]]:
    edges: list[tuple[int, int, float]] = []
    finite = np.isfinite(p.gaps)
    for i in range(p.n):
        for a in range(p.n):
            if i != a and finite[i, a]:
                edges.append((i, a, float(p.gaps[i, a])))
    # Box constraints relative to the reference coordinate s[0] = 0:
    # s[a] <= box_hi and s[a] >= box_lo.
    for a in range(1, p.n):
        edges.append((0, a, p.box_hi))
        edges.append((a, 0, -p.box_lo))
    return edges


def _shortest_from_reference(n: int, edges: list[tuple[int, int, float]]) -> np.ndarray:
    dist = np.full(n, np.inf)
    dist[0] = 0.0
    for _ in range(n - 1):
        changed = False
        for i, a, w in edges:
            d = dist[i] + w
            if d < dist[a] - _TOL:
                dist[a] = d
                changed = True
        if not changed:
            break
    for i, a, w in edges:
        if dist[i] + w < dist[a] - _TOL:
            raise InconsistentHistory(
                "no reward vector rationalizes the observed choices "
                f"(negative cycle through actions {i + 1} and {a + 1})",
                cycle=(i + 1, a + 1),
            )
    return dist


def solve(p: ConstraintPolytope) -> CoordinateBounds:
    """Tightest per-coordinate bounds of the feasible set.

    ``upper[a]`` is the shortest-path distance from the reference action to
    ``a``; ``lower[a]`` is minus the distance back. Raises
    :class:`InconsistentHistory` when the constraint graph has a negative
    cycle, i.e. the loss of every candidate vector is infinite.
    """
    edges = _edges(p)
    upper = _shortest_from_reference(p.n, edges)
    reversed_edges = [(a, i, w) for i, a, w in edges]
    lower = -_shortest_from_reference(p.n, reversed_edges) + 0.0
    return CoordinateBounds(lower=lower, upper=upper)


def point_estimate(b: CoordinateBounds) -> np.ndarray:
    """Midpoint of the coordinate bounds.

    Any feasible point is an admissible estimate; the midpoint is the convex
    combination of the two feasible corner assignments, hence feasible itself,
    and halves the worst-case sup-norm error relative to a corner.
    """
    return (b.lower + b.upper) / 2.0


def diameter(b: CoordinateBounds) -> float:
    """Largest per-coordinate width; upper-bounds the sup-norm estimation error."""
    return float(np.max(b.upper - b.lower))


def contains(p: ConstraintPolytope, s: Sequence[float] | np.ndarray, tol: float = _TOL) -> bool:
    """Whether ``s`` satisfies every stored constraint (finite loss)."""
    s_arr = as_vector(s, n=p.n, name="normalized rewards")
    if abs(s_arr[0]) > tol:
        return False
    if s_arr.min() < p.box_lo - tol or s_arr.max() > p.box_hi + tol:
        return False
    diff = s_arr[None, :] - s_arr[:, None]  # diff[i, a] = s[a] - s[i]
    finite = np.isfinite(p.gaps)
    return bool(np.all(diff[finite] <= p.gaps[finite] + tol))


def polytope_to_json(p: ConstraintPolytope) -> str:
    """Serialize to the checkpoint document {n, gaps, box, obs_count}.

    Gap entries are listed as 1-based ``[i, a, value]`` triples for finite
    bounds only.
    """
    finite = np.argwhere(np.isfinite(p.gaps))
    entries = [[int(i) + 1, int(a) + 1, float(p.gaps[i, a])] for i, a in finite]
    doc = {
        "n": p.n,
        "gaps": entries,
        "box": [p.box_lo, p.box_hi],
        "obs_count": p.obs_count,
    }
    return json.dumps(doc)


def polytope_from_json(text: str) -> ConstraintPolytope:
    doc = json.loads(text)
    unknown = set(doc) - {"n", "gaps", "box", "obs_count"}
    if unknown:
        raise DomainError(f"unknown polytope keys: {sorted(unknown)}")
    p = ConstraintPolytope.empty(int(doc["n"]), float(doc["box"][0]), float(doc["box"][1]))
    gaps = p.gaps
    for i, a, value in doc["gaps"]:
        if not (1 <= i <= p.n and 1 <= a <= p.n) or i == a:
            raise DomainError(f"invalid gap entry ({i}, {a})")
        gaps[i - 1, a - 1] = float(value)
    return ConstraintPolytope(
        n=p.n,
        gaps=gaps,
        box_lo=p.box_lo,
        box_hi=p.box_hi,
        obs_count=int(doc.get("obs_count", 0)),
    )
