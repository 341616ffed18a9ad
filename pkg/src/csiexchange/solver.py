"""Exact minimum-cost transmission schemes.

The problem is the integer program

    minimise    sum_i cost_i * y_i
    subject to  sum of the k smallest y_i >= C(k, 2)   for k = 1 .. n-1,
                y_i >= 0 integer.

With clients sorted by ascending cost, some optimal scheme is non-increasing
(cheaper clients send at least as much), and with distinct costs every optimal
scheme is.  ``solve_min_cost`` therefore runs a depth-first branch-and-bound
over non-increasing vectors in cost order, where the ``k`` smallest entries
are simply the last ``k``.

Ties among optimal schemes are broken by fewest total transmissions, then by
the lexicographically smallest non-increasing vector in cost order (clients
with equal cost ordered by index).  ``brute_force_solve`` applies the same
rule over an unrestricted enumeration and serves as the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, lcm
from typing import Sequence

import numpy as np

from .model import ExchangeProblem, ResourceLimitError, total_cost

__all__ = [
    "OptimalScheme",
    "solve_min_cost",
    "solve_min_transmissions",
    "brute_force_solve",
    "lower_bound",
    "entry_cap",
    "BRUTE_FORCE_LIMIT",
]

BRUTE_FORCE_LIMIT = 5_000_000


@dataclass(frozen=True)
class OptimalScheme:
    scheme: tuple[int, ...]
    cost: Fraction
    total_transmissions: int
    sort_permutation: tuple[int, ...]

    @property
    def sorted_scheme(self) -> tuple[int, ...]:
        """``scheme`` listed in cost-ascending client order."""
        return tuple(self.scheme[i - 1] for i in self.sort_permutation)

    def to_json(self) -> dict:
        return {
            "y": list(self.scheme),
            "cost": str(self.cost),
            "cost_numerator": self.cost.numerator,
            "cost_denominator": self.cost.denominator,
            "transmissions": self.total_transmissions,
            "order": list(self.sort_permutation),
        }


def entry_cap(n: int) -> int:
    """Largest per-client count an optimal scheme can use.

    Any feasible ``y`` stays feasible when one entry is lowered to ``n - 2``:
    a group of ``k <= n - 1`` clients containing that entry also contains
    ``k - 1`` others summing to at least ``C(k-1, 2)``, and
    ``C(k-1, 2) + n - 2 >= C(k, 2)``.  Lowering never raises the cost and
    strictly lowers the transmission count, so the tie-broken optimum never
    exceeds ``n - 2``; this is tighter than the trivial cap ``C(n-1, 2)``.
    """
    return n - 2


def _scaled_costs(costs: Sequence[Fraction]) -> tuple[list[int], int]:
    scale = lcm(*(c.denominator for c in costs))
    return [int(c * scale) for c in costs], scale


def _suffix_needs(n: int, prefix: Sequence[int], room: int) -> list[int] | None:
    """Least sums of the last ``k`` unassigned entries, ``k = 1 .. n - len(prefix)``.

    ``None`` if no non-increasing tail with entries at most ``room`` can
    satisfy the constraints.  The last ``k`` entries need ``C(k, 2)``; the
    whole tail also covers the shortfall of longer groups reaching back into
    ``prefix``.  Suffix averages of a non-increasing sequence grow with length,
    so need ``k`` is also at least ``need(k-1) * k / (k-1)``.
    """
    p = len(prefix)
    rem = n - p
    needs = []
    prev = 0
    for k in range(1, rem + 1):
        floor_k = comb(k, 2) if k < n else 0
        if k == rem:
            for longer in range(rem + 1, n):
                floor_k = max(floor_k, comb(longer, 2) - sum(prefix[p - (longer - rem):]))
        if k > 1:
            floor_k = max(floor_k, -(-prev * k // (k - 1)))
        if floor_k > k * room:
            return None
        needs.append(floor_k)
        prev = floor_k
    return needs


def _completion_cost(costs: Sequence, needs: Sequence[int]) -> object:
    # Dropping monotonicity, the cheapest tail meets every suffix need exactly:
    # position n-k carries needs[k-1] - needs[k-2].
    n = len(costs)
    total = 0
    prev = 0
    for k, need in enumerate(needs, start=1):
        total += costs[n - k] * (need - prev)
        prev = need
    return total


def _tail_ok(n: int, y: Sequence[int]) -> bool:
    s = 0
    for k in range(1, n):
        s += y[n - k]
        if s < comb(k, 2):
            return False
    return True


def lower_bound(problem: ExchangeProblem, prefix: Sequence[int]) -> Fraction | float:
    """Admissible bound on the cost of any feasible completion of ``prefix``.

    ``prefix`` assigns the cheapest ``len(prefix)`` clients (cost order) and
    must be non-increasing.  Each forced increment of the unassigned tail's
    suffix sums is priced at the cost of the client where it must land at the
    latest, which never exceeds what a real completion pays (and is at least
    the total remaining deficit times the cheapest remaining cost).  Returns
    ``math.inf`` if no completion can be feasible.
    """
    n = problem.n
    costs = sorted(problem.costs)
    prefix = list(prefix)
    p = len(prefix)
    if p > n or any(prefix[j] < prefix[j + 1] for j in range(p - 1)):
        raise ValueError("prefix must be non-increasing and at most n long")
    so_far = sum((c * v for c, v in zip(costs, prefix)), Fraction(0))
    if p == n:
        return so_far if _tail_ok(n, prefix) else math.inf
    room = min(entry_cap(n), prefix[-1]) if prefix else entry_cap(n)
    needs = _suffix_needs(n, prefix, room)
    if needs is None:
        return math.inf
    return so_far + _completion_cost(costs, needs)


def solve_min_cost(problem: ExchangeProblem) -> OptimalScheme:
    n = problem.n
    order = problem.cost_order()
    int_costs, scale = _scaled_costs([problem.costs[i - 1] for i in order])
    cap = entry_cap(n)

    best_key: tuple | None = None
    best_y: list[int] | None = None
    y = [0] * n

    def search(p: int, cost: int, sent: int, room: int) -> None:
        nonlocal best_key, best_y
        if p == n:
            if _tail_ok(n, y):
                key = (cost, sent, tuple(y))
                if best_key is None or key < best_key:
                    best_key, best_y = key, list(y)
            return
        needs = _suffix_needs(n, y[:p], room)
        if needs is None:
            return
        if best_key is not None:
            bound = (cost + _completion_cost(int_costs, needs), sent + needs[-1], tuple(y[:p]))
            if bound > (best_key[0], best_key[1], best_key[2][:p]):
                return
        # ascending: once an optimum is found, every later sibling has a
        # lexicographically larger prefix and is cut by the bound above
        for v in range(room + 1):
            y[p] = v
            search(p + 1, cost + v * int_costs[p], sent + v, v)
        y[p] = 0

    search(0, 0, 0, cap)
    assert best_y is not None, "y = (n-2, ..., n-2) is always feasible"

    scheme = [0] * n
    for pos, client in enumerate(order):
        scheme[client - 1] = best_y[pos]
    return OptimalScheme(
        scheme=tuple(scheme),
        cost=total_cost(problem, scheme),
        total_transmissions=sum(scheme),
        sort_permutation=tuple(order),
    )


def solve_min_transmissions(n: int) -> OptimalScheme:
    """Fewest total transmissions (every client costs 1)."""
    return solve_min_cost(ExchangeProblem.uniform(n))


@lru_cache(maxsize=8)
def _feasible_grid(n: int, y_cap: int) -> np.ndarray:
    """Every vector in ``[0, y_cap]^n`` passing the all-subsets condition."""
    groups = [g for k in range(1, n) for g in combinations(range(n), k)]
    incidence = np.zeros((n, len(groups)), dtype=np.int32)
    for j, g in enumerate(groups):
        incidence[list(g), j] = 1
    need = np.array([comb(len(g), 2) for g in groups], dtype=np.int32)

    size = (y_cap + 1) ** n
    grid = np.stack(np.unravel_index(np.arange(size), (y_cap + 1,) * n), axis=1).astype(np.int32)
    keep = np.empty(len(grid), dtype=bool)
    step = 1 << 16
    for start in range(0, len(grid), step):
        chunk = grid[start : start + step]
        keep[start : start + step] = np.all(chunk @ incidence >= need, axis=1)
    out = grid[keep]
    out.setflags(write=False)
    return out


def brute_force_solve(
    problem: ExchangeProblem, y_cap: int, limit: int = BRUTE_FORCE_LIMIT
) -> OptimalScheme:
    """Oracle: scan every ``y`` in ``[0, y_cap]^n``, keep the feasible ones
    (checked against every client subset), and take the best under the
    documented tie-break."""
    n = problem.n
    if y_cap < 0:
        raise ValueError("y_cap must be non-negative")
    if (y_cap + 1) ** n > limit:
        raise ResourceLimitError(f"{y_cap + 1}^{n} candidate schemes exceed the limit of {limit}")
    feasible = _feasible_grid(n, y_cap)
    if len(feasible) == 0:
        raise ValueError(f"no feasible scheme has all entries <= {y_cap}")

    order = problem.cost_order()
    int_costs, _ = _scaled_costs(problem.costs)
    if max(int_costs) * y_cap * n < 2**62:
        cost = feasible.astype(np.int64) @ np.array(int_costs, dtype=np.int64)
    else:
        cost = feasible.astype(object) @ np.array(int_costs, dtype=object)

    cand = np.flatnonzero(cost == cost.min())
    sent = feasible[cand].sum(axis=1)
    cand = cand[sent == sent.min()]
    in_order = feasible[cand][:, [i - 1 for i in order]]
    monotone = np.all(in_order[:, :-1] >= in_order[:, 1:], axis=1)
    if monotone.any():
        cand, in_order = cand[monotone], in_order[monotone]
    # lexicographic minimum of the cost-ordered rows
    rows = sorted(range(len(cand)), key=lambda j: tuple(in_order[j]))
    y = tuple(int(v) for v in feasible[cand[rows[0]]])
    return OptimalScheme(
        scheme=y,
        cost=total_cost(problem, y),
        total_transmissions=sum(y),
        sort_permutation=tuple(order),
    )
