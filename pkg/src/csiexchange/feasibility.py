"""Feasibility of transmission schemes.

A scheme ``y`` (packets sent per client) admits a code that lets every client
decode its wanted packets iff every group of ``k < n`` clients sends at least
``C(k, 2)`` packets in total.  Three deciders are provided:

* ``is_feasible`` checks only the ``k`` smallest entries of ``y``, which is
  where each group minimum is attained;
* ``is_feasible_exhaustive`` enumerates every proper subset of clients;
* ``structural_certificate`` works at the matrix level, asking whether each
  client's receiving-matrix pattern has a row-saturating matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

from .matching import row_saturating
from .model import ResourceLimitError, check_scheme

__all__ = [
    "FeasibilityVerdict",
    "is_feasible",
    "is_feasible_exhaustive",
    "structural_certificate",
    "MAX_EXHAUSTIVE_CLIENTS",
]

MAX_EXHAUSTIVE_CLIENTS = 20


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    violating_subset: frozenset[int] | None = None
    required: int | None = None
    actual: int | None = None

    def __bool__(self) -> bool:
        return self.feasible

    def describe(self) -> str:
        if self.feasible:
            return "feasible"
        clients = ",".join(str(i) for i in sorted(self.violating_subset))
        return (
            f"infeasible: clients {{{clients}}} send {self.actual} packets, "
            f"need at least {self.required}"
        )


def is_feasible(n: int, y: Sequence[int]) -> FeasibilityVerdict:
    """Sorted prefix check of the group condition.

    On failure the reported group is the ``k`` lowest-sending clients (ties by
    lower index) for the smallest violated ``k``.
    """
    y = check_scheme(n, y)
    order = sorted(range(1, n + 1), key=lambda i: (y[i - 1], i))
    total = 0
    for k in range(1, n):
        total += y[order[k - 1] - 1]
        if total < comb(k, 2):
            return FeasibilityVerdict(False, frozenset(order[:k]), comb(k, 2), total)
    return FeasibilityVerdict(True)


def is_feasible_exhaustive(n: int, y: Sequence[int]) -> FeasibilityVerdict:
    """Oracle: test the group condition on every non-empty proper client subset.

    Among violating groups of the smallest violated size, reports the one with
    the smallest total and, among those, the lexicographically first.
    """
    y = check_scheme(n, y)
    if n > MAX_EXHAUSTIVE_CLIENTS:
        raise ResourceLimitError(
            f"exhaustive check enumerates 2^n subsets; n={n} exceeds {MAX_EXHAUSTIVE_CLIENTS}"
        )
    for k in range(1, n):
        need = comb(k, 2)
        worst = None
        for group in combinations(range(1, n + 1), k):
            s = sum(y[i - 1] for i in group)
            if s < need and (worst is None or s < worst[1]):
                worst = (group, s)
        if worst is not None:
            return FeasibilityVerdict(False, frozenset(worst[0]), need, worst[1])
    return FeasibilityVerdict(True)


def structural_certificate(n: int, y: Sequence[int]) -> list[bool]:
    """Per client: can its receiving-matrix pattern reach full row rank?

    Decided by matching wanted-packet rows to distinct columns sent by other
    clients that hold the row's packet.
    """
    from .coding import build_pattern

    y = check_scheme(n, y)
    pattern = build_pattern(n, y)
    return [row_saturating(pattern.receiving_pattern(i)) for i in range(1, n + 1)]
