"""Monte-Carlo decodability of random linear network codes.

Every client draws its coding coefficients uniformly from GF(q).  For a
feasible scheme, client ``i`` decodes with probability at least
``1 - (n-1)(n-2)/(2q)`` (the receiving-matrix determinant is a non-zero
polynomial of that degree in the coefficients).  ``run_trials`` measures the
empirical rate; trial ``t`` draws from the seed ``(seed, t)`` so results do
not depend on batching or execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Sequence

import numpy as np

from .coding import InfeasibleSchemeError, build_pattern, draw_values
from .feasibility import is_feasible
from .gf import Field
from .model import check_scheme

__all__ = [
    "TrialReport",
    "theorem3_bound",
    "union_bound",
    "round_half_up",
    "run_trials",
    "table1_report",
    "TABLE1_CLIENTS",
    "TABLE1_FIELDS",
]

TABLE1_CLIENTS = (4, 6, 8, 10, 12)
TABLE1_FIELDS = (256, 512)


def theorem3_bound(n: int, q: int) -> Fraction:
    """Per-client decoding probability bound ``1 - (n-1)(n-2)/(2q)``.

    Not clamped; it is negative when ``q`` is small relative to ``n``.
    """
    if n < 3 or q < 2:
        raise ValueError(f"need n >= 3 and q >= 2, got n={n}, q={q}")
    return 1 - Fraction((n - 1) * (n - 2), 2 * q)


def union_bound(n: int, q: int) -> Fraction:
    """Heuristic floor for all ``n`` clients decoding at once (union over clients)."""
    return 1 - Fraction(n * (n - 1) * (n - 2), 2 * q)


def round_half_up(x: Fraction, places: int = 4) -> Decimal:
    scale = 10**places
    return Decimal(math.floor(Fraction(x) * scale + Fraction(1, 2))).scaleb(-places)


def table1_report(
    clients: Sequence[int] = TABLE1_CLIENTS, fields: Sequence[int] = TABLE1_FIELDS
) -> dict[int, dict[int, Decimal]]:
    """``{q: {n: bound}}`` rounded half-up to 4 decimals."""
    return {q: {n: round_half_up(theorem3_bound(n, q)) for n in clients} for q in fields}


@dataclass(frozen=True)
class TrialReport:
    n: int
    q: int
    trials: int
    scheme: tuple[int, ...]
    per_client_successes: tuple[int, ...]
    all_clients_successes: int
    bound: Fraction
    seed: int

    @property
    def per_client_success(self) -> tuple[float, ...]:
        return tuple(s / self.trials for s in self.per_client_successes)

    @property
    def all_clients_success(self) -> float:
        return self.all_clients_successes / self.trials

    @property
    def union_bound(self) -> Fraction:
        return union_bound(self.n, self.q)

    def sigma(self) -> float:
        """Binomial standard error at the bound (clamped into [0, 1])."""
        p = min(max(float(self.bound), 0.0), 1.0)
        return math.sqrt(p * (1 - p) / self.trials)

    def threshold(self, z: float = 3.0) -> float:
        return float(self.bound) - z * self.sigma()

    def meets_bound(self, z: float = 3.0) -> bool:
        """Every client's rate is at least the bound minus ``z`` standard errors."""
        t = self.threshold(z)
        return all(r >= t for r in self.per_client_success)

    def csv_rows(self) -> list[list]:
        bound = f"{float(self.bound):.6f}"
        rows = [["client", "successes", "trials", "rate", "bound"]]
        for i, s in enumerate(self.per_client_successes, start=1):
            rows.append([i, s, self.trials, f"{s / self.trials:.6f}", bound])
        return rows


def run_trials(
    n: int,
    y: Sequence[int],
    field: Field,
    trials: int,
    seed: int,
    batch: int = 2048,
) -> TrialReport:
    """Draw ``trials`` random codes and record which clients can decode."""
    y = check_scheme(n, y)
    if trials < 1:
        raise ValueError("need at least one trial")
    verdict = is_feasible(n, y)
    if not verdict:
        raise InfeasibleSchemeError(verdict.describe())

    pattern = build_pattern(n, y)
    blocks = [
        (pattern.wanted_rows(i), pattern.received_columns(i)) for i in range(1, n + 1)
    ]
    need = len(blocks[0][0])
    successes = np.zeros(n, dtype=np.int64)
    joint = 0
    for start in range(0, trials, batch):
        stop = min(start + batch, trials)
        stack = np.stack(
            [draw_values(pattern, field, np.random.default_rng([seed, t])) for t in range(start, stop)]
        )
        ok = np.empty((n, stop - start), dtype=bool)
        for i, (rows, cols) in enumerate(blocks):
            ok[i] = field.rank_batch(stack[:, rows][:, :, cols]) == need
        successes += ok.sum(axis=1)
        joint += int(ok.all(axis=0).sum())

    return TrialReport(
        n=n,
        q=field.q,
        trials=trials,
        scheme=y,
        per_client_successes=tuple(int(s) for s in successes),
        all_clients_successes=joint,
        bound=theorem3_bound(n, field.q),
        seed=seed,
    )
