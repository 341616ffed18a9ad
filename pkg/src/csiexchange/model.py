"""Problem instances for third-party CSI exchange.

Client ``i`` (1-based) initially holds the packets ``x_{i,j}`` for every other
client ``j``; a packet is identified by the unordered pair of its link
endpoints.  All packets are laid out in one fixed order,
``(1,2), (1,3), ..., (1,N), (2,3), ..., (N-1,N)``, which is the row order of
every encoding matrix in this package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "InvalidProblemError",
    "ResourceLimitError",
    "PacketId",
    "ExchangeProblem",
    "packet_universe",
    "packet_index",
    "held_packets",
    "wanted_packets",
    "idx_set",
    "min_clients_covering",
    "check_scheme",
    "total_cost",
    "load_problem",
    "parse_problem",
]


class InvalidProblemError(ValueError):
    """Raised for malformed instances, schemes, or client indices."""


class ResourceLimitError(RuntimeError):
    """An exhaustive computation was asked to run beyond its size limit."""


class PacketId(NamedTuple):
    """CSI packet of the link between clients ``a`` and ``b`` (``a < b``)."""

    a: int
    b: int

    @classmethod
    def of(cls, i: int, j: int) -> "PacketId":
        if i == j:
            raise InvalidProblemError(f"a packet needs two distinct endpoints, got ({i}, {j})")
        return cls(min(i, j), max(i, j))

    def holders(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __str__(self) -> str:
        return f"x{self.a},{self.b}"


def _check_n(n: int) -> None:
    if int(n) != n or n < 3:
        raise InvalidProblemError(f"need at least 3 clients, got n={n}")


def _check_client(n: int, i: int) -> None:
    _check_n(n)
    if int(i) != i or not 1 <= i <= n:
        raise InvalidProblemError(f"client index {i} outside [1, {n}]")


@lru_cache(maxsize=None)
def packet_universe(n: int) -> tuple[PacketId, ...]:
    """All ``n(n-1)/2`` packets in canonical row order."""
    _check_n(n)
    return tuple(PacketId(a, b) for a, b in combinations(range(1, n + 1), 2))


@lru_cache(maxsize=None)
def _row_lookup(n: int) -> dict[PacketId, int]:
    return {p: r for r, p in enumerate(packet_universe(n))}


def packet_index(n: int, packet: PacketId) -> int:
    """Row of ``packet`` in the canonical order (0-based)."""
    try:
        return _row_lookup(n)[PacketId.of(*packet)]
    except KeyError:
        raise InvalidProblemError(f"{packet} is not a packet of a {n}-client instance") from None


def held_packets(n: int, i: int) -> frozenset[PacketId]:
    """Packets client ``i`` starts with (its ``n - 1`` incident links)."""
    _check_client(n, i)
    return frozenset(PacketId.of(i, j) for j in range(1, n + 1) if j != i)


def wanted_packets(n: int, i: int) -> frozenset[PacketId]:
    """Packets client ``i`` must learn: every link it is not an endpoint of."""
    _check_client(n, i)
    return frozenset(p for p in packet_universe(n) if i not in p)


def idx_set(packets: Iterable[Sequence[int]]) -> frozenset[int]:
    """Clients holding at least one packet of ``packets``."""
    clients: set[int] = set()
    for p in packets:
        clients.update(PacketId.of(*p))
    if not clients:
        raise ValueError("idx_set of an empty packet set is undefined")
    return frozenset(clients)


def min_clients_covering(r: int) -> int:
    """Smallest possible ``|idx_set|`` over all ``r``-subsets of packets.

    This is the unique ``k`` with ``C(k-1, 2) < r <= C(k, 2)``: ``k`` clients
    jointly hold at most ``C(k, 2)`` packets that nobody else holds.
    """
    if int(r) != r or r < 1:
        raise ValueError(f"r must be a positive integer, got {r}")
    k = 2
    while comb(k, 2) < r:
        k += 1
    return k


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        # go through repr so 0.1 means one tenth, not the binary double
        value = repr(value)
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidProblemError(f"cannot read cost {value!r} as a rational") from exc


@dataclass(frozen=True)
class ExchangeProblem:
    """``n`` clients with exact per-packet transmission costs."""

    n: int
    costs: tuple[Fraction, ...]

    def __init__(self, n: int, costs: Iterable):
        costs = tuple(_as_fraction(c) for c in costs)
        _check_n(n)
        if len(costs) != n:
            raise InvalidProblemError(f"expected {n} costs, got {len(costs)}")
        if any(c < 0 for c in costs):
            raise InvalidProblemError("transmission costs must be non-negative")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "costs", costs)

    @classmethod
    def uniform(cls, n: int, cost=1) -> "ExchangeProblem":
        return cls(n, [cost] * n)

    @property
    def num_packets(self) -> int:
        return self.n * (self.n - 1) // 2

    def cost_order(self) -> list[int]:
        """Clients sorted by ascending cost, ties by index (1-based)."""
        return sorted(range(1, self.n + 1), key=lambda i: (self.costs[i - 1], i))

    def to_json(self) -> dict:
        return {"num_clients": self.n, "costs": [str(c) for c in self.costs]}


def check_scheme(n: int, y: Sequence[int]) -> tuple[int, ...]:
    """Validate a transmission scheme (packets sent per client)."""
    if len(y) != n:
        raise InvalidProblemError(f"scheme has {len(y)} entries for {n} clients")
    out = []
    for v in y:
        if int(v) != v or v < 0:
            raise InvalidProblemError(f"scheme entries must be non-negative integers, got {v!r}")
        out.append(int(v))
    return tuple(out)


def total_cost(problem: ExchangeProblem, y: Sequence[int]) -> Fraction:
    """Total cost ``sum(costs[i] * y[i])`` of a scheme."""
    y = check_scheme(problem.n, y)
    return sum((c * v for c, v in zip(problem.costs, y)), Fraction(0))


def parse_problem(data: dict) -> ExchangeProblem:
    """Build a problem from ``{"num_clients": N, "costs": [...]}``."""
    if not isinstance(data, dict):
        raise InvalidProblemError("problem must be a JSON object")
    try:
        n = data["num_clients"]
        costs = data["costs"]
    except KeyError as exc:
        raise InvalidProblemError(f"problem is missing key {exc.args[0]!r}") from None
    if isinstance(n, bool) or not isinstance(n, int):
        raise InvalidProblemError(f"num_clients must be an integer, got {n!r}")
    if not isinstance(costs, list):
        raise InvalidProblemError("costs must be a list")
    for c in costs:
        if isinstance(c, bool) or not isinstance(c, (int, str, float)):
            raise InvalidProblemError(f"unsupported cost entry {c!r}")
    return ExchangeProblem(n, costs)


def load_problem(path) -> ExchangeProblem:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidProblemError(f"{path}: not valid JSON ({exc})") from exc
    return parse_problem(data)
