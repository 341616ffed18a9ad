"""Encoding matrices, receiving matrices, code construction, encode/decode.

An encoding matrix has one row per native packet (canonical packet order) and
one column per transmitted packet.  Columns are grouped by sender: client 1's
``y[0]`` columns first, then client 2's, and so on.  A column may be non-zero
only in the rows of packets its sender holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .feasibility import is_feasible
from .gf import Field, GF, NoUniqueSolutionError
from .matching import hall_violator, max_matching
from .model import (
    InvalidProblemError,
    PacketId,
    check_scheme,
    held_packets,
    packet_index,
    packet_universe,
)

__all__ = [
    "SparsityPattern",
    "EncodingMatrix",
    "ReceivingMatrix",
    "InfeasiblePatternError",
    "InfeasibleSchemeError",
    "CodeConstructionError",
    "UndecodableError",
    "build_pattern",
    "receiving_matrix",
    "can_decode",
    "coef_set",
    "lemma1_construct",
    "lemma1_code",
    "random_code",
    "construct_verified_code",
    "encode",
    "received_by",
    "decode",
]


class InfeasiblePatternError(ValueError):
    """A pattern has no system of distinct representatives."""

    def __init__(self, message: str, deficient_rows: frozenset[int]):
        super().__init__(message)
        self.deficient_rows = deficient_rows


class InfeasibleSchemeError(ValueError):
    pass


class CodeConstructionError(RuntimeError):
    pass


class UndecodableError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class SparsityPattern:
    """Where an encoding matrix for scheme ``y`` may hold non-zero entries."""

    n: int
    y: tuple[int, ...]
    allowed: np.ndarray
    column_owner: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.allowed.shape

    @property
    def packets(self) -> tuple[PacketId, ...]:
        return packet_universe(self.n)

    def columns_of(self, i: int) -> range:
        start = sum(self.y[: i - 1])
        return range(start, start + self.y[i - 1])

    def wanted_rows(self, i: int) -> list[int]:
        return [r for r, p in enumerate(self.packets) if i not in p]

    def held_rows(self, i: int) -> list[int]:
        return [r for r, p in enumerate(self.packets) if i in p]

    def received_columns(self, i: int) -> list[int]:
        return [c for c, owner in enumerate(self.column_owner) if owner != i]

    def receiving_pattern(self, i: int) -> np.ndarray:
        return self.allowed[np.ix_(self.wanted_rows(i), self.received_columns(i))]


def build_pattern(n: int, y: Sequence[int]) -> SparsityPattern:
    y = check_scheme(n, y)
    owners = tuple(i for i in range(1, n + 1) for _ in range(y[i - 1]))
    packets = packet_universe(n)
    owner_arr = np.array(owners, dtype=np.int64)
    a = np.array([p.a for p in packets])[:, None]
    b = np.array([p.b for p in packets])[:, None]
    allowed = (a == owner_arr[None, :]) | (b == owner_arr[None, :])
    allowed.setflags(write=False)
    return SparsityPattern(n, y, allowed, owners)


@dataclass(frozen=True, eq=False)
class EncodingMatrix:
    pattern: SparsityPattern
    values: np.ndarray
    field: Field

    def __post_init__(self):
        values = self.field.asarray(self.values)
        if values.shape != self.pattern.shape:
            raise ValueError(f"values shape {values.shape} != pattern shape {self.pattern.shape}")
        if np.any(values[~self.pattern.allowed]):
            raise ValueError("non-zero coefficient outside the sender's held packets")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.pattern.n

    @property
    def y(self) -> tuple[int, ...]:
        return self.pattern.y

    def __eq__(self, other) -> bool:
        if not isinstance(other, EncodingMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.y == other.y
            and np.array_equal(self.values, other.values)
        )

    def to_json(self) -> dict:
        columns = []
        for c, owner in enumerate(self.pattern.column_owner):
            rows = np.flatnonzero(self.values[:, c])
            columns.append(
                {"owner": owner, "entries": {str(int(r)): int(self.values[r, c]) for r in rows}}
            )
        return {
            "n": self.n,
            "y": list(self.y),
            "field_m": self.field.m,
            "field_poly": self.field.poly,
            "columns": columns,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "EncodingMatrix":
        field = Field(data["field_m"], data["field_poly"]) if "field_poly" in data else GF(data["field_m"])
        pattern = build_pattern(data["n"], data["y"])
        columns = data["columns"]
        if len(columns) != pattern.shape[1]:
            raise ValueError(f"expected {pattern.shape[1]} columns, got {len(columns)}")
        values = np.zeros(pattern.shape, dtype=np.int64)
        for c, col in enumerate(columns):
            if col["owner"] != pattern.column_owner[c]:
                raise ValueError(f"column {c} owner {col['owner']} != {pattern.column_owner[c]}")
            for r, v in col["entries"].items():
                values[int(r), c] = v
        return cls(pattern, values, field)


@dataclass(frozen=True, eq=False)
class ReceivingMatrix:
    """Wanted-packet rows of an encoding matrix restricted to received columns."""

    client: int
    values: np.ndarray
    row_packets: tuple[PacketId, ...]
    col_sources: tuple[int, ...]
    field: Field

    @property
    def required_rank(self) -> int:
        return len(self.row_packets)

    @cached_property
    def rank(self) -> int:
        return self.field.rank(self.values)


def receiving_matrix(code: EncodingMatrix, i: int) -> ReceivingMatrix:
    pattern = code.pattern
    if not 1 <= i <= code.n:
        raise InvalidProblemError(f"client index {i} outside [1, {code.n}]")
    rows = pattern.wanted_rows(i)
    cols = pattern.received_columns(i)
    return ReceivingMatrix(
        client=i,
        values=code.values[np.ix_(rows, cols)],
        row_packets=tuple(pattern.packets[r] for r in rows),
        col_sources=tuple(cols),
        field=code.field,
    )


def can_decode(rm: ReceivingMatrix) -> bool:
    return rm.rank == rm.required_rank


def coef_set(allowed_row) -> frozenset[int]:
    """Columns in which a pattern row has coefficient elements."""
    return frozenset(int(c) for c in np.flatnonzero(allowed_row))


def lemma1_construct(allowed) -> np.ndarray:
    """0/1 assignment of full row rank supported on ``allowed``.

    One allowed column per row, all distinct, is chosen by maximum matching
    and set to 1; every other entry is 0.  The matched columns form a
    permutation submatrix, so the rank is the row count over every field.
    """
    allowed = np.asarray(allowed, dtype=bool)
    match = max_matching(allowed)
    if any(c == -1 for c in match):
        rows = hall_violator(allowed, match)
        cols = set().union(*(coef_set(allowed[r]) for r in rows))
        raise InfeasiblePatternError(
            f"rows {sorted(rows)} share only {len(cols)} allowed columns", rows
        )
    out = np.zeros(allowed.shape, dtype=np.int64)
    out[np.arange(len(match)), match] = 1
    return out


def lemma1_code(n: int, y: Sequence[int], client: int, field: Field | None = None) -> EncodingMatrix:
    """Encoding matrix decodable by ``client``, built from ``lemma1_construct``.

    Only the receiving-matrix block of ``client`` is populated.
    """
    field = field or GF(8)
    pattern = build_pattern(n, y)
    rows = pattern.wanted_rows(client)
    cols = pattern.received_columns(client)
    values = np.zeros(pattern.shape, dtype=np.int64)
    values[np.ix_(rows, cols)] = lemma1_construct(pattern.receiving_pattern(client))
    return EncodingMatrix(pattern, values, field)


def draw_values(pattern: SparsityPattern, field: Field, rng: np.random.Generator) -> np.ndarray:
    """Uniform field elements (zero included) at every allowed position, row-major."""
    values = np.zeros(pattern.shape, dtype=np.int64)
    values[pattern.allowed] = field.random(int(pattern.allowed.sum()), rng)
    return values


def random_code(n: int, y: Sequence[int], field: Field, seed) -> EncodingMatrix:
    """Each sender picks its coefficients independently and uniformly at random."""
    pattern = build_pattern(n, y)
    return EncodingMatrix(pattern, draw_values(pattern, field, np.random.default_rng(seed)), field)


def construct_verified_code(
    n: int, y: Sequence[int], field: Field, seed: int, max_retries: int = 20
) -> tuple[EncodingMatrix, int]:
    """First random code decodable by every client, and the attempts it took.

    Attempt ``k`` (0-based) draws from the seed ``(seed, k)``.
    """
    verdict = is_feasible(n, y)
    if not verdict:
        raise InfeasibleSchemeError(verdict.describe())
    for attempt in range(max_retries):
        code = random_code(n, y, field, [seed, attempt])
        if all(can_decode(receiving_matrix(code, i)) for i in range(1, n + 1)):
            return code, attempt + 1
    raise CodeConstructionError(f"no universally decodable code in {max_retries} attempts over {field}")


def encode(code: EncodingMatrix, natives) -> np.ndarray:
    """Transmitted symbols: column ``c`` carries ``sum_r E[r, c] * natives[r]``.

    ``natives`` has one entry per packet, or one row of symbols per packet.
    """
    natives = code.field.asarray(natives)
    if natives.shape[0] != code.values.shape[0]:
        raise ValueError(f"expected {code.values.shape[0]} native packets, got {natives.shape[0]}")
    return code.field.matmul(code.values.T, natives)


def received_by(code: EncodingMatrix, i: int, transmitted) -> np.ndarray:
    """Symbols client ``i`` hears: every transmission except its own."""
    return np.asarray(transmitted)[code.pattern.received_columns(i)]


def decode(code: EncodingMatrix, i: int, received, known) -> dict[PacketId, object]:
    """Recover client ``i``'s wanted packets.

    ``received`` are the transmissions of the other clients in column order;
    ``known`` maps each held packet to its value (or lists them in canonical
    order).  Known contributions are cancelled first, then the remaining
    system ``R^T u = b`` is solved for the wanted packets ``u``.
    """
    field = code.field
    pattern = code.pattern
    n = code.n
    held = sorted(held_packets(n, i))
    if isinstance(known, Mapping):
        known_vals = field.asarray([known[PacketId.of(*p)] for p in held])
    else:
        known_vals = field.asarray(known)
        if known_vals.shape[0] != len(held):
            raise ValueError(f"client {i} holds {len(held)} packets, got {known_vals.shape[0]} values")
    received = field.asarray(received)
    cols = pattern.received_columns(i)
    if received.shape[0] != len(cols):
        raise ValueError(f"client {i} receives {len(cols)} transmissions, got {received.shape[0]}")

    held_rows = [packet_index(n, p) for p in held]
    known_part = field.matmul(code.values[np.ix_(held_rows, cols)].T, known_vals)
    rhs = received ^ known_part

    rm = receiving_matrix(code, i)
    try:
        unknown = field.solve(rm.values.T, rhs)
    except NoUniqueSolutionError as exc:
        raise UndecodableError(f"client {i} cannot decode: {exc}") from exc
    out = {}
    for p, v in zip(rm.row_packets, unknown):
        out[p] = int(v) if np.ndim(v) == 0 else v
    return out
