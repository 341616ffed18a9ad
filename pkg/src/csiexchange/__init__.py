"""Minimum-cost network-coded exchange of third-party channel information."""

from .model import (
    ExchangeProblem,
    InvalidProblemError,
    PacketId,
    ResourceLimitError,
    held_packets,
    idx_set,
    min_clients_covering,
    packet_index,
    packet_universe,
    total_cost,
    wanted_packets,
)
from .gf import GF, Field
from .feasibility import (
    FeasibilityVerdict,
    is_feasible,
    is_feasible_exhaustive,
    structural_certificate,
)
from .solver import (
    OptimalScheme,
    brute_force_solve,
    solve_min_cost,
    solve_min_transmissions,
)
from .coding import (
    CodeConstructionError,
    EncodingMatrix,
    InfeasiblePatternError,
    InfeasibleSchemeError,
    UndecodableError,
    build_pattern,
    can_decode,
    construct_verified_code,
    decode,
    encode,
    lemma1_code,
    lemma1_construct,
    random_code,
    received_by,
    receiving_matrix,
)
from .simulation import TrialReport, run_trials, table1_report, theorem3_bound

__version__ = "0.1.0"
