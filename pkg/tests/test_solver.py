import math
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from csiexchange.feasibility import is_feasible, is_feasible_exhaustive, structural_certificate
from csiexchange.model import ExchangeProblem, InvalidProblemError, ResourceLimitError, total_cost
from csiexchange.solver import (
    brute_force_solve,
    entry_cap,
    lower_bound,
    solve_min_cost,
    solve_min_transmissions,
)


def random_problems(seed, n, count, high=9):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield ExchangeProblem(n, [int(c) for c in rng.integers(1, high + 1, size=n)])


def test_four_client_example():
    p = ExchangeProblem(4, [1, 2, 3, 4])
    best = solve_min_cost(p)
    assert best.cost == 9
    assert best.scheme == (2, 2, 1, 0)
    assert best.total_transmissions == 5
    fewest = solve_min_transmissions(4)
    assert fewest.total_transmissions == 4
    assert total_cost(p, fewest.scheme) == 10


def test_three_clients():
    best = solve_min_cost(ExchangeProblem(3, [1, 1, 1]))
    assert best.cost == 2 and best.scheme == (1, 1, 0)
    assert solve_min_transmissions(3).total_transmissions == 2
    assert solve_min_cost(ExchangeProblem(3, [5, 5, 5])).cost == 10


def test_expensive_cheap_client_ordering():
    # cheapest client is the last one; the scheme is reported in input order
    best = solve_min_cost(ExchangeProblem(4, [4, 3, 2, 1]))
    assert best.scheme == (0, 1, 2, 2)
    assert best.sort_permutation == (4, 3, 2, 1)
    assert best.sorted_scheme == (2, 2, 1, 0)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_min_transmissions_match_oracle(n):
    fewest = solve_min_transmissions(n)
    oracle = brute_force_solve(ExchangeProblem.uniform(n), comb(n - 1, 2))
    assert fewest.total_transmissions == oracle.total_transmissions
    assert fewest.scheme == oracle.scheme


def test_min_transmissions_n5_value():
    # brute force over y_i <= C(4,2) = 6
    assert brute_force_solve(ExchangeProblem.uniform(5), 6).total_transmissions == 8
    assert solve_min_transmissions(5).total_transmissions == 8


def test_brute_force_examples():
    assert brute_force_solve(ExchangeProblem(4, [1, 2, 3, 4]), 3).cost == 9
    r = brute_force_solve(ExchangeProblem(3, [1, 2, 3]), 1)
    assert r.scheme == (1, 1, 0) and r.cost == 3
    skew = ExchangeProblem(4, [1, 100, 100, 100])
    # clients 2-4 form a group of 3 needing 3 packets, and client 1 must send one
    assert solve_min_cost(skew).cost == brute_force_solve(skew, 6).cost == 301


def test_brute_force_limits():
    with pytest.raises(ResourceLimitError):
        brute_force_solve(ExchangeProblem.uniform(7), comb(6, 2))
    with pytest.raises(ValueError):
        brute_force_solve(ExchangeProblem.uniform(5), 1)


def test_small_n_rejected():
    with pytest.raises(InvalidProblemError):
        solve_min_transmissions(2)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_solver_matches_oracle_scheme_exactly(n):
    for p in random_problems(n, n, 60):
        got = solve_min_cost(p)
        want = brute_force_solve(p, comb(n - 1, 2))
        assert (got.cost, got.scheme) == (want.cost, want.scheme)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_entry_cap_is_lossless(n):
    """Oracle restricted to y_i <= n-2 finds the same optimum as the full cap."""
    for p in random_problems(50 + n, n, 80, high=20):
        assert brute_force_solve(p, entry_cap(n)).scheme == brute_force_solve(p, comb(n - 1, 2)).scheme


@pytest.mark.parametrize("n", range(3, 12))
def test_lowering_an_entry_to_cap_keeps_feasibility(n):
    rng = np.random.default_rng(n)
    for _ in range(200):
        y = rng.integers(0, comb(n - 1, 2) + 3, size=n)
        if is_feasible(n, y):
            i = rng.integers(n)
            y[i] = min(y[i], entry_cap(n))
            assert is_feasible(n, y)


def test_outputs_are_feasible_and_monotone():
    rng = np.random.default_rng(7)
    for _ in range(150):
        n = int(rng.integers(3, 10))
        p = ExchangeProblem(n, [int(c) for c in rng.integers(0, 6, size=n)])
        r = solve_min_cost(p)
        assert is_feasible(n, r.scheme)
        assert all(structural_certificate(n, r.scheme))
        assert r.cost == total_cost(p, r.scheme)
        assert all(a >= b for a, b in zip(r.sorted_scheme, r.sorted_scheme[1:]))


def test_scale_invariance():
    rng = np.random.default_rng(8)
    for _ in range(60):
        n = int(rng.integers(3, 8))
        costs = [int(c) for c in rng.integers(1, 9, size=n)]
        base = solve_min_cost(ExchangeProblem(n, costs))
        for factor in (Fraction(1, 3), 7, Fraction(22, 7)):
            scaled = solve_min_cost(ExchangeProblem(n, [c * factor for c in costs]))
            assert scaled.scheme == base.scheme
            assert scaled.cost == base.cost * factor


def test_min_cost_beats_min_transmission_scheme():
    for n in range(3, 8):
        fewest = solve_min_transmissions(n).scheme
        for p in random_problems(90 + n, n, 30):
            assert solve_min_cost(p).cost <= total_cost(p, fewest)


def test_uniform_cost_is_proportional_to_transmissions():
    for n in range(3, 10):
        c = Fraction(5, 2)
        r = solve_min_cost(ExchangeProblem.uniform(n, c))
        assert r.cost == c * solve_min_transmissions(n).total_transmissions


def test_rational_and_zero_costs():
    p = ExchangeProblem(4, ["0.5", "1/3", "0", "2"])
    r = solve_min_cost(p)
    assert r.cost == brute_force_solve(p, 3).cost
    assert r.scheme == brute_force_solve(p, 3).scheme
    free = solve_min_cost(ExchangeProblem(4, [0, 0, 0, 0]))
    assert free.cost == 0 and free.total_transmissions == 4


def test_larger_instances_are_fast_and_feasible():
    rng = np.random.default_rng(12)
    for n in (10, 12, 15):
        p = ExchangeProblem(n, [int(c) for c in rng.integers(1, 9, size=n)])
        r = solve_min_cost(p)
        assert is_feasible(n, r.scheme)
    assert solve_min_transmissions(20).total_transmissions == 180


def test_lower_bound_examples():
    p = ExchangeProblem(4, [1, 2, 3, 4])
    assert lower_bound(p, []) <= 9
    assert lower_bound(p, [2, 2, 1, 0]) == 9
    assert lower_bound(p, [2, 2, 1, 1]) == 13
    assert lower_bound(p, [1, 1, 1, 0]) == math.inf
    # after y = (0, ...) nothing else may exceed 0
    assert lower_bound(p, [0]) == math.inf
    with pytest.raises(ValueError):
        lower_bound(p, [0, 1])


def test_lower_bound_is_admissible():
    """Every non-increasing prefix bounds the best completion from below."""
    rng = np.random.default_rng(21)
    for _ in range(40):
        n = int(rng.integers(3, 6))
        p = ExchangeProblem(n, [int(c) for c in rng.integers(1, 9, size=n)])
        costs = sorted(p.costs)
        feasible = brute_force_solve(p, n - 2)  # warm cache
        grid = [tuple(sorted(y, reverse=True)) for y in _all_feasible(n)]
        for y in set(grid):
            completion_cost = sum(c * v for c, v in zip(costs, y))
            for cut in range(n + 1):
                assert lower_bound(p, y[:cut]) <= completion_cost
        assert feasible.cost >= lower_bound(p, [])


def _all_feasible(n):
    from itertools import product

    return [y for y in product(range(n - 1), repeat=n) if is_feasible_exhaustive(n, y)]
