from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest

from csiexchange.coding import InfeasibleSchemeError, can_decode, random_code, receiving_matrix
from csiexchange.gf import GF
from csiexchange.simulation import (
    TABLE1_CLIENTS,
    TABLE1_FIELDS,
    TrialReport,
    round_half_up,
    run_trials,
    table1_report,
    theorem3_bound,
    union_bound,
)
from csiexchange.solver import solve_min_transmissions

# published bound table, q -> values for N = 4, 6, 8, 10, 12
TABLE1 = {
    256: ["0.9883", "0.9609", "0.9180", "0.8594", "0.7852"],
    512: ["0.9941", "0.9805", "0.9590", "0.9297", "0.8926"],
}


def test_table1_exact():
    report = table1_report()
    assert list(report) == list(TABLE1_FIELDS)
    for q, row in TABLE1.items():
        assert list(report[q]) == list(TABLE1_CLIENTS)
        assert [str(report[q][n]) for n in TABLE1_CLIENTS] == row


@pytest.mark.parametrize(
    "n, q, expected",
    [(4, 256, "0.9883"), (6, 512, "0.9805"), (12, 256, "0.7852"),
     (8, 256, "0.9180"), (10, 512, "0.9297"), (4, 512, "0.9941")],
)
def test_bound_examples(n, q, expected):
    assert round_half_up(theorem3_bound(n, q)) == Decimal(expected)


def test_bound_exact_rational():
    assert theorem3_bound(6, 256) == Fraction(246, 256)
    assert theorem3_bound(6, 16) == Fraction(3, 8)
    assert theorem3_bound(3, 2) == Fraction(1, 2)


def test_bound_monotone_and_unclamped():
    for q in (2, 16, 256, 512, 1 << 16):
        vals = [theorem3_bound(n, q) for n in range(3, 30)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
    for n in range(3, 20):
        vals = [theorem3_bound(n, 1 << m) for m in range(1, 17)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert theorem3_bound(8, 4) < 0


def test_bound_rejects_bad_arguments():
    with pytest.raises(ValueError):
        theorem3_bound(2, 256)
    with pytest.raises(ValueError):
        theorem3_bound(5, 1)


def test_round_half_up():
    assert round_half_up(Fraction(246, 256)) == Decimal("0.9609")  # 0.9609375
    assert round_half_up(Fraction(1, 20000)) == Decimal("0.0001")  # exact half
    assert round_half_up(Fraction(3, 20000)) == Decimal("0.0002")
    assert round_half_up(Fraction(1)) == Decimal("1.0000")
    assert round_half_up(Fraction(-1, 3)) == Decimal("-0.3333")


def test_union_bound_is_weaker():
    for n in range(3, 10):
        assert union_bound(n, 256) <= theorem3_bound(n, 256)
    assert union_bound(6, 256) == 1 - Fraction(120, 512)


def test_single_trial_deterministic():
    y = solve_min_transmissions(6).scheme
    a = run_trials(6, y, GF(8), trials=1, seed=5)
    b = run_trials(6, y, GF(8), trials=1, seed=5)
    assert a == b


def test_trials_match_random_code():
    # trial t is exactly random_code(seed=(seed, t))
    n, y, field, seed = 5, (2, 2, 1, 1, 2), GF(2), 77
    report = run_trials(n, y, field, trials=40, seed=seed)
    per = np.zeros(n, dtype=int)
    joint = 0
    for t in range(40):
        code = random_code(n, y, field, [seed, t])
        ok = [can_decode(receiving_matrix(code, i)) for i in range(1, n + 1)]
        per += ok
        joint += all(ok)
    assert report.per_client_successes == tuple(per)
    assert report.all_clients_successes == joint


def test_batch_size_does_not_matter():
    y = solve_min_transmissions(5).scheme
    a = run_trials(5, y, GF(3), trials=300, seed=1, batch=7)
    b = run_trials(5, y, GF(3), trials=300, seed=1, batch=2048)
    assert a == b


def test_rejects_infeasible_and_bad_trials():
    with pytest.raises(InfeasibleSchemeError):
        run_trials(4, (1, 1, 1, 0), GF(8), trials=10, seed=0)
    with pytest.raises(ValueError):
        run_trials(4, (1, 1, 1, 1), GF(8), trials=0, seed=0)


def test_large_field_nearly_always_decodes():
    report = run_trials(6, solve_min_transmissions(6).scheme, GF(16), trials=2000, seed=3)
    assert min(report.per_client_success) >= 0.999


@pytest.mark.parametrize("n, m", [(4, 4), (5, 8), (7, 4)])
def test_meets_bound(n, m):
    report = run_trials(n, solve_min_transmissions(n).scheme, GF(m), trials=3000, seed=n)
    assert report.meets_bound()


def test_report_invariants():
    report = run_trials(6, (2,) * 6, GF(1), trials=500, seed=8)
    rates = report.per_client_success
    assert all(0 <= r <= 1 for r in rates)
    assert report.all_clients_success <= min(rates)
    assert report.bound == theorem3_bound(6, 2)
    # bound is negative here; sigma uses it clamped to [0, 1]
    assert report.sigma() == 0.0


def test_sigma_and_threshold():
    report = TrialReport(6, 256, 10_000, (2,) * 6, (9700,) * 6, 9000, theorem3_bound(6, 256), 0)
    assert report.sigma() == pytest.approx((0.9609375 * 0.0390625 / 10_000) ** 0.5)
    assert report.threshold() == pytest.approx(0.9609375 - 3 * report.sigma())
    assert 0.9550 < report.threshold() < 0.9552
    assert report.meets_bound()
    low = TrialReport(6, 256, 10_000, (2,) * 6, (9700,) * 5 + (9500,), 9000, theorem3_bound(6, 256), 0)
    assert not low.meets_bound()


def test_csv_rows():
    report = run_trials(4, (1, 1, 1, 1), GF(8), trials=10, seed=0)
    rows = report.csv_rows()
    assert rows[0] == ["client", "successes", "trials", "rate", "bound"]
    assert len(rows) == 5
    assert [r[0] for r in rows[1:]] == [1, 2, 3, 4]
    assert all(r[2] == 10 for r in rows[1:])
