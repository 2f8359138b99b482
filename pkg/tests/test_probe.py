import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_bilateral, naive_weights, periodic_specs, prod
from jshift import (
    BlockAlternating,
    Constant,
    DomainError,
    FiniteVector,
    ProbeQuery,
    TailConstantVector,
    TwoSidedEventuallyPeriodic,
    build_witness,
    min_preimage_norm,
    min_window_error,
    probe_sweep,
)
from jshift.witness import _sqrt_upper

HALF, QUARTER = Fraction(1, 2), Fraction(1, 4)
TWO = Constant(2)
BLOCK = BlockAlternating(HALF, 2)
ONES = TailConstantVector.constant(1)
ZERO_VEC = FiniteVector.zero()
STEP = TwoSidedEventuallyPeriodic((), (1,), (2,))
e = FiniteVector.basis


def test_min_window_error_examples():
    assert min_window_error(TWO, ZERO_VEC, ONES, 3, QUARTER, (1, 4)).exact == 0
    assert min_window_error(TWO, ZERO_VEC, ONES, 1, QUARTER, (1, 4)).exact == HALF
    assert min_window_error(BLOCK, ZERO_VEC, e(2, scale=-1) + e(3), 2, 0, (1, 4)).exact == 1


def test_min_window_error_rejects_bad_input():
    with pytest.raises(DomainError):
        min_window_error(TWO, ZERO_VEC, ONES, 1, -1, (1, 4))
    with pytest.raises(DomainError):
        min_window_error(TWO, ZERO_VEC, ONES, 1, 0, (0, 4))


def test_complex_moduli_reported_inexact():
    y = FiniteVector("unilateral", [(1, (1, 1))])
    v = min_window_error(TWO, ZERO_VEC, y, 1, QUARTER, (1, 2))
    assert not v.is_exact and abs(v.approx - (2**0.5 - 0.5)) < 1e-12
    y = FiniteVector("unilateral", [(1, (3, 4))])
    assert min_window_error(TWO, ZERO_VEC, y, 1, QUARTER, (1, 2)).exact == Fraction(9, 2)


def test_min_preimage_norm_examples():
    assert min_preimage_norm(TWO, ONES, 5, (1, 8), 0).exact == Fraction(1, 32)
    assert min_preimage_norm(TWO, ZERO_VEC, 5, (1, 8), 0).exact == 0
    ones = TailConstantVector.constant(1, "bilateral")
    for n in range(1, 10):
        assert min_preimage_norm(STEP, ones, n, (-8, 8), Fraction(1, 100)).exact == Fraction(99, 100)


def test_min_preimage_norm_step_beyond_window_depth():
    # for n >= 10 every window product touches the right tail, so the bound drops
    ones = TailConstantVector.constant(1, "bilateral")
    for n in range(10, 17):
        got = min_preimage_norm(STEP, ones, n, (-8, 8), Fraction(1, 100)).exact
        table = naive_bilateral(STEP, -8, 8 + n)
        worst = max(Fraction(99, 100) / prod(table[i] for i in range(k, k + n)) for k in range(-8, 9))
        assert got == worst == Fraction(99, 100) / 2 ** (n - 9)


def test_sweep_examples():
    q = ProbeQuery(TWO, ZERO_VEC, ONES, QUARTER, (1, 4), (1, 6))
    assert [r.value.exact for r in probe_sweep(q).rows] == [HALF, 0, 0, 0, 0, 0]
    q = ProbeQuery(TWO, ZERO_VEC, ONES, QUARTER, (1, 4), (3, 2))
    assert probe_sweep(q).rows == ()


def test_sweep_block_matches_closed_form():
    q = ProbeQuery(BLOCK, ZERO_VEC, ONES, QUARTER, (1, 4), (1, 10))
    rows = probe_sweep(q).rows
    ws = naive_weights(BLOCK, 20)
    for r in rows:
        want = max(max(Fraction(0), 1 - prod(ws[k - 1 : k - 1 + r.n]) * QUARTER) for k in range(1, 5))
        assert r.value.exact == want
    assert any(r.value.exact > 0 for r in rows[3:])


def _grid_min(ws, x, y, n, delta, window, h):
    """Joint grid search over the coordinates z_{k+n}, k in window; floats."""
    lo, hi = window
    steps = int(2 * delta / h)
    axes = []
    for k in range(lo, hi + 1):
        c = float(x.get(k + n, 0))
        axes.append([c - float(delta) + i * float(h) for i in range(steps + 1)])
    P = [float(prod(ws[k - 1 : k - 1 + n])) for k in range(lo, hi + 1)]
    Y = [float(y.get(k, 0)) for k in range(lo, hi + 1)]
    best = float("inf")
    for z in itertools.product(*axes):
        best = min(best, max(abs(Y[i] - P[i] * z[i]) for i in range(len(z))))
    return best, max(P)


@pytest.mark.parametrize("n", range(1, 11))
def test_block_sweep_against_grid_search(n):
    h = Fraction(1, 64)
    ws = naive_weights(BLOCK, 40)
    x = {2 + n: Fraction(1, 8)}
    y = {1: 1, 2: Fraction(-1, 2), 3: 1}
    xv = FiniteVector("unilateral", list(x.items()))
    yv = FiniteVector("unilateral", list(y.items()))
    got = min_window_error(BLOCK, xv, yv, n, QUARTER, (1, 3)).exact
    grid, norm = _grid_min(ws, x, y, n, QUARTER, (1, 3), h)
    assert float(got) - 1e-12 <= grid <= float(got) + norm * float(h) + 1e-12


@settings(max_examples=50, deadline=None)
@given(
    periodic_specs(),
    st.integers(0, 3),
    st.integers(1, 4),
    st.fractions(min_value=-2, max_value=2, max_denominator=4),
    st.integers(1, 12),
)
def test_probe_witness_consistency(w, x_end, n_extra, c, width):
    x = e(x_end, scale=Fraction(1, 3)) if x_end else ZERO_VEC
    y = TailConstantVector("unilateral", [(1, Fraction(-1, 2))], 2, c)
    n = x_end + n_extra
    z = build_witness(w, x, y, n)
    err_sq, exact = z.error_sq()
    assert exact
    delta = _sqrt_upper(err_sq)
    for lo in (1, 3):
        assert min_window_error(w, x, y, n, delta, (lo, lo + width)).exact == 0


@settings(max_examples=50, deadline=None)
@given(periodic_specs(), st.integers(1, 6), st.integers(1, 8), st.sampled_from([0, QUARTER, HALF, 1]))
def test_monotonicity(w, n, width, delta):
    y = TailConstantVector("unilateral", [(2, Fraction(-3, 2))], 3, 1)
    a = min_window_error(w, ZERO_VEC, y, n, delta, (1, width)).exact
    assert min_window_error(w, ZERO_VEC, y, n, delta + QUARTER, (1, width)).exact <= a
    assert min_window_error(w, ZERO_VEC, y, n, delta, (1, width + 3)).exact >= a


def test_csv_and_json_output():
    q = ProbeQuery(TWO, ZERO_VEC, ONES, QUARTER, (1, 4), (1, 3))
    r = probe_sweep(q)
    assert r.to_csv().splitlines() == ["n,min_error,argmin_k,exact", "1,1/2,1,true", "2,0/1,1,true", "3,0/1,1,true"]
    doc = json.loads(r.to_json())
    assert doc["kind"] == "lower_bound"
    assert [row["min_error"] for row in doc["rows"]] == ["1/2", "0/1", "0/1"]
    assert probe_sweep(q, threads=8).to_json() == r.to_json()
