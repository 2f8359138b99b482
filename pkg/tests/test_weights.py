import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_inf, naive_bilateral, naive_weights, periodic_specs, prod, two_sided_specs
from jshift import (
    BlockAlternating,
    Constant,
    DomainError,
    EventuallyPeriodic,
    Exactness,
    SpecFormatError,
    Table,
    TwoSidedEventuallyPeriodic,
    inf_window_product,
    operator_norm,
    prefix_product,
    weight_at,
    window_product,
)
from jshift.weights import LOG2_RELATIVE_ERROR, expand, from_dict, to_dict

HALF = Fraction(1, 2)
BLOCK = BlockAlternating(HALF, 2)


def test_block_pattern_matches_listed_sequence(listed_block_sequence):
    assert expand(BLOCK, 19) == listed_block_sequence
    assert naive_weights(BLOCK, 19) == listed_block_sequence


def test_block_pattern_long_range_against_expander():
    assert expand(BLOCK, 2000) == naive_weights(BLOCK, 2000)


@pytest.mark.parametrize(
    "w, n, expected",
    [
        (BLOCK, 1, HALF),
        (Constant(2), 7, 2),
        (EventuallyPeriodic((3,), (HALF, 4)), 4, 4),
    ],
)
def test_weight_at_examples(w, n, expected):
    assert weight_at(w, n) == expected


def test_weight_at_domain():
    with pytest.raises(DomainError):
        weight_at(Constant(2), 0)
    assert weight_at(Constant(2, "bilateral"), -5) == 2


def test_window_product_examples():
    assert window_product(Constant(2), 11, 5).exact == 32
    assert window_product(BLOCK, 0, 3).exact == prod(naive_weights(BLOCK, 3)) == 2
    assert window_product(BLOCK, 0, 1).exact == HALF
    with pytest.raises(DomainError):
        window_product(BLOCK, 0, 0)
    with pytest.raises(DomainError):
        window_product(BLOCK, -1, 2)


def test_inf_window_product_examples():
    r = inf_window_product(Constant(2), 3)
    assert (r.exact, r.exactness) == (8, Exactness.EXACT)
    r = inf_window_product(BLOCK, 4, 20)
    assert r.exact <= Fraction(1, 16)
    assert r.exactness is Exactness.UPPER_BOUND_ONLY
    # the minimum sits where a run of four 1/2's begins (indices 16..19)
    assert r.achieved_at == 15
    ep = EventuallyPeriodic((), (2, HALF))
    r = inf_window_product(ep, 2)
    assert r.exact == 1 == brute_inf(ep, 2, 9)
    assert r.exactness is Exactness.EXACT
    with pytest.raises(DomainError):
        inf_window_product(BLOCK, 2, -1)


def test_prefix_product_examples():
    assert prefix_product(Constant(2), 10).exact == 1024
    assert prefix_product(BLOCK, 3).exact == 2
    assert prefix_product(BLOCK, 5).exact == HALF
    with pytest.raises(DomainError):
        prefix_product(Constant(2, "bilateral"), 3)


def test_operator_norm_examples():
    assert operator_norm(Constant(2)) == 2
    assert operator_norm(BLOCK) == 2
    assert operator_norm(EventuallyPeriodic((3,), (HALF, 4))) == 4


def test_nonpositive_weights_rejected():
    with pytest.raises(DomainError):
        Constant(0)
    with pytest.raises(DomainError):
        EventuallyPeriodic((1,), (Fraction(-1),))
    with pytest.raises(DomainError):
        EventuallyPeriodic((1,), ())


@settings(max_examples=60, deadline=None)
@given(periodic_specs())
def test_oracle_equivalence_periodic(w):
    j_max = 10 * (len(w.prefix) + len(w.period))
    for n in range(1, 25):
        assert inf_window_product(w, n).exact == brute_inf(w, n, j_max)


@settings(max_examples=40, deadline=None)
@given(periodic_specs())
def test_supermultiplicativity(w):
    C = [None] + [inf_window_product(w, n).exact for n in range(1, 33)]
    for n in range(1, 17):
        for m in range(1, 17):
            assert C[n + m] >= C[n] * C[m]


@settings(max_examples=40, deadline=None)
@given(periodic_specs(), st.integers(0, 40), st.integers(1, 30))
def test_window_product_against_expander(w, j, n):
    assert window_product(w, j, n).exact == prod(naive_weights(w, j + n)[j:])


@settings(max_examples=40, deadline=None)
@given(periodic_specs(), st.integers(1, 30))
def test_window_prefix_consistency(w, n):
    assert window_product(w, 0, n) == prefix_product(w, n)


@settings(max_examples=40, deadline=None)
@given(periodic_specs(), st.integers(1, 60))
def test_positivity(w, n):
    assert weight_at(w, n) > 0
    assert weight_at(BLOCK, n) > 0


@settings(max_examples=40, deadline=None)
@given(two_sided_specs(), st.integers(-30, 30), st.integers(1, 20))
def test_two_sided_products_against_expander(w, j, n):
    table = naive_bilateral(w, j + 1, j + n)
    assert window_product(w, j, n).exact == prod(table.values())


@settings(max_examples=40, deadline=None)
@given(two_sided_specs(), st.integers(1, 12))
def test_two_sided_inf_against_brute_force(w, n):
    span = 10 * (len(w.middle) + len(w.left_period) + len(w.right_period)) + n
    table = naive_bilateral(w, w.middle_start - span, w.middle_start + span + n)
    brute = min(
        prod(table[i] for i in range(j + 1, j + n + 1))
        for j in range(w.middle_start - span - 1, w.middle_start + span)
    )
    assert inf_window_product(w, n).exact == brute


@settings(max_examples=30, deadline=None)
@given(periodic_specs(), st.lists(st.sampled_from([HALF, Fraction(5)]), min_size=1, max_size=5), st.integers(1, 4))
def test_table_over_periodic_is_exact(tail, entries, start):
    w = Table(tuple(entries), tail, start=start)
    assert w.is_exact_form
    assert expand(w, 40) == naive_weights(w, 40)
    n = 3
    j_max = 10 * (start + len(entries) + len(tail.prefix) + len(tail.period))
    assert inf_window_product(w, n).exact == brute_inf(w, n, j_max)


def test_table_over_block_is_scanned():
    w = Table((Fraction(3),), BLOCK)
    assert not w.is_exact_form
    r = inf_window_product(w, 2, 50)
    assert r.exactness is Exactness.UPPER_BOUND_ONLY
    assert r.exact == brute_inf(w, 2, 50)


def test_bilateral_table_normalises():
    base = TwoSidedEventuallyPeriodic((), (1,), (2,))
    w = Table((5, 7), base, start=-3)
    want = naive_bilateral(w, -10, 10)
    assert {n: weight_at(w, n) for n in range(-10, 11)} == want
    assert w.is_exact_form


def test_log_consistency():
    rng = __import__("random").Random(7)
    for _ in range(1000):
        num, den = rng.randint(1, 10**30), rng.randint(1, 10**30)
        pv = window_product(Constant(Fraction(num, den)), 0, rng.randint(1, 20))
        exact_log = math.log2(pv.exact.numerator) - math.log2(pv.exact.denominator)
        # independent route through the integer bit lengths
        p, q = pv.exact.numerator, pv.exact.denominator
        via_bits = (p.bit_length() - q.bit_length()) + math.log2(p / 2 ** p.bit_length()) - math.log2(q / 2 ** q.bit_length())
        assert abs(pv.log2_approx - exact_log) <= LOG2_RELATIVE_ERROR * max(1.0, abs(exact_log))
        assert abs(pv.log2_approx - via_bits) <= LOG2_RELATIVE_ERROR * max(1.0, abs(exact_log))


@pytest.mark.parametrize(
    "w",
    [
        Constant(2),
        Constant(HALF, "bilateral"),
        EventuallyPeriodic((3,), (HALF, 4)),
        TwoSidedEventuallyPeriodic((Fraction(5),), (1,), (2, 3), middle_start=-2),
        BLOCK,
        Table((Fraction(7, 3),), BLOCK, start=2),
    ],
)
def test_json_round_trip(w):
    text = json.dumps(to_dict(w))
    assert from_dict(json.loads(text)) == w
    assert all("/" in v for v in _rationals(to_dict(w)["parameters"]))


def _rationals(params):
    for v in params.values():
        if isinstance(v, str):
            yield v
        elif isinstance(v, list):
            yield from v
        elif isinstance(v, dict):
            yield from _rationals(v["parameters"])


@pytest.mark.parametrize(
    "doc",
    [
        {"form": "constant", "parameters": {}},
        {"form": "nope"},
        {"form": "constant", "parameters": {"c": 0.5}},
        {"form": "constant", "parameters": {"c": "-1"}},
        {"ambient": "bilateral", "form": "block_alternating", "parameters": {"a": "1", "b": "2"}},
        [],
    ],
)
def test_malformed_specs(doc):
    with pytest.raises(SpecFormatError):
        from_dict(doc)
