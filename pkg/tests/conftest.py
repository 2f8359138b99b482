"""Independent oracles and hypothesis strategies shared by the test modules.

The oracles re-derive weights and products from the definitions with plain
lists; they never call into the package's structured algorithms.
"""

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from jshift import BlockAlternating, Constant, EventuallyPeriodic, Table, TwoSidedEventuallyPeriodic

SMALL_RATIONALS = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1),
                   Fraction(3, 2), Fraction(2), Fraction(3), Fraction(4)]


def naive_weights(w, count):
    """alpha_1 .. alpha_count straight from each form's definition."""
    if isinstance(w, Constant):
        return [w.c] * count
    if isinstance(w, EventuallyPeriodic):
        periodic = list(w.period) * (count // len(w.period) + 1)
        return (list(w.prefix) + periodic[len(w.prefix):])[:count]
    if isinstance(w, BlockAlternating):
        out, lengths = [], [1]
        for m in range(2, count + 2):
            lengths += [m, m]
        for b, length in enumerate(lengths):
            if len(out) >= count:
                break
            out.extend([w.a if b % 2 == 0 else w.b] * length)
        return out[:count]
    if isinstance(w, Table):
        out = naive_weights(w.tail, count)
        for i, v in enumerate(w.entries):
            if w.start - 1 + i < count:
                out[w.start - 1 + i] = v
        return out
    raise TypeError(w)


def naive_bilateral(w, lo, hi):
    """{n: alpha_n} for lo <= n <= hi."""
    out = {}
    if isinstance(w, Constant):
        return {n: w.c for n in range(lo, hi + 1)}
    if isinstance(w, TwoSidedEventuallyPeriodic):
        a, b = w.middle_start, w.middle_start + len(w.middle) - 1
        for n in range(lo, hi + 1):
            if n < a:
                out[n] = w.left_period[(a - 1 - n) % len(w.left_period)]
            elif n > b:
                out[n] = w.right_period[(n - b - 1) % len(w.right_period)]
            else:
                out[n] = w.middle[n - a]
        return out
    if isinstance(w, Table):
        out = naive_bilateral(w.tail, lo, hi)
        for i, v in enumerate(w.entries):
            if lo <= w.start + i <= hi:
                out[w.start + i] = v
        return out
    raise TypeError(w)


def prod(values):
    p = Fraction(1)
    for v in values:
        p *= v
    return p


def brute_inf(w, n, j_max):
    """min over 0 <= j <= j_max of alpha_{j+1} ... alpha_{j+n}."""
    ws = naive_weights(w, j_max + n)
    return min(prod(ws[j : j + n]) for j in range(j_max + 1))


@pytest.fixture
def listed_block_sequence():
    half, two = Fraction(1, 2), Fraction(2)
    return [half, two, two, half, half, two, two, two, half, half, half,
            two, two, two, two, half, half, half, half]


rationals = st.sampled_from(SMALL_RATIONALS)


@st.composite
def periodic_specs(draw, max_prefix=4, max_period=4):
    prefix = draw(st.lists(rationals, max_size=max_prefix))
    period = draw(st.lists(rationals, min_size=1, max_size=max_period))
    return EventuallyPeriodic(tuple(prefix), tuple(period))


@st.composite
def two_sided_specs(draw):
    middle = draw(st.lists(rationals, max_size=4))
    left = draw(st.lists(rationals, min_size=1, max_size=3))
    right = draw(st.lists(rationals, min_size=1, max_size=3))
    start = draw(st.integers(-3, 3))
    return TwoSidedEventuallyPeriodic(tuple(middle), tuple(left), tuple(right), middle_start=start)


ACCEPTANCE: dict = {}
ECHO = False


def record_acceptance(number, title, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title}" + (f" -- {detail}" if detail else "")
    ACCEPTANCE[number] = line
    if ECHO:
        print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
