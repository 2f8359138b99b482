"""Weight sequences of backward shifts and exact products over windows.

A weight sequence is described symbolically by one of a handful of forms.
Unilateral sequences are indexed from 1, bilateral ones by all integers.
Window products follow the convention

    window_product(w, j, n) = alpha_{j+1} * alpha_{j+2} * ... * alpha_{j+n}

so that ``inf_window_product(w, n)`` is the infimum over admissible offsets
``j`` of that product.  Eventually periodic forms (and constants, and finite
modifications of those) have exactly computable infima; the block pattern
is only scanned up to a horizon and is reported as an upper bound.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from math import isqrt

from jshift._rational import as_fraction, fmt
from jshift.errors import DomainError, SpecFormatError

DEFAULT_HORIZON = 1024

# documented bound on |log2_approx - log2(exact)|, scaled by max(1, |log2(exact)|)
LOG2_RELATIVE_ERROR = 2.0**-40


def default_horizon() -> int:
    """Offset horizon for scans; ``JSHIFT_DEFAULT_HORIZON`` overrides it."""
    raw = os.environ.get("JSHIFT_DEFAULT_HORIZON")
    if raw is None:
        return DEFAULT_HORIZON
    try:
        value = int(raw)
    except ValueError as exc:
        raise SpecFormatError(f"JSHIFT_DEFAULT_HORIZON={raw!r} is not an integer") from exc
    if value < 0:
        raise DomainError("JSHIFT_DEFAULT_HORIZON must be non-negative")
    return value


class Ambient(str, Enum):
    UNILATERAL = "unilateral"
    BILATERAL = "bilateral"


class Exactness(str, Enum):
    EXACT = "exact"
    UPPER_BOUND_ONLY = "upper_bound_only"


@dataclass(frozen=True)
class ProductValue:
    """A positive exact product together with an advisory log2 value."""

    exact: Fraction
    log2_approx: float = field(init=False)

    def __post_init__(self):
        if self.exact <= 0:
            raise DomainError("products of weights are strictly positive")
        object.__setattr__(self, "log2_approx", _log2(self.exact))

    def __float__(self):
        return float(self.exact)


def _log2(q: Fraction) -> float:
    # math.log2 accepts ints of any size, so this never overflows
    return math.log2(q.numerator) - math.log2(q.denominator)


@dataclass(frozen=True)
class InfResult:
    value: ProductValue
    achieved_at: int
    exactness: Exactness

    @property
    def exact(self) -> Fraction:
        return self.value.exact


def _positive_tuple(values, what: str) -> tuple[Fraction, ...]:
    out = tuple(as_fraction(v) for v in values)
    for v in out:
        if v <= 0:
            raise DomainError(f"{what}: weights must be strictly positive, got {v}")
    return out


def _product(values) -> Fraction:
    p = Fraction(1)
    for v in values:
        p *= v
    return p


class WeightSpec:
    """Base class of the symbolic weight forms.

    Subclasses are frozen dataclasses.  ``_periodic()`` returns the
    eventually periodic normal form when one exists (``None`` for the
    generator forms), and all exact algorithms run on that normal form.
    """

    ambient: Ambient

    def _raw_weight(self, n: int) -> Fraction:
        raise NotImplementedError

    def _periodic(self):
        return None

    @property
    def is_exact_form(self) -> bool:
        return self._periodic() is not None

    @property
    def sup(self) -> Fraction:
        raise NotImplementedError

    @property
    def inf(self) -> Fraction:
        """Infimum of the weights themselves (strictly positive)."""
        raise NotImplementedError

    def in_ambient(self, n: int) -> bool:
        return self.ambient is Ambient.BILATERAL or n >= 1

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(WeightSpec):
    c: Fraction
    ambient: Ambient = Ambient.UNILATERAL

    def __post_init__(self):
        (c,) = _positive_tuple([self.c], "Constant")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "ambient", Ambient(self.ambient))

    def _raw_weight(self, n):
        return self.c

    @cached_property
    def _normal(self):
        if self.ambient is Ambient.UNILATERAL:
            return EventuallyPeriodic((), (self.c,))
        return TwoSidedEventuallyPeriodic((), (self.c,), (self.c,), middle_start=1)

    def _periodic(self):
        return self._normal

    @property
    def sup(self):
        return self.c

    @property
    def inf(self):
        return self.c

    def to_dict(self):
        return {"ambient": self.ambient.value, "form": "constant", "parameters": {"c": fmt(self.c)}}


@dataclass(frozen=True)
class EventuallyPeriodic(WeightSpec):
    """Unilateral: ``alpha_n = prefix[n-1]`` for n <= len(prefix), else ``period[(n-1) % p]``.

    The prefix overwrites the start of the purely periodic sequence, so the
    period keeps its phase relative to index 1 whatever the prefix length.
    """

    prefix: tuple
    period: tuple
    ambient: Ambient = field(default=Ambient.UNILATERAL, init=False)

    def __post_init__(self):
        object.__setattr__(self, "prefix", _positive_tuple(self.prefix, "EventuallyPeriodic prefix"))
        object.__setattr__(self, "period", _positive_tuple(self.period, "EventuallyPeriodic period"))
        if not self.period:
            raise DomainError("EventuallyPeriodic period must be nonempty")

    def _raw_weight(self, n):
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.period[(n - 1) % len(self.period)]

    def _periodic(self):
        return self

    @cached_property
    def period_product(self) -> Fraction:
        return _product(self.period)

    @property
    def sup(self):
        return max(self.prefix + self.period)

    @property
    def inf(self):
        return min(self.prefix + self.period)

    def _cyclic_partial(self, r: int, t: int) -> Fraction:
        p = self.period
        return _product(p[(r + i) % len(p)] for i in range(t))

    def _product(self, first: int, count: int) -> Fraction:
        """Product of ``count`` consecutive weights starting at index ``first``."""
        L, p = len(self.prefix), len(self.period)
        out = Fraction(1)
        last = first + count - 1
        if first <= L:
            out *= _product(self.prefix[first - 1 : min(last, L)])
            first = L + 1
        if last >= first:
            c = last - first + 1
            q, t = divmod(c, p)
            out *= self.period_product**q * self._cyclic_partial((first - 1) % p, t)
        return out

    def extended(self, prefix_length: int) -> EventuallyPeriodic:
        """Same sequence rewritten with a longer prefix."""
        if prefix_length <= len(self.prefix):
            return self
        prefix = tuple(self._raw_weight(n) for n in range(1, prefix_length + 1))
        return EventuallyPeriodic(prefix, self.period)

    def to_dict(self):
        return {
            "ambient": "unilateral",
            "form": "eventually_periodic",
            "parameters": {"prefix": [fmt(v) for v in self.prefix], "period": [fmt(v) for v in self.period]},
        }


@dataclass(frozen=True)
class TwoSidedEventuallyPeriodic(WeightSpec):
    """Bilateral weights with an explicit middle block.

    ``middle[i]`` is the weight at index ``middle_start + i``.  Right of the
    middle the ``right_period`` cycles toward +infinity; left of it the
    ``left_period`` cycles toward -infinity, so ``left_period[0]`` sits at
    index ``middle_start - 1``.
    """

    middle: tuple
    left_period: tuple
    right_period: tuple
    middle_start: int = 1
    ambient: Ambient = field(default=Ambient.BILATERAL, init=False)

    def __post_init__(self):
        object.__setattr__(self, "middle", _positive_tuple(self.middle, "middle"))
        object.__setattr__(self, "left_period", _positive_tuple(self.left_period, "left_period"))
        object.__setattr__(self, "right_period", _positive_tuple(self.right_period, "right_period"))
        object.__setattr__(self, "middle_start", int(self.middle_start))
        if not self.left_period or not self.right_period:
            raise DomainError("both periods of a two-sided form must be nonempty")

    @property
    def lo(self) -> int:
        return self.middle_start

    @property
    def hi(self) -> int:
        return self.middle_start + len(self.middle) - 1

    def _raw_weight(self, n):
        if n < self.lo:
            return self.left_period[(self.lo - 1 - n) % len(self.left_period)]
        if n > self.hi:
            return self.right_period[(n - self.hi - 1) % len(self.right_period)]
        return self.middle[n - self.lo]

    def _periodic(self):
        return self

    @cached_property
    def left_product(self) -> Fraction:
        return _product(self.left_period)

    @cached_property
    def right_product(self) -> Fraction:
        return _product(self.right_period)

    @property
    def sup(self):
        return max(self.middle + self.left_period + self.right_period)

    @property
    def inf(self):
        return min(self.middle + self.left_period + self.right_period)

    def _product(self, first: int, count: int) -> Fraction:
        last = first + count - 1
        out = Fraction(1)
        lo, hi = self.lo, self.hi
        if first < lo:
            a, b = first, min(last, lo - 1)
            c = b - a + 1
            lp = len(self.left_period)
            q, t = divmod(c, lp)
            r = (lo - 1 - b) % lp
            out *= self.left_product**q * _product(self.left_period[(r + i) % lp] for i in range(t))
        a, b = max(first, lo), min(last, hi)
        if a <= b:
            out *= _product(self.middle[a - lo : b - lo + 1])
        if last > hi:
            a = max(first, hi + 1)
            c = last - a + 1
            rp = len(self.right_period)
            q, t = divmod(c, rp)
            r = (a - hi - 1) % rp
            out *= self.right_product**q * _product(self.right_period[(r + i) % rp] for i in range(t))
        return out

    def extended(self, lo: int, hi: int) -> TwoSidedEventuallyPeriodic:
        """Same sequence with the middle block widened to cover ``lo..hi``."""
        new_lo, new_hi = min(lo, self.lo), max(hi, self.hi)
        if not self.middle:
            new_lo, new_hi = min(lo, self.lo), max(hi, self.lo - 1)
        if new_lo == self.lo and new_hi == self.hi:
            return self
        middle = tuple(self._raw_weight(n) for n in range(new_lo, new_hi + 1))
        lp, rp = len(self.left_period), len(self.right_period)
        ls, rs = self.lo - new_lo, new_hi - self.hi
        left = tuple(self.left_period[(t + ls) % lp] for t in range(lp))
        right = tuple(self.right_period[(t + rs) % rp] for t in range(rp))
        return TwoSidedEventuallyPeriodic(middle, left, right, middle_start=new_lo)

    def to_dict(self):
        return {
            "ambient": "bilateral",
            "form": "two_sided_eventually_periodic",
            "parameters": {
                "middle_start": self.middle_start,
                "middle": [fmt(v) for v in self.middle],
                "left_period": [fmt(v) for v in self.left_period],
                "right_period": [fmt(v) for v in self.right_period],
            },
        }


@dataclass(frozen=True)
class BlockAlternating(WeightSpec):
    """Blocks of lengths 1, 2, 2, 3, 3, 4, 4, ... alternating a, b, a, b, ...

    With ``a = 1/2`` and ``b = 2`` this is the sequence
    1/2, 2, 2, 1/2, 1/2, 2, 2, 2, 1/2, 1/2, 1/2, ...
    """

    a: Fraction
    b: Fraction
    ambient: Ambient = field(default=Ambient.UNILATERAL, init=False)

    def __post_init__(self):
        a, b = _positive_tuple([self.a, self.b], "BlockAlternating")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def _raw_weight(self, n):
        if n == 1:
            return self.a
        # after the leading single a, pair m (m >= 2) is m b's then m a's and
        # ends at index m(m+1) - 1
        m = max(2, (isqrt(4 * n + 5) - 1) // 2)
        while m * (m + 1) - 1 < n:
            m += 1
        while m > 2 and (m - 1) * m - 1 >= n:
            m -= 1
        offset = n - (m - 1) * m
        return self.b if offset < m else self.a

    def run_start(self, letter: str, n: int) -> int:
        """First index of a run of at least ``n`` consecutive copies of ``letter``."""
        if n < 1:
            raise DomainError("run length must be >= 1")
        if letter == "a":
            return 1 if n == 1 else n * n
        if letter == "b":
            m = max(n, 2)
            return (m - 1) * m
        raise DomainError(f"letter must be 'a' or 'b', got {letter!r}")

    @property
    def sup(self):
        return max(self.a, self.b)

    @property
    def inf(self):
        return min(self.a, self.b)

    def to_dict(self):
        return {"ambient": "unilateral", "form": "block_alternating", "parameters": {"a": fmt(self.a), "b": fmt(self.b)}}


@dataclass(frozen=True)
class Table(WeightSpec):
    """Finite modification: ``entries[i]`` replaces the weight at ``start + i``."""

    entries: tuple
    tail: WeightSpec
    start: int = 1
    ambient: Ambient = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", _positive_tuple(self.entries, "Table entries"))
        object.__setattr__(self, "start", int(self.start))
        object.__setattr__(self, "ambient", self.tail.ambient)
        if self.ambient is Ambient.UNILATERAL and self.start < 1:
            raise DomainError("unilateral table must start at index >= 1")

    def _raw_weight(self, n):
        if self.start <= n < self.start + len(self.entries):
            return self.entries[n - self.start]
        return self.tail._raw_weight(n)

    @cached_property
    def _normal(self):
        base = self.tail._periodic()
        if base is None:
            return None
        end = self.start + len(self.entries) - 1
        if isinstance(base, EventuallyPeriodic):
            ext = base.extended(max(end, len(base.prefix)))
            prefix = list(ext.prefix)
            for i, v in enumerate(self.entries):
                prefix[self.start - 1 + i] = v
            return EventuallyPeriodic(tuple(prefix), ext.period)
        if not self.entries:
            return base
        ext = base.extended(self.start, end)
        middle = list(ext.middle)
        for i, v in enumerate(self.entries):
            middle[self.start + i - ext.lo] = v
        return TwoSidedEventuallyPeriodic(tuple(middle), ext.left_period, ext.right_period, middle_start=ext.lo)

    def _periodic(self):
        return self._normal

    @property
    def sup(self):
        normal = self._periodic()
        if normal is not None:
            return normal.sup
        return max(self.entries + (self.tail.sup,))

    @property
    def inf(self):
        normal = self._periodic()
        if normal is not None:
            return normal.inf
        return min(self.entries + (self.tail.inf,))

    def to_dict(self):
        return {
            "ambient": self.ambient.value,
            "form": "table",
            "parameters": {"start": self.start, "entries": [fmt(v) for v in self.entries], "tail": self.tail.to_dict()},
        }


# --- operations -------------------------------------------------------------


def _check_index(w: WeightSpec, n: int) -> None:
    if not w.in_ambient(n):
        raise DomainError(f"index {n} is outside the {w.ambient.value} index set")


def weight_at(w: WeightSpec, n: int) -> Fraction:
    """Exact weight ``alpha_n``."""
    _check_index(w, n)
    return w._raw_weight(n)


def _window_exact(w: WeightSpec, j: int, n: int) -> Fraction:
    normal = w._periodic()
    if normal is not None:
        return normal._product(j + 1, n)
    return _product(w._raw_weight(i + j) for i in range(1, n + 1))


def window_product(w: WeightSpec, j: int, n: int) -> ProductValue:
    """``alpha_{j+1} * ... * alpha_{j+n}``."""
    if n < 1:
        raise DomainError("window length must be >= 1")
    _check_index(w, j + 1)
    return ProductValue(_window_exact(w, j, n))


def prefix_product(w: WeightSpec, n: int) -> ProductValue:
    """``alpha_1 * ... * alpha_n`` for a unilateral sequence."""
    if w.ambient is not Ambient.UNILATERAL:
        raise DomainError("prefix products are defined for unilateral weights only")
    return window_product(w, 0, n)


def operator_norm(w: WeightSpec) -> Fraction:
    """``sup_n alpha_n``, the norm of the shift on l-infinity."""
    return w.sup


def _exact_offsets(normal, n: int, start: int | None) -> range:
    """Offsets whose window products cover every value attained for j >= start."""
    if isinstance(normal, EventuallyPeriodic):
        s = 0 if start is None else start
        return range(s, max(s, len(normal.prefix)) + len(normal.period))
    lp, rp = len(normal.left_period), len(normal.right_period)
    hi = normal.hi if normal.middle else normal.lo - 1
    top = max(hi, start if start is not None else hi) + rp
    if start is None:
        return range(normal.lo - n - lp, top)
    return range(start, top)


def inf_window_product(w: WeightSpec, n: int, horizon: int | None = None, start: int | None = None) -> InfResult:
    """Infimum over offsets ``j`` of ``window_product(w, j, n)``.

    ``start`` restricts to offsets ``j >= start`` (default: ``j >= 0`` for
    unilateral weights, all of Z for bilateral ones).  Exact forms ignore
    ``horizon``; generator forms scan ``start <= j <= start + horizon`` and
    flag the result ``UPPER_BOUND_ONLY``.
    """
    if n < 1:
        raise DomainError("window length must be >= 1")
    if horizon is not None and horizon < 0:
        raise DomainError("horizon must be non-negative")
    if w.ambient is Ambient.UNILATERAL:
        start = 0 if start is None else start
        if start < 0:
            raise DomainError("unilateral offsets start at 0")
    normal = w._periodic()
    if normal is not None:
        best, at = None, None
        for j in _exact_offsets(normal, n, start):
            value = normal._product(j + 1, n)
            if best is None or value < best:
                best, at = value, j
        return InfResult(ProductValue(best), at, Exactness.EXACT)

    horizon = default_horizon() if horizon is None else horizon
    lo = start if start is not None else -horizon
    hi = (start if start is not None else 0) + horizon
    # sliding window, exact at every step
    current = _window_exact(w, lo, n)
    best, at = current, lo
    for j in range(lo + 1, hi + 1):
        current = current / w._raw_weight(j) * w._raw_weight(j + n)
        if current < best:
            best, at = current, j
    return InfResult(ProductValue(best), at, Exactness.UPPER_BOUND_ONLY)


def expand(w: WeightSpec, count: int, first: int = 1) -> list[Fraction]:
    """The weights at ``first, first+1, ..., first+count-1``."""
    return [weight_at(w, n) for n in range(first, first + count)]


# --- JSON schema ---------------------------------------------------------------


def to_dict(w: WeightSpec) -> dict:
    return w.to_dict()


def from_dict(doc: dict) -> WeightSpec:
    """Inverse of ``to_dict``; raises ``SpecFormatError`` on malformed input."""
    if not isinstance(doc, dict):
        raise SpecFormatError("weight spec must be a JSON object")
    try:
        ambient = Ambient(doc.get("ambient", "unilateral"))
        form = doc["form"]
        params = doc.get("parameters", {})
        if form == "constant":
            return Constant(as_fraction(params["c"]), ambient)
        if form == "eventually_periodic":
            _require(ambient, Ambient.UNILATERAL, form)
            return EventuallyPeriodic(tuple(params.get("prefix", [])), tuple(params["period"]))
        if form == "two_sided_eventually_periodic":
            _require(ambient, Ambient.BILATERAL, form)
            return TwoSidedEventuallyPeriodic(
                tuple(params.get("middle", [])),
                tuple(params["left_period"]),
                tuple(params["right_period"]),
                middle_start=int(params.get("middle_start", 1)),
            )
        if form == "block_alternating":
            _require(ambient, Ambient.UNILATERAL, form)
            return BlockAlternating(as_fraction(params["a"]), as_fraction(params["b"]))
        if form == "table":
            tail = from_dict(params["tail"])
            if tail.ambient is not ambient:
                raise SpecFormatError("table ambient differs from its tail")
            return Table(tuple(params.get("entries", [])), tail, start=int(params.get("start", 1)))
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"malformed weight spec: {exc!r}") from exc
    except DomainError as exc:
        raise SpecFormatError(str(exc)) from exc
    except ValueError as exc:
        raise SpecFormatError(f"malformed weight spec: {exc}") from exc
    raise SpecFormatError(f"unknown weight form {form!r}")


def _require(ambient, expected, form):
    if ambient is not expected:
        raise SpecFormatError(f"form {form!r} requires ambient {expected.value!r}")
