"""Finitely described bounded sequences and exact powers of the shift.

Two representations are supported: ``FiniteVector`` (finite support) and
``TailConstantVector`` (an explicit window followed by a constant tail, and
for bilateral vectors a constant left tail as well).  Complex scalars have
rational real and imaginary parts; every modulus comparison goes through
squared moduli so it stays exact.

Shift convention, used everywhere in the package::

    (T^n x)_k = (alpha_k * alpha_{k+1} * ... * alpha_{k+n-1}) * x_{k+n}

i.e. ``(T^n x)_{j+1} = window_product(w, j, n) * x_{n+j+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from jshift._rational import as_fraction, exact_sqrt, fmt, sqrt_float
from jshift.errors import DomainError, SpecFormatError, UnsupportedRepresentationError
from jshift.weights import Ambient, WeightSpec, _window_exact


@dataclass(frozen=True, slots=True, eq=False)
class ComplexRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))

    @classmethod
    def of(cls, value) -> ComplexRational:
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, (tuple, list)):
            re, im = value
            return cls(as_fraction(re), as_fraction(im))
        return cls(as_fraction(value), Fraction(0))

    def __add__(self, other):
        other = ComplexRational.of(other)
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-ComplexRational.of(other))

    def __rsub__(self, other):
        return ComplexRational.of(other) - self

    def __mul__(self, other):
        o = ComplexRational.of(other)
        return ComplexRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = ComplexRational.of(other)
        d = o.abs_sq()
        if d == 0:
            raise ZeroDivisionError("division by complex zero")
        return ComplexRational((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __eq__(self, other):
        if isinstance(other, ComplexRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        # agree with hash(Fraction) on real values since they compare equal
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def abs_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def to_json(self) -> list:
        return [fmt(self.re), fmt(self.im)]

    def __repr__(self):
        if self.im == 0:
            return f"CR({self.re})"
        return f"CR({self.re}, {self.im})"


ZERO = ComplexRational()
Scalar = Union[ComplexRational, Fraction, int, str, tuple]


def _entries(items) -> tuple:
    if isinstance(items, Mapping):
        items = items.items()
    merged: dict[int, ComplexRational] = {}
    for k, v in items:
        merged[int(k)] = merged.get(int(k), ZERO) + ComplexRational.of(v)
    return tuple(sorted((k, v) for k, v in merged.items() if v))


@dataclass(frozen=True)
class NormValue:
    """An exact squared norm plus its float rendering."""

    value_sq: Fraction
    value: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "value_sq", Fraction(self.value_sq))
        object.__setattr__(self, "value", sqrt_float(self.value_sq))

    @property
    def exact(self) -> Fraction | None:
        """The norm itself when it is rational."""
        return exact_sqrt(self.value_sq)


@dataclass(frozen=True)
class FiniteVector:
    ambient: Ambient
    entries: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ambient", Ambient(self.ambient))
        object.__setattr__(self, "entries", _entries(self.entries))
        if self.ambient is Ambient.UNILATERAL and self.entries and self.entries[0][0] < 1:
            raise DomainError("unilateral vectors are indexed from 1")

    @classmethod
    def zero(cls, ambient=Ambient.UNILATERAL) -> FiniteVector:
        return cls(ambient, ())

    @classmethod
    def basis(cls, k: int, ambient=Ambient.UNILATERAL, scale: Scalar = 1) -> FiniteVector:
        return cls(ambient, ((k, ComplexRational.of(scale)),))

    def __getitem__(self, k: int) -> ComplexRational:
        for idx, v in self.entries:
            if idx == k:
                return v
        return ZERO

    coordinate = __getitem__

    @property
    def support(self) -> list[int]:
        return [k for k, _ in self.entries]

    @property
    def max_index(self) -> int | None:
        return self.entries[-1][0] if self.entries else None

    @property
    def min_index(self) -> int | None:
        return self.entries[0][0] if self.entries else None

    def as_dict(self) -> dict[int, ComplexRational]:
        return dict(self.entries)

    def __add__(self, other: FiniteVector) -> FiniteVector:
        _same_ambient(self, other)
        return FiniteVector(self.ambient, self.entries + other.entries)

    def __neg__(self):
        return FiniteVector(self.ambient, tuple((k, -v) for k, v in self.entries))

    def __sub__(self, other: FiniteVector) -> FiniteVector:
        return self + (-other)

    def scale(self, c: Scalar) -> FiniteVector:
        c = ComplexRational.of(c)
        return FiniteVector(self.ambient, tuple((k, v * c) for k, v in self.entries))

    def __bool__(self):
        return bool(self.entries)


@dataclass(frozen=True)
class TailConstantVector:
    """Explicit window, then ``tail_value`` at every index ``>= tail_start``.

    Bilateral vectors also carry ``left_value`` at every index
    ``<= left_boundary``; the window must lie strictly between the two.
    """

    ambient: Ambient
    window: tuple
    tail_start: int
    tail_value: ComplexRational
    left_boundary: int | None = None
    left_value: ComplexRational = ZERO

    def __post_init__(self):
        object.__setattr__(self, "ambient", Ambient(self.ambient))
        object.__setattr__(self, "window", _entries(self.window))
        object.__setattr__(self, "tail_value", ComplexRational.of(self.tail_value))
        object.__setattr__(self, "left_value", ComplexRational.of(self.left_value))
        object.__setattr__(self, "tail_start", int(self.tail_start))
        if self.ambient is Ambient.UNILATERAL:
            if self.left_boundary is not None or self.left_value:
                raise DomainError("unilateral vectors have no left tail")
            if self.tail_start < 1:
                raise DomainError("unilateral tail_start must be >= 1")
            floor = 1
        else:
            if self.left_boundary is None:
                raise DomainError("bilateral tail-constant vectors need a left_boundary")
            if self.left_boundary >= self.tail_start:
                raise DomainError("left_boundary must lie below tail_start")
            floor = self.left_boundary + 1
        for k, _ in self.window:
            if not floor <= k < self.tail_start:
                raise DomainError(f"window index {k} outside ({floor - 1}, {self.tail_start})")

    @classmethod
    def constant(cls, c: Scalar, ambient=Ambient.UNILATERAL) -> TailConstantVector:
        """The vector ``(c, c, c, ...)``."""
        if Ambient(ambient) is Ambient.UNILATERAL:
            return cls(ambient, (), 1, ComplexRational.of(c))
        return cls(ambient, (), 1, ComplexRational.of(c), left_boundary=0, left_value=ComplexRational.of(c))

    def __getitem__(self, k: int) -> ComplexRational:
        if k >= self.tail_start:
            return self.tail_value
        if self.left_boundary is not None and k <= self.left_boundary:
            return self.left_value
        for idx, v in self.window:
            if idx == k:
                return v
        return ZERO

    coordinate = __getitem__

    @property
    def explicit_indices(self) -> range:
        lo = 1 if self.left_boundary is None else self.left_boundary + 1
        return range(lo, self.tail_start)

    def __sub__(self, other: TailConstantVector) -> TailConstantVector:
        _same_ambient(self, other)
        start = max(self.tail_start, other.tail_start)
        if self.ambient is Ambient.UNILATERAL:
            left, lo = None, 1
        else:
            left = min(self.left_boundary, other.left_boundary)
            lo = left + 1
        window = [(k, self[k] - other[k]) for k in range(lo, start)]
        return TailConstantVector(
            self.ambient,
            window,
            start,
            self.tail_value - other.tail_value,
            left_boundary=left,
            left_value=self.left_value - other.left_value,
        )


Vector = Union[FiniteVector, TailConstantVector]


def _same_ambient(x, y):
    if x.ambient is not y.ambient:
        raise DomainError(f"ambient mismatch: {x.ambient.value} vs {y.ambient.value}")


def as_tail_constant(v: Vector) -> TailConstantVector:
    if isinstance(v, TailConstantVector):
        return v
    if isinstance(v, FiniteVector):
        if v.ambient is Ambient.UNILATERAL:
            start = (v.max_index or 0) + 1
            return TailConstantVector(v.ambient, v.entries, start, ZERO)
        lo = v.min_index if v.entries else 1
        hi = v.max_index if v.entries else 0
        return TailConstantVector(v.ambient, v.entries, hi + 1, ZERO, left_boundary=lo - 1)
    raise UnsupportedRepresentationError(f"no finite description for {type(v).__name__}")


def apply_shift(w: WeightSpec, x: FiniteVector, n: int) -> FiniteVector:
    """Exact ``T^n x`` for a finitely supported ``x``."""
    if n < 0:
        raise DomainError("power must be >= 0")
    if not isinstance(x, FiniteVector):
        raise UnsupportedRepresentationError("apply_shift needs a FiniteVector; use a witness for tails")
    if w.ambient is not x.ambient:
        raise DomainError(f"ambient mismatch: weights {w.ambient.value}, vector {x.ambient.value}")
    if n == 0:
        return x
    out = []
    for s, v in x.entries:
        k = s - n
        if x.ambient is Ambient.UNILATERAL and k < 1:
            continue
        out.append((k, v * _window_exact(w, k - 1, n)))
    return FiniteVector(x.ambient, out)


def sup_norm(x: Vector) -> NormValue:
    """Sup norm; ``value_sq`` is exact."""
    if isinstance(x, FiniteVector):
        return NormValue(max((v.abs_sq() for _, v in x.entries), default=Fraction(0)))
    if isinstance(x, TailConstantVector):
        candidates = [v.abs_sq() for _, v in x.window]
        candidates.append(x.tail_value.abs_sq())
        if x.left_boundary is not None:
            candidates.append(x.left_value.abs_sq())
        return NormValue(max(candidates))
    raise UnsupportedRepresentationError(f"sup_norm of {type(x).__name__}")


def l2_norm_sq(x: FiniteVector) -> Fraction:
    """Squared l2 norm of a finitely supported vector."""
    return sum((v.abs_sq() for _, v in x.entries), Fraction(0))


def is_c0(x: Vector) -> bool:
    """Whether the unilateral vector tends to zero."""
    if x.ambient is not Ambient.UNILATERAL:
        raise DomainError("c0 membership is tested for unilateral vectors")
    if isinstance(x, FiniteVector):
        return True
    if isinstance(x, TailConstantVector):
        return not x.tail_value
    raise UnsupportedRepresentationError(f"is_c0 of {type(x).__name__}")


def distance_sup(x: Vector, y: Vector) -> NormValue:
    """Sup-norm distance between two finitely described vectors."""
    _same_ambient(x, y)
    if isinstance(x, FiniteVector) and isinstance(y, FiniteVector):
        return sup_norm(x - y)
    return sup_norm(as_tail_constant(x) - as_tail_constant(y))


# --- JSON schema -------------------------------------------------------------


def _scalar_from_json(value) -> ComplexRational:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise SpecFormatError(f"complex value must be [re, im], got {value!r}")
        return ComplexRational(as_fraction(value[0]), as_fraction(value[1]))
    return ComplexRational(as_fraction(value))


def to_dict(x: Vector) -> dict:
    if isinstance(x, FiniteVector):
        return {"ambient": x.ambient.value, "entries": [[k, fmt(v.re), fmt(v.im)] for k, v in x.entries]}
    doc = {
        "ambient": x.ambient.value,
        "entries": [[k, fmt(v.re), fmt(v.im)] for k, v in x.window],
        "tail": {"start": x.tail_start, "value": x.tail_value.to_json()},
    }
    if x.left_boundary is not None:
        doc["tail"]["left"] = {"boundary": x.left_boundary, "value": x.left_value.to_json()}
    return doc


def from_dict(doc: dict) -> Vector:
    if not isinstance(doc, dict):
        raise SpecFormatError("vector must be a JSON object")
    try:
        ambient = Ambient(doc.get("ambient", "unilateral"))
        entries = []
        for row in doc.get("entries", []):
            if len(row) == 2:
                k, re = row
                im = "0"
            else:
                k, re, im = row
            entries.append((int(k), ComplexRational(as_fraction(re), as_fraction(im))))
        tail = doc.get("tail")
        if tail is None:
            return FiniteVector(ambient, entries)
        left = tail.get("left")
        return TailConstantVector(
            ambient,
            entries,
            int(tail["start"]),
            _scalar_from_json(tail["value"]),
            left_boundary=None if left is None else int(left["boundary"]),
            left_value=ZERO if left is None else _scalar_from_json(left["value"]),
        )
    except SpecFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFormatError(f"malformed vector: {exc}") from exc


def coordinates(x, indices: Iterable[int]) -> list[tuple[int, ComplexRational]]:
    return [(k, x[k]) for k in indices]
