"""Finite-window lower bounds on how well ``T^n`` maps a ball around x near y.

For a fixed coordinate k the values ``(T^n z)_k`` with ``||z - x|| <= delta``
fill the closed disk of centre ``P_k * x_{k+n}`` and radius ``P_k * delta``,
where ``P_k = alpha_k ... alpha_{k+n-1}``.  Coordinates are independent, so
the smallest achievable sup-error over a window is

    max_k  max(0, |y_k - P_k x_{k+n}| - P_k delta).

A zero here never proves membership: the window is finite.  Every report
therefore carries ``"kind": "lower_bound"``.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from jshift._rational import exact_sqrt, fmt, sqrt_float
from jshift.errors import DomainError
from jshift.vectors import FiniteVector, Vector
from jshift.vectors import to_dict as vector_to_dict
from jshift.weights import Ambient, WeightSpec, _window_exact
from jshift.weights import to_dict as weights_to_dict


@dataclass(frozen=True)
class ProbeValue:
    """A nonnegative value; ``exact`` holds the rational when it is known exactly.

    Inexact values arise only from irrational complex moduli; they are the
    round-to-nearest double of the square root minus the exact radius.
    """

    exact: Fraction | None
    approx: float
    argmin_k: int | None

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def text(self) -> str:
        return fmt(self.exact) if self.exact is not None else repr(self.approx)


def _excess(d_sq: Fraction, r: Fraction) -> tuple[Fraction | None, float]:
    """``max(0, sqrt(d_sq) - r)`` with ``r >= 0``; the zero test is exact."""
    if d_sq <= r * r:
        return Fraction(0), 0.0
    root = exact_sqrt(d_sq)
    if root is not None:
        v = root - r
        return v, float(v)
    return None, max(0.0, sqrt_float(d_sq) - float(r))


def _worst(values) -> ProbeValue:
    best = None
    for k, (ex, ap) in values:
        if best is None:
            best = (k, ex, ap)
            continue
        _, bex, bap = best
        if ex is not None and bex is not None:
            if ex > bex:
                best = (k, ex, ap)
        elif ap > bap:
            best = (k, ex, ap)
    if best is None:
        return ProbeValue(Fraction(0), 0.0, None)
    k, ex, ap = best
    return ProbeValue(ex, ap, k)


def _window(w: WeightSpec, window) -> range:
    lo, hi = window
    if lo > hi:
        raise DomainError(f"empty window {lo}..{hi}")
    if w.ambient is Ambient.UNILATERAL and lo < 1:
        raise DomainError("unilateral windows start at index 1")
    return range(lo, hi + 1)


def min_window_error(w: WeightSpec, x: Vector, y: Vector, n: int, delta, window) -> ProbeValue:
    """Least window sup-error of ``T^n z - y`` over the ball ``||z - x|| <= delta``."""
    delta = Fraction(delta)
    if delta < 0:
        raise DomainError("delta must be >= 0")
    rows = []
    for k in _window(w, window):
        P = _window_exact(w, k - 1, n)
        d = y[k] - x[k + n] * P
        rows.append((k, _excess(d.abs_sq(), P * delta)))
    return _worst(rows)


def min_preimage_norm(w: WeightSpec, y: Vector, n: int, window, tol) -> ProbeValue:
    """Least ``||z||`` with ``|(T^n z)_k - y_k| <= tol`` on the window."""
    tol = Fraction(tol)
    if tol < 0:
        raise DomainError("tol must be >= 0")
    rows = []
    for k in _window(w, window):
        P = _window_exact(w, k - 1, n)
        ex, ap = _excess(y[k].abs_sq(), tol)
        if ex is not None:
            rows.append((k, (ex / P, float(ex / P))))
        else:
            rows.append((k, (None, ap / float(P))))
    return _worst(rows)


@dataclass(frozen=True)
class ProbeQuery:
    weights: WeightSpec
    base: Vector
    target: Vector
    delta: Fraction
    window: tuple
    n_range: tuple
    mode: str = "error"
    tol: Fraction = Fraction(0)

    def __post_init__(self):
        if self.mode not in ("error", "preimage"):
            raise DomainError("mode must be 'error' or 'preimage'")
        _window(self.weights, self.window)
        object.__setattr__(self, "delta", Fraction(self.delta))
        object.__setattr__(self, "tol", Fraction(self.tol))

    def metadata(self) -> dict:
        return {
            "weights": weights_to_dict(self.weights),
            "base": vector_to_dict(self.base),
            "target": vector_to_dict(self.target),
            "delta": fmt(self.delta),
            "tol": fmt(self.tol),
            "window": list(self.window),
            "n_range": list(self.n_range),
            "mode": self.mode,
        }


@dataclass(frozen=True)
class ProbeRow:
    n: int
    value: ProbeValue


@dataclass(frozen=True)
class ProbeReport:
    query: ProbeQuery
    rows: tuple

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["n", "min_error", "argmin_k", "exact"])
        for row in self.rows:
            v = row.value
            out.writerow([row.n, v.text(), "" if v.argmin_k is None else v.argmin_k, str(v.is_exact).lower()])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "kind": "lower_bound",
            "note": "window errors bound the full-space error from below; zero does not prove membership",
            "query": self.query.metadata(),
            "rows": [
                {
                    "n": r.n,
                    "min_error": r.value.text(),
                    "float": r.value.approx,
                    "argmin_k": r.value.argmin_k,
                    "exact": r.value.is_exact,
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _row(q: ProbeQuery, n: int) -> ProbeRow:
    if q.mode == "error":
        return ProbeRow(n, min_window_error(q.weights, q.base, q.target, n, q.delta, q.window))
    return ProbeRow(n, min_preimage_norm(q.weights, q.target, n, q.window, q.tol))


def probe_sweep(q: ProbeQuery, threads: int = 1) -> ProbeReport:
    """One row per power in ``q.n_range`` (inclusive), in increasing n."""
    lo, hi = q.n_range
    powers = range(max(lo, 1), hi + 1) if lo <= hi else range(0)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = tuple(pool.map(lambda n: _row(q, n), powers))
    else:
        rows = tuple(_row(q, n) for n in powers)
    return ProbeReport(q, rows)


def zero_base(w: WeightSpec) -> FiniteVector:
    return FiniteVector.zero(w.ambient)
