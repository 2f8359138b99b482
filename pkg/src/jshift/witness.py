"""Executable constructions behind extended-limit-set membership.

``build_witness`` produces the approximant of a base vector ``x`` of finite
support whose n-th shift image is exactly a target ``y``::

    z = (x_1, ..., x_{n0-1}, 0, ..., 0, y_1 / P_0, y_2 / P_1, y_3 / P_2, ...)

with zeros at positions n0..n and ``P_j = window_product(w, j, n)``.  Its
distance to ``x`` is ``sup_k |y_k| / P_{k-1}``, which tends to zero exactly
when the growth criterion holds.  The remaining helpers turn the other
steps of the argument into checks: mixing families over every power, the
obstruction that keeps non-c0 vectors out of the J-vectors, the diagonal
selection for limits of memberships, and the bilateral contradiction bound.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterator, Sequence

from jshift._rational import exact_sqrt, rendered
from jshift.criteria import GrowthCertificate, find_growth_certificate, first_index_above, lower_bound_at
from jshift.errors import (
    DiagonalFailure,
    DomainError,
    GeneratorRefusal,
    InconclusiveParametersError,
    UnsupportedRepresentationError,
)
from jshift.vectors import (
    ZERO,
    ComplexRational,
    FiniteVector,
    NormValue,
    TailConstantVector,
    Vector,
    as_tail_constant,
    distance_sup,
    sup_norm,
)
from jshift.weights import Ambient, Exactness, WeightSpec, _window_exact, default_horizon, inf_window_product


def _support_end(v: Vector) -> int:
    """Last index before the constant tail (0 when there is none)."""
    if isinstance(v, FiniteVector):
        return v.max_index or 0
    return v.tail_start - 1


def _tail(v: Vector) -> ComplexRational:
    return v.tail_value if isinstance(v, TailConstantVector) else ZERO


@dataclass(frozen=True)
class LazyWitness:
    weights: WeightSpec
    base: FiniteVector
    target: Vector
    n: int
    n0: int
    overrides: tuple = ()
    error_bound_sq: Fraction | None = None
    bound_exact: bool = True

    def coordinate(self, k: int) -> ComplexRational:
        if k < 1:
            raise DomainError("unilateral coordinates start at 1")
        for idx, v in self.overrides:
            if idx == k:
                return v
        if k < self.n0:
            return self.base[k]
        if k <= self.n:
            return ZERO
        return self.target[k - self.n] / _window_exact(self.weights, k - self.n - 1, self.n)

    __getitem__ = coordinate

    def perturbed(self, k: int, value) -> LazyWitness:
        """Copy with coordinate ``k`` replaced (used to test verification)."""
        kept = tuple((i, v) for i, v in self.overrides if i != k)
        return replace(self, overrides=kept + ((k, ComplexRational.of(value)),))

    def window(self, lo: int, hi: int) -> list[tuple[int, ComplexRational]]:
        return [(k, self.coordinate(k)) for k in range(lo, hi + 1)]

    def distance_sq_to(self, v: Vector, horizon: int | None = None) -> tuple[Fraction, bool]:
        """Exact squared sup distance to ``v``; ``(value, exact)``.

        Beyond every explicit index the difference is ``c_y / P_j - c_v``
        with ``c_y``, ``c_v`` the constant tails.  For exact weight forms
        only finitely many values of ``P_j`` occur; generator forms are
        scanned and the result is then only a lower bound.
        """
        if v.ambient is not Ambient.UNILATERAL:
            raise DomainError("witnesses live in the unilateral space")
        explicit_end = max(
            self.n0 - 1,
            self.n + _support_end(self.target),
            _support_end(v),
            max((k for k, _ in self.overrides), default=0),
        )
        best = max(((self.coordinate(k) - v[k]).abs_sq() for k in range(1, explicit_end + 1)), default=Fraction(0))
        cy, cv = _tail(self.target), _tail(v)
        if not cy:
            if isinstance(v, TailConstantVector):
                best = max(best, cv.abs_sq())
            return best, True
        j0 = explicit_end - self.n
        normal = self.weights._periodic()
        if normal is not None:
            L = len(normal.prefix)
            offsets = range(j0, max(j0, L) + len(normal.period))
            exact = True
        else:
            offsets = range(j0, j0 + (default_horizon() if horizon is None else horizon) + 1)
            exact = False
        for j in offsets:
            best = max(best, (cy / _window_exact(self.weights, j, self.n) - cv).abs_sq())
        return best, exact

    def error_sq(self) -> tuple[Fraction, bool]:
        """Squared distance to the base vector."""
        return self.distance_sq_to(self.base)

    def to_dict(self, lo: int = 1, hi: int | None = None) -> dict:
        hi = self.n + max(_support_end(self.target), 1) + 2 if hi is None else hi
        err, exact = self.error_sq()
        return {
            "n": self.n,
            "n0": self.n0,
            "window": {"lo": lo, "hi": hi, "coordinates": [[k, *c.to_json()] for k, c in self.window(lo, hi)]},
            "distance_sq": rendered(err),
            "distance_exact": exact,
            "error_bound": None if self.error_bound_sq is None else rendered(self.error_bound_sq),
            "error_bound_is_squared": True,
            "error_bound_exact": self.bound_exact,
        }


def base_start(x: FiniteVector) -> int:
    """``n0 = 1 + max(support of x)``; positive weights make every later window usable."""
    return (x.max_index or 0) + 1


def build_witness(w: WeightSpec, x: FiniteVector, y: Vector, n: int) -> LazyWitness:
    """Vector within reach of ``x`` whose n-th shift image is exactly ``y``."""
    if w.ambient is not Ambient.UNILATERAL or x.ambient is not Ambient.UNILATERAL:
        raise DomainError("build_witness needs unilateral weights and vectors")
    if y.ambient is not Ambient.UNILATERAL:
        raise DomainError("target must be unilateral")
    if not isinstance(x, FiniteVector):
        raise UnsupportedRepresentationError("base vector must have finite support")
    n0 = base_start(x)
    if n < n0:
        raise DomainError(f"power n={n} is below n0={n0}")
    inf = inf_window_product(w, n)
    bound = sup_norm(y).value_sq / inf.exact**2
    return LazyWitness(w, x, y, n, n0, error_bound_sq=bound, bound_exact=inf.exactness is Exactness.EXACT)


@dataclass(frozen=True)
class VerifyResult:
    shift_identity_ok: bool
    distance_sq: Fraction
    distance_exact: bool
    mismatches: tuple = ()

    @property
    def distance(self) -> NormValue:
        return NormValue(self.distance_sq)


def _indices(check_window) -> range:
    if isinstance(check_window, range):
        return check_window
    lo, hi = check_window
    return range(lo, hi + 1)


def shifted_coordinate(z: LazyWitness, k: int) -> ComplexRational:
    """``(T^n z)_k`` evaluated from the witness's own coordinates."""
    return z.coordinate(k + z.n) * _window_exact(z.weights, k - 1, z.n)


def verify_witness(z: LazyWitness, check_window) -> VerifyResult:
    """Check ``(T^n z)_k == y_k`` on a window and measure ``||z - x||`` exactly."""
    bad = tuple(k for k in _indices(check_window) if shifted_coordinate(z, k) != z.target[k])
    dist, exact = z.error_sq()
    return VerifyResult(not bad, dist, exact, bad)


@dataclass(frozen=True)
class WitnessFamily:
    weights: WeightSpec
    base: FiniteVector
    target: Vector
    n_range: range
    witnesses: tuple
    errors_sq: tuple
    bounds_sq: tuple
    verified: tuple

    def rows(self) -> list[dict]:
        return [
            {"n": z.n, "error_sq": rendered(e), "bound_sq": rendered(b), "shift_identity_ok": ok}
            for z, e, b, ok in zip(self.witnesses, self.errors_sq, self.bounds_sq, self.verified)
        ]


def _require_certificate(w: WeightSpec) -> GrowthCertificate:
    if w.ambient is not Ambient.UNILATERAL:
        raise DomainError("mixing families need unilateral weights")
    cert = find_growth_certificate(w)
    if cert is None or not cert.exact:
        raise DomainError("no growth certificate: the criterion fails, witnesses do not converge")
    return cert


def mixing_family(w: WeightSpec, x: FiniteVector, y: Vector, n_from: int, n_to: int) -> WitnessFamily:
    """Witnesses for every power in ``[max(n_from, n0), n_to]``."""
    cert = _require_certificate(w)
    lo = max(n_from, base_start(x))
    powers = range(lo, n_to + 1)
    if not powers:
        raise DomainError(f"empty power range after clamping to n0={base_start(x)}")
    ysq = sup_norm(y).value_sq
    check = (1, _support_end(y) + 4)
    zs, errs, bounds, oks = [], [], [], []
    for n in powers:
        z = build_witness(w, x, y, n)
        res = verify_witness(z, check)
        zs.append(z)
        errs.append(res.distance_sq)
        bounds.append(ysq / lower_bound_at(cert, n) ** 2)
        oks.append(res.shift_identity_ok)
    return WitnessFamily(w, x, y, powers, tuple(zs), tuple(errs), tuple(bounds), tuple(oks))


@dataclass(frozen=True)
class C0Obstruction:
    n1: int
    violating_index: int
    bound_2eps: Fraction
    coordinate_abs_sq: Fraction

    def to_dict(self) -> dict:
        return {
            "n1": self.n1,
            "violating_index": self.violating_index,
            "bound_2eps": rendered(self.bound_2eps),
            "coordinate_abs_sq": rendered(self.coordinate_abs_sq),
        }


def c0_obstruction(w: WeightSpec, x: TailConstantVector, eps) -> C0Obstruction:
    """Exhibit why a vector with nonzero tail is not a J-vector.

    If ``||z - x|| < eps`` and ``||T^n z|| < eps`` with every length-n window
    product > 1, then ``|x_{n+j+1}| < 2 eps`` for all j.  From ``n1`` on the
    certificate guarantees such products, and here every tail coordinate
    has modulus ``|c| > 2 eps``, so 0 is not in J(x).
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError("eps must be positive")
    cert = _require_certificate(w)
    x = as_tail_constant(x)
    c_sq = x.tail_value.abs_sq()
    if c_sq <= 4 * eps * eps:
        raise InconclusiveParametersError(f"|c| <= 2*eps: tail modulus^2 {c_sq} vs (2 eps)^2 {4 * eps * eps}")
    n1 = first_index_above(cert, Fraction(1))
    k = max(n1 + 1, x.tail_start)
    return C0Obstruction(n1, k, 2 * eps, x[k].abs_sq())


class WitnessGenerator:
    """Supplies witnesses for one pair ``(x, y)`` on demand."""

    def __init__(self, w: WeightSpec, x: FiniteVector, y: Vector, max_power: int = 4096):
        self.w, self.x, self.y = w, x, y
        self.max_power = max_power
        self._cert = None

    def request(self, min_power: int, budget: Fraction) -> LazyWitness:
        """Smallest power >= min_power whose witness is strictly within ``budget``."""
        target = Fraction(budget) ** 2
        for n in range(max(min_power, base_start(self.x)), self.max_power + 1):
            z = build_witness(self.w, self.x, self.y, n)
            err, exact = z.error_sq()
            if exact and err < target:
                return z
        raise GeneratorRefusal(f"no witness within {budget} up to power {self.max_power}")

    def threshold(self, min_power: int, budget: Fraction) -> int:
        """Power from which every witness is within ``budget`` (needs a certificate)."""
        if self._cert is None:
            self._cert = _require_certificate(self.w)
        ysq = sup_norm(self.y).value_sq
        target = Fraction(budget) ** 2
        n = max(min_power, base_start(self.x))
        while ysq / lower_bound_at(self._cert, n) ** 2 >= target:
            n += 1
            if n > self.max_power:
                raise GeneratorRefusal(f"threshold for {budget} exceeds power {self.max_power}")
        return n


@dataclass(frozen=True)
class DiagonalStep:
    m: int
    k: int
    z: LazyWitness
    power: int
    dist_x_sq: Fraction
    dist_y_sq: Fraction


def diagonal_combine(
    pairs: Sequence | Callable,
    x: Vector,
    y: Vector,
    m_max: int,
    mode: str = "J",
    max_search: int = 100_000,
) -> Iterator[DiagonalStep]:
    """Turn memberships ``y_k in J(x_k)`` with ``x_k -> x``, ``y_k -> y`` into ``y in J(x)``.

    Step m picks the first pair index k (never going back) with both
    distances below 1/(2m), then asks that pair's generator for a witness
    within the remaining slack ``1/m - max(d(x_k, x), d(y_k, y))``.  In the
    J branch powers strictly increase; in the ``"mix"`` branch the power is
    a threshold from which every witness of the pair meets the budget.
    """
    if mode not in ("J", "mix"):
        raise DomainError("mode must be 'J' or 'mix'")
    get = pairs if callable(pairs) else (lambda i: pairs[i - 1])
    limit = max_search if callable(pairs) else len(pairs)
    k, last_power = 1, 0
    for m in range(1, m_max + 1):
        half_sq = Fraction(1, 4 * m * m)
        while True:
            if k > limit:
                raise DiagonalFailure(m, f"no pair within 1/(2m) among the first {limit}")
            xk, yk, gen = get(k)
            dx = distance_sup(xk, x).value_sq
            dy = distance_sup(yk, y).value_sq
            if dx < half_sq and dy < half_sq:
                break
            k += 1
        slack = Fraction(1, m) - _sqrt_upper(max(dx, dy))
        if slack <= 0:
            raise DiagonalFailure(m, "no slack left")
        try:
            if mode == "J":
                z = gen.request(last_power + 1, slack)
                power = z.n
            else:
                power = gen.threshold(last_power + 1, slack)
                z = gen.request(power, slack)
                if z.n != power:
                    raise GeneratorRefusal("threshold witness missing")
        except (GeneratorRefusal, DomainError) as exc:
            raise DiagonalFailure(m, str(exc)) from exc
        # the shift identity makes T^power z equal y_k exactly
        if not verify_witness(z, (1, _support_end(yk) + 2)).shift_identity_ok:
            raise DiagonalFailure(m, "shift identity failed")
        dzx, exact = z.distance_sq_to(x)
        target = Fraction(1, m * m)
        if not exact or dzx >= target or dy >= target:
            raise DiagonalFailure(m, "combined error not strictly below 1/m")
        yield DiagonalStep(m, k, z, power, dzx, dy)
        last_power = power


def _sqrt_upper(q: Fraction) -> Fraction:
    """A rational upper bound on sqrt(q), tight when q is a rational square."""
    r = exact_sqrt(q)
    if r is not None:
        return r
    scale = 10**12
    return Fraction(isqrt(q.numerator * scale * scale // q.denominator) + 1, scale)


@dataclass(frozen=True)
class BilateralObstruction:
    j: int
    bounds: tuple
    bound: Fraction
    contradiction_at: int | None
    x_abs_sq: Fraction

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "x_j_abs_sq": rendered(self.x_abs_sq),
            "bounds": [{"k": k, "bound": rendered(b)} for k, b in self.bounds],
            "contradiction_at": self.contradiction_at,
        }


def bilateral_obstruction(w: WeightSpec, x: FiniteVector, delta, eps, k: int, j: int | None = None) -> BilateralObstruction:
    """Bound ``|x_j| <= delta + eps / (alpha_{j-1} ... alpha_{j-k})``.

    It holds whenever some z is delta-close to x with ``||T^k z|| <= eps``;
    the first k where the bound drops below ``|x_j|`` shows 0 cannot be
    reached from that neighbourhood at power k.
    """
    if w.ambient is not Ambient.BILATERAL or x.ambient is not Ambient.BILATERAL:
        raise DomainError("bilateral_obstruction needs bilateral weights and vector")
    if not x:
        raise DomainError("x must be nonzero")
    if k < 1:
        raise DomainError("k must be >= 1")
    delta, eps = Fraction(delta), Fraction(eps)
    if j is None:
        j = max(x.entries, key=lambda e: (e[1].abs_sq(), -e[0]))[0]
    xsq = x[j].abs_sq()
    if not xsq:
        raise DomainError(f"x_{j} is zero")
    bounds = []
    hit = None
    for kk in range(1, k + 1):
        b = delta + eps / _window_exact(w, j - kk - 1, kk)
        bounds.append((kk, b))
        if hit is None and b * b < xsq:
            hit = kk
    return BilateralObstruction(j, tuple(bounds), bounds[-1][1], hit, xsq)
