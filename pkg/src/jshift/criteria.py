"""Deciding and certifying the growth criterion for backward shifts.

A unilateral backward weighted shift on l-infinity is J-class, and
equivalently J^mix-class, iff

    lim_n  inf_{j >= 0}  alpha_{j+1} ... alpha_{j+n}  =  +infinity.

The limit is never judged from a numerical trend.  A positive verdict is
backed by a ``GrowthCertificate`` (one window length N whose infimum M is
> 1; supermultiplicativity of the infimum then forces divergence), and a
negative one by explicit windows whose products stay bounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from jshift._rational import fmt, rendered
from jshift.errors import DomainError
from jshift.weights import (
    Ambient,
    BlockAlternating,
    EventuallyPeriodic,
    Exactness,
    TwoSidedEventuallyPeriodic,
    WeightSpec,
    default_horizon,
    inf_window_product,
    operator_norm,
    weight_at,
    window_product,
)


class Verdict(str, Enum):
    CERTIFIED_J_CLASS = "CertifiedJClass"
    CERTIFIED_NOT_J_CLASS = "CertifiedNotJClass"
    REFUTED_UP_TO_HORIZON = "RefutedUpToHorizon"
    UNDECIDED = "Undecided"

    @property
    def certified(self) -> bool:
        return self in (Verdict.CERTIFIED_J_CLASS, Verdict.CERTIFIED_NOT_J_CLASS)


class SalasVerdict(str, Enum):
    HYPERCYCLIC = "Hypercyclic"
    NOT_HYPERCYCLIC = "NotHypercyclic"
    UNDECIDED = "Undecided"


class J0Verdict(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class GrowthCertificate:
    """Window length ``N`` with ``inf_j prod_{i=1}^N alpha_{i+j} >= M > 1``.

    ``weight_floor = M / ||T||^(N-1)`` bounds every weight from below and
    ``floor_constant = min(weight_floor^(N-1), 1)`` absorbs the remainder
    when a longer window is cut into blocks of length N.  ``exact`` is False
    when M came from a horizon scan, in which case nothing is certified.
    """

    N: int
    M: Fraction
    norm: Fraction
    exact: bool = True
    weight_floor: Fraction = field(init=False)
    floor_constant: Fraction = field(init=False)

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("certificate window length must be >= 1")
        if not self.M > 1:
            raise DomainError(f"certificate needs M > 1, got {self.M}")
        floor = Fraction(self.M) / Fraction(self.norm) ** (self.N - 1)
        object.__setattr__(self, "weight_floor", floor)
        object.__setattr__(self, "floor_constant", min(floor ** (self.N - 1), Fraction(1)))

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "M": rendered(self.M),
            "norm": rendered(self.norm),
            "weight_floor": rendered(self.weight_floor),
            "floor_constant": rendered(self.floor_constant),
            "exact": self.exact,
        }


@dataclass(frozen=True)
class RefutationWindow:
    """``window_product(w, j, n) = product <= bound``."""

    n: int
    j: int
    product: Fraction
    bound: Fraction

    def to_dict(self) -> dict:
        return {"n": self.n, "j": self.j, "product": rendered(self.product), "bound": rendered(self.bound)}


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    certificate: GrowthCertificate | None = None
    refutation: tuple = ()
    notes: tuple = ()
    scan: tuple = ()
    candidate: GrowthCertificate | None = None

    def __post_init__(self):
        if (self.verdict is Verdict.CERTIFIED_J_CLASS) != (self.certificate is not None):
            raise DomainError("CertifiedJClass must carry a certificate and vice versa")
        if self.certificate is not None and not self.certificate.exact:
            raise DomainError("a scan-based certificate cannot certify anything")

    @property
    def is_j_class(self) -> bool:
        return self.verdict is Verdict.CERTIFIED_J_CLASS

    @property
    def is_jmix(self) -> bool:
        # J-class and J^mix-class coincide for backward shifts on l-infinity(N)
        return self.verdict is Verdict.CERTIFIED_J_CLASS

    def to_dict(self) -> dict:
        doc = {
            "verdict": self.verdict.value,
            "is_jmix": self.is_jmix,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
            "refutation": [r.to_dict() for r in self.refutation],
            "notes": list(self.notes),
        }
        if self.candidate is not None:
            doc["candidate"] = self.candidate.to_dict()
        if self.scan:
            doc["scan"] = [{"n": n, "min_product": rendered(p), "j": j} for n, p, j in self.scan]
        return doc


@dataclass(frozen=True)
class SalasResult:
    verdict: SalasVerdict
    evidence: dict

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "evidence": self.evidence}


@dataclass(frozen=True)
class J0Result:
    verdict: J0Verdict
    evidence: dict

    @property
    def holds(self) -> bool:
        return self.verdict is J0Verdict.HOLDS

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "evidence": self.evidence}


def _require_unilateral(w: WeightSpec, what: str):
    if w.ambient is not Ambient.UNILATERAL:
        raise DomainError(f"{what} needs unilateral weights")


def block_alternating_inf(w: BlockAlternating, n: int) -> Fraction:
    """Exact ``inf_j`` of length-n window products for the block pattern.

    Every weight is at least min(a, b) and runs of every length of both
    letters occur, so the infimum is min(a, b)^n and it is attained.
    """
    return w.inf**n


def _certificate_for(w: WeightSpec, N: int, M: Fraction, exact: bool) -> GrowthCertificate:
    return GrowthCertificate(N=N, M=M, norm=operator_norm(w), exact=exact)


def find_growth_certificate(
    w: WeightSpec, horizon_n: int | None = None, horizon_j: int | None = None
) -> GrowthCertificate | None:
    """Smallest window length N (up to ``horizon_n``) with infimum M > 1.

    Exact forms with no ``horizon_n`` are searched without bound when the
    period product exceeds 1 (termination is guaranteed) and return None
    immediately otherwise, since then every infimum is <= 1.
    """
    _require_unilateral(w, "find_growth_certificate")
    normal = w._periodic()
    if isinstance(w, BlockAlternating):
        if w.inf > 1:
            return _certificate_for(w, 1, w.inf, True)
        return None
    if normal is not None and horizon_n is None:
        if normal.period_product <= 1:
            return None
        N = 1
        while True:
            inf = inf_window_product(normal, N)
            if inf.exact > 1:
                return _certificate_for(w, N, inf.exact, True)
            N += 1
    limit = horizon_n if horizon_n is not None else default_horizon()
    for N in range(1, limit + 1):
        inf = inf_window_product(w, N, horizon_j)
        if inf.exact > 1:
            return _certificate_for(w, N, inf.exact, inf.exactness is Exactness.EXACT)
    return None


def lower_bound_at(cert: GrowthCertificate, n: int) -> Fraction:
    """``M^floor(n/N) * floor_constant``, a lower bound on the length-n infimum."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return cert.M ** (n // cert.N) * cert.floor_constant


def first_index_above(cert: GrowthCertificate, target: Fraction) -> int:
    """Least n with ``lower_bound_at(cert, n) > target``; the bound is nondecreasing."""
    n = 1
    while lower_bound_at(cert, n) <= target:
        n += cert.N
    while n > 1 and lower_bound_at(cert, n - 1) > target:
        n -= 1
    return n


def _periodic_refutation(normal: EventuallyPeriodic, count: int = 4) -> tuple:
    L, p, P = len(normal.prefix), len(normal.period), normal.period_product
    rows = []
    for k in range(1, count + 1):
        prod = window_product(normal, L, k * p).exact
        rows.append(RefutationWindow(n=k * p, j=L, product=prod, bound=Fraction(1)))
    return tuple(rows)


def _block_refutation(w: BlockAlternating, count: int = 6) -> tuple:
    letter = "a" if w.a <= w.b else "b"
    rows = []
    for n in range(1, count + 1):
        j = w.run_start(letter, n) - 1
        rows.append(RefutationWindow(n=n, j=j, product=window_product(w, j, n).exact, bound=Fraction(1)))
    return tuple(rows)


def classify_unilateral(w: WeightSpec, horizon_n: int | None = None, horizon_j: int | None = None) -> Classification:
    """J-class / J^mix-class verdict for a unilateral backward shift."""
    if w.ambient is not Ambient.UNILATERAL:
        raise DomainError("classify_unilateral needs unilateral weights; use classify_bilateral")
    normal = w._periodic()
    if normal is not None:
        P = normal.period_product
        if P > 1:
            cert = find_growth_certificate(w)
            return Classification(
                Verdict.CERTIFIED_J_CLASS,
                certificate=cert,
                notes=(
                    f"period product {fmt(P)} > 1",
                    f"inf of length-{cert.N} window products is {fmt(cert.M)} > 1; "
                    "supermultiplicativity gives divergence",
                ),
            )
        return Classification(
            Verdict.CERTIFIED_NOT_J_CLASS,
            refutation=_periodic_refutation(normal),
            notes=(
                f"period product {fmt(P)} <= 1",
                f"window at offset {len(normal.prefix)} of length k*{len(normal.period)} has product "
                f"({fmt(P)})^k <= 1 for every k, so the infimum does not tend to infinity",
            ),
        )
    if isinstance(w, BlockAlternating):
        m = w.inf
        if m > 1:
            return Classification(
                Verdict.CERTIFIED_J_CLASS,
                certificate=find_growth_certificate(w),
                notes=(f"every weight is >= {fmt(m)} > 1, so length-n products are >= ({fmt(m)})^n",),
            )
        letter = "a" if w.a <= w.b else "b"
        return Classification(
            Verdict.CERTIFIED_NOT_J_CLASS,
            refutation=_block_refutation(w),
            notes=(
                f"runs of n consecutive {letter}={fmt(m)} occur for every n, so inf_j of length-n "
                f"products is ({fmt(m)})^n <= 1" + (", which tends to 0" if m < 1 else ""),
            ),
        )
    return _classify_by_scan(w, horizon_n, horizon_j)


def _classify_by_scan(w, horizon_n, horizon_j) -> Classification:
    limit = horizon_n if horizon_n is not None else 32
    hj = horizon_j if horizon_j is not None else default_horizon()
    scan = []
    for N in range(1, limit + 1):
        inf = inf_window_product(w, N, hj)
        scan.append((N, inf.exact, inf.achieved_at))
    scan = tuple(scan)
    note = f"generator form: window products scanned for offsets 0..{hj}, lengths 1..{limit}"
    if any(p > 1 for _, p, _ in scan):
        N, p, _ = next(row for row in scan if row[1] > 1)
        cert = _certificate_for(w, N, p, False)
        return Classification(
            Verdict.UNDECIDED,
            candidate=cert,
            notes=(note, f"scan suggests N={N}, M={fmt(p)}, but a scan is not an infimum"),
            scan=scan,
        )
    refutation = tuple(RefutationWindow(n, j, p, Fraction(1)) for n, p, j in scan)
    return Classification(
        Verdict.REFUTED_UP_TO_HORIZON,
        refutation=refutation,
        notes=(note, "every scanned length has a window with product <= 1"),
        scan=scan,
    )


def classify_salas_lp(w: WeightSpec, horizon: int | None = None) -> SalasResult:
    """Hypercyclicity on l^p (1 <= p < infinity): are prefix products unbounded?"""
    _require_unilateral(w, "classify_salas_lp")
    normal = w._periodic()
    if normal is not None:
        L, p, P = len(normal.prefix), len(normal.period), normal.period_product
        base = window_product(normal, 0, L + p).exact
        if P > 1:
            return SalasResult(
                SalasVerdict.HYPERCYCLIC,
                {
                    "reason": f"period product {fmt(P)} > 1: prefix product at n = {L + p} + k*{p} "
                    f"is {fmt(base)} * ({fmt(P)})^k, unbounded",
                },
            )
        peak = max(window_product(normal, 0, n).exact for n in range(1, L + p + 1))
        return SalasResult(
            SalasVerdict.NOT_HYPERCYCLIC,
            {
                "reason": f"period product {fmt(P)} <= 1: prefix products never exceed their maximum "
                f"over the first {L + p} indices",
                "sup_prefix_product": rendered(peak),
            },
        )
    if isinstance(w, BlockAlternating):
        return _salas_block(w)
    hz = horizon if horizon is not None else default_horizon()
    best, at = None, None
    running = Fraction(1)
    for n in range(1, hz + 1):
        running *= w._raw_weight(n)
        if best is None or running > best:
            best, at = running, n
    return SalasResult(
        SalasVerdict.UNDECIDED,
        {"reason": f"generator form: prefix products scanned to n={hz}", "max_prefix_product": rendered(best), "at": at},
    )


def _salas_block(w: BlockAlternating) -> SalasResult:
    a, b = w.a, w.b
    ab = a * b
    # peak after the b-run of pair m: a * (ab)^(m(m-1)/2 - 1) * b^m
    peaks = []
    for m in range(2, 8):
        idx = (m - 1) * m + m - 1
        peaks.append({"index": idx, "prefix_product": rendered(window_product(w, 0, idx).exact)})
    if ab > 1 or (ab == 1 and b > 1):
        why = (
            f"a*b = {fmt(ab)} > 1: prefix products after each pair grow without bound"
            if ab > 1
            else f"a*b = 1 and b = {fmt(b)} > 1: the peak after the m-th b-run is b^(m-1), unbounded"
        )
        return SalasResult(SalasVerdict.HYPERCYCLIC, {"reason": why, "peaks": peaks})
    if ab == 1:
        why = f"a*b = 1 and b = {fmt(b)} <= 1: prefix products never exceed a = {fmt(a)}"
    else:
        why = f"a*b = {fmt(ab)} < 1: the quadratic exponent of a*b dominates, prefix products are bounded"
    return SalasResult(SalasVerdict.NOT_HYPERCYCLIC, {"reason": why, "peaks": peaks})


def classify_bilateral(w: WeightSpec) -> Classification:
    """Bilateral shifts on l-infinity(Z) are never J-class."""
    if w.ambient is not Ambient.BILATERAL:
        raise DomainError("classify_bilateral needs bilateral weights")
    notes = ["no backward bilateral weighted shift on l-infinity(Z) is J-class"]
    normal = w._periodic()
    if isinstance(normal, TwoSidedEventuallyPeriodic):
        right, left = normal.right_product > 1, normal.left_product > 1
        if right and left:
            notes.append(
                "both one-sided growth conditions hold; bilateral_obstruction exhibits, for any "
                "nonzero x, the bound |x_j| <= delta + eps / prod alpha_{j-i} that excludes 0 from J(x)"
            )
        else:
            notes.append("a one-sided growth condition already fails, so J-class is impossible")
    return Classification(Verdict.CERTIFIED_NOT_J_CLASS, notes=tuple(notes))


STEP_WEIGHT_FLAG = (
    "open question: J(0) = l-infinity(Z) is asserted for the step weight alpha_n = 2 (n >= 1), "
    "alpha_n = 1 (n <= 0), yet every window inside the all-ones left tail has product 1, so the "
    "two-sided growth condition fails under this shift convention; the condition is reported as evaluated"
)


def classify_j0(w: WeightSpec, horizon_n: int | None = None, horizon_j: int | None = None) -> J0Result:
    """Is J(0) the whole space?  Same limit condition, offsets over N or Z."""
    if w.ambient is Ambient.UNILATERAL:
        c = classify_unilateral(w, horizon_n, horizon_j)
        verdict = {
            Verdict.CERTIFIED_J_CLASS: J0Verdict.HOLDS,
            Verdict.CERTIFIED_NOT_J_CLASS: J0Verdict.FAILS,
        }.get(c.verdict, J0Verdict.UNDECIDED)
        return J0Result(verdict, {"reason": f"same condition as the J-class criterion ({c.verdict.value})"})
    normal = w._periodic()
    if not isinstance(normal, TwoSidedEventuallyPeriodic):
        return J0Result(J0Verdict.UNDECIDED, {"reason": "bilateral generator forms are not decidable"})
    lp, rp = normal.left_product, normal.right_product
    holds = lp > 1 and rp > 1
    minima = []
    for n in (1, 2, 4, 8, 16):
        inf = inf_window_product(normal, n)
        minima.append({"n": n, "inf_product": rendered(inf.exact), "j": inf.achieved_at})
    evidence = {
        "reason": f"left period product {fmt(lp)}, right period product {fmt(rp)}: long windows lie inside "
        "one tail, so the condition holds iff both exceed 1",
        "inf_window_products": minima,
    }
    if _is_step_weight(normal):
        evidence["flag"] = STEP_WEIGHT_FLAG
    return J0Result(J0Verdict.HOLDS if holds else J0Verdict.FAILS, evidence)


def _is_step_weight(normal: TwoSidedEventuallyPeriodic) -> bool:
    return (
        set(normal.left_period) == {Fraction(1)}
        and set(normal.right_period) == {Fraction(2)}
        and all(weight_at(normal, n) == (2 if n >= 1 else 1) for n in range(normal.lo - 2, normal.hi + 3))
    )


def classify(w: WeightSpec, horizon_n: int | None = None, horizon_j: int | None = None) -> Classification:
    if w.ambient is Ambient.BILATERAL:
        return classify_bilateral(w)
    return classify_unilateral(w, horizon_n, horizon_j)
