"""Reference examples, each run end to end with its expected outcome asserted."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from jshift import __version__
from jshift._rational import fmt, rendered
from jshift.criteria import (
    classify,
    classify_j0,
    classify_salas_lp,
    find_growth_certificate,
    lower_bound_at,
)
from jshift.probe import min_preimage_norm
from jshift.vectors import FiniteVector, TailConstantVector, apply_shift, l2_norm_sq
from jshift.weights import (
    Ambient,
    BlockAlternating,
    Constant,
    EventuallyPeriodic,
    TwoSidedEventuallyPeriodic,
    WeightSpec,
    inf_window_product,
)
from jshift.witness import bilateral_obstruction, build_witness, verify_witness


class GalleryMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class GalleryItem:
    name: str
    weights: WeightSpec
    expected: dict
    source: str
    demo: Callable[[WeightSpec, list], dict]


def _check(checks: list, label: str, ok: bool) -> None:
    checks.append({"check": label, "ok": bool(ok)})


def _demo_const2(w, checks):
    cert = find_growth_certificate(w)
    z = build_witness(w, FiniteVector.zero(), FiniteVector.basis(1), 3)
    res = verify_witness(z, (1, 20))
    _check(checks, "certificate N=1, M=2", cert.N == 1 and cert.M == 2)
    _check(checks, "witness for e1 at n=3 has T^3 z = e1", res.shift_identity_ok)
    _check(checks, "witness distance is 1/8", res.distance_sq == Fraction(1, 64))
    return {"certificate": cert.to_dict(), "witness": z.to_dict(1, 6)}


def _demo_const1(w, checks):
    inf = inf_window_product(w, 8)
    _check(checks, "every window product equals 1", inf.exact == 1)
    return {"inf_window_product_8": rendered(inf.exact)}


def _demo_counterexample(w, checks):
    rows, ok = [], True
    for n in range(1, 21):
        inf = inf_window_product(w, n, 4 * n * n)
        ok &= inf.exact <= Fraction(1, 2**n)
        rows.append({"n": n, "upper_bound": rendered(inf.exact), "j": inf.achieved_at, "exactness": inf.exactness.value})
    _check(checks, "inf_j window product <= 2^-n for n = 1..20", ok)
    return {"inf_window_products": rows}


def _demo_bilateral_const2(w, checks):
    ob = bilateral_obstruction(w, FiniteVector.basis(0, Ambient.BILATERAL), Fraction(1, 10), Fraction(1, 10), 6)
    _check(checks, "obstruction contradiction at k*=1", ob.contradiction_at == 1)
    return {"obstruction": ob.to_dict()}


def _demo_bilateral_step(w, checks):
    y = TailConstantVector.constant(1, Ambient.BILATERAL)
    rows = []
    for n in range(1, 17):
        v = min_preimage_norm(w, y, n, (-8, 8), Fraction(1, 100))
        rows.append({"n": n, "min_preimage_norm": v.text(), "argmin_k": v.argmin_k})
    leftmost_ones = [r for r in rows if r["n"] <= 9]
    _check(
        checks,
        "min preimage norm is 99/100 while the window still reaches the all-ones tail (n <= 9)",
        all(r["min_preimage_norm"] == "99/100" for r in leftmost_ones),
    )
    ob = bilateral_obstruction(w, FiniteVector.basis(0, Ambient.BILATERAL), Fraction(1, 10), Fraction(1, 10), 6)
    _check(checks, "obstruction bound equals delta+eps for every k", all(b == Fraction(1, 5) for _, b in ob.bounds))
    return {"probe_min_preimage_norm": rows, "obstruction": ob.to_dict()}


def _demo_periodic(w, checks):
    cert = find_growth_certificate(w)
    _check(checks, "certificate N=2, M=2", cert.N == 2 and cert.M == 2)
    ok = all(lower_bound_at(cert, n) <= inf_window_product(w, n).exact for n in range(1, 33))
    _check(checks, "lower_bound_at(n) <= inf window product for n <= 32", ok)
    return {"certificate": cert.to_dict()}


def _demo_direct_sum(w, checks):
    # C (+) l2(N) with the operator 3I (+) 2B; base 0 (+) x, target lam (+) y
    lam = Fraction(1)
    x = FiniteVector.basis(1)
    y = FiniteVector.basis(1)
    rows, ok_norm, ok_image = [], True, True
    y_l2 = l2_norm_sq(y)
    for n in range(1, 13):
        preimage = FiniteVector(Ambient.UNILATERAL, [(k + n, v / Fraction(2) ** n) for k, v in y.entries])
        second = x + preimage
        first = lam / Fraction(3) ** n
        # (3I (+) 2B)^n acts componentwise
        image_first = first * 3**n
        image_second = apply_shift(w, second, n)
        ok_image &= image_first == lam and image_second == y + apply_shift(w, x, n)
        ok_image &= not apply_shift(w, x, n)
        gap_first = abs(first)
        gap_second_sq = l2_norm_sq(second - x)
        ok_norm &= gap_first == abs(lam) / Fraction(3) ** n and gap_second_sq == y_l2 / Fraction(4) ** n
        rows.append({"n": n, "scalar_gap": fmt(gap_first), "l2_gap_sq": fmt(gap_second_sq)})
    _check(checks, "(3I+2B)^n v_n = lam + y exactly", ok_image)
    _check(checks, "||v_n - (0+x)|| components are |lam|/3^n and 2^-n ||y||", ok_norm)
    return {"lambda": fmt(lam), "rows": rows}


GALLERY = {
    item.name: item
    for item in [
        GalleryItem(
            "const-2",
            Constant(2),
            {"classification": "CertifiedJClass", "salas": "Hypercyclic", "j0": "Holds"},
            "2B on l-infinity(N) is a J^mix-class operator",
            _demo_const2,
        ),
        GalleryItem(
            "const-1",
            Constant(1),
            {"classification": "CertifiedNotJClass", "salas": "NotHypercyclic", "j0": "Fails"},
            "the unweighted backward shift: all window products equal 1",
            _demo_const1,
        ),
        GalleryItem(
            "paper-counterexample",
            BlockAlternating(Fraction(1, 2), Fraction(2)),
            {"classification": "CertifiedNotJClass", "salas": "Hypercyclic", "j0": "Fails"},
            "block weights 1/2,2,2,1/2,1/2,...: hypercyclic on l^p but not J-class on l-infinity",
            _demo_counterexample,
        ),
        GalleryItem(
            "bilateral-const-2",
            Constant(2, Ambient.BILATERAL),
            {"classification": "CertifiedNotJClass", "j0": "Holds"},
            "no bilateral shift on l-infinity(Z) is J-class, even when J(0) is everything",
            _demo_bilateral_const2,
        ),
        GalleryItem(
            "bilateral-step",
            TwoSidedEventuallyPeriodic((), (Fraction(1),), (Fraction(2),), middle_start=1),
            {"classification": "CertifiedNotJClass", "j0": "Fails"},
            "step weight 2 on n >= 1 and 1 on n <= 0; J(0) claim flagged as an open question",
            _demo_bilateral_step,
        ),
        GalleryItem(
            "periodic-4-half",
            EventuallyPeriodic((), (Fraction(4), Fraction(1, 2))),
            {"classification": "CertifiedJClass", "salas": "Hypercyclic", "j0": "Holds"},
            "period (4, 1/2): every window of length 2 has product 2",
            _demo_periodic,
        ),
        GalleryItem(
            "direct-sum-3I-2B",
            Constant(2),
            {"classification": "CertifiedJClass"},
            "3I + 2B on C + l2(N) is J^mix-class without being hypercyclic",
            _demo_direct_sum,
        ),
    ]
}


def run_item(name: str) -> dict:
    """Run one gallery example; raises ``GalleryMismatch`` if any expectation fails."""
    try:
        item = GALLERY[name]
    except KeyError:
        raise KeyError(f"unknown gallery item {name!r}; known: {', '.join(GALLERY)}") from None
    w = item.weights
    checks: list = []
    report = {"name": item.name, "source": item.source, "weights": w.to_dict()}
    c = classify(w)
    report["classification"] = c.to_dict()
    _check(checks, f"classification is {item.expected['classification']}", c.verdict.value == item.expected["classification"])
    _check(checks, "is_jmix equals the J-class flag", c.is_jmix == c.is_j_class)
    if w.ambient is Ambient.UNILATERAL:
        s = classify_salas_lp(w)
        report["salas"] = s.to_dict()
        if "salas" in item.expected:
            _check(checks, f"l^p hypercyclicity is {item.expected['salas']}", s.verdict.value == item.expected["salas"])
    j0 = classify_j0(w)
    report["j0"] = j0.to_dict()
    if "j0" in item.expected:
        _check(checks, f"J(0) condition {item.expected['j0']}", j0.verdict.value == item.expected["j0"])
    report["demo"] = item.demo(w, checks)
    report["checks"] = checks
    report["ok"] = all(ch["ok"] for ch in checks)
    report["tool_version"] = __version__
    if not report["ok"]:
        failed = [ch["check"] for ch in checks if not ch["ok"]]
        raise GalleryMismatch(f"{name}: failed checks {failed}")
    return report


def run_all(threads: int = 1) -> list[dict]:
    names = list(GALLERY)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run_item, names))
    return [run_item(n) for n in names]


def render(reports) -> str:
    return json.dumps(reports, indent=2, ensure_ascii=True) + "\n"
