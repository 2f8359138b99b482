"""Command line front end: ``jshift classify|witness|probe|gallery``.

Exit codes: 0 certified / checks passed, 1 input error, 2 undecided or a
failed gallery expectation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from jshift import __version__
from jshift._rational import as_fraction, parse_range, rendered
from jshift.criteria import classify, classify_j0, classify_salas_lp
from jshift.errors import (
    DomainError,
    InconclusiveParametersError,
    SpecFormatError,
    UnsupportedRepresentationError,
)
from jshift.gallery import GALLERY, GalleryMismatch, render, run_all, run_item
from jshift.probe import ProbeQuery, probe_sweep
from jshift.vectors import Ambient, FiniteVector, TailConstantVector
from jshift.vectors import from_dict as vector_from_dict
from jshift.weights import WeightSpec
from jshift.weights import from_dict as weights_from_dict
from jshift.witness import build_witness, mixing_family, verify_witness

INPUT_ERRORS = (
    SpecFormatError,
    DomainError,
    InconclusiveParametersError,
    UnsupportedRepresentationError,
    OSError,
    KeyError,
    json.JSONDecodeError,
)


def load_weights(ref: str) -> WeightSpec:
    """A JSON weight-spec file, or ``gallery:NAME``."""
    if ref.startswith("gallery:"):
        name = ref.split(":", 1)[1]
        if name not in GALLERY:
            raise SpecFormatError(f"unknown gallery item {name!r}")
        return GALLERY[name].weights
    return weights_from_dict(json.loads(Path(ref).read_text(encoding="utf-8")))


def load_vector(ref: str | None, ambient: Ambient):
    """A JSON vector file, or ``vec:zero``, ``vec:e<k>``, ``vec:ones``, ``vec:const:<c>``."""
    if ref is None or ref == "vec:zero":
        return FiniteVector.zero(ambient)
    if ref.startswith("vec:"):
        body = ref[4:]
        if body.startswith("e"):
            try:
                return FiniteVector.basis(int(body[1:]), ambient)
            except ValueError as exc:
                raise SpecFormatError(f"bad basis vector {ref!r}") from exc
        if body == "ones":
            return TailConstantVector.constant(1, ambient)
        if body.startswith("const:"):
            return TailConstantVector.constant(as_fraction(body[6:]), ambient)
        raise SpecFormatError(f"unknown vector shorthand {ref!r}")
    v = vector_from_dict(json.loads(Path(ref).read_text(encoding="utf-8")))
    if v.ambient is not ambient:
        raise SpecFormatError(f"vector ambient {v.ambient.value} does not match weights {ambient.value}")
    return v


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def cmd_classify(args) -> int:
    w = load_weights(args.spec)
    c = classify(w, args.horizon_n, args.horizon_j)
    report = {"verdict": c.verdict.value}
    report.update({k: v for k, v in c.to_dict().items() if k != "verdict"})
    if w.ambient is Ambient.UNILATERAL:
        report["salas"] = classify_salas_lp(w, args.horizon_j).to_dict()
    report["j0"] = classify_j0(w, args.horizon_n, args.horizon_j).to_dict()
    report["tool_version"] = __version__
    _emit(_dump(report), args.json)
    return 0 if c.verdict.certified else 2


def cmd_witness(args) -> int:
    w = load_weights(args.spec)
    x = load_vector(args.x, w.ambient)
    y = load_vector(args.y, w.ambient)
    if not isinstance(x, FiniteVector):
        raise UnsupportedRepresentationError("--x must have finite support")
    if args.range:
        lo, hi = parse_range(args.range)
        fam = mixing_family(w, x, y, lo, hi)
        doc = {"kind": "mixing_family", "n_range": [fam.n_range.start, fam.n_range.stop - 1], "rows": fam.rows()}
        ok = all(fam.verified)
    else:
        if args.n is None:
            raise SpecFormatError("give --n or --range")
        z = build_witness(w, x, y, args.n)
        window = parse_range(args.verify_window) if args.verify_window else (1, args.n + 20)
        res = verify_witness(z, window)
        doc = z.to_dict()
        doc["verification"] = {
            "window": list(window),
            "shift_identity_ok": res.shift_identity_ok,
            "distance_sq": rendered(res.distance_sq),
        }
        ok = res.shift_identity_ok
    doc["tool_version"] = __version__
    _emit(_dump(doc), args.json)
    return 0 if ok else 2


def cmd_probe(args) -> int:
    w = load_weights(args.spec)
    x = load_vector(args.x, w.ambient)
    y = load_vector(args.y, w.ambient)
    q = ProbeQuery(
        w,
        x,
        y,
        delta=as_fraction(args.delta),
        window=parse_range(args.window),
        n_range=parse_range(args.n_range),
        mode="preimage" if args.mode == "min-preimage" else "error",
        tol=as_fraction(args.tol),
    )
    report = probe_sweep(q, threads=args.threads)
    if args.json:
        Path(args.json).write_text(report.to_json(), encoding="utf-8")
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
    if not args.json and not args.csv:
        sys.stdout.write(report.to_csv())
    return 0


def cmd_gallery(args) -> int:
    if args.all == bool(args.name):
        raise SpecFormatError("give one gallery item name or --all")
    try:
        reports = run_all(args.threads) if args.all else [run_item(args.name)]
    except GalleryMismatch as exc:
        print(f"gallery check failed: {exc}", file=sys.stderr)
        return 2
    _emit(render(reports), args.json)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jshift", description="Exact J-class analysis of weighted backward shifts.")
    p.add_argument("--version", action="version", version=f"jshift {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="decide the J-class / J^mix criterion")
    c.add_argument("--spec", required=True, help="weight spec JSON file or gallery:NAME")
    c.add_argument("--horizon-n", type=int, default=None)
    c.add_argument("--horizon-j", type=int, default=None)
    c.add_argument("--json", help="write the report here instead of stdout")
    c.set_defaults(func=cmd_classify)

    wt = sub.add_parser("witness", help="build and verify approximating vectors")
    wt.add_argument("--spec", required=True)
    wt.add_argument("--x", help="base vector (default: zero)")
    wt.add_argument("--y", required=True, help="target vector")
    g = wt.add_mutually_exclusive_group()
    g.add_argument("--n", type=int)
    g.add_argument("--range", help="a..b: one witness per power")
    wt.add_argument("--verify-window", help="a..b (default 1..n+20)")
    wt.add_argument("--json")
    wt.set_defaults(func=cmd_witness)

    pr = sub.add_parser("probe", help="finite-window lower bounds on approximation error")
    pr.add_argument("--spec", required=True)
    pr.add_argument("--x")
    pr.add_argument("--y", required=True)
    pr.add_argument("--delta", default="0")
    pr.add_argument("--window", required=True, help="a..b")
    pr.add_argument("--n-range", required=True, help="a..b")
    pr.add_argument("--mode", choices=["error", "min-preimage"], default="error")
    pr.add_argument("--tol", default="0")
    pr.add_argument("--threads", type=int, default=1)
    pr.add_argument("--csv")
    pr.add_argument("--json")
    pr.set_defaults(func=cmd_probe)

    ga = sub.add_parser("gallery", help="run the reference examples")
    ga.add_argument("name", nargs="?")
    ga.add_argument("--all", action="store_true")
    ga.add_argument("--threads", type=int, default=1)
    ga.add_argument("--json")
    ga.set_defaults(func=cmd_gallery)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 is reserved for undecided here
        return 1 if exc.code else 0
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
