"""Command-line front end: validate / solve / sharp / estimate.

Instance files are JSON documents:

    {
      "n": 2,
      "metric": {"matrix": [[0, 1], [1, 0]]},          # or "pre_metric"
      "sets": {"halfplanes": [{"h": [1, 0], "alpha": 0.0}, ...]}
                                                        # or "polygons"
    }

Numeric values may be JSON numbers or the strings "inf", "-inf", a decimal
like "0.1", or a ratio like "1/3"; string forms are parsed exactly and the
`sharp`/`estimate` commands keep them as rationals.  A "pre_metric" is closed
to its shortest-path pseudometric before solving.

Result documents are emitted with 17 significant digits and fixed key order,
so a fixed seed reproduces byte-identical output.  Exit codes: 0 success /
feasible / valid, 1 no-go / infeasible / failed verification, 2 parse or flag
errors (including oracle caps), 3 metric axiom violations, 4 infeasible upper
end in `estimate`.

`validate` re-checks the full triangle inequality (O(n^3)); `solve` trusts it
and checks only shape, diagonal, and symmetry, keeping the solve path at the
solver's own quadratic growth.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Tuple

from lipsel.geometry import ExtRect, HalfPlane, Point2, dist_to_halfplane, halfplane
from lipsel.metric import (
    MetricViolation,
    PreMetric,
    PseudometricSpace,
    intrinsic_metric,
    validate_premetric,
    validate_pseudometric,
)
from lipsel.oracle import (
    FmFeasible,
    FmInfeasible,
    build_sharp_lp,
    build_sharp_lp_polygon,
    estimate_min_seminorm,
    fm_feasible,
)
from lipsel.polygon import PolygonInstance, solve_polygon
from lipsel.selection import (
    VERIFY_TOL,
    HalfPlaneInstance,
    NoGo,
    Success,
    lipschitz_seminorm,
    run_projection_algorithm,
    verify_selection,
)

SHARP_POINT_CAP = 8


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------------------
# numbers and serialization


def _parse_number(
    tok: Any, what: str, allow_inf: bool, want_exact: bool
) -> Tuple[float, Optional[Fraction]]:
    """(float value, exact rational or None).  The rational is only materialized
    when `want_exact` (and the value is finite)."""
    if isinstance(tok, bool):
        raise CliError(2, f"{what}: expected a number, got a boolean")
    if isinstance(tok, (int, float)):
        val = float(tok)
        if math.isnan(val):
            raise CliError(2, f"{what}: NaN is not allowed")
        if math.isinf(val):
            if not allow_inf:
                raise CliError(2, f"{what}: must be finite")
            return val, None
        return val, (Fraction(tok) if want_exact else None)
    if isinstance(tok, str):
        s = tok.strip()
        if s in ("inf", "+inf"):
            if not allow_inf:
                raise CliError(2, f"{what}: must be finite")
            return math.inf, None
        if s == "-inf":
            if not allow_inf:
                raise CliError(2, f"{what}: must be finite")
            return -math.inf, None
        try:
            fr = Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise CliError(2, f"{what}: cannot parse number {tok!r}")
        return float(fr), (fr if want_exact else None)
    raise CliError(2, f"{what}: expected a number, got {type(tok).__name__}")


def _fmt_float(x: float) -> str:
    if x == math.inf:
        return '"inf"'
    if x == -math.inf:
        return '"-inf"'
    return format(x, ".17g")


def emit(obj: Any) -> str:
    """Deterministic JSON text: dict order preserved, floats at 17 significant
    digits, infinities as quoted sentinels, Fractions as 'p/q' strings."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Point2):
        return emit([obj.x1, obj.x2])
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(emit(v) for v in obj) + "]"
    if isinstance(obj, dict):
        parts = [f"{json.dumps(str(k))}: {emit(v)}" for k, v in obj.items()]
        return "{" + ", ".join(parts) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _rect_doc(r: ExtRect) -> dict:
    return {"x": [r.ix.lo, r.ix.hi], "y": [r.iy.lo, r.iy.hi]}


# ---------------------------------------------------------------------------
# instance loading


@dataclass
class LoadedInstance:
    n: int
    metric_kind: str  # "matrix" | "pre_metric"
    kind: str  # "halfplanes" | "polygons"
    space: Optional[PseudometricSpace]  # float; closed when pre_metric; None on violation
    hp: Optional[HalfPlaneInstance]
    poly: Optional[PolygonInstance]
    exact_hp: Optional[HalfPlaneInstance]  # Fraction-valued twins for the oracle
    exact_poly: Optional[PolygonInstance]
    violation: Optional[MetricViolation]


def _expect_dict(obj: Any, what: str) -> dict:
    if not isinstance(obj, dict):
        raise CliError(2, f"{what} must be an object")
    return obj


def _exactly_one(d: dict, keys: Tuple[str, str], what: str) -> str:
    present = [k for k in keys if k in d]
    if len(present) != 1:
        raise CliError(2, f"{what} must contain exactly one of {keys}")
    return present[0]


def _parse_matrix(
    raw: Any, n: int, what: str, want_exact: bool
) -> Tuple[List[List[float]], List[List[Any]]]:
    if not isinstance(raw, list) or len(raw) != n:
        raise CliError(2, f"{what} must be an {n}x{n} array")
    floats: List[List[float]] = []
    exacts: List[List[Any]] = []
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != n:
            raise CliError(2, f"{what} row {i} must have {n} entries")
        frow: List[float] = []
        erow: List[Any] = []
        for j, tok in enumerate(row):
            val, fr = _parse_number(tok, f"{what}[{i}][{j}]", True, want_exact)
            frow.append(val)
            if want_exact:
                erow.append(val if fr is None else fr)
        floats.append(frow)
        exacts.append(erow)
    return floats, exacts


def _parse_halfplane(raw: Any, what: str, want_exact: bool) -> Tuple[HalfPlane, Optional[HalfPlane]]:
    d = _expect_dict(raw, what)
    if set(d.keys()) != {"h", "alpha"}:
        raise CliError(2, f"{what} must have exactly the keys 'h' and 'alpha'")
    h = d["h"]
    if not isinstance(h, list) or len(h) != 2:
        raise CliError(2, f"{what}.h must be a pair")
    h1, e1 = _parse_number(h[0], f"{what}.h[0]", False, want_exact)
    h2, e2 = _parse_number(h[1], f"{what}.h[1]", False, want_exact)
    al, ea = _parse_number(d["alpha"], f"{what}.alpha", False, want_exact)
    try:
        hp = halfplane(h1, h2, al)
    except ValueError as exc:
        raise CliError(2, f"{what}: {exc}")
    exact = HalfPlane(Point2(e1, e2), ea) if want_exact else None
    return hp, exact


def load_instance(path: str, *, want_exact: bool = False, full_triangle: bool = True) -> LoadedInstance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise CliError(2, f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise CliError(2, f"{path} is not valid JSON: {exc}")
    doc = _expect_dict(raw, "instance document")
    if "n" not in doc or not isinstance(doc["n"], int) or isinstance(doc["n"], bool):
        raise CliError(2, "field 'n' must be an integer")
    n = doc["n"]
    if n < 1:
        raise CliError(2, "'n' must be >= 1")

    metric = _expect_dict(doc.get("metric"), "'metric'")
    metric_kind = _exactly_one(metric, ("matrix", "pre_metric"), "'metric'")
    try:
        floats, exacts = _parse_matrix(metric[metric_kind], n, f"metric.{metric_kind}", want_exact)
    except ValueError as exc:  # NaN / negative guards inside validators
        raise CliError(2, str(exc))

    violation: Optional[MetricViolation] = None
    space: Optional[PseudometricSpace] = None
    exact_space: Optional[PseudometricSpace] = None
    try:
        if metric_kind == "matrix":
            got = validate_pseudometric(floats) if full_triangle else validate_premetric(floats)
            if isinstance(got, MetricViolation):
                violation = got
            else:
                space = PseudometricSpace(n, floats)
                if want_exact:
                    exact_space = PseudometricSpace(n, exacts)
        else:
            pre = validate_premetric(floats)
            if isinstance(pre, MetricViolation):
                violation = pre
            else:
                space = intrinsic_metric(PreMetric(n, floats))
                if want_exact:
                    exact_space = intrinsic_metric(PreMetric(n, exacts))
    except ValueError as exc:
        raise CliError(2, str(exc))

    sets = _expect_dict(doc.get("sets"), "'sets'")
    kind = _exactly_one(sets, ("halfplanes", "polygons"), "'sets'")
    hp_inst = poly_inst = exact_hp = exact_poly = None
    if kind == "halfplanes":
        arr = sets["halfplanes"]
        if not isinstance(arr, list) or len(arr) != n:
            raise CliError(2, f"sets.halfplanes must list {n} half-planes")
        planes, eplanes = [], []
        for i, item in enumerate(arr):
            hp, ehp = _parse_halfplane(item, f"halfplanes[{i}]", want_exact)
            planes.append(hp)
            eplanes.append(ehp)
        if violation is None:
            assert space is not None
            hp_inst = HalfPlaneInstance(space, planes)
            if want_exact:
                assert exact_space is not None
                exact_hp = HalfPlaneInstance(exact_space, eplanes)
    else:
        arr = sets["polygons"]
        if not isinstance(arr, list) or len(arr) != n:
            raise CliError(2, f"sets.polygons must list {n} polygons")
        polys, epolys = [], []
        for i, poly in enumerate(arr):
            if not isinstance(poly, list) or not poly:
                raise CliError(2, f"polygons[{i}] must be a nonempty list")
            ps, eps = [], []
            for j, item in enumerate(poly):
                hp, ehp = _parse_halfplane(item, f"polygons[{i}][{j}]", want_exact)
                ps.append(hp)
                eps.append(ehp)
            polys.append(ps)
            epolys.append(eps)
        if violation is None:
            assert space is not None
            poly_inst = PolygonInstance(space, polys)
            if want_exact:
                assert exact_space is not None
                exact_poly = PolygonInstance(exact_space, epolys)

    return LoadedInstance(
        n=n,
        metric_kind=metric_kind,
        kind=kind,
        space=space,
        hp=hp_inst,
        poly=poly_inst,
        exact_hp=exact_hp,
        exact_poly=exact_poly,
        violation=violation,
    )


def _raise_on_violation(inst: LoadedInstance) -> None:
    if inst.violation is not None:
        v = inst.violation
        raise CliError(3, f"metric axiom '{v.axiom}' violated at ({v.i}, {v.j}, {v.k})")


# ---------------------------------------------------------------------------
# commands


def _verify_result(inst: LoadedInstance, result_path: str) -> int:
    """Re-check a solver result document against the instance (round-trip)."""
    try:
        with open(result_path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(2, f"cannot read result file: {exc}")
    doc = _expect_dict(doc, "result document")
    if doc.get("outcome") != "success":
        raise CliError(2, "result file does not record a success outcome")
    raw_f = doc.get("f")
    if not isinstance(raw_f, list) or len(raw_f) != inst.n:
        raise CliError(2, f"result field 'f' must list {inst.n} points")
    f: List[Point2] = []
    for i, pair in enumerate(raw_f):
        if not isinstance(pair, list) or len(pair) != 2:
            raise CliError(2, f"f[{i}] must be a two-number pair")
        x, _ = _parse_number(pair[0], f"f[{i}][0]", False, False)
        y, _ = _parse_number(pair[1], f"f[{i}][1]", False, False)
        f.append(Point2(x, y))
    bound, _ = _parse_number(doc.get("bound"), "result field 'bound'", False, False)

    assert inst.space is not None
    if inst.kind == "halfplanes":
        assert inst.hp is not None
        report = verify_selection(inst.hp, f, bound)
        if not report.ok:
            print(emit({"verified": False, "reason": report.reason, "index": report.index}))
            return 1
        print(emit({"verified": True, "seminorm": report.seminorm, "bound": bound}))
        return 0
    assert inst.poly is not None
    for i, poly in enumerate(inst.poly.polygons):
        for hp in poly:
            if dist_to_halfplane(f[i], hp) > VERIFY_TOL:
                print(emit({"verified": False, "reason": "membership", "index": i}))
                return 1
    seminorm = lipschitz_seminorm(f, inst.space)
    if seminorm > bound + VERIFY_TOL:
        print(emit({"verified": False, "reason": "seminorm", "index": None}))
        return 1
    print(emit({"verified": True, "seminorm": seminorm, "bound": bound}))
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    inst = load_instance(args.file, want_exact=False, full_triangle=True)
    if inst.violation is not None:
        v = inst.violation
        print(emit({"valid": False, "axiom": v.axiom, "i": v.i, "j": v.j, "k": v.k}))
        return 3
    if args.result is not None:
        return _verify_result(inst, args.result)
    print(emit({"valid": True, "n": inst.n, "metric": inst.metric_kind, "sets": inst.kind}))
    return 0


def _parse_cli_number(text: str, what: str) -> float:
    val, _ = _parse_number(text, what, False, False)
    return val


def cmd_solve(args: argparse.Namespace) -> int:
    if args.lam is not None:
        if args.lambda1 is not None or args.lambda2 is not None:
            raise CliError(2, "--lambda excludes --lambda1/--lambda2")
        l1 = l2 = _parse_cli_number(args.lam, "--lambda")
        if l1 <= 0:
            raise CliError(2, "--lambda must be > 0")
    else:
        if args.lambda1 is None or args.lambda2 is None:
            raise CliError(2, "need --lambda, or both --lambda1 and --lambda2")
        l1 = _parse_cli_number(args.lambda1, "--lambda1")
        l2 = _parse_cli_number(args.lambda2, "--lambda2")
        if l1 < 0 or l2 < 0:
            raise CliError(2, "lambda parameters must be >= 0")

    inst = load_instance(args.file, want_exact=False, full_triangle=False)
    _raise_on_violation(inst)

    trace = args.trace

    def note(msg: str) -> None:
        if trace:
            print(msg, file=sys.stderr)

    if inst.kind == "polygons":
        if args.lam is None:
            raise CliError(2, "polygon instances take a single --lambda")
        note(f"solving polygon instance, n={inst.n}, lambda={l1}")
        assert inst.poly is not None
        outcome = solve_polygon(inst.poly, l1, seed=args.seed)
        bound = 3.0 * l1
    else:
        note(f"solving half-plane instance, n={inst.n}, lambda=({l1}, {l2})")
        assert inst.hp is not None
        outcome = run_projection_algorithm(inst.hp, (l1, l2), seed=args.seed)
        bound = l1 + 2.0 * l2

    if isinstance(outcome, NoGo):
        note(f"stopped at stage {outcome.stage}, witness point {outcome.witness}")
        print(emit({"outcome": "no_go", "stage": outcome.stage, "witness": outcome.witness}))
        return 1

    assert isinstance(outcome, Success)
    note("stages 1-5 complete, selection verified")
    assert inst.space is not None
    seminorm = lipschitz_seminorm(outcome.f, inst.space)
    doc: dict = {
        "outcome": "success",
        "f": [[p.x1, p.x2] for p in outcome.f],
        "seminorm": seminorm,
        "bound": bound,
    }
    if trace:
        doc["diagnostics"] = {
            "g": [[p.x1, p.x2] for p in outcome.g],
            "hulls": [_rect_doc(r) for r in outcome.hulls],
            "refined": [_rect_doc(r) for r in outcome.refined],
        }
    print(emit(doc))
    return 0


def _exact_for_sharp(args: argparse.Namespace):
    inst = load_instance(args.file, want_exact=True, full_triangle=True)
    _raise_on_violation(inst)
    if inst.n > SHARP_POINT_CAP:
        raise CliError(2, f"oracle commands are capped at {SHARP_POINT_CAP} points")
    if inst.kind == "polygons":
        assert inst.exact_poly is not None
        return inst.exact_poly
    assert inst.exact_hp is not None
    return inst.exact_hp


def cmd_sharp(args: argparse.Namespace) -> int:
    lam_f, lam_fr = _parse_number(args.lam, "--lambda", False, True)
    lam = lam_fr if lam_fr is not None else Fraction(lam_f)
    if lam < 0:
        raise CliError(2, "--lambda must be >= 0")
    exact = _exact_for_sharp(args)
    if isinstance(exact, PolygonInstance):
        system = build_sharp_lp_polygon(exact, lam)
    else:
        system = build_sharp_lp(exact, lam)
    got = fm_feasible(system)
    if isinstance(got, FmInfeasible):
        print(emit({"verdict": "infeasible", "lambda": lam}))
        return 1
    assert isinstance(got, FmFeasible)
    witness = {name: got.witness[i] for i, name in enumerate(system.var_names)}
    print(emit({"verdict": "feasible", "lambda": lam, "witness": witness}))
    return 0


def cmd_estimate(args: argparse.Namespace) -> int:
    lo_f, lo_fr = _parse_number(args.lo, "--lo", False, True)
    hi_f, hi_fr = _parse_number(args.hi, "--hi", False, True)
    lo = lo_fr if lo_fr is not None else Fraction(lo_f)
    hi = hi_fr if hi_fr is not None else Fraction(hi_f)
    if not lo < hi:
        raise CliError(2, "need --lo < --hi")
    if args.iters < 0:
        raise CliError(2, "--iters must be >= 0")
    exact = _exact_for_sharp(args)
    if isinstance(exact, PolygonInstance):
        raise CliError(2, "estimate currently handles half-plane instances only")
    try:
        a, b = estimate_min_seminorm(exact, lo, hi, args.iters)
    except ValueError as exc:
        if "hi must be feasible" in str(exc):
            raise CliError(4, "--hi is infeasible; raise it")
        raise CliError(2, str(exc))
    print(emit({"lo": a, "hi": b, "width": b - a, "lo_float": float(a), "hi_float": float(b)}))
    return 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lipsel",
        description="Lipschitz selections of half-plane and polygon valued maps in the plane",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("validate", help="parse an instance file and check the metric axioms")
    pv.add_argument("file")
    pv.add_argument("--result", default=None, help="also re-verify a solver result document")
    pv.set_defaults(func=cmd_validate)

    ps = sub.add_parser("solve", help="run the projection algorithm")
    ps.add_argument("file")
    ps.add_argument("--lambda", dest="lam", default=None)
    ps.add_argument("--lambda1", default=None)
    ps.add_argument("--lambda2", default=None)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--trace", action="store_true")
    ps.set_defaults(func=cmd_solve)

    ph = sub.add_parser("sharp", help="exact feasibility of the seminorm-lambda system")
    ph.add_argument("file")
    ph.add_argument("--lambda", dest="lam", required=True)
    ph.set_defaults(func=cmd_sharp)

    pe = sub.add_parser("estimate", help="bisect the optimal seminorm into a bracket")
    pe.add_argument("file")
    pe.add_argument("--lo", default="0")
    pe.add_argument("--hi", required=True)
    pe.add_argument("--iters", type=int, default=20)
    pe.set_defaults(func=cmd_estimate)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
