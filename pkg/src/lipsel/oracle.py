"""Exact feasibility oracle for the optimal-seminorm question.

A selection with Lipschitz seminorm <= lam exists iff a small linear system
is satisfiable: two coordinates per point, one membership row per half-plane,
and four coupling rows per finite-distance pair bounding the coordinate
differences by lam times the distance.  The system is solved exactly over
rationals by Fourier-Motzkin elimination, so Feasible/Infeasible verdicts are
certificates, not numerics.  Sizes are desk-scale by design (16 variables).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from lipsel.selection import HalfPlaneInstance
from lipsel.polygon import PolygonInstance

FM_VAR_CAP = 16

RatRow = Tuple[Tuple[Fraction, ...], Fraction]  # coeffs . vars <= rhs


@dataclass(frozen=True)
class RationalLinearSystem:
    var_names: List[str]
    rows: List[RatRow]

    @property
    def num_vars(self) -> int:
        return len(self.var_names)


@dataclass(frozen=True)
class FmFeasible:
    witness: List[Fraction]


@dataclass(frozen=True)
class FmInfeasible:
    pass


FmOutcome = Union[FmFeasible, FmInfeasible]


def _rat(v, what: str) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError(f"{what} must be finite and rational, got {v}")
        return Fraction(v)  # floats are dyadic rationals, conversion is exact
    raise ValueError(f"{what} must be rational, got {type(v).__name__}")


def _coupling_rows(
    nvars: int, distances, npoints: int, lam: Fraction
) -> List[RatRow]:
    rows: List[RatRow] = []
    for i in range(npoints):
        for j in range(i + 1, npoints):
            rho = distances[i][j]
            if rho == math.inf:
                continue
            cap = lam * _rat(rho, f"distance ({i},{j})")
            for axis in (0, 1):  # u then v coordinates
                a, b = 2 * i + axis, 2 * j + axis
                co = [Fraction(0)] * nvars
                co[a], co[b] = Fraction(1), Fraction(-1)
                rows.append((tuple(co), cap))
                co = [Fraction(0)] * nvars
                co[a], co[b] = Fraction(-1), Fraction(1)
                rows.append((tuple(co), cap))
    return rows


def _membership_row(nvars: int, point: int, h1, h2, alpha) -> RatRow:
    co = [Fraction(0)] * nvars
    co[2 * point] = _rat(h1, "normal coordinate")
    co[2 * point + 1] = _rat(h2, "normal coordinate")
    return (tuple(co), -_rat(alpha, "offset"))


def build_sharp_lp(inst: HalfPlaneInstance, lam) -> RationalLinearSystem:
    """Membership plus coupling rows for a half-plane instance.

    Row order: the N membership rows, then 4 coupling rows per finite pair
    (i < j), u-axis before v-axis.  All data is converted to exact rationals;
    non-finite coefficients are rejected.
    """
    n = inst.n
    lam_r = _rat(lam, "lambda")
    if lam_r < 0:
        raise ValueError("lambda must be >= 0")
    nvars = 2 * n
    names = [f"{ax}{i + 1}" for i in range(n) for ax in ("u", "v")]
    rows = [
        _membership_row(nvars, i, inst.planes[i].h.x1, inst.planes[i].h.x2, inst.planes[i].alpha)
        for i in range(n)
    ]
    rows.extend(_coupling_rows(nvars, inst.space.d, n, lam_r))
    return RationalLinearSystem(names, rows)


def build_sharp_lp_polygon(p: PolygonInstance, lam) -> RationalLinearSystem:
    """Polygon variant: every half-plane of a point's polygon becomes a
    membership row on that point's pair of coordinates."""
    n = p.n
    lam_r = _rat(lam, "lambda")
    if lam_r < 0:
        raise ValueError("lambda must be >= 0")
    nvars = 2 * n
    names = [f"{ax}{i + 1}" for i in range(n) for ax in ("u", "v")]
    rows: List[RatRow] = []
    for i, poly in enumerate(p.polygons):
        for hp in poly:
            rows.append(_membership_row(nvars, i, hp.h.x1, hp.h.x2, hp.alpha))
    rows.extend(_coupling_rows(nvars, p.space.d, n, lam_r))
    return RationalLinearSystem(names, rows)


# ---------------------------------------------------------------------------
# Fourier-Motzkin elimination


def _prune(rows: List[RatRow]) -> Optional[List[RatRow]]:
    """Drop satisfied constant rows and keep only the tightest row per
    normalized coefficient vector; None signals an unsatisfiable constant."""
    best: Dict[Tuple[Fraction, ...], Fraction] = {}
    for coeffs, rhs in rows:
        scale = None
        for c in coeffs:
            if c != 0:
                scale = abs(c)
                break
        if scale is None:
            if rhs < 0:
                return None
            continue
        key = tuple(c / scale for c in coeffs)
        r = rhs / scale
        old = best.get(key)
        if old is None or r < old:
            best[key] = r
    return [(k, v) for k, v in best.items()]


def fm_feasible(system: RationalLinearSystem) -> FmOutcome:
    """Eliminate variables lowest index first; on success, back-substitute an
    exact witness (midpoints of the final bounds, 0 for free variables)."""
    nvars = system.num_vars
    if nvars > FM_VAR_CAP:
        raise ValueError(f"Fourier-Motzkin oracle is capped at {FM_VAR_CAP} variables")
    rows = _prune(list(system.rows))
    if rows is None:
        return FmInfeasible()
    stages: List[Tuple[int, List[RatRow]]] = []
    for k in range(nvars):
        pos: List[RatRow] = []
        neg: List[RatRow] = []
        rest: List[RatRow] = []
        for row in rows:
            ck = row[0][k]
            if ck > 0:
                pos.append(row)
            elif ck < 0:
                neg.append(row)
            else:
                rest.append(row)
        stages.append((k, pos + neg))
        combined = rest
        for pco, prhs in pos:
            a = pco[k]
            for nco, nrhs in neg:
                b = -nco[k]
                co = tuple(b * pc + a * nc for pc, nc in zip(pco, nco))
                combined.append((co, b * prhs + a * nrhs))
        rows = _prune(combined)
        if rows is None:
            return FmInfeasible()

    values: List[Optional[Fraction]] = [None] * nvars
    for k, krows in reversed(stages):
        lo: Optional[Fraction] = None
        hi: Optional[Fraction] = None
        for coeffs, rhs in krows:
            a = coeffs[k]
            rest_sum = Fraction(0)
            for m in range(k + 1, nvars):
                if coeffs[m] != 0:
                    vm = values[m]
                    assert vm is not None
                    rest_sum += coeffs[m] * vm
            bound = (rhs - rest_sum) / a
            if a > 0:
                if hi is None or bound < hi:
                    hi = bound
            else:
                if lo is None or bound > lo:
                    lo = bound
        if lo is not None and hi is not None:
            if lo > hi:
                raise AssertionError("back-substitution hit an empty interval")
            values[k] = (lo + hi) / 2
        elif lo is not None:
            values[k] = max(Fraction(0), lo)
        elif hi is not None:
            values[k] = min(Fraction(0), hi)
        else:
            values[k] = Fraction(0)

    witness = [v if v is not None else Fraction(0) for v in values]
    for coeffs, rhs in system.rows:
        total = sum((c * w for c, w in zip(coeffs, witness)), Fraction(0))
        if total > rhs:
            raise AssertionError("witness violates an original row")
    return FmFeasible(witness)


def estimate_min_seminorm(
    inst: HalfPlaneInstance, lo, hi, iterations: int
) -> Tuple[Fraction, Fraction]:
    """Bisect the optimal seminorm into an exact bracket.

    `hi` must be feasible; `lo` is a caller-promised lower bound (0 always
    works).  Returns (a, b) with the optimum in [a, b] and
    b - a = (hi - lo) / 2**iterations.
    """
    lo_r, hi_r = _rat(lo, "lo"), _rat(hi, "hi")
    if not lo_r < hi_r:
        raise ValueError("need lo < hi")
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    if isinstance(fm_feasible(build_sharp_lp(inst, hi_r)), FmInfeasible):
        raise ValueError("hi must be feasible")
    for _ in range(iterations):
        mid = (lo_r + hi_r) / 2
        if isinstance(fm_feasible(build_sharp_lp(inst, mid)), FmFeasible):
            hi_r = mid
        else:
            lo_r = mid
    return (lo_r, hi_r)
