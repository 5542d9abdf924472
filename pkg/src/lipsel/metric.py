"""Finite pseudometric spaces and shortest-path closures.

Distances are nonnegative extended reals; +inf marks unrelated points.  A
pseudometric allows distinct points at distance zero, which downstream code
treats as "must receive the same value".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Union

INF = math.inf

# absolute slack for the triangle inequality; float matrices built from
# coordinate norms can miss the exact inequality by a few ulps
AXIOM_TOL = 1e-9


@dataclass(frozen=True)
class PseudometricSpace:
    """n points with a symmetric, zero-diagonal, triangle-consistent matrix."""

    n: int
    d: List[List[float]]

    def rho(self, i: int, j: int) -> float:
        return self.d[i][j]


@dataclass(frozen=True)
class PreMetric:
    """Symmetric zero-diagonal weights; triangle inequality not required."""

    n: int
    w: List[List[float]]


@dataclass(frozen=True)
class MetricViolation:
    """First failed axiom: 'diagonal' (i), 'symmetry' (i,j) or 'triangle' (i,j,k)."""

    axiom: str
    i: int
    j: int
    k: int


def _check_matrix_shape(d: List[List[float]]) -> int:
    n = len(d)
    for row in d:
        if len(row) != n:
            raise ValueError("distance matrix must be square")
    for row in d:
        for v in row:
            if isinstance(v, float) and math.isnan(v):
                raise ValueError("distance matrix entry is NaN")
            if v < 0:
                raise ValueError("distance matrix entry is negative")
    return n


def validate_pseudometric(
    d: List[List[float]], tol: float = AXIOM_TOL
) -> Union[PseudometricSpace, MetricViolation]:
    """Check the three axioms; malformed input raises, a failed axiom reports.

    Returns the wrapped space on success, otherwise the first violation in
    scan order (diagonal, then symmetry, then triangle over (i,j,k)).
    """
    n = _check_matrix_shape(d)
    for i in range(n):
        if d[i][i] != 0:
            return MetricViolation("diagonal", i, i, i)
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                return MetricViolation("symmetry", i, j, j)
    for i in range(n):
        for j in range(n):
            dij = d[i][j]
            for k in range(n):
                if dij > d[i][k] + d[k][j] + tol:
                    return MetricViolation("triangle", i, j, k)
    return PseudometricSpace(n, [[float(v) for v in row] for row in d])


def validate_premetric(w: List[List[float]]) -> Union[PreMetric, MetricViolation]:
    """Symmetry and zero diagonal only."""
    n = _check_matrix_shape(w)
    for i in range(n):
        if w[i][i] != 0:
            return MetricViolation("diagonal", i, i, i)
    for i in range(n):
        for j in range(i + 1, n):
            if w[i][j] != w[j][i]:
                return MetricViolation("symmetry", i, j, j)
    return PreMetric(n, [[float(v) for v in row] for row in w])


def intrinsic_metric(w: PreMetric) -> PseudometricSpace:
    """Shortest-path closure of a pre-metric (Floyd-Warshall, inf-aware).

    The result is the largest pseudometric dominated by w entrywise; closing
    twice changes nothing.
    """
    n = w.n
    d = [row[:] for row in w.w]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return PseudometricSpace(n, d)
