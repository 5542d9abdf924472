"""Independent reference oracles for the test suite.

Everything here is deliberately brute force and shares no code with the
package: distances and projections by grid search, shortest paths by
exhaustive simple-path enumeration, feasibility by an off-the-shelf LP.
Grid answers come with their pitch so callers can set tolerances as a
multiple of it.
"""

import itertools
import math

import numpy as np

INF = math.inf


# ---------------------------------------------------------------------------
# half-plane geometry by sampling


def grid_halfplane_dist(g, a, b, alpha, half_width=50.0, steps=200001):
    """min-over-samples uniform distance from g to {a*x + b*y + alpha <= 0}.

    Samples the boundary line around the Euclidean foot of g (the nearest
    point always sits on the boundary when g is outside).  Returns
    (value, pitch) where pitch is the sup-norm sample spacing.
    """
    gx, gy = g
    if a * gx + b * gy + alpha <= 0.0:
        return 0.0, 0.0
    nn = a * a + b * b
    t0 = (a * gx + b * gy + alpha) / nn
    fx, fy = gx - t0 * a, gy - t0 * b  # Euclidean foot on the boundary
    ts = np.linspace(-half_width, half_width, steps)
    px = fx - ts * b
    py = fy + ts * a
    d = np.maximum(np.abs(px - gx), np.abs(py - gy))
    k = int(np.argmin(d))
    step_inf = (2.0 * half_width / (steps - 1)) * max(abs(a), abs(b))
    return float(d[k]), step_inf


def grid_halfplane_project(g, a, b, alpha, half_width=50.0, steps=200001):
    """Best boundary sample point (argmin of the uniform distance)."""
    gx, gy = g
    if a * gx + b * gy + alpha <= 0.0:
        return (gx, gy), 0.0
    nn = a * a + b * b
    t0 = (a * gx + b * gy + alpha) / nn
    fx, fy = gx - t0 * a, gy - t0 * b
    ts = np.linspace(-half_width, half_width, steps)
    px = fx - ts * b
    py = fy + ts * a
    d = np.maximum(np.abs(px - gx), np.abs(py - gy))
    k = int(np.argmin(d))
    step_inf = (2.0 * half_width / (steps - 1)) * max(abs(a), abs(b))
    return (float(px[k]), float(py[k])), step_inf


# ---------------------------------------------------------------------------
# rectangles by sampling


def _clip(v, w):
    return max(-w, min(w, v))


def grid_rect_dist(lo1, hi1, lo2, hi2, window=64.0, steps=1025):
    """Uniform distance from the origin to [lo1,hi1] x [lo2,hi2] by 2-d grid."""
    xs = np.linspace(_clip(lo1, window), _clip(hi1, window), steps)
    ys = np.linspace(_clip(lo2, window), _clip(hi2, window), steps)
    dx = np.abs(xs)
    dy = np.abs(ys)
    val = np.min(np.maximum(dx[:, None], dy[None, :]))
    pitch = max(
        (xs[-1] - xs[0]) / (steps - 1) if steps > 1 else 0.0,
        (ys[-1] - ys[0]) / (steps - 1) if steps > 1 else 0.0,
    )
    return float(val), pitch


def grid_rect_center(lo1, hi1, lo2, hi2, window=64.0, steps=1025):
    """Approximate center of the origin's metric-projection set.

    Collects grid points whose norm is within one pitch of the minimum and
    takes the center of their bounding box.
    """
    xs = np.linspace(_clip(lo1, window), _clip(hi1, window), steps)
    ys = np.linspace(_clip(lo2, window), _clip(hi2, window), steps)
    norm = np.maximum(np.abs(xs)[:, None], np.abs(ys)[None, :])
    dmin = norm.min()
    pitch = max(
        (xs[-1] - xs[0]) / (steps - 1) if steps > 1 else 0.0,
        (ys[-1] - ys[0]) / (steps - 1) if steps > 1 else 0.0,
    )
    mask = norm <= dmin + pitch + 1e-12
    ii, jj = np.nonzero(mask)
    cx = (xs[ii.min()] + xs[ii.max()]) / 2.0
    cy = (ys[jj.min()] + ys[jj.max()]) / 2.0
    return (float(cx), float(cy)), pitch


def grid_interval_hausdorff(a_lo, a_hi, b_lo, b_hi, window=1.0e6, steps=100001):
    """Hausdorff distance of two nonempty closed intervals by sampling.

    Ends are clipped at +-window; a result >= window/2 means the true value
    is infinite (one side runs away unboundedly).
    """
    az = np.linspace(_clip(a_lo, window), _clip(a_hi, window), steps)
    bz = np.linspace(_clip(b_lo, window), _clip(b_hi, window), steps)
    # sup_a inf_b |a-b| for intervals is attained at the ends of a
    d_ab = max(_interval_dist_point(az[0], bz), _interval_dist_point(az[-1], bz))
    d_ba = max(_interval_dist_point(bz[0], az), _interval_dist_point(bz[-1], az))
    pitch = max(
        (az[-1] - az[0]) / (steps - 1) if steps > 1 else 0.0,
        (bz[-1] - bz[0]) / (steps - 1) if steps > 1 else 0.0,
    )
    return float(max(d_ab, d_ba)), pitch


def _interval_dist_point(p, zs):
    return float(np.min(np.abs(zs - p)))


def grid_rects_gap(rx, ry, window=256.0, steps=257):
    """min over sample pairs of the uniform distance between two rectangles.

    rx, ry: (lo1, hi1, lo2, hi2) tuples.  Independent per-axis structure is
    *not* exploited; this really is the 4-d product search collapsed to two
    2-d grids.
    """
    ax = np.linspace(_clip(rx[0], window), _clip(rx[1], window), steps)
    ay = np.linspace(_clip(rx[2], window), _clip(rx[3], window), steps)
    bx = np.linspace(_clip(ry[0], window), _clip(ry[1], window), steps)
    by = np.linspace(_clip(ry[2], window), _clip(ry[3], window), steps)
    d1 = np.min(np.abs(ax[:, None] - bx[None, :]))
    d2 = np.min(np.abs(ay[:, None] - by[None, :]))
    # sup-norm distance between product sets = max of per-axis 1-d gaps;
    # computed here from raw samples, not from interval-end formulas
    pitch = max(
        (z[-1] - z[0]) / (steps - 1) if steps > 1 else 0.0 for z in (ax, ay, bx, by)
    )
    return float(max(d1, d2)), pitch


# ---------------------------------------------------------------------------
# shortest paths by enumeration


def enumerate_shortest_paths(w):
    """All-pairs shortest simple-path distances for a symmetric weight matrix.

    Exhaustive over every simple path (fine up to n ~ 7).  Exact when the
    weights are exactly representable (integers, dyadics, Fractions).
    """
    n = len(w)
    best = [[INF] * n for _ in range(n)]
    for i in range(n):
        best[i][i] = 0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            others = [k for k in range(n) if k != i and k != j]
            for r in range(len(others) + 1):
                for mid in itertools.permutations(others, r):
                    path = (i,) + mid + (j,)
                    total = 0
                    ok = True
                    for a, b in zip(path, path[1:]):
                        if w[a][b] == INF:
                            ok = False
                            break
                        total += w[a][b]
                    if ok and total < best[i][j]:
                        best[i][j] = total
    for i in range(n):
        for j in range(n):
            if best[i][j] > w[i][j]:
                best[i][j] = w[i][j]
    return best


# ---------------------------------------------------------------------------
# rational linear feasibility via scipy (float cross-check)


def linprog_feasible(rows, nvars, margin=0.0):
    """Feasibility verdict for rows of (coeffs, rhs) via scipy's HiGGS LP.

    Returns True / False / None, with None meaning "too close to call" given
    the requested margin (callers skip those cases).  Purely a float-level
    cross-check; exactness claims are tested elsewhere via witnesses.
    """
    from scipy.optimize import linprog

    a_ub = [[float(c) for c in coeffs] for coeffs, _rhs in rows]
    b_ub = [float(rhs) for _coeffs, rhs in rows]
    res = linprog(
        c=[0.0] * nvars,
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=[(None, None)] * nvars,
        method="highs",
    )
    if res.status == 0:
        if margin > 0.0:
            slack = min(
                b - sum(c * x for c, x in zip(coeffs, res.x))
                for (coeffs, b) in zip(a_ub, b_ub)
            )
            if slack < -margin:
                return None
        return True
    if res.status == 2:
        return False
    return None
