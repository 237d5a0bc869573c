"""Slow reference implementations that the tests check the library against."""

import math

import numpy as np
from scipy.optimize import linprog


def lambert_bisect(z, branch):
    """Solve w e^w = z by plain bisection on a hand-picked sign-change bracket."""
    if branch == 0:
        if z >= 0.0:
            lo, hi = 0.0, max(1.0, math.log(z + 1.0) + 1.0)
        else:
            lo, hi = -1.0, 0.0
    else:
        lo, hi = math.log(-z) - 10.0, -1.0
    flo = lo * math.exp(lo) - z
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = mid * math.exp(mid) - z
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lp_envelope(points, values, queries):
    """Convex envelope via LP duality: at x0 maximize p.x0 + q over planes below the data."""
    d = points.shape[1]
    A = np.column_stack([points, np.ones(len(points))])
    bounds = [(None, None)] * (d + 1)
    out = np.empty(len(queries))
    for i, x0 in enumerate(np.atleast_2d(queries)):
        c = -np.append(np.asarray(x0, dtype=float), 1.0)
        res = linprog(c, A_ub=A, b_ub=values, bounds=bounds,
                      method="highs", options={"presolve": False})
        if not res.success:
            raise RuntimeError(f"envelope LP failed at {x0}: {res.message}")
        out[i] = -res.fun
    return out


def envelope_1d_bruteforce(x, y):
    """Direct definition on a 1-d grid: minimum over all chords through the data."""
    env = y.copy()
    for i in range(len(x)):
        xl, yl = x[: i + 1], y[: i + 1]
        xr, yr = x[i:], y[i:]
        span = xr[None, :] - xl[:, None]
        good = span > 0.0
        t = np.where(good, (x[i] - xl[:, None]) / np.where(good, span, 1.0), 0.0)
        chords = yl[:, None] + (yr[None, :] - yl[:, None]) * t
        if good.any():
            env[i] = min(env[i], chords[good].min())
    return env
