"""Discrete sliding-paraboloid laboratory on uniform ball grids.

A GridFunction samples a scalar function on a uniform grid over a ball. The
a-convex envelope of v is the supremum of all paraboloids of opening -a lying
below v; via the shift identity it equals ConvexEnvelope(v + (a/2)|x|^2) -
(a/2)|x|^2, so one convex-envelope engine serves every opening. The contact
set (where the envelope touches v) drives two experiments: the measure-decay
iteration in the opening, and the pointwise minimal opening Theta whose
super-level sets give the Hessian integrability tail.

The convex envelope of the discrete point cloud is computed exactly: the
sampled points are lifted to graph space, qhull builds their convex hull, and
the envelope at every sample is the maximum over the supporting planes of the
downward-facing facets (each such plane minorizes the hull function globally
and is attained on its facet). An iterated direction-sweep scheme was
considered and rejected: it converges to the separately-convex envelope,
which on generic 2-D data sits order-one above the true envelope.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import DegenerateData, DomainError, GeometryError, GridFormatError
from .exponent_bounds import Ellipticity, c_star

_VERTICAL_TOL = 1e-12
_AFFINE_RTOL = 1e-9


@dataclass
class GridFunction:
    """Scalar samples on a uniform axis-aligned grid covering a ball.

    Axis i coordinates are center[i] + (j - (shape[i]-1)/2) * spacing for
    j = 0..shape[i]-1. Samples outside the ball |x - center| <= domain_radius
    are flagged invalid by :meth:`inside_mask` and may hold NaN; all samples
    inside the ball must be finite.
    """

    dim: int
    shape: tuple
    spacing: float
    center: tuple
    domain_radius: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise GridFormatError(f"dim must be 1, 2 or 3, got {self.dim}")
        self.shape = tuple(int(s) for s in self.shape)
        if len(self.shape) != self.dim or min(self.shape) < 3:
            raise GridFormatError(f"shape {self.shape} invalid for dim {self.dim}")
        if not (self.spacing > 0.0 and math.isfinite(self.spacing)):
            raise GridFormatError(f"spacing must be positive, got {self.spacing}")
        self.center = tuple(float(c) for c in self.center)
        if len(self.center) != self.dim:
            raise GridFormatError(f"center {self.center} invalid for dim {self.dim}")
        if not (self.domain_radius > 0.0 and math.isfinite(self.domain_radius)):
            raise GridFormatError(f"domain_radius must be positive, got {self.domain_radius}")
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.shape:
            raise GridFormatError(
                f"values shape {self.values.shape} does not match grid shape {self.shape}"
            )
        if not np.all(np.isfinite(self.values.ravel()[self.inside_mask().ravel()])):
            raise GridFormatError("values must be finite at all samples inside the ball")

    def axis_coords(self, i: int) -> np.ndarray:
        n = self.shape[i]
        return self.center[i] + (np.arange(n) - (n - 1) / 2.0) * self.spacing

    def points(self) -> np.ndarray:
        """All grid coordinates, row-major, shape (N, dim)."""
        axes = [self.axis_coords(i) for i in range(self.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.column_stack([m.ravel() for m in mesh])

    def inside_mask(self) -> np.ndarray:
        d2 = ((self.points() - np.asarray(self.center)) ** 2).sum(axis=1)
        return (d2 <= self.domain_radius ** 2 + 1e-12).reshape(self.shape)

    @property
    def cell_measure(self) -> float:
        return self.spacing ** self.dim

    def content_hash(self) -> str:
        h = hashlib.sha256()
        head = json.dumps({
            "dim": self.dim, "shape": list(self.shape), "spacing": self.spacing,
            "center": list(self.center), "domain_radius": self.domain_radius,
        }, sort_keys=True)
        h.update(head.encode())
        h.update(np.ascontiguousarray(self.values, dtype="<f8").tobytes())
        return h.hexdigest()

    def save(self, path, inline: bool | None = None) -> None:
        """Write the header JSON; values inline or in a float64 sidecar.

        The header holds dim/shape/spacing/center/domain_radius plus a payload
        field: either the row-major value list itself (NaN encoded as null) or
        a sidecar filename holding raw little-endian float64 in row-major
        order next to the header file.
        """
        path = Path(path)
        if inline is None:
            inline = self.values.size <= 4096
        header = {
            "dim": self.dim,
            "shape": list(self.shape),
            "spacing": self.spacing,
            "center": list(self.center),
            "domain_radius": self.domain_radius,
        }
        if inline:
            vals = self.values.ravel()
            header["payload"] = [None if not math.isfinite(x) else x for x in vals.tolist()]
        else:
            sidecar = path.stem + ".bin"
            header["payload"] = sidecar
            np.ascontiguousarray(self.values, dtype="<f8").tofile(path.parent / sidecar)
        path.write_text(json.dumps(header))

    @classmethod
    def load(cls, path) -> "GridFunction":
        path = Path(path)
        try:
            header = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise GridFormatError(f"cannot parse grid header {path}: {exc}") from exc
        required = {"dim", "shape", "spacing", "center", "domain_radius", "payload"}
        missing = required - header.keys()
        if missing:
            raise GridFormatError(f"grid header {path} missing keys: {sorted(missing)}")
        shape = tuple(int(s) for s in header["shape"])
        count = int(np.prod(shape))
        payload = header["payload"]
        if payload == "inline":
            # older writers kept the list under a sibling "values" key
            payload = header.get("values")
        if isinstance(payload, list):
            if len(payload) != count:
                raise GridFormatError(f"inline payload in {path} has wrong length")
            vals = np.array([math.nan if x is None else float(x) for x in payload])
        elif isinstance(payload, str):
            sidecar = path.parent / payload
            if not sidecar.exists():
                raise GridFormatError(f"sidecar {sidecar} referenced by {path} not found")
            vals = np.fromfile(sidecar, dtype="<f8")
            if vals.size != count:
                raise GridFormatError(
                    f"sidecar {sidecar} has {vals.size} values, expected {count}"
                )
        else:
            raise GridFormatError(f"grid header {path} has an unusable payload field")
        return cls(
            dim=int(header["dim"]),
            shape=shape,
            spacing=float(header["spacing"]),
            center=tuple(float(c) for c in header["center"]),
            domain_radius=float(header["domain_radius"]),
            values=vals.reshape(shape),
        )


def grid_from_callable(f, dim: int, points_per_axis: int, domain_radius: float = 1.0,
                       center: tuple | None = None, extent: float | None = None) -> GridFunction:
    """Sample f(points)->values on a fresh grid; NaN outside the ball."""
    if center is None:
        center = (0.0,) * dim
    if extent is None:
        extent = domain_radius
    spacing = 2.0 * extent / (points_per_axis - 1)
    shape = (points_per_axis,) * dim
    g = GridFunction(dim=dim, shape=shape, spacing=spacing, center=tuple(center),
                     domain_radius=domain_radius, values=np.zeros(shape))
    pts = g.points()
    vals = np.asarray(f(pts), dtype=np.float64).reshape(shape)
    g.values = np.where(g.inside_mask(), vals, np.nan)
    return g


@dataclass
class EnvelopeResult:
    """Envelope values, contact mask, and the tolerance that defined contact."""

    opening: float
    envelope: np.ndarray
    contact_mask: np.ndarray
    tolerance_used: float


@dataclass
class ThetaField:
    """Per-point minimal paraboloid opening with bisection brackets.

    theta holds the upper bracket end (a verified contact opening) where
    converged, and a_max where the point is not in contact even at a_max
    (converged False; tail counts treat such points as Theta > t for every
    t <= a_max). Samples outside the ball are NaN / False. interior flags
    points at least two cells away from the ball boundary; boundary-ring
    values are reported but carry extra discretization error.
    """

    theta: np.ndarray
    converged: np.ndarray
    bracket_lo: np.ndarray
    bracket_hi: np.ndarray
    interior: np.ndarray
    grid: GridFunction


@dataclass
class TailDistribution:
    """Super-level measures of Theta and the fitted power-law exponent.

    Iterates as (threshold, measure) pairs.
    """

    thresholds: np.ndarray
    measures: np.ndarray
    fitted_exponent: float

    def __iter__(self):
        return iter(zip(self.thresholds.tolist(), self.measures.tolist()))

    def __len__(self) -> int:
        return len(self.thresholds)


@dataclass
class DecayReport:
    """Non-contact measures along geometric openings vs the guaranteed ratio."""

    delta: float
    openings: np.ndarray
    counts: np.ndarray
    empirical_ratio: float
    theoretical_ratio: float


def _hull_envelope(points: np.ndarray, lifted: np.ndarray, need_values: bool):
    """Exact lower convex hull of the lifted cloud.

    Returns (env, on_hull): env is the hull function at each input point
    (None when need_values is False), on_hull marks points that are vertices
    of some downward facet. Affine-degenerate clouds (the lift lies in a
    hyperplane) short-circuit: the envelope is the data itself.
    """
    n, d = points.shape
    cloud = np.column_stack([points, lifted])
    try:
        hull = ConvexHull(cloud)
    except QhullError:
        # flat input: check the lift really is affine in the coordinates
        A = np.column_stack([points, np.ones(n)])
        coef, *_ = np.linalg.lstsq(A, lifted, rcond=None)
        scale = max(1.0, float(np.abs(lifted).max()))
        if np.abs(A @ coef - lifted).max() <= _AFFINE_RTOL * scale:
            env = lifted.copy() if need_values else None
            return env, np.ones(n, dtype=bool)
        hull = ConvexHull(cloud, qhull_options="QJ")

    eqs = hull.equations
    lower = eqs[:, d] < -_VERTICAL_TOL
    on_hull = np.zeros(n, dtype=bool)
    if lower.any():
        on_hull[np.unique(hull.simplices[lower])] = True
    if not need_values:
        return None, on_hull

    env = np.full(n, -np.inf)
    E = eqs[lower]
    # z(x) = -(offset + n_x . x) / n_z, maximized over downward facets;
    # blockwise to bound the temporary at ~8 MB
    block = max(1, int(1_000_000 // max(1, n)))
    for s in range(0, len(E), block):
        chunk = E[s:s + block]
        z = -(chunk[:, :d] @ points.T + chunk[:, d + 1][:, None]) / chunk[:, d][:, None]
        env = np.maximum(env, z.max(axis=0))
    env = np.minimum(env, lifted)
    env[on_hull] = lifted[on_hull]
    return env, on_hull


def _hull_envelope_1d(x: np.ndarray, y: np.ndarray, need_values: bool):
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    keep = [0]
    for j in range(1, len(xs)):
        while len(keep) >= 2:
            i0, i1 = keep[-2], keep[-1]
            # pop i1 when it lies on or above the chord i0 -> j
            if (ys[i1] - ys[i0]) * (xs[j] - xs[i1]) >= (ys[j] - ys[i1]) * (xs[i1] - xs[i0]):
                keep.pop()
            else:
                break
        keep.append(j)
    on_hull = np.zeros(len(x), dtype=bool)
    on_hull[order[keep]] = True
    if not need_values:
        return None, on_hull
    env_sorted = np.interp(xs, xs[keep], ys[keep])
    env = np.empty_like(y)
    env[order] = np.minimum(env_sorted, ys)
    return env, on_hull


def _envelope_inside(grid: GridFunction, lifted_inside: np.ndarray,
                     points_inside: np.ndarray, need_values: bool):
    if grid.dim == 1:
        return _hull_envelope_1d(points_inside[:, 0], lifted_inside, need_values)
    return _hull_envelope(points_inside, lifted_inside, need_values)


def convex_envelope(w: GridFunction) -> GridFunction:
    """Exact convex envelope of the sampled points inside the ball.

    The envelope is taken with respect to the discrete point set; it is
    idempotent and equals w for convex data. Samples outside the ball stay NaN.
    """
    inside = w.inside_mask().ravel()
    pts = w.points()[inside]
    vals = w.values.ravel()[inside]
    env_in, _ = _envelope_inside(w, vals, pts, need_values=True)
    out = np.full(w.values.size, np.nan)
    out[inside] = env_in
    return GridFunction(dim=w.dim, shape=w.shape, spacing=w.spacing, center=w.center,
                        domain_radius=w.domain_radius, values=out.reshape(w.shape))


def default_contact_tolerance(grid: GridFunction, opening: float) -> float:
    """Discrete-tangency slack 10 h^2 (opening + 1)."""
    return 10.0 * grid.spacing ** 2 * (opening + 1.0)


def a_convex_envelope(v: GridFunction, a: float,
                      tol: float | None = None) -> EnvelopeResult:
    """Envelope by paraboloids of opening -a and its contact set.

    Uses the shift identity: the a-convex envelope equals the convex envelope
    of v + (a/2)|x|^2 minus (a/2)|x|^2. Contact holds where v exceeds its
    envelope by at most tol (default 10 h^2 (a+1)).
    """
    if not (a >= 0.0 and math.isfinite(a)):
        raise DomainError(f"opening must be finite and >= 0, got {a}")
    if tol is None:
        tol = default_contact_tolerance(v, a)
    inside = v.inside_mask().ravel()
    pts = v.points()[inside]
    shift = 0.5 * a * (pts ** 2).sum(axis=1)
    lifted = v.values.ravel()[inside] + shift
    env_in, on_hull = _envelope_inside(v, lifted, pts, need_values=True)

    envelope = np.full(v.values.size, np.nan)
    envelope[inside] = env_in - shift
    contact = np.zeros(v.values.size, dtype=bool)
    contact[inside] = (lifted - env_in <= tol) | on_hull
    return EnvelopeResult(
        opening=float(a),
        envelope=envelope.reshape(v.shape),
        contact_mask=contact.reshape(v.shape),
        tolerance_used=float(tol),
    )


def theta_field(v: GridFunction, a_max: float, bisect_tol: float) -> ThetaField:
    """Minimal contact opening per point by bisection over [0, a_max].

    A point is in the contact set of opening a exactly when its lifted sample
    lies on the lower convex hull of v + (a/2)|x|^2, so each probe asks qhull
    for the downward-facet vertices; probes are shared across points whose
    brackets coincide. Points without contact even at a_max get theta = a_max
    and converged False.
    """
    if not (a_max > 0.0 and math.isfinite(a_max)):
        raise DomainError(f"a_max must be positive, got {a_max}")
    if not (0.0 < bisect_tol < a_max):
        raise DomainError(f"bisect_tol must lie in (0, a_max), got {bisect_tol}")

    inside = v.inside_mask().ravel()
    pts = v.points()[inside]
    sq = (pts ** 2).sum(axis=1)
    base = v.values.ravel()[inside]
    n_in = len(base)

    def contact_at(a: float) -> np.ndarray:
        _, on_hull = _envelope_inside(v, base + 0.5 * a * sq, pts, need_values=False)
        return on_hull

    top = contact_at(a_max)
    lo = np.zeros(n_in)
    hi = np.full(n_in, float(a_max))
    steps = max(1, math.ceil(math.log2(a_max / bisect_tol)))
    active_base = top.copy()
    for _ in range(steps):
        active = active_base & (hi - lo > bisect_tol)
        if not active.any():
            break
        mids = 0.5 * (lo + hi)
        for m in np.unique(mids[active]):
            group = active & (mids == m)
            mask = contact_at(float(m))
            got = mask & group
            hi[got] = m
            lo[group & ~mask] = m
    theta = np.where(top, hi, a_max)

    def expand(arr_inside, fill, dtype):
        out = np.full(v.values.size, fill, dtype=dtype)
        out[inside] = arr_inside
        return out.reshape(v.shape)

    d_to_boundary = v.domain_radius - np.sqrt(((v.points() - np.asarray(v.center)) ** 2).sum(1))
    interior = (d_to_boundary >= 2.0 * v.spacing) & inside
    return ThetaField(
        theta=expand(theta, np.nan, float),
        converged=expand(top, False, bool),
        bracket_lo=expand(lo, np.nan, float),
        bracket_hi=expand(hi, np.nan, float),
        interior=interior.reshape(v.shape),
        grid=v,
    )


def tail_distribution(theta: ThetaField, restrict_radius: float,
                      t_grid: np.ndarray) -> TailDistribution:
    """Measures |{Theta > t} ∩ B_restrict| and their log-log power-law fit.

    Non-converged points count as exceeding every threshold (their true
    Theta is only known to exceed a_max); thresholds above a_max would be
    uninformative there and trigger a warning.
    """
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.ndim != 1 or len(t_grid) < 2 or np.any(np.diff(t_grid) <= 0) or np.any(t_grid <= 0):
        raise DomainError("t_grid must be a strictly increasing positive 1-D array")
    g = theta.grid
    d2 = ((g.points() - np.asarray(g.center)) ** 2).sum(axis=1).reshape(g.shape)
    region = (d2 <= restrict_radius ** 2 + 1e-12) & g.inside_mask()
    field = theta.theta
    exceed_all = ~theta.converged
    nonconv = exceed_all & region
    if nonconv.any() and np.any(t_grid > float(np.nanmin(field[nonconv]))):
        # non-converged points carry theta = a_max; above that they would be
        # counted as exceeding without evidence
        warnings.warn("t_grid exceeds a_max; non-converged points dominate those entries",
                      stacklevel=2)
    measures = np.empty(len(t_grid))
    for i, t in enumerate(t_grid):
        hit = region & (exceed_all | (np.nan_to_num(field, nan=-np.inf) > t))
        measures[i] = hit.sum() * g.cell_measure

    pos = measures > 0
    if pos.sum() >= 3:
        slope, _ = np.polyfit(np.log(t_grid[pos]), np.log(measures[pos]), 1)
    else:
        slope = math.nan
    return TailDistribution(thresholds=t_grid, measures=measures, fitted_exponent=float(slope))


def decay_experiment(v: GridFunction, delta: float, levels: int,
                     e: Ellipticity) -> DecayReport:
    """Non-contact measure along openings (1+delta)^j, j = 0..levels.

    counts[j] is the grid-cell measure of the ball minus the contact set at
    opening (1+delta)^j; the least-squares geometric decay factor of the
    nonzero counts is compared with the guaranteed 1 - c*(1+1/delta)^-n.
    Raises DegenerateData (carrying the partial report) when fewer than 3
    counts are nonzero.
    """
    if not (delta > 0.0 and math.isfinite(delta)):
        raise DomainError(f"delta must be positive, got {delta}")
    if not isinstance(levels, int) or levels < 2:
        raise DomainError(f"levels must be an integer >= 2, got {levels}")

    openings = (1.0 + delta) ** np.arange(levels + 1)
    inside = v.inside_mask()
    counts = np.empty(levels + 1)
    for j, a in enumerate(openings):
        res = a_convex_envelope(v, float(a))
        counts[j] = (inside & ~res.contact_mask).sum() * v.cell_measure

    theoretical = 1.0 - c_star(e) * (1.0 + 1.0 / delta) ** (-e.n)
    nz = counts > 0
    if nz.sum() < 3:
        partial = DecayReport(delta=float(delta), openings=openings, counts=counts,
                              empirical_ratio=math.nan, theoretical_ratio=theoretical)
        raise DegenerateData(
            f"only {int(nz.sum())} nonzero counts; need 3 for a decay fit", report=partial
        )
    slope, _ = np.polyfit(np.arange(levels + 1)[nz], np.log(counts[nz]), 1)
    return DecayReport(delta=float(delta), openings=openings, counts=counts,
                       empirical_ratio=float(math.exp(slope)), theoretical_ratio=theoretical)
