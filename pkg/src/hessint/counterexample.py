"""Radial profiles that pin the Hessian integrability exponent from above.

The profile u(r) = R^(a+2) r^-a + (a/2) r^2 - (1 + a/2) R^2 on (0, R), glued
to 0 at r = R with matching first derivative, is a supersolution of the Pucci
minimal inequality whenever 0 < a <= (n-1) Lambda/lambda - 1. Tiling a ball
with shrunken translates, rescaled to unit size and stacked on a background
paraboloid, produces a function whose minimal-opening field Theta has a
super-level tail fat enough to force |D^2 v| out of L^eps once eps exceeds
n/((n-1) rho + 1). The L^eps mass of the tiled field admits an explicit
lower bound whose divergence along a shrinking lattice is the certificate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma_fn

from .envelope_lab import GridFunction
from .errors import (AdmissibilityError, ConditionError, DomainError, GeometryError)

_TRUNCATION_CAP = 1.0


@dataclass(frozen=True)
class RadialProfile:
    """Parameters (n, alpha, R, lambda, Lambda) of one radial bump.

    ``admissible`` records whether alpha <= (n-1) Lambda/lambda - 1, the window
    in which the profile is a supersolution; construction does not fail on a
    violation, but curvature-dependent operations do.
    """

    n: int
    alpha: float
    R: float
    lam: float
    Lam: float
    admissible: bool = field(init=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise DomainError(f"profile dimension n must be an integer >= 3, got {self.n}")
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not 0.0 < self.R < 1.0:
            raise DomainError(f"R must lie in (0,1), got {self.R}")
        if not 0.0 < self.lam <= self.Lam:
            raise DomainError(
                f"need 0 < lambda <= Lambda, got lambda={self.lam}, Lambda={self.Lam}"
            )
        object.__setattr__(
            self, "admissible",
            self.alpha <= (self.n - 1) * self.Lam / self.lam - 1.0 + 1e-12,
        )

    @property
    def ratio(self) -> float:
        return self.Lam / self.lam

    @property
    def truncation_radius(self) -> float:
        """Radius below which (lam/(Lam*alpha)) u >= 1: c~ R^((alpha+2)/alpha)."""
        c_tilde = (self.lam / (self.Lam * self.alpha)) ** (1.0 / self.alpha)
        return c_tilde * self.R ** ((self.alpha + 2.0) / self.alpha)


def u_value(p: RadialProfile, r: float) -> float:
    """Profile value at radius r > 0; identically 0 for r >= R (C^1 glue)."""
    r = float(r)
    if not r > 0.0:
        raise DomainError(f"u_value requires r > 0, got {r}")
    if r >= p.R:
        return 0.0
    a = p.alpha
    return p.R ** (a + 2.0) * r ** (-a) + 0.5 * a * r * r - (1.0 + 0.5 * a) * p.R ** 2


def _u_profile(p: RadialProfile, r: np.ndarray) -> np.ndarray:
    # vectorized u with u(0) = +inf, for grid sampling under a truncation cap
    r = np.asarray(r, dtype=np.float64)
    a = p.alpha
    with np.errstate(divide="ignore"):
        core = p.R ** (a + 2.0) * r ** (-a) + 0.5 * a * r * r - (1.0 + 0.5 * a) * p.R ** 2
    return np.where(r >= p.R, 0.0, core)


def hessian_eigenvalues(p: RadialProfile, r: float) -> tuple[float, float]:
    """(tangential, radial) Hessian eigenvalues of u at 0 < r < R.

    The tangential eigenvalue -alpha r^-(alpha+2) (R^(alpha+2) - r^(alpha+2))
    has multiplicity n-1 and is negative; the radial one
    alpha(alpha+1) R^(alpha+2) r^-(alpha+2) + alpha is positive.
    """
    r = float(r)
    if not 0.0 < r < p.R:
        raise DomainError(f"hessian_eigenvalues requires 0 < r < R={p.R}, got {r}")
    a = p.alpha
    tangential = -a * r ** (-a - 2.0) * (p.R ** (a + 2.0) - r ** (a + 2.0))
    radial = a * (a + 1.0) * p.R ** (a + 2.0) * r ** (-a - 2.0) + a
    return tangential, radial


def pucci_minus(p: RadialProfile, r: float) -> float:
    """M^-(D^2 u)(r) = Lambda (n-1) tangential + lambda radial, for 0 < r < R.

    Bounded above by Lambda n alpha exactly when the profile is admissible.
    """
    if not p.admissible:
        raise AdmissibilityError(
            f"alpha={p.alpha} exceeds (n-1)Lambda/lambda - 1 = "
            f"{(p.n - 1) * p.Lam / p.lam - 1.0:.6g}; not a supersolution"
        )
    tangential, radial = hessian_eigenvalues(p, r)
    return p.Lam * (p.n - 1) * tangential + p.lam * radial


def theta_lower(p: RadialProfile, r: float) -> float:
    """Guaranteed minimal-opening lower bound on 0 < r <= R/2.

    (1 - 2^-(alpha+2)) alpha R^(alpha+2) r^-(alpha+2); it minorizes the
    negated tangential eigenvalue on that range.
    """
    r = float(r)
    if not 0.0 < r <= p.R / 2.0:
        raise DomainError(f"theta_lower requires 0 < r <= R/2 = {p.R / 2.0}, got {r}")
    a = p.alpha
    return (1.0 - 2.0 ** (-(a + 2.0))) * a * p.R ** (a + 2.0) * r ** (-a - 2.0)


def lattice_admissible_radius(dim: int, m: int) -> float:
    """The R for which exactly m^dim lattice balls fit inside B_{1/2}.

    Solves 1/(8 sqrt(dim) R) = m + 1/(2 sqrt(dim)), i.e.
    R = 1/(8 sqrt(dim) m + 4).
    """
    if not isinstance(m, int) or m < 1:
        raise DomainError(f"lattice index m must be an integer >= 1, got {m}")
    return 1.0 / (8.0 * math.sqrt(dim) * m + 4.0)


def lattice_ball_count(dim: int, R: float) -> int:
    """Exact number of lattice points y with |2 R y| + R <= 1/2.

    Counted slice by slice (O(reach^(dim-1)) work) so small R stays cheap.
    """
    if not 0.0 < R < 0.25:
        raise GeometryError(f"lattice requires 0 < R < 1/4, got {R}")
    reach = (0.5 - R) / (2.0 * R)

    def count(d: int, rem2: float) -> int:
        limit = int(math.floor(math.sqrt(rem2) + 1e-12))
        if d == 1:
            return 2 * limit + 1
        ys = np.arange(-limit, limit + 1, dtype=np.float64)
        rems = rem2 - ys * ys
        if d == 2:
            inner = np.floor(np.sqrt(np.maximum(rems, 0.0)) + 1e-12)
            return int((2 * inner + 1).sum())
        return sum(count(d - 1, float(r)) for r in rems)

    return int(count(dim, reach * reach))


def build_v(p: RadialProfile, grid: GridFunction) -> GridFunction:
    """Tile the grid ball with truncated bumps on a -|x|^2 background.

    v(x) = -|x|^2 + min(1, (lambda/(Lambda alpha)) u(x - 2Ry)) where y is the
    lattice cell containing x; cells are disjoint for R < 1/4 (GeometryError
    otherwise). The claimed unit bound on sup|v| ignores the background term;
    the actual supremum is recorded via a warning when it exceeds 1.
    """
    if p.R >= 0.25:
        raise GeometryError(f"lattice balls require R < 1/4, got R={p.R}")
    if grid.domain_radius < 1.0 - 1e-12:
        raise GeometryError("grid must cover the unit ball")

    pts = grid.points()
    y = np.round(pts / (2.0 * p.R))
    offsets = pts - 2.0 * p.R * y
    r = np.sqrt((offsets ** 2).sum(axis=1))
    scale = p.lam / (p.Lam * p.alpha)
    bump = np.minimum(_TRUNCATION_CAP, scale * _u_profile(p, r))
    vals = -(pts ** 2).sum(axis=1) + bump
    inside = grid.inside_mask().ravel()
    vals = np.where(inside, vals, np.nan)

    sup_abs = float(np.nanmax(np.abs(vals)))
    if sup_abs > 1.0 + 1e-9:
        warnings.warn(
            f"sup|v| = {sup_abs:.6g} exceeds the claimed unit bound "
            "(background |x|^2 term); recorded, not rescaled", stacklevel=2)
    return GridFunction(dim=grid.dim, shape=grid.shape, spacing=grid.spacing,
                        center=grid.center, domain_radius=grid.domain_radius,
                        values=vals.reshape(grid.shape))


def _check_divergence_condition(n: int, ratio: float, epsilon: float) -> bool:
    return ((n - 1) * ratio + 1.0) * epsilon > n


def lp_lower_bound(p: RadialProfile, epsilon: float) -> float:
    """Honest lower bound for the L^eps mass of Theta over the tiled ball.

    Ball count ((1-4R)/(8 sqrt(n) R))^n times the per-ball annulus integral
    of the guaranteed Theta tail: S K R^((alpha+2) eps) (lo^-q - hi^-q)/q with
    q = (alpha+2) eps - n, lo the truncation radius, hi = R/2, S the unit
    sphere area and K = ((lambda/Lambda)(1 - 2^-(alpha+2)))^eps.

    Requires ((n-1) rho + 1) eps > n (strictly), which is equivalent to the
    admissible window (n-1) rho - 1 >= alpha > n/eps - 2 being nonempty.
    """
    n, a = p.n, p.alpha
    if not _check_divergence_condition(n, p.ratio, epsilon):
        raise ConditionError(
            f"((n-1)rho+1)eps = {((n - 1) * p.ratio + 1) * epsilon:.6g} must exceed n = {n}"
        )
    if not p.admissible:
        raise AdmissibilityError(
            f"alpha={a} exceeds (n-1)Lambda/lambda - 1; profile is not a supersolution"
        )
    if not a > n / epsilon - 2.0:
        raise ConditionError(
            f"alpha must exceed n/eps - 2 = {n / epsilon - 2.0:.6g} for divergence, got {a}"
        )
    if p.R >= 0.25:
        raise GeometryError(f"lattice balls require R < 1/4, got R={p.R}")

    count = ((1.0 - 4.0 * p.R) / (8.0 * math.sqrt(n) * p.R)) ** n
    return count * _per_ball_integral(p, epsilon)


def _per_ball_integral(p: RadialProfile, epsilon: float) -> float:
    """Guaranteed Theta^eps mass of one bump over its annulus lo < r < R/2.

    S K R^((alpha+2) eps) (lo^-q - hi^-q)/q with q = (alpha+2) eps - n, lo the
    truncation radius, S the unit sphere area, and
    K = ((lambda/Lambda)(1 - 2^-(alpha+2)))^eps.
    """
    n, a = p.n, p.alpha
    lo = p.truncation_radius
    hi = p.R / 2.0
    if lo >= hi:
        raise GeometryError(
            f"truncation radius {lo:.6g} reaches the annulus edge R/2 = {hi:.6g}; R too large"
        )
    q = (a + 2.0) * epsilon - n
    S = 2.0 * math.pi ** (n / 2.0) / _gamma_fn(n / 2.0)
    K = ((p.lam / p.Lam) * (1.0 - 2.0 ** (-(a + 2.0)))) ** epsilon
    return S * K * p.R ** ((a + 2.0) * epsilon) * (lo ** -q - hi ** -q) / q


@dataclass(frozen=True)
class DivergenceScan:
    """Lower bounds along halved radii R = 2^-m, with their power-law fit."""

    epsilon: float
    R_sequence: np.ndarray
    lower_bounds: np.ndarray
    condition_ok: bool
    m_values: np.ndarray
    alpha: float
    fit_exponent: float
    fit_r_squared: float
    note: str = ""


def divergence_scan(n: int, ratio: float, epsilon: float, m_range) -> DivergenceScan:
    """Certified L^eps mass along R = 2^-m: exact ball count x per-ball integral.

    The profile uses the largest admissible alpha = (n-1) rho - 1, which
    maximizes the guaranteed growth exponent 2((alpha+2)eps - n)/alpha. Each
    bound multiplies the exact lattice ball count at R (tighter than the
    (1-4R)^n/(8 sqrt(n) R)^n guarantee, so still a true lower bound) by the
    per-ball annulus integral. When the divergence condition
    ((n-1)rho+1)eps > n fails the scan is empty with an explanatory note.
    The fit is least squares of ln(bound) against ln(1/R) = m ln 2.
    """
    if not isinstance(n, int) or n < 3:
        raise DomainError(f"divergence_scan requires integer n >= 3, got {n}")
    if ratio < 1.0:
        raise DomainError(f"divergence_scan requires ratio >= 1, got {ratio}")
    if not (0.0 < epsilon and math.isfinite(epsilon)):
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    ms = list(m_range)
    if (not ms or any(m != int(m) for m in ms) or any(m < 3 for m in ms)
            or any(b <= a for a, b in zip(ms, ms[1:]))):
        raise DomainError(
            "m_range must be a nonempty strictly increasing list of integers m >= 3 "
            "(R = 2^-m < 1/4)"
        )
    ms = [int(m) for m in ms]

    if not _check_divergence_condition(n, ratio, epsilon):
        return DivergenceScan(
            epsilon=float(epsilon), R_sequence=np.array([]), lower_bounds=np.array([]),
            condition_ok=False, m_values=np.array([], dtype=int),
            alpha=math.nan, fit_exponent=math.nan, fit_r_squared=math.nan,
            note=f"((n-1)rho+1)eps = {((n - 1) * ratio + 1) * epsilon:.6g} "
                 f"does not exceed n = {n}; no divergence certificate",
        )

    alpha = (n - 1) * ratio - 1.0
    Rs, bounds = [], []
    for m in ms:
        R = 2.0 ** -m
        p = RadialProfile(n=n, alpha=alpha, R=R, lam=1.0, Lam=ratio)
        Rs.append(R)
        bounds.append(lattice_ball_count(n, R) * _per_ball_integral(p, epsilon))
    Rs = np.asarray(Rs)
    bounds = np.asarray(bounds)

    x = np.log(1.0 / Rs)
    yv = np.log(bounds)
    slope, intercept = np.polyfit(x, yv, 1)
    pred = slope * x + intercept
    ss_res = float(((yv - pred) ** 2).sum())
    ss_tot = float(((yv - yv.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else math.nan
    return DivergenceScan(
        epsilon=float(epsilon), R_sequence=Rs, lower_bounds=bounds, condition_ok=True,
        m_values=np.asarray(ms, dtype=int), alpha=alpha,
        fit_exponent=float(slope), fit_r_squared=float(r2),
    )
