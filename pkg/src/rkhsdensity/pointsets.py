"""Finite point configurations: counting, densities, separation.

A PointSet carries the window of validity: the ball inside which the
configuration is complete. Counts that would need data outside the window
are flagged censored instead of silently truncating, so boundary effects
cannot masquerade as density estimates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import InputError
from .spaces import Space, metric_ball_lattice

WINDOW_SLACK = 1e-9  # containment comparisons tolerate this much roundoff


@dataclass(frozen=True)
class PointSet:
    points: np.ndarray        # (n, dim) float rows
    window_center: np.ndarray
    window_radius: float
    provenance: dict

    def __len__(self):
        return len(self.points)

    def contains_ball(self, space: Space, x, r: float) -> bool:
        """True when B_r(x) lies inside the window of validity."""
        return (space.distance(x, self.window_center) + r
                <= self.window_radius + WINDOW_SLACK)

    def restricted(self, space: Space, radius: float, center=None) -> "PointSet":
        """The sub-configuration complete on a smaller window."""
        c = self.window_center if center is None else np.asarray(center, float)
        if not self.contains_ball(space, c, radius):
            raise InputError(
                f"restriction window (r={radius}) leaves the valid window")
        keep = space.distances(self.points, c) <= radius + WINDOW_SLACK
        prov = dict(self.provenance)
        prov["restricted_to"] = float(radius)
        return PointSet(points=self.points[keep], window_center=c,
                        window_radius=float(radius), provenance=prov)


def make_pointset(points, space: Space, window_center, window_radius: float,
                  provenance: dict | None = None) -> PointSet:
    """Validated constructor: rejects duplicates and points outside the window."""
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        pts = pts.reshape(0, space.dim)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] != space.dim:
        raise InputError(
            f"points must have shape (n, {space.dim}), got {pts.shape}")
    wc = np.asarray(window_center, dtype=float).reshape(space.dim)
    if window_radius <= 0:
        raise InputError("window radius must be positive")
    if len(pts):
        if len(np.unique(pts, axis=0)) != len(pts):
            raise InputError("point set contains duplicate points")
        d = space.distances(pts, wc)
        if np.max(d) > window_radius + WINDOW_SLACK:
            raise InputError(
                f"point at distance {np.max(d):.6g} lies outside the window "
                f"(radius {window_radius})")
    order = np.lexsort(pts.T[::-1]) if len(pts) else np.array([], dtype=int)
    return PointSet(points=pts[order], window_center=wc,
                    window_radius=float(window_radius),
                    provenance=dict(provenance or {}))


def load_pointset(path, space: Space, window_center, window_radius: float) -> PointSet:
    """Read points from a text file: one point per line, whitespace-separated
    coordinates, '#' starts a comment."""
    try:
        pts = np.loadtxt(path, comments="#", ndmin=2)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read point set from {path}: {exc}") from exc
    if pts.size == 0:
        pts = pts.reshape(0, space.dim)
    return make_pointset(pts, space, window_center, window_radius,
                         provenance={"generator": "file", "path": str(path)})


def save_pointset(path, ps: PointSet) -> None:
    header = (f"window_center {' '.join(f'{v:.17g}' for v in ps.window_center)}\n"
              f"window_radius {ps.window_radius:.17g}\n"
              f"provenance {ps.provenance}")
    np.savetxt(path, ps.points, header=header, fmt="%.17g")


class BallCount(NamedTuple):
    count: int
    censored: bool


def count_in_ball(ps: PointSet, space: Space, x, r: float) -> BallCount:
    """#(points strictly inside B_r(x)); censored when the ball leaves the window."""
    r = float(space._check_r(r))
    censored = not ps.contains_ball(space, x, r)
    if len(ps) == 0:
        return BallCount(0, censored)
    count = int(np.count_nonzero(space.distances(ps.points, x) < r))
    return BallCount(count, censored)


# ---------------------------------------------------------------------------
# densities and separation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityReport:
    radii: np.ndarray
    inf_ratio: np.ndarray      # per radius, over admissible centers
    sup_ratio: np.ndarray
    censored_centers: np.ndarray  # per radius, how many centers were dropped
    D_minus_est: float         # inf ratio at the largest radius
    D_plus_est: float
    trend_minus: float         # slope of inf_ratio against 1/r
    trend_plus: float


@dataclass(frozen=True)
class SeparationReport:
    rho0: float
    C_rho: float
    passed: bool
    n_centers: int
    n_censored: int


@dataclass(frozen=True)
class ShellBoundResult:
    lhs: int
    rhs: float
    holds: bool
    censored: bool


def _slope_vs_inv_r(radii: np.ndarray, values: np.ndarray) -> float:
    if len(radii) < 2:
        return 0.0
    return float(np.polyfit(1.0 / radii, values, 1)[0])


def beurling_density(ps: PointSet, space: Space, centers, radii) -> DensityReport:
    """Per-radius extremes of count/measure over candidate centers.

    The limit over r is replaced by the value at the largest radius plus a
    trend slope against 1/r, which makes finite-radius bias visible.
    Centers whose ball leaves the window are dropped per radius and counted.
    """
    C = np.asarray(centers, dtype=float)
    if C.ndim == 1:
        C = C[:, None] if space.dim == 1 else C[None, :]
    if C.size == 0:
        raise InputError("need at least one candidate center")
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if radii.size == 0 or np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise InputError("radii must be positive and strictly increasing")

    center_dist = space.distances(C, ps.window_center)
    n_r = len(radii)
    inf_ratio = np.full(n_r, np.inf)
    sup_ratio = np.zeros(n_r)
    censored = np.zeros(n_r, dtype=int)

    for c, dc in zip(C, center_dist):
        sorted_d = np.sort(space.distances(ps.points, c)) if len(ps) else None
        admissible = dc + radii <= ps.window_radius + WINDOW_SLACK
        censored += ~admissible
        if not np.any(admissible):
            continue
        r_ok = radii[admissible]
        counts = (np.searchsorted(sorted_d, r_ok, side="left")
                  if sorted_d is not None else np.zeros(len(r_ok)))
        ratios = counts / np.asarray(space.ball_measure(c, r_ok), dtype=float)
        inf_ratio[admissible] = np.minimum(inf_ratio[admissible], ratios)
        sup_ratio[admissible] = np.maximum(sup_ratio[admissible], ratios)

    if np.any(np.isinf(inf_ratio)):
        bad = radii[np.isinf(inf_ratio)][0]
        raise InputError(
            f"no candidate center admits radius {bad} inside the window")

    return DensityReport(
        radii=radii, inf_ratio=inf_ratio, sup_ratio=sup_ratio,
        censored_centers=censored,
        D_minus_est=float(inf_ratio[-1]), D_plus_est=float(sup_ratio[-1]),
        trend_minus=_slope_vs_inv_r(radii, inf_ratio),
        trend_plus=_slope_vs_inv_r(radii, sup_ratio))


def relative_separation(ps: PointSet, space: Space, rho: float,
                        centers) -> SeparationReport:
    """Smallest constant with #(points in B_rho(x)) <= C * mu(B_rho(x)) over
    the tested centers. Finite point sets always give a finite constant; the
    reported value supports cross-radius monotonicity checks."""
    rho = float(space._check_r(rho))
    C = np.asarray(centers, dtype=float)
    if C.ndim == 1:
        C = C[:, None] if space.dim == 1 else C[None, :]
    if C.size == 0:
        raise InputError("need at least one candidate center")
    best = 0.0
    n_censored = 0
    for c in C:
        cnt, censored = count_in_ball(ps, space, c, rho)
        if censored:
            n_censored += 1
            continue
        best = max(best, cnt / float(space.ball_measure(c, rho)))
    return SeparationReport(rho0=rho, C_rho=best,
                            passed=bool(np.isfinite(best)),
                            n_centers=len(C) - n_censored,
                            n_censored=n_censored)


def shell_count_bound(ps: PointSet, space: Space, x, R: float, r: float,
                      rho: float, C_rho: float) -> ShellBoundResult:
    """Annulus count #(B_{R+r} \\ B_R) against C_rho * mu(B_{R+r+rho} \\ B_{R-rho}).

    C_rho comes from a prior relative_separation call. Censored when the
    outer comparison ball leaves the window.
    """
    if R <= rho:
        raise InputError(f"need R > rho, got R={R}, rho={rho}")
    if r <= 0:
        raise InputError("annulus width r must be positive")
    outer = count_in_ball(ps, space, x, R + r)
    inner = count_in_ball(ps, space, x, R)
    lhs = outer.count - inner.count
    grown = float(space.ball_measure(x, R + r + rho))
    shrunk = float(space.ball_measure(x, R - rho)) if R - rho > 0 else 0.0
    rhs = C_rho * (grown - shrunk)
    censored = not ps.contains_ball(space, x, R + r + rho)
    return ShellBoundResult(lhs=int(lhs), rhs=rhs,
                            holds=bool(lhs <= rhs + 1e-9), censored=censored)


def candidate_centers(space: Space, ps: PointSet, spacing: float = 1.0,
                      cap: int = 4000) -> np.ndarray:
    """Candidate centers for sup/inf scans: unit grid inside the window,
    the points themselves, and nearest-neighbor midpoints.

    The true extrema range over all of X; this finite set is a heuristic.
    Midpoints are included because count/measure extrema of lattice-like
    sets are attained between points, not on them.
    """
    parts = [metric_ball_lattice(space, ps.window_center, ps.window_radius,
                                 np.full(space.dim, float(spacing)))]
    if len(ps) >= 1:
        parts.append(ps.points)
    if len(ps) >= 2:
        _, idx = cKDTree(ps.points).query(ps.points, k=2)
        parts.append((ps.points + ps.points[idx[:, 1]]) / 2.0)
    cand = space.snap(np.concatenate(parts, axis=0))
    cand = cand[space.distances(cand, ps.window_center)
                <= ps.window_radius + WINDOW_SLACK]
    cand = np.unique(np.round(cand * 1e9) / 1e9, axis=0)
    if len(cand) > cap:
        cand = cand[np.linspace(0, len(cand) - 1, cap).astype(int)]
    return cand
