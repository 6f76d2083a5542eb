"""Metric measure spaces: metrics, ball measures, quadrature, axiom checks.

Each Space bundles a metric d(x, y), a reference measure, and closed-form
ball measures where available. Points are numpy float64 row vectors whose
length matches ``space.dim``; complex coordinates are stored as interleaved
(re, im) pairs. Balls are open: membership means d(y, x) < r, and ties at
d == r are excluded deterministically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError

# Threshold conventions for the axiom checkers; recorded in emitted reports.
NDB_FLOOR = 1e-9
WAD_TOL = 0.05
WAD_HORIZON_POLYNOMIAL = 100.0
WAD_HORIZON_EXPONENTIAL = 20.0


@dataclass(frozen=True)
class QuadratureRule:
    """Tensor-grid midpoint rule restricted to a ball by its indicator.

    Midpoint cells keep the weights positive, so discretized kernel
    operators stay Hermitian PSD up to roundoff.
    """

    h: float = 0.05
    scheme: str = "tensor-midpoint"
    truncation: str = "ball-indicator"

    def __post_init__(self):
        if self.h <= 0:
            raise InputError(f"quadrature step must be positive, got {self.h}")


def unit_ball_volume(d: int) -> float:
    """Lebesgue volume of the d-dimensional Euclidean unit ball."""
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def _as_point(x, dim: int) -> np.ndarray:
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.shape != (dim,):
        raise InputError(f"expected a point of dimension {dim}, got shape {p.shape}")
    return p


class Space:
    """Base metric measure space.

    Subclasses fix the metric, the measure, the closed-form ball measure,
    and the growth profile used by tail integrals. ``growth_exponent`` is
    the polynomial volume-growth order, or None for exponential growth.
    """

    variant: str = "abstract"
    dim: int = 0
    growth_exponent: float | None = None

    # -- metric ------------------------------------------------------------

    def distances(self, X: np.ndarray, y) -> np.ndarray:
        """Distances from each row of X to the point y."""
        raise NotImplementedError

    def distance(self, x, y) -> float:
        x = _as_point(x, self.dim)
        return float(self.distances(x[None, :], y)[0])

    # -- measure -----------------------------------------------------------

    def ball_measure(self, x, r):
        """Measure of the open ball B_r(x); r may be a scalar or an array."""
        raise NotImplementedError

    def ball_measure_derivative(self, t):
        """Radial density V'(t) such that mu(B_r) = integral_0^r V'(t) dt.

        Used for exact radial reduction of integrals of functions of the
        distance. None for counting spaces, which sum over integer shells.
        """
        raise NotImplementedError

    def surface_coefficient(self, x, r) -> float:
        """Measure rate of the boundary strip, for quadrature tolerances.

        The midpoint ball quadrature is off by at most the measure of the
        cells cut by the sphere, of order h * surface_coefficient.
        """
        raise NotImplementedError

    # -- quadrature ---------------------------------------------------------

    def ball_nodes(self, center, r: float, quad: QuadratureRule):
        """Midpoint nodes and weights covering the open ball B_r(center)."""
        raise NotImplementedError

    def quadrature_ball_measure(self, x, r: float, quad: QuadratureRule) -> float:
        _, w = self.ball_nodes(x, r, quad)
        return float(np.sum(w))

    def quadrature_tolerance(self, x, r: float, quad: QuadratureRule) -> float:
        return 5.0 * quad.h * self.surface_coefficient(x, r)

    # -- misc ----------------------------------------------------------------

    def origin(self) -> np.ndarray:
        """A canonical base point (window and grid centers default to it)."""
        return np.zeros(self.dim)

    @property
    def wad_horizon(self) -> float:
        if self.growth_exponent is None:
            return WAD_HORIZON_EXPONENTIAL
        return WAD_HORIZON_POLYNOMIAL

    def snap(self, points: np.ndarray) -> np.ndarray:
        """Project arbitrary coordinates onto valid points of the space."""
        return points

    def spec(self) -> dict:
        return {"variant": self.variant}

    def _check_r(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise InputError("ball radius must be positive")
        return r

    def __repr__(self):
        params = {k: v for k, v in self.spec().items() if k != "variant"}
        inner = ", ".join(f"{k}={v}" for k, v in params.items())
        return f"{self.variant}({inner})"


def _midpoint_axis(lo: float, hi: float, h: float) -> np.ndarray:
    # Midpoints of cells of width h tiling [lo, hi]; the last cell may poke
    # past hi, the ball mask makes that harmless.
    m = max(int(np.ceil((hi - lo) / h)), 1)
    return lo + (np.arange(m) + 0.5) * h


def _tensor_nodes(axes) -> np.ndarray:
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


class EuclideanLebesgue(Space):
    """R^d with the Euclidean metric and Lebesgue measure."""

    def __init__(self, d: int):
        if d < 1:
            raise InputError(f"dimension must be >= 1, got {d}")
        self.dim = int(d)
        self.growth_exponent = float(d)
        self._omega = unit_ball_volume(d)
        self._density = 1.0  # constant density against Lebesgue

    variant = "EuclideanLebesgue"

    def spec(self):
        return {"variant": self.variant, "dim": self.dim}

    def distances(self, X, y):
        y = _as_point(y, self.dim)
        X = np.asarray(X, dtype=float)
        return np.sqrt(np.sum((X - y) ** 2, axis=-1))

    def ball_measure(self, x, r):
        r = self._check_r(r)
        return self._density * self._omega * r ** self.dim

    def ball_measure_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return self._density * self.dim * self._omega * t ** (self.dim - 1)

    def surface_coefficient(self, x, r):
        return self._density * self.dim * self._omega * r ** (self.dim - 1)

    def ball_nodes(self, center, r, quad):
        r = float(self._check_r(r))
        c = _as_point(center, self.dim)
        axes = [_midpoint_axis(c[j] - r, c[j] + r, quad.h) for j in range(self.dim)]
        nodes = _tensor_nodes(axes)
        inside = self.distances(nodes, c) < r
        nodes = nodes[inside]
        weights = np.full(len(nodes), self._density * quad.h ** self.dim)
        return nodes, weights


class PhasePlane(EuclideanLebesgue):
    """The time-frequency plane: R^2 with Euclidean metric and Lebesgue measure."""

    variant = "PhasePlane"

    def __init__(self):
        super().__init__(2)

    def spec(self):
        return {"variant": self.variant}


class FockGaussian(EuclideanLebesgue):
    """C^n as R^{2n}, Euclidean metric, measure 2^{-n} times Lebesgue.

    Coordinates are interleaved (re z_1, im z_1, ..., re z_n, im z_n).
    The density 2^{-n} is the Monge-Ampere density of the Gaussian weight.
    """

    variant = "FockGaussian"

    def __init__(self, n: int):
        if n < 1:
            raise InputError(f"complex dimension must be >= 1, got {n}")
        super().__init__(2 * n)
        self.complex_dim = int(n)
        self._density = 2.0 ** (-n)

    def spec(self):
        return {"variant": self.variant, "complex_dim": self.complex_dim}


class LogMetricLine(Space):
    """The real line with d(x, y) = log(1 + |x - y|) and Lebesgue measure.

    Balls grow exponentially: mu(B_r) = 2(e^r - 1). The unit-shell ratio
    tends to e - 1, so the small-shells axiom fails on this space.
    """

    variant = "LogMetricLine"
    dim = 1
    growth_exponent = None

    def distances(self, X, y):
        y = _as_point(y, self.dim)
        X = np.asarray(X, dtype=float)
        return np.log1p(np.abs(X[..., 0] - y[0]))

    def ball_measure(self, x, r):
        r = self._check_r(r)
        return 2.0 * np.expm1(r)

    def ball_measure_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return 2.0 * np.exp(t)

    def surface_coefficient(self, x, r):
        # two interval endpoints; the strip is measured in coordinate width
        return 2.0

    def ball_nodes(self, center, r, quad):
        r = float(self._check_r(r))
        c = _as_point(center, self.dim)
        half = float(np.expm1(r))
        xs = _midpoint_axis(c[0] - half, c[0] + half, quad.h)
        nodes = xs[:, None]
        inside = self.distances(nodes, c) < r
        nodes = nodes[inside]
        return nodes, np.full(len(nodes), quad.h)


class HyperbolicUpperHalfPlane(Space):
    """Upper half-plane with the hyperbolic metric and measure Im(z)^{-2} dA / pi.

    Points are (x, y), y > 0. With this normalization mu(B_r) = 4 sinh^2(r/2),
    independent of the center. Ball measures grow like e^r, and the
    small-shells axiom fails here.
    """

    variant = "HyperbolicUpperHalfPlane"

    def origin(self):
        return np.array([0.0, 1.0])
    dim = 2
    growth_exponent = None

    def _validate(self, p):
        if p[1] <= 0:
            raise InputError(f"point {p} is not in the open upper half-plane")
        return p

    def distances(self, X, y):
        y = self._validate(_as_point(y, self.dim))
        X = np.asarray(X, dtype=float)
        if np.any(X[..., 1] <= 0):
            raise InputError("points must lie in the open upper half-plane")
        sq = (X[..., 0] - y[0]) ** 2 + (X[..., 1] - y[1]) ** 2
        arg = 1.0 + sq / (2.0 * X[..., 1] * y[1])
        return np.arccosh(np.maximum(arg, 1.0))

    def ball_measure(self, x, r):
        r = self._check_r(r)
        return 4.0 * np.sinh(r / 2.0) ** 2

    def ball_measure_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return 2.0 * np.sinh(t)

    def surface_coefficient(self, x, r):
        # boundary strip of coordinate width h around the metric sphere,
        # integrated against the measure density, per unit h
        x = self._validate(_as_point(x, self.dim))
        return float(np.sinh(2.0 * r) / x[1])

    def ball_nodes(self, center, r, quad):
        r = float(self._check_r(r))
        c = self._validate(_as_point(center, self.dim))
        # the metric ball is the Euclidean disk centered (x0, y0 cosh r)
        # with radius y0 sinh r
        ex, ey, er = c[0], c[1] * np.cosh(r), c[1] * np.sinh(r)
        xs = _midpoint_axis(ex - er, ex + er, quad.h)
        ys = _midpoint_axis(max(ey - er, 0.0), ey + er, quad.h)
        ys = ys[ys > 0]
        nodes = _tensor_nodes([xs, ys])
        inside = self.distances(nodes, c) < r
        nodes = nodes[inside]
        weights = quad.h ** 2 / (math.pi * nodes[:, 1] ** 2)
        return nodes, weights


class IntegerWordMetric(Space):
    """Z^d with the sup-norm word metric and counting measure.

    The generating set is the unit box, so d(x, y) = max_j |x_j - y_j|.
    Quadrature is exact enumeration; the step h is ignored.
    """

    variant = "IntegerWordMetric"

    def __init__(self, d: int):
        if d < 1:
            raise InputError(f"dimension must be >= 1, got {d}")
        self.dim = int(d)
        self.growth_exponent = float(d)

    def spec(self):
        return {"variant": self.variant, "dim": self.dim}

    def snap(self, points):
        return np.round(np.asarray(points, dtype=float))

    def distances(self, X, y):
        y = _as_point(y, self.dim)
        X = np.asarray(X, dtype=float)
        return np.max(np.abs(X - y), axis=-1)

    def _side(self, r):
        # integer points with |k| < r per axis: 2*ceil(r) - 1 of them
        return 2.0 * np.ceil(np.asarray(r, dtype=float)) - 1.0

    def ball_measure(self, x, r):
        r = self._check_r(r)
        return self._side(r) ** self.dim

    def ball_measure_derivative(self, t):
        return None  # counting measure: use integer shells

    def shell_counts(self, j):
        """Number of integer points at word distance exactly j."""
        j = np.asarray(j, dtype=float)
        inner = np.where(j > 0, (2 * j - 1) ** self.dim, 0.0)
        return (2 * j + 1) ** self.dim - inner

    def surface_coefficient(self, x, r):
        return 0.0  # enumeration is exact

    def ball_nodes(self, center, r, quad):
        r = float(self._check_r(r))
        c = self.snap(_as_point(center, self.dim))
        m = int(np.ceil(r)) - 1
        axes = [c[j] + np.arange(-m, m + 1) for j in range(self.dim)]
        nodes = _tensor_nodes(axes)
        inside = self.distances(nodes, c) < r
        nodes = nodes[inside]
        return nodes, np.ones(len(nodes))


def metric_ball_lattice(space: Space, center, radius: float, steps) -> np.ndarray:
    """All lattice points center + steps * k (k integer) within metric distance
    <= radius of center. Rows are sorted lexicographically."""
    c = _as_point(center, space.dim)
    steps = np.atleast_1d(np.asarray(steps, dtype=float))
    if steps.shape == (1,) and space.dim > 1:
        steps = np.repeat(steps, space.dim)
    if steps.shape != (space.dim,):
        raise InputError(f"need {space.dim} lattice steps, got {steps.shape}")
    if np.any(steps <= 0):
        raise InputError("lattice steps must be positive")
    # conservative per-axis index bound: metric balls of every built-in
    # variant fit in a coordinate box of half-width f(radius)
    if isinstance(space, LogMetricLine):
        half = np.expm1(radius)
    elif isinstance(space, HyperbolicUpperHalfPlane):
        raise InputError("lattices on the hyperbolic plane are not supported")
    else:
        half = radius
    counts = np.floor(half / steps).astype(int)
    axes = [np.arange(-n, n + 1) * s for n, s in zip(counts, steps)]
    nodes = _tensor_nodes(axes) + c
    nodes = nodes[space.distances(nodes, c) <= radius]
    order = np.lexsort(nodes.T[::-1])
    return nodes[order]


# ---------------------------------------------------------------------------
# geometric axiom checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NdbResult:
    r: float
    inf_measure: float
    floor: float
    passed: bool


@dataclass(frozen=True)
class WadResult:
    radii: np.ndarray
    ratio_curve: np.ndarray  # sup over centers of shell/ball measure
    wad_tol: float
    horizon: float
    passed: bool


@dataclass(frozen=True)
class DoublingResult:
    radii: np.ndarray
    c_curve: np.ndarray  # sup over centers of mu(B_2r)/mu(B_r)
    passed: bool


@dataclass(frozen=True)
class AnnularResult:
    radii: np.ndarray
    rho_prime: float
    ratio_grown: np.ndarray  # mu(B_{r+rho'})/mu(B_r), should tend to 1
    ratio_shell: np.ndarray  # mu(B_{r+rho'} \ B_{r-rho'})/mu(B_r), should tend to 0
    trend_ok: bool


def _centers_array(space: Space, centers) -> np.ndarray:
    C = np.asarray(centers, dtype=float)
    if C.ndim == 1:
        C = C[:, None] if space.dim == 1 else C[None, :]
    if C.ndim != 2 or C.shape[1] != space.dim or len(C) == 0:
        raise InputError("centers must be a nonempty list of points")
    return C


def _increasing_radii(radii) -> np.ndarray:
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    if len(r) == 0:
        raise InputError("need at least one radius")
    if np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise InputError("radii must be positive and strictly increasing")
    return r


def check_ndb(space: Space, centers, r: float, floor: float = NDB_FLOOR) -> NdbResult:
    """Non-degeneracy: balls of radius r have measure bounded below."""
    C = _centers_array(space, centers)
    r = float(space._check_r(r))
    inf_measure = min(float(space.ball_measure(c, r)) for c in C)
    return NdbResult(r=r, inf_measure=inf_measure, floor=floor,
                     passed=inf_measure > floor)


def check_wad(space: Space, centers, radii, wad_tol: float = WAD_TOL) -> WadResult:
    """Small unit shells: sup_x mu(B_{r+1} \\ B_r) / mu(B_r) along radii.

    Passes when the ratio at the largest radius is below wad_tol and the
    curve is nonincreasing over the last half of the radii. The largest
    radius must reach the per-space horizon.
    """
    C = _centers_array(space, centers)
    r = _increasing_radii(radii)
    if r[-1] < space.wad_horizon:
        raise InputError(
            f"largest radius {r[-1]} is below the {space.variant} horizon "
            f"{space.wad_horizon}")
    curve = np.zeros(len(r))
    for c in C:
        inner = np.asarray(space.ball_measure(c, r), dtype=float)
        outer = np.asarray(space.ball_measure(c, r + 1.0), dtype=float)
        curve = np.maximum(curve, (outer - inner) / inner)
    tail = curve[len(curve) // 2:]
    decreasing = bool(np.all(np.diff(tail) <= 1e-12 + 1e-9 * tail[:-1]))
    return WadResult(radii=r, ratio_curve=curve, wad_tol=wad_tol,
                     horizon=space.wad_horizon,
                     passed=bool(curve[-1] < wad_tol) and decreasing)


def check_locally_doubling(space: Space, centers, radii) -> DoublingResult:
    """sup_x mu(B_2r)/mu(B_r) along radii; passes when finite and not growing."""
    C = _centers_array(space, centers)
    r = _increasing_radii(radii)
    curve = np.zeros(len(r))
    for c in C:
        curve = np.maximum(
            curve,
            np.asarray(space.ball_measure(c, 2 * r), dtype=float)
            / np.asarray(space.ball_measure(c, r), dtype=float))
    half = len(curve) // 2
    head, tail = curve[: max(half, 1)], curve[half:]
    ok = bool(np.all(np.isfinite(curve))
              and np.max(tail) <= np.max(head) * (1 + 1e-2))
    return DoublingResult(radii=r, c_curve=curve, passed=ok)


def annular_variants(space: Space, centers, radii, rho_prime: float) -> AnnularResult:
    """Fixed-width annuli: mu(B_{r+rho'})/mu(B_r) -> 1 and
    mu(B_{r+rho'} \\ B_{r-rho'})/mu(B_r) -> 0 along radii."""
    C = _centers_array(space, centers)
    r = _increasing_radii(radii)
    if rho_prime <= 0:
        raise InputError("rho_prime must be positive")
    if r[0] <= rho_prime:
        raise InputError("radii must exceed rho_prime")
    grown = np.zeros(len(r))
    shell = np.zeros(len(r))
    for c in C:
        base = np.asarray(space.ball_measure(c, r), dtype=float)
        up = np.asarray(space.ball_measure(c, r + rho_prime), dtype=float)
        dn = np.asarray(space.ball_measure(c, r - rho_prime), dtype=float)
        grown = np.maximum(grown, up / base)
        shell = np.maximum(shell, (up - dn) / base)
    half = len(r) // 2
    trend_ok = bool(
        grown[-1] - 1.0 <= abs(grown[half] - 1.0) + 1e-12
        and shell[-1] <= shell[half] + 1e-12
        and grown[-1] < 1.5 and shell[-1] < 0.5)
    return AnnularResult(radii=r, rho_prime=float(rho_prime),
                         ratio_grown=grown, ratio_shell=shell,
                         trend_ok=trend_ok)
