"""Reproducing kernels with closed forms, normalization, and axiom checks.

All kernels are pure Hermitian evaluators: ``pairwise(X, Y)`` returns the
matrix k(x_i, y_j) and ``diag(X)`` the values k(x_i, x_i). Checkers measure
the diagonal bounds, the L2 tail localization of kernel sections, the
sampled-tail property on a point set, and polynomial off-diagonal decay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import DegenerateKernelError, InputError
from .pointsets import PointSet
from .spaces import (EuclideanLebesgue, FockGaussian, IntegerWordMetric,
                     PhasePlane, QuadratureRule, Space)


class Kernel:
    """Base evaluable kernel.

    known_diagonal is the constant value of k(x, x) when it is constant,
    else None. decay_scale is the distance over which the kernel varies;
    quadrature steps should stay below a fifth of it. formal_dimension is
    set for kernels arising from a square-integrable representation, where
    it equals the critical density.
    """

    variant: str = "abstract"
    dim: int = 0
    known_diagonal: float | None = None
    decay_class: str = "unknown"
    decay_scale: float = 1.0
    formal_dimension: float | None = None
    axiom_test_only: bool = False
    # projection kernels reproduce themselves under the measure, giving the
    # exact identity integral |k(x,y)|^2 dmu(y) = k(x,x) used by L2 tails
    projection: bool = False

    def pairwise(self, X, Y) -> np.ndarray:
        raise NotImplementedError

    def diag(self, X) -> np.ndarray:
        X = self._points(X)
        return np.real(self.pairwise(X, X).diagonal()).copy()

    def eval(self, x, y):
        x = self._points(x)
        y = self._points(y)
        return complex(self.pairwise(x, y)[0, 0])

    def natural_space(self) -> Space:
        raise NotImplementedError

    def _points(self, X) -> np.ndarray:
        P = np.asarray(X, dtype=float)
        if P.ndim == 1:
            P = P[:, None] if self.dim == 1 else P[None, :]
        if P.ndim != 2 or P.shape[1] != self.dim:
            raise InputError(
                f"{self.variant} expects points of dimension {self.dim}, "
                f"got shape {P.shape}")
        return P

    def spec(self) -> dict:
        return {"variant": self.variant}

    def __repr__(self):
        params = {k: v for k, v in self.spec().items() if k != "variant"}
        inner = ", ".join(f"{k}={v}" for k, v in params.items())
        return f"{self.variant}({inner})"


class PaleyWienerBox(Kernel):
    """Bandlimited projection kernel for a box spectrum.

    k(x, y) = prod_j W_j sinc(W_j (x_j - y_j)) with sinc(t) = sin(pi t)/(pi t).
    The diagonal is the spectrum volume prod_j W_j, constant in x.
    """

    variant = "PaleyWienerBox"
    decay_class = "polynomial"
    projection = True

    def __init__(self, d: int = 1, bandwidths=1.0):
        W = np.atleast_1d(np.asarray(bandwidths, dtype=float))
        if W.shape == (1,) and d > 1:
            W = np.repeat(W, d)
        if W.shape != (d,) or np.any(W <= 0):
            raise InputError(f"need {d} positive bandwidths, got {bandwidths}")
        self.dim = int(d)
        self.bandwidths = W
        self.known_diagonal = float(np.prod(W))
        self.decay_scale = float(1.0 / np.max(W))

    def spec(self):
        return {"variant": self.variant, "dim": self.dim,
                "bandwidths": self.bandwidths.tolist()}

    def natural_space(self):
        return EuclideanLebesgue(self.dim)

    def pairwise(self, X, Y):
        X, Y = self._points(X), self._points(Y)
        diff = X[:, None, :] - Y[None, :, :]
        # np.sinc is the normalized sinc sin(pi t)/(pi t)
        return np.prod(self.bandwidths * np.sinc(self.bandwidths * diff), axis=-1)

    def diag(self, X):
        X = self._points(X)
        return np.full(len(X), self.known_diagonal)


class FockGaussianNormalized(Kernel):
    """Gaussian-weight Fock space kernel on C^n in normalized form.

    K(z, w) = (2/pi)^n exp(z . conj(w) - |z|^2/2 - |w|^2/2), so the diagonal
    is the constant (2/pi)^n and |K(z, w)| = (2/pi)^n exp(-|z-w|^2/2).
    Points are interleaved real coordinates (re z_1, im z_1, ...).
    """

    variant = "FockGaussianNormalized"
    decay_class = "gaussian"
    projection = True

    def __init__(self, n: int = 1):
        if n < 1:
            raise InputError(f"complex dimension must be >= 1, got {n}")
        self.complex_dim = int(n)
        self.dim = 2 * n
        self.known_diagonal = (2.0 / math.pi) ** n
        self.decay_scale = 1.0

    def spec(self):
        return {"variant": self.variant, "complex_dim": self.complex_dim}

    def natural_space(self):
        return FockGaussian(self.complex_dim)

    def _complex(self, X):
        return X[:, 0::2] + 1j * X[:, 1::2]

    def pairwise(self, X, Y):
        Z = self._complex(self._points(X))
        W = self._complex(self._points(Y))
        zz = np.sum(np.abs(Z) ** 2, axis=1)
        ww = np.sum(np.abs(W) ** 2, axis=1)
        cross = Z @ np.conj(W).T
        return self.known_diagonal * np.exp(
            cross - 0.5 * zz[:, None] - 0.5 * ww[None, :])

    def diag(self, X):
        X = self._points(X)
        return np.full(len(X), self.known_diagonal)


class GaborGaussian(Kernel):
    """Phase-plane kernel of the Gaussian coherent system.

    For time-frequency shifts pi(x, w) = modulation(w) translation(x) acting
    on the unit Gaussian, the kernel of the transform range is
    k(z, z') = conj(<pi(z)g, pi(z')g>)
             = exp(-pi i (w - w')(x + x')) exp(-pi |z - z'|^2 / 2).
    The overall phase depends on this convention; every checker and Gram
    matrix uses the full complex value, so spectra are convention-free.
    The diagonal is 1, which is also the formal dimension of the
    representation, hence the critical phase-space density.
    """

    variant = "GaborGaussian"
    dim = 2
    decay_class = "gaussian"
    known_diagonal = 1.0
    formal_dimension = 1.0
    projection = True
    decay_scale = 1.0

    def natural_space(self):
        return PhasePlane()

    def pairwise(self, X, Y):
        X, Y = self._points(X), self._points(Y)
        x, w = X[:, 0][:, None], X[:, 1][:, None]
        xp, wp = Y[:, 0][None, :], Y[:, 1][None, :]
        sq = (x - xp) ** 2 + (w - wp) ** 2
        return np.exp(-1j * math.pi * (w - wp) * (x + xp) - 0.5 * math.pi * sq)

    def diag(self, X):
        X = self._points(X)
        return np.ones(len(X))


class SyntheticPolyDecay(Kernel):
    """Positive-definite test kernel (1 + |x-y|^2)^(-sigma) on R^d.

    Used for decay-hypothesis audits and Gram experiments only: it is not
    presented as the projection kernel of an L2 subspace, so no frame
    claims attach to it (axiom_test_only).
    """

    variant = "SyntheticPolyDecay"
    decay_class = "polynomial"
    known_diagonal = 1.0
    axiom_test_only = True

    def __init__(self, sigma: float, d: int = 1):
        if sigma <= 0:
            raise InputError(f"sigma must be positive, got {sigma}")
        self.sigma = float(sigma)
        self.dim = int(d)

    def spec(self):
        return {"variant": self.variant, "sigma": self.sigma, "dim": self.dim}

    def natural_space(self):
        return EuclideanLebesgue(self.dim)

    def pairwise(self, X, Y):
        X, Y = self._points(X), self._points(Y)
        diff = X[:, None, :] - Y[None, :, :]
        return (1.0 + np.sum(diff ** 2, axis=-1)) ** (-self.sigma)

    def diag(self, X):
        X = self._points(X)
        return np.ones(len(X))

    def radial_squared_profile(self, t):
        """|k(x, y)|^2 as a function of distance t; |k|^2 ~ t^(-4 sigma)."""
        return (1.0 + np.asarray(t, dtype=float) ** 2) ** (-2.0 * self.sigma)

    @property
    def squared_decay_exponent(self) -> float:
        return 4.0 * self.sigma


class NormalizedKernel(Kernel):
    """k(x, y) / (psi(x) psi(y)) with psi(x) = k(x, x)^(1/2): unit diagonal."""

    def __init__(self, base: Kernel):
        self.base = base
        self.variant = f"Normalized[{base.variant}]"
        self.dim = base.dim
        self.known_diagonal = 1.0
        self.decay_class = base.decay_class
        self.decay_scale = base.decay_scale
        self.formal_dimension = base.formal_dimension
        self.axiom_test_only = base.axiom_test_only

    def spec(self):
        return {"variant": "Normalized", "base": self.base.spec()}

    def natural_space(self):
        return self.base.natural_space()

    def psi(self, X):
        d = self.base.diag(X)
        if np.any(d <= 0):
            raise DegenerateKernelError(
                f"{self.base.variant} diagonal vanishes; cannot normalize")
        return np.sqrt(d)

    def pairwise(self, X, Y):
        return (self.base.pairwise(X, Y)
                / np.outer(self.psi(self.base._points(X)),
                           self.psi(self.base._points(Y))))

    def diag(self, X):
        X = self._points(X)
        self.psi(X)  # raises on a degenerate diagonal
        return np.ones(len(X))


def normalize(kernel: Kernel) -> NormalizedKernel:
    """Unit-diagonal form of the kernel; idempotent."""
    if isinstance(kernel, NormalizedKernel):
        return kernel
    return NormalizedKernel(kernel)


# ---------------------------------------------------------------------------
# axiom checkers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagonalBounds:
    C1_est: float
    C2_est: float
    passed: bool


@dataclass(frozen=True)
class WitnessBound:
    bound: float            # certified lower bound 1/C^2 for the diagonal
    vacuous: bool           # C was infinite
    consistent: bool        # observed diagonal does not undercut the bound


@dataclass(frozen=True)
class TailReport:
    radii: np.ndarray
    sup_tail: np.ndarray                  # sup over centers, per radius
    per_center: np.ndarray                # (centers, radii) tail values
    epsilon_to_radius: dict               # eps -> smallest tested r with sup <= eps^2
    censored: np.ndarray = field(default=None)  # per radius, True if any center censored


@dataclass(frozen=True)
class PolyDecayResult:
    sigma: float
    C: float
    decay_holds: bool
    max_envelope_ratio: float   # max over pairs of |k| (1+d)^sigma / C
    tail_radii: np.ndarray
    tail_curve: np.ndarray
    convergent: bool
    passed: bool


def check_axiom_D(kernel: Kernel, centers) -> DiagonalBounds:
    """Extremes of the diagonal k(x, x) over the tested centers."""
    d = kernel.diag(centers)
    if len(d) == 0:
        raise InputError("need at least one center")
    c1, c2 = float(np.min(d)), float(np.max(d))
    return DiagonalBounds(C1_est=c1, C2_est=c2,
                          passed=bool(c1 > 0 and np.isfinite(c2)))


def witness_diagonal_bound(kernel: Kernel, witness_norm_bound: float,
                           centers, tol: float = 1e-9) -> WitnessBound:
    """Certified diagonal lower bound 1/C^2 from a unit-at-x witness family.

    The caller asserts that for each x there is f_x with f_x(x) = 1 and
    ||f_x|| <= C; then k(x,x) >= 1/C^2. An observed diagonal below the
    bound means the asserted witness family cannot exist for this kernel,
    which is flagged as an inconsistency rather than raised.
    """
    if witness_norm_bound <= 0:
        raise InputError("witness norm bound must be positive")
    if not np.isfinite(witness_norm_bound):
        return WitnessBound(bound=0.0, vacuous=True, consistent=True)
    bound = 1.0 / witness_norm_bound ** 2
    observed = check_axiom_D(kernel, centers)
    return WitnessBound(bound=bound, vacuous=False,
                        consistent=bool(observed.C1_est >= bound - tol))


def check_WL(kernel: Kernel, space: Space, centers, radii,
             quad: QuadratureRule) -> TailReport:
    """L2 tails of kernel sections outside balls.

    Projection kernels: tail(x, r) = k(x,x) - integral_{B_r(x)} |k(x,y)|^2,
    using ||k_x||^2 = k(x,x) to turn the improper complement integral into
    a proper ball integral. Radially-profiled kernels: the complement
    integral is reduced exactly to the radial profile and integrated to
    infinity (infinite when the profile decays too slowly for the volume
    growth). Nonincreasing in r either way.
    """
    C = kernel._points(centers)
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise InputError("radii must be positive and strictly increasing")

    if not kernel.projection:
        profile = getattr(kernel, "radial_squared_profile", None)
        if profile is None:
            raise InputError(
                f"{kernel.variant} is not a projection kernel and has no "
                "radial profile; its L2 tails are not computable exactly")
        exponent = getattr(kernel, "squared_decay_exponent", None)
        convergent = (space.growth_exponent is not None
                      and exponent is not None
                      and exponent > space.growth_exponent)
        if convergent:
            row = np.array([_radial_tail(space, profile, ri, None) for ri in r])
        else:
            row = np.full(len(r), np.inf)
        tails = np.broadcast_to(row, (len(C), len(r))).copy()
        return TailReport(radii=r, sup_tail=row, per_center=tails,
                          epsilon_to_radius=_epsilon_map(r, row),
                          censored=np.zeros(len(r), dtype=bool))

    tails = np.empty((len(C), len(r)))
    for i, c in enumerate(C):
        nodes, w = space.ball_nodes(c, float(r[-1]), quad)
        vals = np.abs(kernel.pairwise(c[None, :], nodes)[0]) ** 2 * w
        d = space.distances(nodes, c)
        order = np.argsort(d, kind="stable")
        csum = np.concatenate([[0.0], np.cumsum(vals[order])])
        idx = np.searchsorted(d[order], r, side="left")
        tails[i] = float(kernel.diag(c[None, :])[0]) - csum[idx]
    sup_tail = tails.max(axis=0)
    eps_map = _epsilon_map(r, sup_tail)
    return TailReport(radii=r, sup_tail=sup_tail, per_center=tails,
                      epsilon_to_radius=eps_map,
                      censored=np.zeros(len(r), dtype=bool))


def check_HAP(kernel: Kernel, ps: PointSet, space: Space, centers,
              radii) -> TailReport:
    """Sampled tails sum_{points outside B_r(x)} |k(x, lambda)|^2.

    A (center, radius) pair is censored when B_r(center) leaves the window:
    the sum then misses unseen points and underestimates the true tail.
    """
    C = kernel._points(centers)
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise InputError("radii must be positive and strictly increasing")
    tails = np.empty((len(C), len(r)))
    censored = np.zeros((len(C), len(r)), dtype=bool)
    for i, c in enumerate(C):
        if len(ps) == 0:
            tails[i] = 0.0
            continue
        vals = np.abs(kernel.pairwise(c[None, :], ps.points)[0]) ** 2
        d = space.distances(ps.points, c)
        order = np.argsort(d, kind="stable")
        # tail(r) = total - sum over d < r
        csum = np.concatenate([[0.0], np.cumsum(vals[order])])
        idx = np.searchsorted(d[order], r, side="left")
        tails[i] = csum[-1] - csum[idx]
        censored[i] = (space.distance(c, ps.window_center) + r
                       > ps.window_radius + 1e-9)
    sup_tail = tails.max(axis=0)
    return TailReport(radii=r, sup_tail=sup_tail, per_center=tails,
                      epsilon_to_radius=_epsilon_map(r, sup_tail),
                      censored=censored.any(axis=0))


def _epsilon_map(radii, sup_tail, epsilons=(0.1, 0.01)) -> dict:
    out = {}
    for eps in epsilons:
        hit = np.nonzero(sup_tail <= eps ** 2)[0]
        out[eps] = float(radii[hit[0]]) if len(hit) else None
    return out


def _dyadic_pairs(space: Space, n_pairs: int, d_max: float, seed: int):
    """Point pairs stratified into dyadic distance shells [1,2), [2,4), ...

    Only spaces whose metric is Euclidean on the coordinates participate;
    the near-diagonal d < 1 is governed by the diagonal-bounds axiom and is
    not sampled here.
    """
    if not isinstance(space, EuclideanLebesgue):
        raise InputError(
            f"pair sampling needs a Euclidean-metric space, got {space.variant}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    n_shells = max(int(np.ceil(np.log2(max(d_max, 2.0)))), 1)
    per = max(n_pairs // n_shells, 1)
    xs, ys, ds = [], [], []
    for s in range(n_shells):
        lo, hi = 2.0 ** s, min(2.0 ** (s + 1), d_max)
        if lo >= d_max:
            break
        t = rng.uniform(lo, hi, size=per)
        u = rng.normal(size=(per, space.dim))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        x = rng.uniform(-2.0, 2.0, size=(per, space.dim))
        xs.append(x)
        ys.append(x + t[:, None] * u)
        ds.append(t)
    return np.concatenate(xs), np.concatenate(ys), np.concatenate(ds)


def _radial_tail(space: Space, profile, r: float,
                 upper: float | None) -> float:
    """integral over {d(x, y) in (r, upper)} of profile(d) dmu(y), reduced
    exactly to the radial coordinate. upper=None means infinity."""
    if isinstance(space, IntegerWordMetric):
        hi = upper if upper is not None else max(10.0 * r, 1e4)
        j = np.arange(math.ceil(r), math.ceil(hi) + 1, dtype=float)
        keep = j > r  # strict complement of the open ball boundary handling
        j = j[keep]
        return float(np.sum(profile(j) * space.shell_counts(j)))
    val, _ = integrate.quad(
        lambda t: float(profile(t)) * float(space.ball_measure_derivative(t)),
        r, np.inf if upper is None else upper, limit=200)
    return float(val)


def _tail_integral(space: Space, two_sigma: float, r: float,
                   upper: float | None) -> float:
    """Radial tail of the decay-hypothesis envelope (1 + d)^(-2 sigma)."""
    return _radial_tail(space, lambda t: (1.0 + t) ** (-two_sigma), r, upper)


def check_poly_decay_hypothesis(kernel: Kernel, space: Space, sigma: float,
                                C: float, sample_pairs: int = 1000,
                                radii=(1.0, 2.0, 4.0, 8.0, 16.0, 32.0),
                                seed: int = 0) -> PolyDecayResult:
    """Audit of the polynomial off-diagonal decay hypothesis.

    Checks |k(x,y)| <= C (1 + d(x,y))^(-sigma) on sampled pairs at dyadic
    distances >= 1, and whether the complement integral of (1+d)^(-2 sigma)
    vanishes as r grows. The integral converges iff 2 sigma exceeds the
    volume-growth exponent; exponential-growth spaces never qualify. In the
    divergent case the curve is computed over windows [r, 4r] so the
    divergence is visible as growth.
    """
    if sigma <= 0:
        raise InputError("sigma must be positive")
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise InputError("radii must be positive and strictly increasing")

    X, Y, d = _dyadic_pairs(space, sample_pairs, float(r[-1]), seed)
    vals = np.abs(np.array([kernel.pairwise(x[None, :], y[None, :])[0, 0]
                            for x, y in zip(X, Y)]))
    envelope = C * (1.0 + d) ** (-sigma)
    ratio = float(np.max(vals / envelope))
    decay_holds = bool(ratio <= 1.0 + 1e-9)

    two_sigma = 2.0 * sigma
    convergent = (space.growth_exponent is not None
                  and two_sigma > space.growth_exponent)
    if convergent:
        curve = np.array([_tail_integral(space, two_sigma, ri, None) for ri in r])
    else:
        curve = np.array([_tail_integral(space, two_sigma, ri, 4.0 * ri) for ri in r])
    return PolyDecayResult(sigma=float(sigma), C=float(C),
                           decay_holds=decay_holds, max_envelope_ratio=ratio,
                           tail_radii=r, tail_curve=curve,
                           convergent=bool(convergent),
                           passed=bool(decay_holds and convergent))
