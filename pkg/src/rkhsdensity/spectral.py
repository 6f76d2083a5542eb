"""Hermitian eigenanalysis for sampling/interpolation diagnostics.

Gram matrices and their extreme eigenvalues (exact finite Riesz bounds),
ball-localization operators and their spectra, finite-section frame bounds
on a concentrated subspace, canonical dual systems with their identity
checks, and averaged traces of the kernel diagonal.

Matrix convention: gram(kernel, ps)[i, j] = k(lambda_i, lambda_j), i.e. the
entry at (mu, lam) is k(mu, lam) = <k_lam, k_mu>. All identities below are
stated against this convention.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import (CensoredDataError, DegenerateWindowError, InputError,
                     MatrixCapError, SingularGramError)
from .kernels import Kernel
from .pointsets import PointSet
from .spaces import QuadratureRule, Space

MATRIX_CAP = 4096          # desk-scale O(n^3) budget
HERMITIAN_TOL = 1e-12      # relative max-norm defect allowed on input
EIG_RESIDUAL_TOL = 1e-10   # * ||M|| * n, per returned eigenpair
TRACE_MATCH_TOL = 1e-8     # * n * ||M||, eigenvalue sum vs matrix trace


def require_hermitian(M, cap: int = MATRIX_CAP) -> np.ndarray:
    """Validate a square Hermitian matrix within tolerance; returns the
    exactly Hermitian average (M + M*)/2."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] > cap:
        raise MatrixCapError(
            f"matrix of order {M.shape[0]} exceeds the size cap {cap}")
    scale = float(np.max(np.abs(M))) if M.size else 0.0
    defect = float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0
    if defect > HERMITIAN_TOL * max(scale, 1e-300):
        raise InputError(
            f"matrix is not Hermitian: defect {defect:.3e} vs scale {scale:.3e}")
    return 0.5 * (M + M.conj().T)


def eigh_checked(M):
    """Ascending eigenvalues and eigenvectors with a verified residual.

    Contract: ||M v - w v|| <= 1e-10 * ||M|| * n per pair, and the
    eigenvalue sum matches the trace to 1e-8 * n * ||M||. Ordering is
    ascending with ties left in LAPACK order (index order, deterministic).
    """
    M = require_hermitian(M)
    n = M.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    w, V = np.linalg.eigh(M)
    norm = max(abs(float(w[0])), abs(float(w[-1])), 1e-300)
    resid = float(np.max(np.linalg.norm(M @ V - V * w[None, :], axis=0)))
    if resid > EIG_RESIDUAL_TOL * norm * n:
        raise ArithmeticError(
            f"eigensolver residual {resid:.3e} violates the contract "
            f"({EIG_RESIDUAL_TOL:.0e} * ||M|| * n = {EIG_RESIDUAL_TOL * norm * n:.3e})")
    tr_err = abs(float(np.sum(w)) - float(np.real(np.trace(M))))
    if tr_err > TRACE_MATCH_TOL * n * norm:
        raise ArithmeticError(
            f"eigenvalue sum is off the trace by {tr_err:.3e}")
    return w, V


def eigvalsh(M) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix (checked)."""
    w, _ = eigh_checked(M)
    return w


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray
    lambda_min: float
    lambda_max: float
    trace: float
    plunge_count: int        # eigenvalues >= 1/2
    condition_flag: bool     # near-singular relative to lambda_max
    label: str = ""


def spectral_report(eigenvalues: np.ndarray, label: str = "") -> SpectralReport:
    w = np.asarray(eigenvalues, dtype=float)
    if len(w) == 0:
        raise InputError("empty spectrum")
    lmin, lmax = float(w[0]), float(w[-1])
    return SpectralReport(
        eigenvalues=w, lambda_min=lmin, lambda_max=lmax,
        trace=float(np.sum(w)),
        plunge_count=int(np.count_nonzero(w >= 0.5)),
        condition_flag=bool(lmin <= 1e-12 * max(lmax, 0.0)),
        label=label)


# ---------------------------------------------------------------------------
# Gram matrices and Riesz bounds
# ---------------------------------------------------------------------------


def gram(kernel: Kernel, ps: PointSet) -> np.ndarray:
    """G[i, j] = k(lambda_i, lambda_j); Hermitian PSD up to roundoff."""
    pts = ps.points
    if len(pts) > MATRIX_CAP:
        raise MatrixCapError(
            f"Gram of order {len(pts)} exceeds the size cap {MATRIX_CAP}")
    if len(pts) >= 2:
        d, _ = cKDTree(pts).query(pts, k=2)
        if float(np.min(d[:, 1])) < 1e-8:
            warnings.warn("near-duplicate points: Gram will be near-singular",
                          stacklevel=2)
    G = kernel.pairwise(pts, pts)
    return 0.5 * (G + G.conj().T)


def riesz_bounds(kernel: Kernel, ps: PointSet, label: str = "") -> SpectralReport:
    """Exact finite Riesz bounds: extreme eigenvalues of the Gram matrix."""
    return spectral_report(eigvalsh(gram(kernel, ps)), label=label)


def riesz_curve(kernel: Kernel, ps: PointSet, space: Space,
                half_widths) -> list[SpectralReport]:
    """riesz_bounds over nested windows centered at the window center.

    Eigenvalue interlacing makes lambda_min nonincreasing and lambda_max
    nondecreasing along the nesting; collapse vs stability of lambda_min
    across windows is the empirical interpolation signal.
    """
    hw = np.atleast_1d(np.asarray(half_widths, dtype=float))
    if np.any(np.diff(hw) <= 0):
        raise InputError("window half-widths must be strictly increasing")
    return [riesz_bounds(kernel, ps.restricted(space, float(h)), label=f"hw={h:g}")
            for h in hw]


# ---------------------------------------------------------------------------
# localization operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalizationModel:
    matrix: np.ndarray      # sqrt(w) k(x_i, x_j) sqrt(w), Hermitian PSD
    nodes: np.ndarray
    weights: np.ndarray
    center: np.ndarray
    r: float
    h: float


def localization_operator(kernel: Kernel, space: Space, center, r: float,
                          quad: QuadratureRule) -> LocalizationModel:
    """Discretized ball-localization operator on midpoint nodes.

    M = D^(1/2) K D^(1/2) over nodes inside B_r(center), D = diag(weights).
    Its spectrum approximates restriction-then-project; for projection
    kernels the eigenvalues sit in [0, 1] up to quadrature error, with the
    plunge region counting the local degrees of freedom.
    """
    if quad.h > kernel.decay_scale / 5.0:
        warnings.warn(
            f"quadrature step {quad.h} is coarse for decay scale "
            f"{kernel.decay_scale}; spectra may lose accuracy", stacklevel=2)
    nodes, w = space.ball_nodes(center, r, quad)
    if len(nodes) == 0:
        raise DegenerateWindowError(f"no quadrature nodes in ball r={r}")
    if len(nodes) > MATRIX_CAP:
        raise MatrixCapError(
            f"localization grid has {len(nodes)} nodes, over the cap "
            f"{MATRIX_CAP}; increase h or decrease r")
    root = np.sqrt(w)
    M = kernel.pairwise(nodes, nodes) * np.outer(root, root)
    return LocalizationModel(matrix=0.5 * (M + M.conj().T), nodes=nodes,
                             weights=w, center=np.asarray(center, float),
                             r=float(r), h=quad.h)


def localization_spectrum(kernel: Kernel, space: Space, center, r: float,
                          quad: QuadratureRule) -> SpectralReport:
    loc = localization_operator(kernel, space, center, r, quad)
    return spectral_report(eigvalsh(loc.matrix), label=f"r={r:g}")


# ---------------------------------------------------------------------------
# averaged traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceReport:
    radii: np.ndarray
    inf_avg: np.ndarray
    sup_avg: np.ndarray
    tr_minus_est: float
    tr_plus_est: float
    trend_minus: float       # slope of inf_avg against 1/r
    trend_plus: float
    quadrature_free: bool


def ball_trace_integral(kernel: Kernel, space: Space, center, r: float,
                        quad: QuadratureRule,
                        use_known_diagonal: bool = True) -> float:
    """integral_{B_r(center)} k(y, y) dmu(y).

    Constant-diagonal kernels multiply the closed-form ball measure
    (quadrature-free, exact); otherwise the midpoint rule is used.
    """
    if use_known_diagonal and kernel.known_diagonal is not None:
        return kernel.known_diagonal * float(space.ball_measure(center, r))
    nodes, w = space.ball_nodes(center, r, quad)
    return float(np.sum(w * kernel.diag(nodes)))


def averaged_trace(kernel: Kernel, space: Space, centers, radii,
                   quad: QuadratureRule,
                   use_known_diagonal: bool = True) -> TraceReport:
    """Ball averages of the kernel diagonal: per-radius extremes over centers.

    With a declared constant diagonal the averages equal that constant
    exactly at every center and radius; the quadrature path divides the
    midpoint integral by the closed-form ball measure.
    """
    C = kernel._points(centers)
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise InputError("radii must be positive and strictly increasing")
    quad_free = bool(use_known_diagonal and kernel.known_diagonal is not None)
    if quad_free:
        inf_avg = np.full(len(r), kernel.known_diagonal)
        sup_avg = inf_avg.copy()
    else:
        inf_avg = np.full(len(r), np.inf)
        sup_avg = np.full(len(r), -np.inf)
        for c in C:
            nodes, w = space.ball_nodes(c, float(r[-1]), quad)
            vals = w * kernel.diag(nodes)
            d = space.distances(nodes, c)
            order = np.argsort(d, kind="stable")
            csum = np.concatenate([[0.0], np.cumsum(vals[order])])
            idx = np.searchsorted(d[order], r, side="left")
            avg = csum[idx] / np.asarray(space.ball_measure(c, r), dtype=float)
            inf_avg = np.minimum(inf_avg, avg)
            sup_avg = np.maximum(sup_avg, avg)

    def slope(vals):
        return 0.0 if len(r) < 2 else float(np.polyfit(1.0 / r, vals, 1)[0])

    return TraceReport(radii=r, inf_avg=inf_avg, sup_avg=sup_avg,
                       tr_minus_est=float(inf_avg[-1]),
                       tr_plus_est=float(sup_avg[-1]),
                       trend_minus=slope(inf_avg), trend_plus=slope(sup_avg),
                       quadrature_free=quad_free)


# ---------------------------------------------------------------------------
# finite-section frame bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrameSection:
    """Orthonormalized concentrated subspace V_tau and the sampling matrix.

    psi_m = (1/sqrt(theta_m)) sum_i sqrt(w_i) V[i, m] k_{x_i} are exactly
    orthonormal in the space (their Gram is the localization matrix
    diagonalized), and E[lam, m] = psi_m(lam) is exact because psi_m is a
    finite combination of kernel sections.
    """

    nodes: np.ndarray
    weights: np.ndarray
    theta: np.ndarray        # kept localization eigenvalues (>= tau)
    coeffs: np.ndarray       # (n_nodes, m): sqrt(w) V / sqrt(theta)
    lam_points: np.ndarray   # sampling points inside B_{r+margin}
    E: np.ndarray            # (n_lam, m) point evaluations of the basis
    S: np.ndarray            # E^H E, the sampling quadratic form on V_tau
    r: float
    margin: float
    tau: float


@dataclass(frozen=True)
class FrameSectionReport:
    r: float
    margin: float
    tau: float
    subspace_dim: int
    n_samples: int
    A_est: float
    B_est: float
    eigenvalues: np.ndarray      # spectrum of the sampling form
    loc_plunge_count: int        # plunge count of the localization spectrum


def _finite_section(kernel: Kernel, ps: PointSet, space: Space, center,
                    r: float, tau: float, margin: float | None,
                    quad: QuadratureRule) -> FrameSection:
    if not 0.0 < tau < 1.0:
        raise InputError(f"tau must be in (0, 1), got {tau}")
    margin = r / 4.0 if margin is None else float(margin)
    if not ps.contains_ball(space, center, r + margin):
        raise CensoredDataError(
            f"point set window does not cover B_{r + margin:g}(center)")
    loc = localization_operator(kernel, space, center, r, quad)
    theta, V = eigh_checked(loc.matrix)
    sel = theta >= tau
    if not np.any(sel):
        raise DegenerateWindowError(
            f"no localization eigenvalue reaches tau={tau} at r={r}")
    theta_sel = theta[sel]
    coeffs = (np.sqrt(loc.weights)[:, None] * V[:, sel]) / np.sqrt(theta_sel)[None, :]
    inside = space.distances(ps.points, center) < r + margin
    lam = ps.points[inside]
    E = kernel.pairwise(lam, loc.nodes) @ coeffs
    S = E.conj().T @ E
    return FrameSection(nodes=loc.nodes, weights=loc.weights, theta=theta_sel,
                        coeffs=coeffs, lam_points=lam, E=E,
                        S=0.5 * (S + S.conj().T), r=float(r), margin=margin,
                        tau=float(tau))


def frame_bounds_finite_section(kernel: Kernel, ps: PointSet, space: Space,
                                center, r: float, tau: float = 0.5,
                                margin: float | None = None,
                                quad: QuadratureRule | None = None,
                                ) -> FrameSectionReport:
    """Empirical frame bounds of the sampling map restricted to V_tau.

    A_est/B_est are the extreme eigenvalues of the quadratic form
    f -> sum_{lam in B_{r+margin}} |f(lam)|^2 over unit f in the span of
    localization eigenvectors with eigenvalue >= tau. Stability of A_est
    across growing r is the empirical sampling signal; collapse toward 0
    means sampling fails at this density.
    """
    quad = quad or QuadratureRule()
    fs = _finite_section(kernel, ps, space, center, r, tau, margin, quad)
    w = eigvalsh(fs.S)
    theta_all = int(np.count_nonzero(fs.theta >= 0.5))
    return FrameSectionReport(
        r=fs.r, margin=fs.margin, tau=fs.tau, subspace_dim=len(fs.theta),
        n_samples=len(fs.lam_points), A_est=float(w[0]), B_est=float(w[-1]),
        eigenvalues=w, loc_plunge_count=theta_all)


def frame_curve(kernel: Kernel, ps: PointSet, space: Space, center, radii,
                tau: float = 0.5, margin: float | None = None,
                quad: QuadratureRule | None = None) -> list[FrameSectionReport]:
    return [frame_bounds_finite_section(kernel, ps, space, center, float(r),
                                        tau=tau, margin=margin, quad=quad)
            for r in np.atleast_1d(np.asarray(radii, dtype=float))]


# ---------------------------------------------------------------------------
# dual systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualFrameModel:
    mode: str                     # "riesz" or "frame_finite_section"
    points: np.ndarray            # the lambda whose duals are represented
    dual_coeffs: np.ndarray       # riesz: G^{-1}; frame: S^{-1} E^H
    ridge: float
    min_eig: float                # of the inverted operator before the ridge
    condition_flag: bool
    gram: np.ndarray | None = None
    biorth_residual: float | None = None   # riesz: max |G G^{-1} - I|
    section: FrameSection | None = None

    def dual_values(self, kernel: Kernel, Y) -> np.ndarray:
        """g_lambda(y) for all lambda at the given probe points: (ny, n_lam)."""
        Y = kernel._points(Y)
        if self.mode == "riesz":
            return kernel.pairwise(Y, self.points) @ self.dual_coeffs
        fs = self.section
        psi = kernel.pairwise(Y, fs.nodes) @ fs.coeffs
        return psi @ self.dual_coeffs

    def dual_norms(self) -> np.ndarray:
        """||g_lambda|| per lambda."""
        if self.mode == "riesz":
            return np.sqrt(np.abs(np.real(np.diagonal(self.dual_coeffs))))
        return np.linalg.norm(self.dual_coeffs, axis=0)


RIDGE_FLOOR = 1e-13  # relative to lambda_max: below this, inversion refuses


def dual_system(kernel: Kernel, ps: PointSet, mode: str = "riesz",
                ridge: float = 0.0, space: Space | None = None, center=None,
                r: float | None = None, tau: float = 0.5,
                margin: float | None = None,
                quad: QuadratureRule | None = None) -> DualFrameModel:
    """Canonical dual system of the kernel sections at the points.

    riesz mode inverts the Gram: g_lam = sum_mu (G^{-1})[mu, lam] k_mu,
    biorthogonal to the sections. frame_finite_section mode inverts the
    sampling form on the concentrated subspace V_tau and represents the
    canonical duals of the projected sections there (needs space, center, r).
    Any nonzero ridge is recorded: it biases the lower frame bound upward.
    """
    if mode == "riesz":
        G = gram(kernel, ps)
        w = eigvalsh(G)
        lam_min, lam_max = float(w[0]), float(w[-1])
        if lam_min + ridge <= RIDGE_FLOOR * max(lam_max, 1e-300):
            raise SingularGramError(
                f"Gram is singular beyond the ridge: lambda_min={lam_min:.3e}",
                lambda_min=lam_min)
        n = G.shape[0]
        coeffs = np.linalg.inv(G + ridge * np.eye(n))
        biorth = float(np.max(np.abs(G @ coeffs - np.eye(n))))
        # flag threshold 1e-2: dual norms grow like 1/sqrt(lambda_min)
        return DualFrameModel(mode=mode, points=ps.points, dual_coeffs=coeffs,
                              ridge=float(ridge), min_eig=lam_min,
                              condition_flag=bool(lam_min <= 1e-2 * lam_max),
                              gram=G, biorth_residual=biorth)
    if mode == "frame_finite_section":
        if space is None or center is None or r is None:
            raise InputError("frame mode needs space, center, and r")
        quad = quad or QuadratureRule()
        fs = _finite_section(kernel, ps, space, center, r, tau, margin, quad)
        w = eigvalsh(fs.S)
        lam_min, lam_max = float(w[0]), float(w[-1])
        if lam_min + ridge <= RIDGE_FLOOR * max(lam_max, 1e-300):
            raise SingularGramError(
                f"sampling form is singular beyond the ridge: "
                f"lambda_min={lam_min:.3e}", lambda_min=lam_min)
        m = fs.S.shape[0]
        coeffs = np.linalg.solve(fs.S + ridge * np.eye(m), fs.E.conj().T)
        return DualFrameModel(mode=mode, points=fs.lam_points,
                              dual_coeffs=coeffs, ridge=float(ridge),
                              min_eig=lam_min,
                              condition_flag=bool(lam_min <= 1e-2 * lam_max),
                              section=fs)
    raise InputError(f"unknown dual-system mode {mode!r}")


@dataclass(frozen=True)
class DualIdentityReport:
    mode: str
    probes: np.ndarray
    sums: np.ndarray              # Re sum_lam k_lam(y) conj(g_lam(y))
    diagonal: np.ndarray          # k(y, y) at the probes
    reproduction_residuals: np.ndarray | None   # frame: |sums - diagonal|
    partial_sums_in_range: bool | None          # riesz: 0 <= sums <= diagonal
    diagonal_pairings: np.ndarray  # <k_lam, g_lam> per lambda (real part)
    pairing_defect: float | None   # riesz: max |pairing - 1|
    dual_sumsq_sup: float          # sup_y sum_lam |g_lam(y)|^2 over probes
    dual_norm_sup: float           # sup_lam ||g_lam||
    n_censored: int
    passed: bool


def dual_identities_check(model: DualFrameModel, kernel: Kernel, ps: PointSet,
                          probe_points, space: Space | None = None,
                          edge_guard: float = 1.0, tol: float = 1e-8,
                          reproduction_tol: float | None = None
                          ) -> DualIdentityReport:
    """Numerical audit of the dual-system identities.

    riesz mode: the section sum equals the projection diagonal and must lie
    in [0, k(y,y)] at every probe; diagonal pairings equal 1. frame mode:
    the section sum reproduces k(y,y) up to a finite-window residual which
    is reported against reproduction_tol (default 5% of the diagonal
    scale); pairings stay <= 1. Probes closer than edge_guard to the
    window boundary are censored.
    """
    Y = kernel._points(probe_points)
    n_censored = 0
    if space is not None:
        guard = ps.window_radius - space.distances(Y, ps.window_center)
        keep = guard >= edge_guard
        n_censored = int(np.count_nonzero(~keep))
        Y = Y[keep]
    if len(Y) == 0:
        raise CensoredDataError("all probe points are censored by the window")

    kvals = kernel.pairwise(Y, model.points)
    gvals = model.dual_values(kernel, Y)
    sums_c = np.sum(kvals * np.conj(gvals), axis=1)
    sums = np.real(sums_c)
    diagonal = kernel.diag(Y)

    if model.mode == "riesz":
        pair = np.real(np.diagonal(model.gram @ model.dual_coeffs))
        defect = float(np.max(np.abs(pair - 1.0)))
        in_range = bool(np.all(sums >= -tol)
                        and np.all(sums <= diagonal + tol))
        repro = None
        passed = in_range and defect <= tol \
            and bool(np.all(pair <= 1.0 + tol))
    else:
        fs = model.section
        pair = np.real(np.diagonal(fs.E @ model.dual_coeffs))
        defect = None
        in_range = None
        repro = np.abs(sums - diagonal)
        budget = (0.05 * float(np.max(diagonal))
                  if reproduction_tol is None else reproduction_tol)
        passed = bool(np.max(repro) <= budget
                      and np.all(pair <= 1.0 + tol))

    sumsq = float(np.max(np.sum(np.abs(gvals) ** 2, axis=1)))
    norm_sup = float(np.max(model.dual_norms()))
    return DualIdentityReport(
        mode=model.mode, probes=Y, sums=sums, diagonal=diagonal,
        reproduction_residuals=repro, partial_sums_in_range=in_range,
        diagonal_pairings=pair, pairing_defect=defect,
        dual_sumsq_sup=sumsq, dual_norm_sup=norm_sup,
        n_censored=n_censored, passed=passed)


# ---------------------------------------------------------------------------
# debugging dumps and the dimension-free ratio
# ---------------------------------------------------------------------------


def dump_matrix(M, path) -> None:
    """Binary dump: row-major, little-endian float64 pairs (re, im)."""
    M = np.ascontiguousarray(np.asarray(M, dtype=complex))
    flat = np.empty((M.size, 2))
    flat[:, 0] = M.real.ravel()
    flat[:, 1] = M.imag.ravel()
    flat.astype("<f8").tofile(path)


def load_matrix(path, n: int) -> np.ndarray:
    """Inverse of dump_matrix for a known order n."""
    flat = np.fromfile(path, dtype="<f8").reshape(n, n, 2)
    return flat[..., 0] + 1j * flat[..., 1]


def dimension_free_ratio(count: int, trace_integral: float) -> float:
    """#(points in B_r) / integral_{B_r} k(y,y) dmu: the coordinate-free
    comparison whose limit separates sampling (>= 1) from interpolation
    (<= 1) for normalized kernels."""
    if trace_integral <= 0:
        raise InputError("trace integral must be positive")
    return float(count) / float(trace_integral)
