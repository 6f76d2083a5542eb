"""Spectral layer: Gram matrices, localization, finite sections, duals."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rkhsdensity import (EuclideanLebesgue, FockGaussian,
                         FockGaussianNormalized, GaborGaussian, InputError,
                         MatrixCapError, PaleyWienerBox, PhasePlane,
                         QuadratureRule, SingularGramError,
                         SyntheticPolyDecay, averaged_trace,
                         ball_trace_integral, dimension_free_ratio,
                         dual_identities_check, dual_system, eigh_checked,
                         eigvalsh, frame_bounds_finite_section, frame_curve,
                         gram, localization_operator, localization_spectrum,
                         make_pointset, metric_ball_lattice, riesz_curve,
                         spectral_report)
from rkhsdensity.errors import DegenerateWindowError
from rkhsdensity.kernels import normalize
from rkhsdensity.spectral import dump_matrix, load_matrix

import _oracles as oracle

SP1 = EuclideanLebesgue(1)
PW = PaleyWienerBox(1)


def _pw_lattice(alpha: float, window: float = 80.0):
    pts = metric_ball_lattice(SP1, [0.0], window, [alpha])
    return make_pointset(pts, SP1, [0.0], window)


# -- eigensolver wrapper -----------------------------------------------------


def test_eigh_checked_orders_and_reconstructs(rng):
    A = rng.normal(size=(40, 40)) + 1j * rng.normal(size=(40, 40))
    M = A @ A.conj().T
    w, V = eigh_checked(M)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(V @ np.diag(w) @ V.conj().T, M, atol=1e-10 * w[-1])
    assert np.allclose(eigvalsh(M), w)


def test_require_hermitian_rejects_skew(rng):
    M = rng.normal(size=(8, 8))
    M[0, 1] += 1.0  # symmetry defect far above tolerance
    with pytest.raises(InputError):
        eigvalsh(M)


def test_spectral_report_plunge_counts_midrange():
    rep = spectral_report(np.array([0.0, 0.2, 0.5, 0.9, 1.0]), label="t")
    assert rep.plunge_count == 3
    assert rep.lambda_min == 0.0 and rep.lambda_max == 1.0
    assert rep.condition_flag


# -- Gram matrices -----------------------------------------------------------


def test_gram_is_hermitian_psd_random_sets(rng):
    sp = PhasePlane()
    for _ in range(25):
        n = rng.integers(3, 30)
        pts = rng.uniform(-4, 4, size=(n, 2))
        ps = make_pointset(pts, sp, [0.0, 0.0], 10.0)
        G = gram(GaborGaussian(), ps)
        assert np.allclose(G, G.conj().T)
        w = np.linalg.eigvalsh(G)
        assert w[0] >= -1e-9 * max(w[-1], 1.0)


def test_gram_convention_row_is_first_argument():
    ps = make_pointset(np.array([[0.0], [0.3]]), SP1, [0.0], 2.0)
    G = gram(PW, ps)
    assert G[0, 1] == pytest.approx(PW.eval([0.0], [0.3]))


def test_gram_matrix_cap():
    pts = np.arange(4097, dtype=float)[:, None]
    ps = make_pointset(pts, SP1, [2048.0], 4097.0)
    with pytest.raises(MatrixCapError):
        gram(PW, ps)


def test_normalized_kernel_scales_gram_exactly():
    # constant-diagonal kernel: normalization divides the whole Gram by
    # the diagonal, so the spectrum scales and zero eigenvalues persist
    sp = FockGaussian(1)
    pts = metric_ball_lattice(sp, [0.0, 0.0], 4.0, [1.0, 1.0])
    ps = make_pointset(pts, sp, [0.0, 0.0], 4.0)
    fock = FockGaussianNormalized(1)
    w_base = np.sort(np.linalg.eigvalsh(gram(fock, ps)))
    w_norm = np.sort(np.linalg.eigvalsh(gram(normalize(fock), ps)))
    assert np.allclose(w_norm, w_base / (2.0 / np.pi), rtol=1e-10)


# -- Riesz-side spectra ------------------------------------------------------


def test_riesz_curve_unit_lattice_near_tight():
    ps = _pw_lattice(1.0, window=40.0)
    reports = riesz_curve(PW, ps, SP1, [8.0, 16.0, 32.0])
    for rep in reports:
        assert abs(rep.lambda_min - 1.0) < 1e-9
        assert abs(rep.lambda_max - 1.0) < 1e-9


def test_riesz_curve_sparse_lattice_matches_symbol():
    sym_min, sym_max = oracle.toeplitz_symbol_extrema(1.25)
    assert sym_min == pytest.approx(0.8, abs=1e-9)
    assert sym_max == pytest.approx(1.6, abs=1e-9)
    ps = _pw_lattice(1.25, window=80.0)
    reports = riesz_curve(PW, ps, SP1, [16.0, 32.0, 64.0])
    for rep in reports:
        # finite sections live strictly inside the symbol range
        assert rep.lambda_min >= sym_min - 1e-9
        assert rep.lambda_max <= sym_max + 1e-9
        assert rep.lambda_min == pytest.approx(sym_min, abs=1e-3)
        assert rep.lambda_max == pytest.approx(sym_max, abs=1e-3)


def test_riesz_curve_dense_lattice_collapses():
    ps = _pw_lattice(0.8, window=80.0)
    reports = riesz_curve(PW, ps, SP1, [16.0, 32.0, 64.0])
    assert reports[-1].lambda_min < 1e-9
    assert reports[-1].lambda_max == pytest.approx(1.25, abs=1e-3)


def test_riesz_window_monotonicity():
    # growing the window adds rows/columns: lambda_min cannot increase,
    # lambda_max cannot decrease (eigenvalue interlacing)
    ps = _pw_lattice(1.25, window=80.0)
    reports = riesz_curve(PW, ps, SP1, [8.0, 16.0, 32.0, 64.0])
    mins = [r.lambda_min for r in reports]
    maxs = [r.lambda_max for r in reports]
    assert all(b <= a + 1e-12 for a, b in zip(mins, mins[1:]))
    assert all(b >= a - 1e-12 for a, b in zip(maxs, maxs[1:]))


def test_riesz_curve_requires_increasing_windows():
    ps = _pw_lattice(1.0)
    with pytest.raises(InputError):
        riesz_curve(PW, ps, SP1, [16.0, 8.0])


# -- localization operators --------------------------------------------------


def test_pw_localization_spectrum_structure():
    quad = QuadratureRule(h=0.05)
    for r in (4.0, 8.0):
        rep = localization_spectrum(PW, SP1, [0.0], r, quad)
        tol = SP1.quadrature_tolerance([0.0], r, quad)
        assert rep.eigenvalues[0] >= -1e-6
        assert rep.eigenvalues[-1] <= 1.0 + 1e-6
        assert rep.trace == pytest.approx(2.0 * r, abs=tol)
        assert rep.plunge_count == int(round(2.0 * r))


def test_localization_trace_identity():
    # trace of sqrt(w) K sqrt(w) equals the quadrature ball integral of
    # the diagonal, here for a non-flat diagonal region of Fock space
    sp = FockGaussian(1)
    quad = QuadratureRule(h=0.1)
    model = localization_operator(FockGaussianNormalized(1), sp,
                                  [0.0, 0.0], 2.5, quad)
    want = np.sum(model.weights) * (2.0 / np.pi)
    assert np.trace(model.matrix).real == pytest.approx(want, rel=1e-12)


def test_localization_empty_window_raises():
    with pytest.raises(DegenerateWindowError):
        localization_operator(PW, SP1, [0.0], 0.004, QuadratureRule(h=0.05))


# -- ball trace integrals ----------------------------------------------------


def test_averaged_trace_pw_is_quadrature_free():
    rep = averaged_trace(PW, SP1, [[0.0], [3.0]], [5.0, 10.0, 20.0],
                         QuadratureRule(h=0.05))
    assert rep.quadrature_free
    assert rep.tr_minus_est == pytest.approx(1.0, abs=1e-12)
    assert rep.tr_plus_est == pytest.approx(1.0, abs=1e-12)


def test_averaged_trace_fock_quadrature_matches_flat_density():
    sp = FockGaussian(1)
    rep = averaged_trace(FockGaussianNormalized(1), sp,
                         [[0.0, 0.0]], [2.0, 4.0], QuadratureRule(h=0.05),
                         use_known_diagonal=False)
    assert not rep.quadrature_free
    want = oracle.gaussian_trace_density()
    assert rep.tr_minus_est == pytest.approx(want, abs=1e-3)
    assert rep.tr_plus_est == pytest.approx(want, abs=1e-3)


def test_ball_trace_integral_scales_with_measure():
    sp = FockGaussian(1)
    quad = QuadratureRule(h=0.05)
    v1 = ball_trace_integral(FockGaussianNormalized(1), sp, [0.0, 0.0], 2.0,
                             quad)
    # flat diagonal: integral = (2/pi) * mu(B_r); mu halves Lebesgue
    want = (2.0 / np.pi) * sp.ball_measure([0.0, 0.0], 2.0)
    assert v1 == pytest.approx(want, rel=1e-12)


def test_dimension_free_ratio():
    assert dimension_free_ratio(10, 8.0) == pytest.approx(1.25)
    with pytest.raises(InputError):
        dimension_free_ratio(10, 0.0)


# -- finite frame sections ---------------------------------------------------


def test_frame_section_dense_lattice_stable():
    ps = _pw_lattice(0.8, window=80.0)
    reports = frame_curve(PW, ps, SP1, [0.0], [8.0, 16.0, 32.0],
                          quad=QuadratureRule(h=0.05))
    a_vals = [rep.A_est for rep in reports]
    assert np.allclose(a_vals, [1.1040, 1.1071, 1.1145], atol=2e-3)
    for rep in reports:
        assert rep.B_est == pytest.approx(1.25, abs=1e-2)
        assert rep.subspace_dim == int(round(2.0 * rep.r))


def test_frame_section_unit_lattice_upper_bound_tight():
    ps = _pw_lattice(1.0, window=80.0)
    rep = frame_bounds_finite_section(PW, ps, SP1, [0.0], 16.0,
                                      quad=QuadratureRule(h=0.05))
    assert rep.B_est <= 1.0 + 0.05
    assert 0.7 <= rep.A_est <= 1.0


def test_frame_section_sparse_lattice_rank_deficient():
    # critical sampling minus boundary: fewer samples than dimensions
    ps = _pw_lattice(1.25, window=80.0)
    rep = frame_bounds_finite_section(PW, ps, SP1, [0.0], 16.0,
                                      quad=QuadratureRule(h=0.05))
    assert rep.n_samples < rep.subspace_dim
    assert rep.A_est < 1e-12


def test_frame_section_needs_covering_window():
    ps = _pw_lattice(1.0, window=10.0)
    from rkhsdensity.errors import CensoredDataError
    with pytest.raises(CensoredDataError):
        frame_bounds_finite_section(PW, ps, SP1, [0.0], 9.5,
                                    quad=QuadratureRule(h=0.05))


# -- dual systems ------------------------------------------------------------


def test_dual_system_unit_lattice_self_dual():
    ps = _pw_lattice(1.0, window=40.0)
    model = dual_system(PW, ps, mode="riesz")
    assert model.biorth_residual < 1e-10
    probes = np.linspace(-5.0, 5.0, 41)[:, None]
    gv = model.dual_values(PW, probes)
    kv = PW.pairwise(probes, ps.points)
    assert np.max(np.abs(gv - kv)) < 1e-10


def test_dual_system_two_point_example():
    # {0, 0.1}: lambda_min = 1 - sinc(0.1) and the dual norm blows up
    # like 1/sqrt(1 - s^2) with s = sinc(0.1)
    ps = make_pointset(np.array([[0.0], [0.1]]), SP1, [0.0], 1.0)
    model = dual_system(PW, ps, mode="riesz")
    s = float(np.sinc(0.1))
    assert model.min_eig == pytest.approx(1.0 - s, rel=1e-12)
    assert model.condition_flag
    assert np.max(model.dual_norms()) == pytest.approx(
        1.0 / np.sqrt(1.0 - s * s), rel=1e-9)


def test_dual_system_singular_gram_raises():
    # distinct points, but so close the Gram is singular in float64
    ps = make_pointset(np.array([[0.0], [1e-9]]), SP1, [0.0], 1.0)
    with pytest.warns(UserWarning):
        with pytest.raises(SingularGramError):
            dual_system(PW, ps, mode="riesz")


def test_dual_system_ridge_recorded_and_biases_up():
    ps = _pw_lattice(1.25, window=20.0)
    clean = dual_system(PW, ps, mode="riesz")
    ridged = dual_system(PW, ps, mode="riesz", ridge=1e-6)
    assert ridged.ridge == 1e-6
    # ridge shrinks the inverse, so dual norms can only decrease
    assert np.max(ridged.dual_norms()) <= np.max(clean.dual_norms()) + 1e-12


def test_dual_identities_riesz_unit_lattice_matches_trigamma():
    ps = _pw_lattice(1.0, window=60.0)
    model = dual_system(PW, ps, mode="riesz")
    probes = np.linspace(-10.0, 10.0, 100)[:, None]
    rep = dual_identities_check(model, PW, ps, probes, space=SP1)
    assert rep.passed
    assert rep.pairing_defect <= 1e-8
    # the partial sums equal the truncated lattice sums of sinc^2
    for y, got in zip(rep.probes[:, 0], rep.sums):
        want = oracle.sinc2_lattice_sum(y, 60)
        assert got == pytest.approx(want, abs=1e-8)


def test_dual_identities_riesz_sparse_lattice_projection_range():
    ps = _pw_lattice(1.25, window=60.0)
    model = dual_system(PW, ps, mode="riesz")
    probes = np.linspace(-8.0, 8.0, 100)[:, None]
    rep = dual_identities_check(model, PW, ps, probes, space=SP1)
    assert rep.passed
    assert rep.partial_sums_in_range
    assert np.all(rep.diagonal_pairings <= 1.0 + 1e-8)
    assert np.all(rep.sums >= -1e-8)
    assert np.all(rep.sums <= rep.diagonal + 1e-8)


def test_dual_identities_frame_mode_reproduces_diagonal():
    ps = _pw_lattice(1.0, window=60.0)
    model = dual_system(PW, ps, mode="frame_finite_section", space=SP1,
                        center=[0.0], r=8.0, quad=QuadratureRule(h=0.05))
    probes = np.linspace(-3.0, 3.0, 25)[:, None]
    rep = dual_identities_check(model, PW, ps, probes, space=SP1)
    assert rep.passed
    # finite-window deficit is visible but inside the 5% budget
    assert 1e-4 < np.max(rep.reproduction_residuals) < 0.05
    assert np.all(rep.diagonal_pairings <= 1.0 + 1e-8)


def test_dual_identities_censors_edge_probes():
    from rkhsdensity.errors import CensoredDataError
    ps = _pw_lattice(1.0, window=10.0)
    model = dual_system(PW, ps, mode="riesz")
    with pytest.raises(CensoredDataError):
        dual_identities_check(model, PW, ps, np.array([[9.9]]), space=SP1)
    rep = dual_identities_check(model, PW, ps,
                                np.array([[0.0], [9.9]]), space=SP1)
    assert rep.n_censored == 1


# -- persistence -------------------------------------------------------------


def test_matrix_dump_roundtrip(tmp_path, rng):
    M = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    M = M + M.conj().T
    path = tmp_path / "m.bin"
    dump_matrix(M, path)
    back = load_matrix(path, 12)
    assert np.array_equal(back, M)


@given(n=st.integers(2, 12))
@settings(max_examples=10, deadline=None)
def test_gram_of_separated_points_nonsingular(n):
    pts = np.arange(n, dtype=float)[:, None] * 1.7
    ps = make_pointset(pts, SP1, [n * 0.85], n * 1.7)
    w = np.linalg.eigvalsh(gram(PW, ps))
    assert w[0] > 1e-3
