"""Acceptance suite: twelve end-to-end checks, one test per criterion.

Each test prints a single [PASS]/[FAIL] line through the terminal
reporter (immune to output capture) so the tally is visible in any
pytest run, and asserts at the stated tolerance.  The expensive
canonical runs are shared through the session-scoped ``canonical_run``
fixture.
"""

import time

import numpy as np
import pytest

from rkhsdensity import (EuclideanLebesgue, FockGaussian,
                         FockGaussianNormalized, GaborGaussian,
                         HyperbolicUpperHalfPlane, IntegerWordMetric,
                         LogMetricLine, PaleyWienerBox, PhasePlane,
                         QuadratureRule, SyntheticPolyDecay,
                         averaged_trace, canonical_names,
                         check_poly_decay_hypothesis, check_wad,
                         dual_identities_check, dual_system, eigvalsh,
                         frame_curve, gram, localization_spectrum,
                         make_pointset, metric_ball_lattice, riesz_curve,
                         run_canonical)

import _oracles as oracle

SP1 = EuclideanLebesgue(1)
PW = PaleyWienerBox(1, bandwidths=1.0)

_REPORTER = None


@pytest.fixture(scope="session", autouse=True)
def _terminal_reporter(request):
    global _REPORTER
    _REPORTER = request.config.pluginmanager.get_plugin("terminalreporter")


def _criterion(num, label, ok, detail, elapsed=None, budget=None):
    if budget is not None and elapsed is not None and elapsed >= budget:
        ok = False
        detail += f"; exceeded {budget:.0f}s budget"
    timing = "" if elapsed is None else f" ({elapsed:.1f}s)"
    line = f"[{'PASS' if ok else 'FAIL'}] {num:02d} {label}: {detail}{timing}"
    if _REPORTER is not None:
        _REPORTER.write_line(line)
    else:
        print(line)
    assert ok, line


def _pw_lattice(step, window=80.0):
    pts = metric_ball_lattice(SP1, [0.0], window, [step])
    return make_pointset(pts, SP1, [0.0], window)


def _collapses(curve, floor=1e-12):
    # eigenvalue estimates at the noise floor can round to tiny
    # negatives; clamp before comparing against a tenth of the start
    first, last = curve[0], max(curve[-1], 0.0)
    return last <= max(first / 10.0, floor)


def test_criterion_01_integer_lattice_gram_is_identity():
    t0 = time.perf_counter()
    pts = metric_ball_lattice(SP1, [0.0], 32.5, [1.0])
    ps = make_pointset(pts, SP1, [0.0], 40.0)
    ev = eigvalsh(gram(PW, ps))
    dt = time.perf_counter() - t0
    dev = float(np.max(np.abs(ev - 1.0)))
    ok = ps.points.shape[0] == 65 and dev <= 1e-9
    _criterion(1, "integer-lattice Gram is the identity", ok,
               f"n={ps.points.shape[0]}, max|eig-1|={dev:.2e}", dt, 1.0)


def test_criterion_02_finite_section_lower_bound_across_critical_density():
    t0 = time.perf_counter()
    quad = QuadratureRule(h=0.05)
    radii = [8.0, 16.0, 32.0]
    dense = [rep.A_est for rep in
             frame_curve(PW, _pw_lattice(0.8), SP1, [0.0], radii,
                         tau=0.5, quad=quad)]
    sparse = [rep.A_est for rep in
              frame_curve(PW, _pw_lattice(1.25), SP1, [0.0], radii,
                          tau=0.5, quad=quad)]
    dt = time.perf_counter() - t0
    ok_dense = min(dense) >= 0.1 and max(dense) / min(dense) <= 2.0
    ok_sparse = max(sparse[-1], 0.0) < 1e-3 and _collapses(sparse)
    _criterion(2, "finite-section lower frame bound", ok_dense and ok_sparse,
               f"dense A={min(dense):.4f}..{max(dense):.4f}, "
               f"sparse A(32)={sparse[-1]:.2e}", dt, 120.0)


def test_criterion_03_gram_floor_across_critical_density():
    t0 = time.perf_counter()
    hws = [16.0, 32.0, 64.0]
    stable = [rep.lambda_min for rep in
              riesz_curve(PW, _pw_lattice(1.25), SP1, hws)]
    falling = [rep.lambda_min for rep in
               riesz_curve(PW, _pw_lattice(0.8), SP1, hws)]
    dt = time.perf_counter() - t0
    ok_stable = min(stable) > 1e-2 and max(stable) / min(stable) <= 2.0
    ok_falling = _collapses(falling) and falling[-1] < 1e-2
    _criterion(3, "Gram eigenvalue floor", ok_stable and ok_falling,
               f"sparse min={min(stable):.4f}, dense end={falling[-1]:.2e}",
               dt, 60.0)


def test_criterion_04_averaged_trace_estimates():
    t0 = time.perf_counter()
    quad = QuadratureRule(h=0.05)
    pw = averaged_trace(PW, SP1, [[0.0]], [4.0, 8.0, 16.0], quad)
    ok_pw = (pw.quadrature_free and np.all(pw.inf_avg == 1.0)
             and np.all(pw.sup_avg == 1.0))
    fock = averaged_trace(FockGaussianNormalized(1), FockGaussian(1),
                          [[0.0, 0.0], [0.7, 0.4]], [8.0], quad,
                          use_known_diagonal=False)
    err = max(abs(fock.inf_avg[-1] - 2.0 / np.pi),
              abs(fock.sup_avg[-1] - 2.0 / np.pi))
    ok_fock = not fock.quadrature_free and err <= 1e-3
    gabor = averaged_trace(GaborGaussian(), PhasePlane(),
                           [[0.0, 0.0]], [4.0, 8.0], quad)
    ok_gabor = (gabor.quadrature_free and np.all(gabor.inf_avg == 1.0)
                and np.all(gabor.sup_avg == 1.0))
    dt = time.perf_counter() - t0
    _criterion(4, "averaged trace estimates", ok_pw and ok_fock and ok_gabor,
               f"pw=1 exact, |fock-2/pi|={err:.1e}, gabor=1 exact", dt, 60.0)


def test_criterion_05_localization_spectra():
    t0 = time.perf_counter()
    # midpoint rule at h=0.05 resolves the ball boundary to about one
    # cell per side; 0.5 is a generous cap on the trace error
    tol_quad = 0.5
    quad = QuadratureRule(h=0.05)
    oks, details = [], []
    for r in (4.0, 8.0, 16.0):
        rep = localization_spectrum(PW, SP1, [0.0], r, quad)
        ev = rep.eigenvalues
        oks.append(ev.min() >= -1e-6 and ev.max() <= 1.0 + 1e-6
                   and abs(rep.trace - 2.0 * r) <= tol_quad
                   and abs(rep.plunge_count - 2.0 * r) <= 2)
        details.append(f"r={r:g}: tr={rep.trace:.3f} pl={rep.plunge_count}")
    dt = time.perf_counter() - t0
    _criterion(5, "localization spectra", all(oks),
               ", ".join(details), dt, 120.0)


def test_criterion_06_fock_lattices_across_critical_density():
    t0 = time.perf_counter()
    space = FockGaussian(1)
    kern = FockGaussianNormalized(1)
    curves = {}
    for s in (1.2, 0.8):
        step = float(np.sqrt(np.pi * s))
        pts = metric_ball_lattice(space, [0.0, 0.0], 14.0, [step, step])
        ps = make_pointset(pts, space, [0.0, 0.0], 14.0)
        curves[s] = [rep.lambda_min for rep in
                     riesz_curve(kern, ps, space, [6.0, 9.0, 12.0])]
    dt = time.perf_counter() - t0
    stable, falling = curves[1.2], curves[0.8]
    ok_stable = min(stable) >= 1e-2 and max(stable) / min(stable) <= 2.0
    ok_falling = _collapses(falling)
    _criterion(6, "gaussian-lattice eigenvalue floor",
               ok_stable and ok_falling,
               f"sparse min={min(stable):.4f}, dense end={falling[-1]:.2e}",
               dt, 120.0)


def test_criterion_07_phase_space_lattices_across_critical_density(
        canonical_run):
    t0 = time.perf_counter()
    dense = canonical_run("gabor-ab-08").verdict
    sparse = canonical_run("gabor-ab-12").verdict
    dt = time.perf_counter() - t0

    low = dense.D_minus / dense.tr_minus
    lower = {c.name: c for c in dense.inequality_checks}[
        "sampling-lower-density"]
    ok_dense = (dense.empirical_class == "sampling-like"
                and lower.licensed and lower.satisfied
                and low >= 1.0 - dense.slack
                and 1.1 <= low <= 1.4)

    up = sparse.D_plus / sparse.tr_plus
    upper = {c.name: c for c in sparse.inequality_checks}[
        "interpolation-upper-density"]
    lam = [e["lambda_min"] for e in sparse.riesz_curve]
    a_est = [e["A_est"] for e in sparse.frame_curve]
    ok_sparse = (sparse.empirical_class == "interpolation-like"
                 and upper.licensed and upper.satisfied
                 and up <= 1.0 + sparse.slack
                 and 0.75 <= up <= 0.92
                 and min(lam) >= 1e-2
                 and _collapses(a_est))
    _criterion(7, "phase-space lattices across critical density",
               ok_dense and ok_sparse,
               f"dense D-/tr-={low:.3f} ({dense.empirical_class}), "
               f"sparse D+/tr+={up:.3f} ({sparse.empirical_class}), "
               f"A collapse {a_est[0]:.1e}->{a_est[-1]:.1e}", dt, 180.0)


def test_criterion_08_annular_decay_classification():
    t0 = time.perf_counter()
    oks, details = [], []
    for sp, tag in ((EuclideanLebesgue(1), "euclid1"),
                    (EuclideanLebesgue(2), "euclid2"),
                    (IntegerWordMetric(1), "word1"),
                    (FockGaussian(1), "fock1")):
        radii = np.linspace(1.0, sp.wad_horizon, 80)
        res = check_wad(sp, [sp.origin()], radii)
        oks.append(res.passed and res.ratio_curve[-1] < 0.05)
        details.append(f"{tag}={res.ratio_curve[-1]:.3f}")
    for sp, tag in ((LogMetricLine(), "logline"),
                    (HyperbolicUpperHalfPlane(), "hyperbolic")):
        radii = np.linspace(1.0, sp.wad_horizon, 80)
        res = check_wad(sp, [sp.origin()], radii)
        tail = np.asarray(res.ratio_curve)[np.asarray(res.radii) >= 5.0]
        oks.append((not res.passed) and np.all(tail >= 1.0))
        details.append(f"{tag}={res.ratio_curve[-1]:.2f}")
    dt = time.perf_counter() - t0
    _criterion(8, "annular decay classification", all(oks),
               ", ".join(details), dt, 10.0)


def test_criterion_09_dual_system_identities():
    t0 = time.perf_counter()
    tight = _pw_lattice(1.0, window=32.5)
    model = dual_system(PW, tight, mode="riesz")
    probes = np.linspace(-16.0, 16.0, 100)[:, None]
    rep = dual_identities_check(model, PW, tight, probes, space=SP1)
    resid = max(abs(got - oracle.sinc2_lattice_sum(y, 32))
                for y, got in zip(rep.probes[:, 0], rep.sums))
    ok_tight = (rep.passed and rep.n_censored == 0
                and resid <= 1e-8 and rep.pairing_defect <= 1e-8)

    sparse = _pw_lattice(1.25, window=60.0)
    model = dual_system(PW, sparse, mode="riesz")
    probes = np.linspace(-8.0, 8.0, 100)[:, None]
    rep = dual_identities_check(model, PW, sparse, probes, space=SP1)
    ok_sparse = (rep.passed and rep.partial_sums_in_range
                 and np.all(rep.diagonal_pairings <= 1.0 + 1e-8)
                 and rep.pairing_defect <= 1e-8)
    dt = time.perf_counter() - t0
    _criterion(9, "dual-system identities", ok_tight and ok_sparse,
               f"reproduction residual={resid:.1e}, "
               f"projection sums in range={rep.partial_sums_in_range}",
               dt, 30.0)


def test_criterion_10_polynomial_decay_audit():
    t0 = time.perf_counter()
    good = check_poly_decay_hypothesis(SyntheticPolyDecay(sigma=2.0, d=1),
                                       SP1, sigma=2.0, C=1.0)
    err = max(abs(got - oracle.poly_envelope_tail(r, 2.0))
              / oracle.poly_envelope_tail(r, 2.0)
              for r, got in zip(good.tail_radii, good.tail_curve))
    ok_good = good.passed and good.convergent and err <= 1e-6
    bad = check_poly_decay_hypothesis(SyntheticPolyDecay(sigma=0.4, d=1),
                                      SP1, sigma=0.4, C=1.0)
    curve = np.asarray(bad.tail_curve)
    ok_bad = ((not bad.passed) and (not bad.convergent)
              and np.all(np.diff(curve) > 0))
    dt = time.perf_counter() - t0
    _criterion(10, "polynomial decay audit", ok_good and ok_bad,
               f"tail rel err={err:.1e}, divergent curve ends "
               f"{curve[-1]:.2f}", dt, 10.0)


def test_criterion_11_byte_determinism(tmp_path):
    t0 = time.perf_counter()
    first = run_canonical("pw-alpha-08", tmp_path / "a")
    second = run_canonical("pw-alpha-08", tmp_path / "b")
    dt = time.perf_counter() - t0
    a = {p.name: p for p in first.files}
    b = {p.name: p for p in second.files}
    names = sorted(set(a) | set(b))
    diffs = [n for n in names if n != "manifest.json"
             and (n not in a or n not in b
                  or a[n].read_bytes() != b[n].read_bytes())]
    ok = not diffs and len(names) >= 10
    _criterion(11, "byte determinism", ok,
               f"{len(names) - 1} files identical"
               + (f"; differ: {diffs}" if diffs else ""), dt)


def test_criterion_12_no_licensed_inequality_violations(canonical_run):
    t0 = time.perf_counter()
    codes = {name: canonical_run(name).exit_code
             for name in canonical_names()}
    dt = time.perf_counter() - t0
    ok = all(code != 2 for code in codes.values())
    _criterion(12, "no licensed inequality violations", ok,
               ", ".join(f"{n}={c}" for n, c in sorted(codes.items())), dt)
