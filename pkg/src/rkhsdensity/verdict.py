"""Assembly layer: axioms, empirical classification, and density-vs-trace.

Brings together the geometry and kernel checkers (hypothesis audit), the
spectral curves (empirical classification of a point set as sampling-like
or interpolation-like at finite scale), and the density and trace
estimates, then evaluates the licensed necessary-condition inequalities:
a sampling-like set must have density at least the averaged trace, an
interpolation-like set at most, both within a slack that accounts for
finite-radius bias.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .kernels import (Kernel, check_axiom_D, check_HAP, check_poly_decay_hypothesis,
                      check_WL)
from .pointsets import DensityReport, PointSet, beurling_density, count_in_ball
from .spaces import NDB_FLOOR, WAD_TOL, QuadratureRule, Space, check_ndb, check_wad
from .spectral import (TraceReport, averaged_trace, ball_trace_integral,
                       frame_curve, riesz_curve)


@dataclass(frozen=True)
class Thresholds:
    """Finite-scale proxies for the asymptotic notions; artifact choices."""

    tau: float = 0.5
    riesz_floor: float = 1e-2
    frame_floor: float = 1e-2
    stability_ratio: float = 2.0    # max/min across windows counts as stable
    collapse_ratio: float = 10.0    # first/last beyond this counts as collapse
    slack: float | None = None      # None: 0.05 + max |trend| / r_max
    wad_tol: float = WAD_TOL
    ndb_floor: float = NDB_FLOOR
    ndb_radius: float = 1.0
    wl_tol: float = 0.05            # relative to the diagonal upper bound
    hap_tol: float = 0.05           # relative to its square

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "tau", "riesz_floor", "frame_floor", "stability_ratio",
            "collapse_ratio", "slack", "wad_tol", "ndb_floor", "ndb_radius",
            "wl_tol", "hap_tol")}


@dataclass(frozen=True)
class AxiomVerdict:
    name: str
    status: str               # "pass" | "fail" | "censored"
    headline: float | None    # one-number summary statistic
    detail: object = None     # the checker result behind the verdict


@dataclass(frozen=True)
class AxiomAudit:
    axioms: dict
    sampling_applicable: bool        # NDB, WAD, D, WL, HAP all pass
    interpolation_applicable: bool   # HAP not required on this path

    def status(self, name: str) -> str:
        return self.axioms[name].status


_SAMPLING_AXIOMS = ("NDB", "WAD", "D", "WL", "HAP")
_INTERPOLATION_AXIOMS = ("NDB", "WAD", "D", "WL")


def hypothesis_audit(space: Space, kernel: Kernel, ps: PointSet, centers,
                     radii, quad: QuadratureRule,
                     thresholds: Thresholds = Thresholds(),
                     poly_sigma: float | None = None, poly_C: float = 1.0,
                     seed: int = 0) -> AxiomAudit:
    """Run every axiom checker and aggregate into applicability flags.

    A censored axiom (not computable from the available data) never counts
    as a pass. The optional polynomial-decay audit runs only when a sigma
    is supplied; it is informational and does not gate applicability.
    """
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    axioms: dict[str, AxiomVerdict] = {}

    ndb = check_ndb(space, centers, thresholds.ndb_radius,
                    floor=thresholds.ndb_floor)
    axioms["NDB"] = AxiomVerdict("NDB", "pass" if ndb.passed else "fail",
                                 float(ndb.inf_measure), ndb)

    horizon = space.wad_horizon
    wad_radii = np.linspace(1.0, horizon, 80)
    wad = check_wad(space, centers, wad_radii, wad_tol=thresholds.wad_tol)
    axioms["WAD"] = AxiomVerdict("WAD", "pass" if wad.passed else "fail",
                                 float(wad.ratio_curve[-1]), wad)

    dg = check_axiom_D(kernel, centers)
    axioms["D"] = AxiomVerdict("D", "pass" if dg.passed else "fail",
                               float(dg.C1_est), dg)
    c2 = float(dg.C2_est)

    if kernel.projection or hasattr(kernel, "radial_squared_profile"):
        wl = check_WL(kernel, space, centers, r, quad)
        last = float(wl.sup_tail[-1])
        wl_ok = (np.isfinite(last) and last >= -1e-9
                 and last <= thresholds.wl_tol * c2
                 and last <= float(wl.sup_tail[0]) + 1e-12)
        axioms["WL"] = AxiomVerdict("WL", "pass" if wl_ok else "fail", last, wl)
    else:
        axioms["WL"] = AxiomVerdict("WL", "censored", None, None)

    hap = check_HAP(kernel, ps, space, centers, r)
    if bool(hap.censored[-1]):
        axioms["HAP"] = AxiomVerdict("HAP", "censored",
                                     float(hap.sup_tail[-1]), hap)
    else:
        hap_ok = float(hap.sup_tail[-1]) <= thresholds.hap_tol * c2 ** 2
        axioms["HAP"] = AxiomVerdict("HAP", "pass" if hap_ok else "fail",
                                     float(hap.sup_tail[-1]), hap)

    if poly_sigma is not None:
        try:
            pd = check_poly_decay_hypothesis(kernel, space, poly_sigma, poly_C,
                                             seed=seed)
            axioms["poly_decay"] = AxiomVerdict(
                "poly_decay", "pass" if pd.passed else "fail",
                float(pd.tail_curve[-1]), pd)
        except InputError:
            axioms["poly_decay"] = AxiomVerdict("poly_decay", "censored",
                                                None, None)

    sampling = all(axioms[a].status == "pass" for a in _SAMPLING_AXIOMS)
    interpolation = all(axioms[a].status == "pass"
                        for a in _INTERPOLATION_AXIOMS)
    return AxiomAudit(axioms=axioms, sampling_applicable=sampling,
                      interpolation_applicable=interpolation)


# ---------------------------------------------------------------------------
# empirical classification
# ---------------------------------------------------------------------------


def _side_state(values, floor: float, th: Thresholds) -> str:
    """stable / collapsed / ambiguous for one bound curve across windows.

    Negative eigenvalue estimates are roundoff on a PSD form and clamp to
    zero; a curve that starts at zero is collapsed outright.
    """
    v = np.maximum(np.asarray(values, dtype=float), 0.0)
    if len(v) < 3:
        return "ambiguous"
    if float(np.min(v)) >= floor and float(np.max(v)) <= th.stability_ratio * float(np.min(v)):
        return "stable"
    if v[0] <= 0.0 or v[-1] <= v[0] / th.collapse_ratio:
        return "collapsed"
    return "ambiguous"


def classify_empirically(riesz_reports, frame_reports,
                         thresholds: Thresholds = Thresholds()) -> str:
    """Finite-scale class of the point set from its two bound curves.

    Riesz side: lambda_min of the Gram over nested windows. Frame side:
    finite-section A_est over growing ball radii. Stability above the
    floor on a side asserts that side's property empirically; collapse
    (>= collapse_ratio decay, or a start at zero) denies it. Classes:
    both, sampling-like, interpolation-like, neither, inconclusive.
    """
    riesz_state = "absent" if riesz_reports is None else _side_state(
        [rep.lambda_min for rep in riesz_reports],
        thresholds.riesz_floor, thresholds)
    frame_state = "absent" if frame_reports is None else _side_state(
        [rep.A_est for rep in frame_reports],
        thresholds.frame_floor, thresholds)

    if riesz_state == "stable" and frame_state == "stable":
        return "both"
    if frame_state == "stable":
        return "sampling-like"
    if riesz_state == "stable":
        return "interpolation-like"
    if riesz_state == "collapsed" and frame_state == "collapsed":
        return "neither"
    return "inconclusive"


# ---------------------------------------------------------------------------
# the verdict
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    licensed: bool
    lhs: float | None = None       # density estimate
    rhs: float | None = None       # trace estimate
    slack: float | None = None
    satisfied: bool | None = None  # None when not licensed

    def as_dict(self) -> dict:
        return {"name": self.name, "licensed": self.licensed, "lhs": self.lhs,
                "rhs": self.rhs, "slack": self.slack,
                "satisfied": self.satisfied}


@dataclass(frozen=True)
class VerdictReport:
    D_minus: float
    D_plus: float
    tr_minus: float
    tr_plus: float
    density_trend_minus: float
    density_trend_plus: float
    trace_trend_minus: float
    trace_trend_plus: float
    riesz_curve: list            # dicts: window, lambda_min, lambda_max
    frame_curve: list            # dicts: r, A_est, B_est
    empirical_class: str
    inequality_checks: list      # InequalityCheck
    dimension_free_ratios: dict  # {"minus": .., "plus": .., "radius": ..}
    slack: float
    thresholds: dict
    audit: AxiomAudit | None = None
    consistent: bool = True      # no licensed inequality violated

    def as_dict(self) -> dict:
        out = {
            "D_minus": self.D_minus, "D_plus": self.D_plus,
            "tr_minus": self.tr_minus, "tr_plus": self.tr_plus,
            "density_trend_minus": self.density_trend_minus,
            "density_trend_plus": self.density_trend_plus,
            "trace_trend_minus": self.trace_trend_minus,
            "trace_trend_plus": self.trace_trend_plus,
            "riesz_curve": self.riesz_curve,
            "frame_curve": self.frame_curve,
            "empirical_class": self.empirical_class,
            "inequality_checks": [c.as_dict() for c in self.inequality_checks],
            "dimension_free_ratios": self.dimension_free_ratios,
            "slack": self.slack,
            "thresholds": self.thresholds,
            "consistent": self.consistent,
        }
        if self.audit is not None:
            out["axioms"] = {
                name: {"status": v.status, "headline": v.headline}
                for name, v in self.audit.axioms.items()}
            out["sampling_applicable"] = self.audit.sampling_applicable
            out["interpolation_applicable"] = self.audit.interpolation_applicable
        return out


def _auto_slack(trends, r_max: float) -> float:
    # finite-r estimates carry O(1/r) bias; the fitted slope against 1/r
    # divided by r_max is the size of that bias at the largest radius
    return 0.05 + max(abs(float(t)) for t in trends) / float(r_max)


def assemble_verdict(density: DensityReport, trace: TraceReport,
                     riesz_reports, frame_reports,
                     audit: AxiomAudit | None = None,
                     thresholds: Thresholds = Thresholds(),
                     dimension_free: dict | None = None) -> VerdictReport:
    """Combine precomputed stage outputs into the final report."""
    if density.D_minus_est > density.D_plus_est + 1e-12:
        raise InputError("density estimates are inverted")
    if trace.tr_minus_est > trace.tr_plus_est + 1e-12:
        raise InputError("trace estimates are inverted")

    empirical_class = classify_empirically(riesz_reports, frame_reports,
                                           thresholds)
    r_max = float(density.radii[-1])
    slack = thresholds.slack if thresholds.slack is not None else _auto_slack(
        [density.trend_minus, density.trend_plus,
         trace.trend_minus, trace.trend_plus], r_max)

    D_minus, D_plus = float(density.D_minus_est), float(density.D_plus_est)
    tr_minus, tr_plus = float(trace.tr_minus_est), float(trace.tr_plus_est)

    # the density bounds assert nothing unless the hypotheses hold: an
    # attached audit gates the licenses in addition to the empirical class
    sampling_licensed = (empirical_class in ("sampling-like", "both")
                         and (audit is None or audit.sampling_applicable))
    interpolation_licensed = (empirical_class in ("interpolation-like", "both")
                              and (audit is None
                                   or audit.interpolation_applicable))
    checks = [
        InequalityCheck(
            name="sampling-lower-density", licensed=sampling_licensed,
            lhs=D_minus, rhs=tr_minus, slack=slack,
            satisfied=bool(D_minus >= tr_minus - slack) if sampling_licensed else None),
        InequalityCheck(
            name="sampling-upper-density", licensed=sampling_licensed,
            lhs=D_plus, rhs=tr_plus, slack=slack,
            satisfied=bool(D_plus >= tr_plus - slack) if sampling_licensed else None),
        InequalityCheck(
            name="interpolation-lower-density", licensed=interpolation_licensed,
            lhs=D_minus, rhs=tr_minus, slack=slack,
            satisfied=bool(D_minus <= tr_minus + slack) if interpolation_licensed else None),
        InequalityCheck(
            name="interpolation-upper-density", licensed=interpolation_licensed,
            lhs=D_plus, rhs=tr_plus, slack=slack,
            satisfied=bool(D_plus <= tr_plus + slack) if interpolation_licensed else None),
    ]
    consistent = all(c.satisfied is not False for c in checks)

    riesz_ser = [] if riesz_reports is None else [
        {"window": rep.label, "lambda_min": rep.lambda_min,
         "lambda_max": rep.lambda_max, "n": int(len(rep.eigenvalues))}
        for rep in riesz_reports]
    frame_ser = [] if frame_reports is None else [
        {"r": rep.r, "A_est": rep.A_est, "B_est": rep.B_est,
         "subspace_dim": rep.subspace_dim, "n_samples": rep.n_samples}
        for rep in frame_reports]

    return VerdictReport(
        D_minus=D_minus, D_plus=D_plus, tr_minus=tr_minus, tr_plus=tr_plus,
        density_trend_minus=float(density.trend_minus),
        density_trend_plus=float(density.trend_plus),
        trace_trend_minus=float(trace.trend_minus),
        trace_trend_plus=float(trace.trend_plus),
        riesz_curve=riesz_ser, frame_curve=frame_ser,
        empirical_class=empirical_class, inequality_checks=checks,
        dimension_free_ratios=dimension_free or {},
        slack=float(slack), thresholds=thresholds.as_dict(), audit=audit,
        consistent=bool(consistent))


def dimension_free_ratios(ps: PointSet, space: Space, kernel: Kernel,
                          centers, r: float, quad: QuadratureRule,
                          use_known_diagonal: bool = True) -> dict:
    """Coordinate-free count-to-trace ratios at one radius.

    ratio(c) = #(points in B_r(c)) / integral_{B_r(c)} k(y,y) dmu; inf and
    sup over the admissible (uncensored) centers. For constant-diagonal
    kernels this equals the density ratio divided by the trace ratio
    exactly, which the tests assert.
    """
    C = np.asarray(centers, dtype=float)
    if C.ndim == 1:
        C = C[:, None]
    ratios = []
    for c in C:
        cnt = count_in_ball(ps, space, c, r)
        if cnt.censored:
            continue
        integral = ball_trace_integral(kernel, space, c, r, quad,
                                       use_known_diagonal=use_known_diagonal)
        ratios.append(cnt.count / integral)
    if not ratios:
        raise InputError(f"no admissible centers at radius {r}")
    return {"minus": float(np.min(ratios)), "plus": float(np.max(ratios)),
            "radius": float(r)}


def density_vs_trace(space: Space, kernel: Kernel, ps: PointSet, *,
                     centers, radii, quad: QuadratureRule,
                     riesz_halfwidths=None, frame_radii=None,
                     frame_center=None, thresholds: Thresholds = Thresholds(),
                     audit: AxiomAudit | None = None,
                     use_known_diagonal: bool = True,
                     density: DensityReport | None = None,
                     trace: TraceReport | None = None,
                     riesz_reports=None, frame_reports=None) -> VerdictReport:
    """One-call assembly: computes any stage not supplied precomputed.

    Spectral curves are optional; without at least one of them the class
    is inconclusive and no inequality is licensed (the report still carries
    densities and traces).
    """
    if density is None:
        density = beurling_density(ps, space, centers, radii)
    if trace is None:
        trace = averaged_trace(kernel, space, centers, radii, quad,
                               use_known_diagonal=use_known_diagonal)
    if riesz_reports is None and riesz_halfwidths is not None:
        riesz_reports = riesz_curve(kernel, ps, space, riesz_halfwidths)
    if frame_reports is None and frame_radii is not None:
        center = frame_center if frame_center is not None else ps.window_center
        frame_reports = frame_curve(kernel, ps, space, center, frame_radii,
                                    tau=thresholds.tau, quad=quad)
    dimfree = dimension_free_ratios(ps, space, kernel, centers,
                                    float(np.atleast_1d(radii)[-1]), quad,
                                    use_known_diagonal=use_known_diagonal)
    return assemble_verdict(density, trace, riesz_reports, frame_reports,
                            audit=audit, thresholds=thresholds,
                            dimension_free=dimfree)
