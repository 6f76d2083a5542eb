"""Stage pipeline: runs experiments and emits CSV/JSON deterministically.

Stages: audit, density, trace, gram, framebounds, locspec, verdict; "all"
runs them in that order sharing intermediates. Every file is written to a
temporary name and atomically renamed; a failing stage removes its partial
outputs and aborts with the stage name. The manifest records the config
hash, version, seed, and timings; its wall-clock fields are the one
intentional nondeterminism, so byte-identity is checked on everything
except the manifest.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, canonical_json, load_config
from .errors import InputError
from .generators import generate_pointset
from .pointsets import beurling_density
from .registry import canonical_config
from .spectral import (averaged_trace, frame_curve, localization_spectrum,
                       riesz_curve)
from .verdict import (assemble_verdict, dimension_free_ratios,
                      hypothesis_audit)
from .version import VERSION

STAGES = ("audit", "density", "trace", "gram", "framebounds", "locspec",
          "verdict")


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------


def _jsonable(obj):
    """Plain JSON types; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if np.isfinite(x):
            return x
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _write_json(path: Path, obj) -> None:
    _write_atomic(path, canonical_json(_jsonable(obj)) + "\n")


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    _write_atomic(path, "\n".join(lines) + "\n")


def _cell(v) -> str:
    if isinstance(v, (np.floating, float)):
        x = float(v)
        return repr(x) if np.isfinite(x) else ("inf" if x > 0 else "-inf")
    if isinstance(v, (np.integer, int)):
        return str(int(v))
    return str(v)


def _point_str(p) -> str:
    return ";".join(repr(float(c)) for c in np.atleast_1d(p))


# ---------------------------------------------------------------------------
# the run
# ---------------------------------------------------------------------------


@dataclass
class RunResult:
    exit_code: int
    out_dir: Path
    files: list
    stage_seconds: dict
    verdict: object = None
    audit: object = None
    summary: str = ""


class _Context:
    """Shared intermediates across stages of one run."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.space = cfg.build_space()
        self.kernel = cfg.build_kernel()
        self.quad = cfg.build_quadrature()
        self.loc_quad = cfg.build_loc_quadrature()
        self.thresholds = cfg.build_thresholds()
        self.ps = generate_pointset(cfg.effective["pointset"], self.space,
                                    seed=cfg.seed)
        self.centers = cfg.build_centers(self.space, self.ps)
        self.radii = cfg.radii
        self.audit = None
        self.density = None
        self.trace = None
        self.riesz_reports = None
        self.frame_reports = None
        self.verdict = None

    def frame_center(self):
        fc = self.cfg.optional("frame_center")
        if fc is not None:
            return np.asarray(fc, dtype=float)
        return self.ps.window_center


def _ensure_audit(ctx: _Context):
    if ctx.audit is None:
        poly = ctx.cfg.optional("poly_audit") or {}
        ctx.audit = hypothesis_audit(
            ctx.space, ctx.kernel, ctx.ps, ctx.centers, ctx.radii, ctx.quad,
            thresholds=ctx.thresholds, poly_sigma=poly.get("sigma"),
            poly_C=poly.get("C", 1.0), seed=ctx.cfg.seed)
    return ctx.audit


def _ensure_density(ctx: _Context):
    if ctx.density is None:
        ctx.density = beurling_density(ctx.ps, ctx.space, ctx.centers,
                                       ctx.radii)
    return ctx.density


def _ensure_trace(ctx: _Context):
    if ctx.trace is None:
        ctx.trace = averaged_trace(ctx.kernel, ctx.space, ctx.centers,
                                   ctx.radii, ctx.quad)
    return ctx.trace


def _ensure_riesz(ctx: _Context, required: bool):
    hw = ctx.cfg.optional("riesz_halfwidths")
    if hw is None:
        if required:
            raise InputError("config has no riesz_halfwidths")
        return None
    if ctx.riesz_reports is None:
        ctx.riesz_reports = riesz_curve(ctx.kernel, ctx.ps, ctx.space, hw)
    return ctx.riesz_reports


def _ensure_frame(ctx: _Context, required: bool):
    radii = ctx.cfg.optional("frame_radii")
    if radii is None:
        if required:
            raise InputError("config has no frame_radii")
        return None
    if ctx.frame_reports is None:
        ctx.frame_reports = frame_curve(
            ctx.kernel, ctx.ps, ctx.space, ctx.frame_center(), radii,
            tau=ctx.thresholds.tau, margin=ctx.cfg.optional("frame_margin"),
            quad=ctx.loc_quad)
    return ctx.frame_reports


# -- stage emitters ----------------------------------------------------------


def _tails_csv(path: Path, report) -> None:
    rows = []
    for ci in range(report.per_center.shape[0]):
        for rj, r in enumerate(report.radii):
            rows.append((ci, float(r), float(report.per_center[ci, rj])))
    _write_csv(path, ("center_index", "r", "tail_value"), rows)


def _stage_audit(ctx: _Context, out: Path) -> list:
    aud = _ensure_audit(ctx)
    files = []
    payload = {"experiment_id": ctx.cfg.experiment_id, "axioms": {},
               "sampling_applicable": aud.sampling_applicable,
               "interpolation_applicable": aud.interpolation_applicable}
    for name, v in aud.axioms.items():
        entry = {"status": v.status, "headline": v.headline}
        det = v.detail
        if name == "WAD" and det is not None:
            entry["radii"] = det.radii
            entry["ratio_curve"] = det.ratio_curve
        if name == "NDB" and det is not None:
            entry["r"] = det.r
            entry["inf_measure"] = det.inf_measure
        if name == "D" and det is not None:
            entry["C1_est"] = det.C1_est
            entry["C2_est"] = det.C2_est
        if name in ("WL", "HAP") and det is not None:
            entry["radii"] = det.radii
            entry["sup_tail"] = det.sup_tail
            entry["epsilon_to_radius"] = {str(k): v2 for k, v2 in
                                          det.epsilon_to_radius.items()}
        if name == "poly_decay" and det is not None:
            entry["sigma"] = det.sigma
            entry["C"] = det.C
            entry["decay_holds"] = det.decay_holds
            entry["max_envelope_ratio"] = det.max_envelope_ratio
            entry["tail_radii"] = det.tail_radii
            entry["tail_curve"] = det.tail_curve
            entry["convergent"] = det.convergent
        payload["axioms"][name] = entry
    p = out / "audit.json"
    _write_json(p, payload)
    files.append(p)
    wl = aud.axioms.get("WL")
    if wl is not None and wl.detail is not None:
        p = out / "wl_tails.csv"
        _tails_csv(p, wl.detail)
        files.append(p)
    hap = aud.axioms.get("HAP")
    if hap is not None and hap.detail is not None:
        p = out / "hap_tails.csv"
        _tails_csv(p, hap.detail)
        files.append(p)
    return files


def _stage_density(ctx: _Context, out: Path) -> list:
    den = _ensure_density(ctx)
    p = out / "density.csv"
    rows = [(float(r), float(lo), float(hi), int(c))
            for r, lo, hi, c in zip(den.radii, den.inf_ratio, den.sup_ratio,
                                    den.censored_centers)]
    _write_csv(p, ("r", "inf_ratio", "sup_ratio", "censored_centers"), rows)
    pj = out / "density.json"
    _write_json(pj, {"experiment_id": ctx.cfg.experiment_id,
                     "D_minus_est": den.D_minus_est,
                     "D_plus_est": den.D_plus_est,
                     "trend_minus": den.trend_minus,
                     "trend_plus": den.trend_plus,
                     "n_points": int(len(ctx.ps)),
                     "n_centers": int(len(ctx.centers))})
    return [p, pj]


def _stage_trace(ctx: _Context, out: Path) -> list:
    tr = _ensure_trace(ctx)
    p = out / "trace.csv"
    rows = [(float(r), float(lo), float(hi))
            for r, lo, hi in zip(tr.radii, tr.inf_avg, tr.sup_avg)]
    _write_csv(p, ("r", "inf_avg", "sup_avg"), rows)
    pj = out / "trace.json"
    _write_json(pj, {"experiment_id": ctx.cfg.experiment_id,
                     "tr_minus_est": tr.tr_minus_est,
                     "tr_plus_est": tr.tr_plus_est,
                     "trend_minus": tr.trend_minus,
                     "trend_plus": tr.trend_plus,
                     "quadrature_free": tr.quadrature_free})
    return [p, pj]


_SPECTRAL_HEADER = ("experiment_id", "center", "r", "lambda_min",
                    "lambda_max", "trace", "plunge_count")


def _stage_gram(ctx: _Context, out: Path) -> list:
    reports = _ensure_riesz(ctx, required=True)
    hw = ctx.cfg.optional("riesz_halfwidths")
    center = _point_str(ctx.ps.window_center)
    rows = [(ctx.cfg.experiment_id, center, float(h), rep.lambda_min,
             rep.lambda_max, rep.trace, rep.plunge_count)
            for h, rep in zip(hw, reports)]
    p = out / "spectral_riesz.csv"
    _write_csv(p, _SPECTRAL_HEADER, rows)
    return [p]


def _stage_framebounds(ctx: _Context, out: Path) -> list:
    reports = _ensure_frame(ctx, required=True)
    center = _point_str(ctx.frame_center())
    rows = [(ctx.cfg.experiment_id, center, rep.r, rep.A_est, rep.B_est,
             float(np.sum(rep.eigenvalues)), rep.loc_plunge_count)
            for rep in reports]
    p = out / "spectral_frame.csv"
    _write_csv(p, _SPECTRAL_HEADER, rows)
    return [p]


def _stage_locspec(ctx: _Context, out: Path) -> list:
    radii = ctx.cfg.optional("loc_radii")
    if radii is None:
        raise InputError("config has no loc_radii")
    center = ctx.frame_center()
    rows = []
    for r in radii:
        rep = localization_spectrum(ctx.kernel, ctx.space, center, float(r),
                                    ctx.loc_quad)
        rows.append((ctx.cfg.experiment_id, _point_str(center), float(r),
                     rep.lambda_min, rep.lambda_max, rep.trace,
                     rep.plunge_count))
    p = out / "spectral_localization.csv"
    _write_csv(p, _SPECTRAL_HEADER, rows)
    return [p]


def _stage_verdict(ctx: _Context, out: Path) -> list:
    aud = _ensure_audit(ctx)
    den = _ensure_density(ctx)
    tr = _ensure_trace(ctx)
    riesz = _ensure_riesz(ctx, required=False)
    frame = _ensure_frame(ctx, required=False)
    dimfree = dimension_free_ratios(ctx.ps, ctx.space, ctx.kernel,
                                    ctx.centers, float(ctx.radii[-1]),
                                    ctx.quad)
    ctx.verdict = assemble_verdict(den, tr, riesz, frame, audit=aud,
                                   thresholds=ctx.thresholds,
                                   dimension_free=dimfree)
    payload = ctx.verdict.as_dict()
    payload["experiment_id"] = ctx.cfg.experiment_id
    payload["schema_version"] = 1
    payload["effective_config"] = ctx.cfg.effective
    custom = (ctx.cfg.optional("outputs") or {}).get("json_path")
    p = Path(custom) if custom else out / "verdict.json"
    p.parent.mkdir(parents=True, exist_ok=True)
    _write_json(p, payload)
    return [p]


_STAGE_FUNCS = {
    "audit": _stage_audit,
    "density": _stage_density,
    "trace": _stage_trace,
    "gram": _stage_gram,
    "framebounds": _stage_framebounds,
    "locspec": _stage_locspec,
    "verdict": _stage_verdict,
}

# stages skipped in "all" when the config omits their inputs
_OPTIONAL_INPUTS = {"gram": "riesz_halfwidths", "framebounds": "frame_radii",
                    "locspec": "loc_radii"}


def run(config, out_dir=None, stage: str = "all", seed: int | None = None
        ) -> RunResult:
    """Execute stages of one experiment; see the module docstring.

    config may be an ExperimentConfig, a dict, a JSON string, or a path.
    out_dir defaults to the config's outputs.csv_dir, then to
    runs/<experiment_id>. Returns a RunResult whose exit_code follows the
    CLI convention: 0 consistent, 2 licensed inequality violated,
    3 density bounds not applicable, 4 never returned (input errors raise
    InputError).
    """
    if not isinstance(config, ExperimentConfig):
        config = load_config(config)
    if seed is not None:
        eff = dict(config.effective)
        eff["seed"] = int(seed)
        config = ExperimentConfig(effective=eff)
    if stage != "all" and stage not in STAGES:
        raise InputError(f"unknown stage {stage!r}; "
                         f"choose from {', '.join(STAGES + ('all',))}")

    if out_dir is None:
        out_dir = (config.optional("outputs") or {}).get("csv_dir") \
            or os.path.join("runs", config.experiment_id)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ctx = _Context(config)
    todo = list(STAGES) if stage == "all" else [stage]

    t_start = time.perf_counter()
    stage_seconds = {}
    files: list = []
    for name in todo:
        if stage == "all" and name in _OPTIONAL_INPUTS \
                and config.optional(_OPTIONAL_INPUTS[name]) is None:
            stage_seconds[name] = "skipped"
            continue
        t0 = time.perf_counter()
        written: list = []
        try:
            written = _STAGE_FUNCS[name](ctx, out)
        except Exception as exc:
            for f in written:
                try:
                    os.remove(f)
                except OSError:
                    pass
            if isinstance(exc, InputError):
                raise InputError(f"stage {name}: {exc}") from exc
            raise RuntimeError(f"stage {name} failed: {exc}") from exc
        files.extend(written)
        stage_seconds[name] = time.perf_counter() - t0

    exit_code = 0
    if ctx.audit is not None and not (ctx.audit.sampling_applicable
                                      or ctx.audit.interpolation_applicable):
        exit_code = 3
    if ctx.verdict is not None and not ctx.verdict.consistent:
        exit_code = 2

    manifest = {
        "experiment_id": config.experiment_id,
        "config_hash": hashlib.sha256(
            canonical_json(config.effective).encode()).hexdigest(),
        "version": VERSION,
        "seed": config.seed,
        "wall_clock_s": time.perf_counter() - t_start,
        "stage_seconds": stage_seconds,
        "files": [f.name for f in files],
        "exit_code": exit_code,
    }
    mp = out / "manifest.json"
    _write_json(mp, manifest)
    files.append(mp)

    return RunResult(exit_code=exit_code, out_dir=out, files=files,
                     stage_seconds=stage_seconds, verdict=ctx.verdict,
                     audit=ctx.audit, summary=_summary(ctx, exit_code))


def run_canonical(name: str, out_dir, stage: str = "all",
                  seed: int | None = None) -> RunResult:
    return run(canonical_config(name), out_dir, stage=stage, seed=seed)


def _summary(ctx: _Context, exit_code: int) -> str:
    lines = [f"experiment {ctx.cfg.experiment_id}: "
             f"{len(ctx.ps)} points, {len(ctx.centers)} centers"]
    if ctx.audit is not None:
        marks = ", ".join(f"{n}={v.status}" for n, v in ctx.audit.axioms.items())
        lines.append(f"  axioms: {marks}")
    if ctx.density is not None:
        lines.append(f"  density: D- = {ctx.density.D_minus_est:.6g}, "
                     f"D+ = {ctx.density.D_plus_est:.6g}")
    if ctx.trace is not None:
        lines.append(f"  trace: tr- = {ctx.trace.tr_minus_est:.6g}, "
                     f"tr+ = {ctx.trace.tr_plus_est:.6g}")
    if ctx.riesz_reports:
        vals = ", ".join(f"{rp.lambda_min:.3e}" for rp in ctx.riesz_reports)
        lines.append(f"  riesz lambda_min over windows: {vals}")
    if ctx.frame_reports:
        vals = ", ".join(f"{rp.A_est:.3e}" for rp in ctx.frame_reports)
        lines.append(f"  frame A_est over radii: {vals}")
    if ctx.verdict is not None:
        lines.append(f"  class: {ctx.verdict.empirical_class} "
                     f"(slack {ctx.verdict.slack:.4g})")
        for c in ctx.verdict.inequality_checks:
            if c.licensed:
                lines.append(f"    {c.name}: lhs={c.lhs:.6g} rhs={c.rhs:.6g} "
                             f"-> {'ok' if c.satisfied else 'VIOLATED'}")
        lines.append(f"  consistent: {ctx.verdict.consistent}")
    lines.append(f"  exit code: {exit_code}")
    return "\n".join(lines)
