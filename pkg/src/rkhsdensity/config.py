"""Experiment configuration: schema validation and object construction.

Configs are JSON objects validated against a strict schema (unknown fields
rejected at every level). Defaults applied here are recorded into the
effective config that the pipeline hashes and emits, so a report always
shows the exact parameters that produced it.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass

import jsonschema
import numpy as np

from .errors import InputError
from .kernels import (FockGaussianNormalized, GaborGaussian, Kernel,
                      PaleyWienerBox, SyntheticPolyDecay)
from .pointsets import candidate_centers
from .spaces import (EuclideanLebesgue, FockGaussian,
                     HyperbolicUpperHalfPlane, IntegerWordMetric,
                     LogMetricLine, PhasePlane, QuadratureRule, Space,
                     metric_ball_lattice)
from .verdict import Thresholds

_NUM_POS = {"type": "number", "exclusiveMinimum": 0}
_INT_POS = {"type": "integer", "minimum": 1}
_NUM_ARRAY = {"type": "array", "items": {"type": "number"}, "minItems": 1}
_POS_ARRAY = {"type": "array", "items": _NUM_POS, "minItems": 1}


def _variant(name: str, **props) -> dict:
    out = {
        "type": "object",
        "additionalProperties": False,
        "properties": {"variant": {"const": name}, **props},
        "required": ["variant"],
    }
    return out


SPACE_SCHEMA = {"oneOf": [
    _variant("EuclideanLebesgue", dim=_INT_POS),
    _variant("LogMetricLine"),
    _variant("HyperbolicUpperHalfPlane"),
    _variant("IntegerWordMetric", dim=_INT_POS),
    _variant("FockGaussian", complex_dim=_INT_POS),
    _variant("PhasePlane"),
]}

KERNEL_SCHEMA = {"oneOf": [
    _variant("PaleyWienerBox", dim=_INT_POS,
             bandwidths={"anyOf": [_NUM_POS, _POS_ARRAY]}),
    _variant("FockGaussianNormalized", complex_dim=_INT_POS),
    _variant("GaborGaussian"),
    _variant("SyntheticPolyDecay", sigma=_NUM_POS, dim=_INT_POS),
]}

POINTSET_SCHEMA = {"oneOf": [
    {
        "type": "object", "additionalProperties": False,
        "properties": {"kind": {"const": "lattice"},
                       "steps": _POS_ARRAY, "window": _NUM_POS},
        "required": ["kind", "steps", "window"],
    },
    {
        "type": "object", "additionalProperties": False,
        "properties": {"kind": {"const": "jittered_lattice"},
                       "steps": _POS_ARRAY, "window": _NUM_POS,
                       "jitter": _NUM_POS},
        "required": ["kind", "steps", "window", "jitter"],
    },
    {
        "type": "object", "additionalProperties": False,
        "properties": {"kind": {"const": "file"}, "path": {"type": "string"},
                       "window_center": _NUM_ARRAY,
                       "window_radius": _NUM_POS},
        "required": ["kind", "path", "window_center", "window_radius"],
    },
]}

CENTERS_SCHEMA = {"oneOf": [
    {
        "type": "object", "additionalProperties": False,
        "properties": {"kind": {"const": "grid"}, "spacing": _NUM_POS,
                       "extent": _NUM_POS},
        "required": ["kind", "spacing", "extent"],
    },
    {
        "type": "object", "additionalProperties": False,
        "properties": {"kind": {"const": "explicit"},
                       "points": {"type": "array",
                                  "items": _NUM_ARRAY, "minItems": 1}},
        "required": ["kind", "points"],
    },
    {
        "type": "object", "additionalProperties": False,
        "properties": {"kind": {"const": "auto"}, "spacing": _NUM_POS,
                       "cap": _INT_POS},
        "required": ["kind"],
    },
]}

THRESHOLDS_SCHEMA = {
    "type": "object", "additionalProperties": False,
    "properties": {
        "tau": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "slack": _NUM_POS,
        "wad_tol": _NUM_POS,
        "riesz_floor": _NUM_POS,
        "frame_floor": _NUM_POS,
        "stability_ratio": {"type": "number", "minimum": 1},
        "collapse_ratio": {"type": "number", "exclusiveMinimum": 1},
    },
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["experiment_id", "space", "kernel", "pointset", "radii"],
    "properties": {
        "experiment_id": {"type": "string", "minLength": 1,
                          "pattern": r"^[A-Za-z0-9._-]+$"},
        "seed": {"type": "integer", "minimum": 0},
        "space": SPACE_SCHEMA,
        "kernel": KERNEL_SCHEMA,
        "pointset": POINTSET_SCHEMA,
        "centers": CENTERS_SCHEMA,
        "radii": {"type": "array", "items": _NUM_POS, "minItems": 1},
        "quadrature": {
            "type": "object", "additionalProperties": False,
            "properties": {"h": _NUM_POS, "loc_h": _NUM_POS},
        },
        "thresholds": THRESHOLDS_SCHEMA,
        "riesz_halfwidths": _POS_ARRAY,
        "frame_radii": _POS_ARRAY,
        "frame_center": _NUM_ARRAY,
        "frame_margin": _NUM_POS,
        "loc_radii": _POS_ARRAY,
        "poly_audit": {
            "type": "object", "additionalProperties": False,
            "properties": {"sigma": _NUM_POS, "C": _NUM_POS},
            "required": ["sigma"],
        },
        "outputs": {
            "type": "object", "additionalProperties": False,
            "properties": {"csv_dir": {"type": "string"},
                           "json_path": {"type": "string"}},
        },
    },
}

_DEFAULTS = {
    "seed": 0,
    "quadrature": {"h": 0.05},
    "thresholds": {},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated config plus the effective dict with defaults applied."""

    effective: dict

    @property
    def experiment_id(self) -> str:
        return self.effective["experiment_id"]

    @property
    def seed(self) -> int:
        return int(self.effective["seed"])

    # -- construction --------------------------------------------------------

    def build_space(self) -> Space:
        return build_space(self.effective["space"])

    def build_kernel(self) -> Kernel:
        return build_kernel(self.effective["kernel"])

    def build_quadrature(self) -> QuadratureRule:
        return QuadratureRule(h=float(self.effective["quadrature"]["h"]))

    def build_loc_quadrature(self) -> QuadratureRule:
        q = self.effective["quadrature"]
        return QuadratureRule(h=float(q.get("loc_h", q["h"])))

    def build_thresholds(self) -> Thresholds:
        return Thresholds(**self.effective["thresholds"])

    def build_centers(self, space: Space, ps) -> np.ndarray:
        spec = self.effective["centers"]
        if spec["kind"] == "grid":
            return metric_ball_lattice(space, space.origin(),
                                       float(spec["extent"]),
                                       float(spec["spacing"]))
        if spec["kind"] == "explicit":
            pts = np.asarray(spec["points"], dtype=float)
            if pts.shape[1] != space.dim:
                raise InputError(
                    f"centers have dimension {pts.shape[1]}, space has {space.dim}")
            return pts
        return candidate_centers(space, ps,
                                 spacing=float(spec.get("spacing", 1.0)),
                                 cap=int(spec.get("cap", 4000)))

    @property
    def radii(self) -> np.ndarray:
        return np.asarray(self.effective["radii"], dtype=float)

    def optional(self, key: str):
        return self.effective.get(key)


def build_space(spec: dict) -> Space:
    v = spec["variant"]
    if v == "EuclideanLebesgue":
        return EuclideanLebesgue(int(spec.get("dim", 1)))
    if v == "LogMetricLine":
        return LogMetricLine()
    if v == "HyperbolicUpperHalfPlane":
        return HyperbolicUpperHalfPlane()
    if v == "IntegerWordMetric":
        return IntegerWordMetric(int(spec.get("dim", 1)))
    if v == "FockGaussian":
        return FockGaussian(int(spec.get("complex_dim", 1)))
    if v == "PhasePlane":
        return PhasePlane()
    raise InputError(f"unknown space variant {v!r}")


def build_kernel(spec: dict) -> Kernel:
    v = spec["variant"]
    if v == "PaleyWienerBox":
        return PaleyWienerBox(int(spec.get("dim", 1)),
                              spec.get("bandwidths", 1.0))
    if v == "FockGaussianNormalized":
        return FockGaussianNormalized(int(spec.get("complex_dim", 1)))
    if v == "GaborGaussian":
        return GaborGaussian()
    if v == "SyntheticPolyDecay":
        return SyntheticPolyDecay(float(spec["sigma"]), int(spec.get("dim", 1)))
    raise InputError(f"unknown kernel variant {v!r}")


def _default_centers(cfg: dict) -> dict:
    # grid that stays admissible at the largest radius: extent chosen so a
    # ball of r_max around every center fits in the declared window
    r_max = float(max(cfg["radii"]))
    ps = cfg["pointset"]
    window = float(ps["window"]) if "window" in ps else float(ps["window_radius"])
    spacing = max(r_max / 4.0, 1e-6)
    extent = max(window - r_max, spacing)
    return {"kind": "grid", "spacing": spacing, "extent": extent}


def load_config(source) -> ExperimentConfig:
    """Validate a config (dict, JSON string, or path) and apply defaults."""
    if isinstance(source, dict):
        raw = source
    else:
        text = source
        if not str(source).lstrip().startswith("{"):
            try:
                with open(source, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError(f"cannot read config {source}: {exc}") from exc
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"config is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(raw, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"config invalid at {path}: {exc.message}") from exc

    cfg = copy.deepcopy(raw)
    for key, val in _DEFAULTS.items():
        cfg.setdefault(key, copy.deepcopy(val))
    cfg["quadrature"].setdefault("h", 0.05)
    if "centers" not in cfg:
        cfg["centers"] = _default_centers(cfg)
    radii = cfg["radii"]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise InputError("radii must be strictly increasing")

    # sanity-check cross-field dimensions early, with readable errors
    config = ExperimentConfig(effective=cfg)
    space = config.build_space()
    kernel = config.build_kernel()
    if kernel.dim != space.dim:
        raise InputError(
            f"kernel dimension {kernel.dim} does not match space dimension "
            f"{space.dim}")
    steps = cfg["pointset"].get("steps")
    if steps is not None and len(steps) not in (1, space.dim):
        raise InputError(
            f"pointset steps must have 1 or {space.dim} entries, got {len(steps)}")
    return config


def canonical_json(obj) -> str:
    """Deterministic JSON used for hashing and emission."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)
