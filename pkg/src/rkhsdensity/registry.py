"""Canonical experiment registry.

Eight named configs spanning the critical-density phenomenon on the three
coherent families plus a synthetic decay audit. Each config is a plain
dict accepted by load_config, so `--canonical <name>` and a JSON file
round-trip identically.
"""

from __future__ import annotations

import copy
import math

from .errors import InputError

_FOCK_STEP_08 = math.sqrt(math.pi * 0.8)
_FOCK_STEP_12 = math.sqrt(math.pi * 1.2)
_GABOR_STEP_08 = math.sqrt(0.8)
_GABOR_STEP_12 = math.sqrt(1.2)


def _pw(alpha: float, name: str, seed: int) -> dict:
    return {
        "experiment_id": name,
        "seed": seed,
        "space": {"variant": "EuclideanLebesgue", "dim": 1},
        "kernel": {"variant": "PaleyWienerBox", "dim": 1, "bandwidths": 1.0},
        "pointset": {"kind": "lattice", "steps": [alpha], "window": 80.0},
        "centers": {"kind": "grid", "spacing": 2.0, "extent": 8.0},
        "radii": [5.0, 10.0, 20.0, 40.0],
        "quadrature": {"h": 0.05},
        "riesz_halfwidths": [16.0, 32.0, 64.0],
        "frame_radii": [8.0, 16.0, 32.0],
        "frame_center": [0.0],
        "loc_radii": [4.0, 8.0, 16.0],
    }


def _fock(s: float, step: float, name: str, seed: int) -> dict:
    return {
        "experiment_id": name,
        "seed": seed,
        "space": {"variant": "FockGaussian", "complex_dim": 1},
        "kernel": {"variant": "FockGaussianNormalized", "complex_dim": 1},
        "pointset": {"kind": "lattice", "steps": [step, step], "window": 14.0},
        "centers": {"kind": "grid", "spacing": 3.0, "extent": 6.0},
        "radii": [3.0, 5.0, 8.0],
        "quadrature": {"h": 0.05, "loc_h": 0.2},
        "riesz_halfwidths": [6.0, 9.0, 12.0],
        "frame_radii": [3.0, 4.5, 6.0],
        "frame_center": [0.0, 0.0],
        "loc_radii": [3.0, 6.0],
    }


def _gabor(ab: float, step: float, name: str, seed: int) -> dict:
    return {
        "experiment_id": name,
        "seed": seed,
        "space": {"variant": "PhasePlane"},
        "kernel": {"variant": "GaborGaussian"},
        "pointset": {"kind": "lattice", "steps": [step, step], "window": 10.0},
        "centers": {"kind": "grid", "spacing": 2.0, "extent": 2.0},
        "radii": [3.0, 5.0, 8.0],
        "quadrature": {"h": 0.05, "loc_h": 0.15},
        "riesz_halfwidths": [4.0, 6.0, 8.0],
        "frame_radii": [2.5, 3.5, 4.5],
        "frame_center": [0.0, 0.0],
        "loc_radii": [2.5, 4.5],
    }


CANONICAL: dict = {
    "pw-alpha-08": _pw(0.8, "pw-alpha-08", 1),
    "pw-alpha-10": _pw(1.0, "pw-alpha-10", 2),
    "pw-alpha-125": _pw(1.25, "pw-alpha-125", 3),
    "fock-s-08": _fock(0.8, _FOCK_STEP_08, "fock-s-08", 4),
    "fock-s-12": _fock(1.2, _FOCK_STEP_12, "fock-s-12", 5),
    "gabor-ab-08": _gabor(0.8, _GABOR_STEP_08, "gabor-ab-08", 6),
    "gabor-ab-12": _gabor(1.2, _GABOR_STEP_12, "gabor-ab-12", 7),
    "synthetic-audit": {
        "experiment_id": "synthetic-audit",
        "seed": 7,
        "space": {"variant": "EuclideanLebesgue", "dim": 1},
        "kernel": {"variant": "SyntheticPolyDecay", "sigma": 2.0, "dim": 1},
        "pointset": {"kind": "jittered_lattice", "steps": [1.0],
                     "window": 40.0, "jitter": 0.2},
        "centers": {"kind": "grid", "spacing": 4.0, "extent": 8.0},
        "radii": [4.0, 8.0, 16.0],
        "quadrature": {"h": 0.05},
        "poly_audit": {"sigma": 2.0, "C": 1.0},
    },
}


def canonical_config(name: str) -> dict:
    try:
        return copy.deepcopy(CANONICAL[name])
    except KeyError:
        known = ", ".join(sorted(CANONICAL))
        raise InputError(f"unknown canonical config {name!r}; "
                         f"available: {known}") from None


def canonical_names() -> list:
    return sorted(CANONICAL)
