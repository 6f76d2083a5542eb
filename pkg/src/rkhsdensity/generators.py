"""Deterministic point-set generation from config specs."""

from __future__ import annotations

import numpy as np

from .errors import InputError, SeparationError
from .pointsets import PointSet, load_pointset, make_pointset
from .spaces import Space, metric_ball_lattice


def generate_pointset(spec: dict, space: Space, seed: int = 0) -> PointSet:
    """Realize a pointset spec on the space; deterministic for fixed seed.

    lattice: steps * Z^d within metric distance <= window of the origin
    (closed ball, so boundary lattice points are included).

    jittered_lattice: each lattice point moves by an independent uniform
    offset in [-jitter, jitter]^d. Requires jitter < min(steps)/2, which
    keeps the pairwise gaps at least min(steps) - 2 jitter > 0. The
    declared window shrinks by the jitter so the set remains complete
    inside it: every unseen point of the full jittered lattice would have
    had to come from a lattice point outside the generation window.

    file: whitespace-separated coordinates, '#' comments, explicit window.
    """
    kind = spec["kind"]
    if kind == "file":
        return load_pointset(spec["path"], space,
                             np.asarray(spec["window_center"], dtype=float),
                             float(spec["window_radius"]))

    steps = np.atleast_1d(np.asarray(spec["steps"], dtype=float))
    window = float(spec["window"])
    center = space.origin()
    pts = metric_ball_lattice(space, center, window, steps)

    if kind == "lattice":
        return make_pointset(pts, space, center, window,
                             provenance={"kind": kind,
                                         "steps": steps.tolist(),
                                         "window": window})
    if kind == "jittered_lattice":
        delta = float(spec["jitter"])
        if delta >= float(np.min(steps)) / 2.0:
            raise SeparationError(
                f"jitter {delta} >= half the minimal step "
                f"{float(np.min(steps)) / 2}: separation is not preserved")
        rng = np.random.Generator(np.random.Philox(key=seed))
        pts = pts + rng.uniform(-delta, delta, size=pts.shape)
        pts = space.snap(pts)
        declared = window - delta
        if declared <= 0:
            raise InputError("window too small for the requested jitter")
        keep = space.distances(pts, center) <= declared
        return make_pointset(pts[keep], space, center, declared,
                             provenance={"kind": kind,
                                         "steps": steps.tolist(),
                                         "window": window,
                                         "jitter": delta, "seed": int(seed)})
    raise InputError(f"unknown pointset kind {kind!r}")
