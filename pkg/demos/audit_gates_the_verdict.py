"""Why the harness refuses to certify some geometries.

The density comparison is only meaningful when the space and kernel
satisfy the working hypotheses (ball non-degeneracy, thin annuli,
bounded diagonal, localized sections).  This script audits two spaces
that pass and two that fail, then shows the effect on a verdict: on a
failing geometry the empirical trends are still reported, but every
inequality stays unlicensed and nothing is asserted.
"""

import numpy as np

from rkhsdensity import (EuclideanLebesgue, FockGaussian,
                         HyperbolicUpperHalfPlane, LogMetricLine,
                         check_wad, load_config, run)

print("annular decay screening")
print("-" * 60)
for space in (EuclideanLebesgue(1), FockGaussian(1),
              LogMetricLine(), HyperbolicUpperHalfPlane()):
    radii = np.linspace(1.0, space.wad_horizon, 60)
    res = check_wad(space, [space.origin()], radii)
    name = type(space).__name__
    tail = res.ratio_curve[-1]
    print(f"{name:26s} shell/ball at r={space.wad_horizon:g}: "
          f"{tail:8.3f}  {'ok' if res.passed else 'FAILS'}")

print()
print("verdict on the exponential line (audit fails by design)")
print("-" * 60)

# a metric ball of radius r on this line spans e^r coordinate units,
# so keep the window modest
cfg = load_config({
    "experiment_id": "demo-logline",
    "space": {"variant": "LogMetricLine"},
    "kernel": {"variant": "SyntheticPolyDecay", "sigma": 2.0, "dim": 1},
    "pointset": {"kind": "lattice", "steps": [1.0], "window": 6.0},
    "radii": [2.0, 3.5, 5.0],
    "seed": 7,
    "outputs": {"csv_dir": "runs/demo-logline"},
})
result = run(cfg)
print(result.summary)
print(f"exit code {result.exit_code} "
      "(3 = hypotheses not satisfied, verdict withheld)")
licensed = [c.name for c in result.verdict.inequality_checks if c.licensed]
print(f"licensed inequalities: {licensed or 'none'}")
