"""Sweep the lattice spacing of a bandlimited kernel across the
critical density and watch both spectral diagnostics flip.

For the unit-bandwidth kernel the critical spacing is 1: below it the
lattice samples stably (the finite-section lower frame bound A stays
away from zero) but cannot interpolate (the Gram floor collapses);
above it the roles swap.  Right at spacing 1 the lattice does both.

Writes demos/out/critical_density_sweep.csv and, if matplotlib is
importable, a companion PNG.
"""

import csv
import pathlib

import numpy as np

from rkhsdensity import (EuclideanLebesgue, PaleyWienerBox, QuadratureRule,
                         frame_curve, make_pointset, metric_ball_lattice,
                         riesz_curve)

OUT = pathlib.Path(__file__).parent / "out"
WINDOW = 80.0
GRAM_HALFWIDTH = 32.0
SECTION_RADIUS = 16.0

space = EuclideanLebesgue(1)
kernel = PaleyWienerBox(1, bandwidths=1.0)
quad = QuadratureRule(h=0.05)


def diagnostics(step):
    pts = metric_ball_lattice(space, [0.0], WINDOW, [step])
    ps = make_pointset(pts, space, [0.0], WINDOW)
    lam = riesz_curve(kernel, ps, space, [GRAM_HALFWIDTH])[0].lambda_min
    sec = frame_curve(kernel, ps, space, [0.0], [SECTION_RADIUS],
                      tau=0.5, quad=quad)[0]
    return lam, sec.A_est, sec.B_est


def main():
    OUT.mkdir(exist_ok=True)
    steps = np.round(np.arange(0.70, 1.51, 0.05), 2)
    rows = []
    print(f"{'step':>6} {'density':>8} {'gram floor':>12} "
          f"{'A_est':>10} {'B_est':>8}")
    for step in steps:
        lam, a, b = diagnostics(float(step))
        rows.append((float(step), 1.0 / step, lam, a, b))
        marker = "<- critical" if abs(step - 1.0) < 1e-9 else ""
        print(f"{step:6.2f} {1.0 / step:8.3f} {lam:12.3e} "
              f"{a:10.3e} {b:8.4f} {marker}")

    with open(OUT / "critical_density_sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "density", "gram_floor", "A_est", "B_est"])
        w.writerows(rows)
    print(f"\nwrote {OUT / 'critical_density_sweep.csv'}")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return
    arr = np.asarray(rows)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.semilogy(arr[:, 0], np.maximum(arr[:, 2], 1e-17), "o-",
                label="Gram floor (interpolation side)")
    ax.semilogy(arr[:, 0], np.maximum(arr[:, 3], 1e-17), "s-",
                label="finite-section A (sampling side)")
    ax.axvline(1.0, color="k", lw=0.8, ls=":")
    ax.set_xlabel("lattice step")
    ax.set_ylabel("spectral floor")
    ax.legend()
    fig.tight_layout()
    fig.savefig(OUT / "critical_density_sweep.png", dpi=120)
    print(f"wrote {OUT / 'critical_density_sweep.png'}")


if __name__ == "__main__":
    main()
