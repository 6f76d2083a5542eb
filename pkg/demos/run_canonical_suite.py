"""Run the canonical experiment suite and print one verdict per line.

By default only the fast bandlimited and synthetic configurations run
(a few seconds).  Pass "all" to include the gaussian and phase-plane
configurations, which take about a minute each:

    python3 demos/run_canonical_suite.py all
"""

import pathlib
import sys
import time

from rkhsdensity import canonical_names, run_canonical

FAST = ("pw-alpha-08", "pw-alpha-10", "pw-alpha-125", "synthetic-audit")

names = canonical_names() if "all" in sys.argv[1:] else FAST
base = pathlib.Path(__file__).parent / "out" / "canonical"

for name in names:
    t0 = time.perf_counter()
    res = run_canonical(name, base / name)
    dt = time.perf_counter() - t0
    cls = res.verdict.empirical_class if res.verdict else "n/a"
    print(f"{name:18s} exit={res.exit_code} class={cls:20s} "
          f"{dt:6.1f}s -> {res.out_dir}")

print()
print("inspect any run directory: verdict.json carries the classes and")
print("licensed inequalities, density.csv and trace.csv the raw curves")
