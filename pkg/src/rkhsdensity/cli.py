"""Command line entry point.

RKHSDENSITY_THREADS caps BLAS threads; it must be applied before numpy is
imported, so everything heavy is imported inside main().
"""

from __future__ import annotations

import argparse
import os
import sys


def _apply_thread_env() -> None:
    n = os.environ.get("RKHSDENSITY_THREADS")
    if not n:
        return
    if not n.isdigit() or int(n) < 1:
        raise SystemExit(f"RKHSDENSITY_THREADS must be a positive integer, "
                         f"got {n!r}")
    for var in ("OMP_NUM_THREADS", "MKL_NUM_THREADS",
                "OPENBLAS_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        os.environ.setdefault(var, n)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rkhsdensity",
        description="Run sampling/interpolation density experiments.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", metavar="PATH",
                     help="JSON experiment config file")
    src.add_argument("--canonical", metavar="NAME",
                     help="name of a built-in experiment "
                          "(use --canonical list to see them)")
    p.add_argument("--stage", default="all",
                   help="single stage to run, or 'all' (default)")
    p.add_argument("--seed", type=int, default=None,
                   help="override the config seed (unsigned 64-bit)")
    p.add_argument("--out", metavar="DIR", default=None,
                   help="output directory (default: runs/<experiment_id>)")
    return p


def main(argv=None) -> int:
    _apply_thread_env()
    args = build_parser().parse_args(argv)

    from .errors import InputError
    from .registry import canonical_config, canonical_names

    try:
        if args.canonical == "list":
            for name in canonical_names():
                print(name)
            return 0
        if args.seed is not None and not 0 <= args.seed < 2 ** 64:
            raise InputError("--seed must fit in an unsigned 64-bit integer")

        from .config import load_config
        from .pipeline import run

        if args.canonical is not None:
            cfg = canonical_config(args.canonical)
        else:
            cfg = load_config(args.config)
        result = run(cfg, args.out, stage=args.stage, seed=args.seed)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 4

    print(result.summary)
    print(f"wrote {len(result.files)} files to {result.out_dir}")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
