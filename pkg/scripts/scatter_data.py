#!/usr/bin/env python3
"""Emit (step, step/count, value) scatter data for one greedy run.

Plotting value against the relative index step/count shows how the greedy
rule fills the unit interval; starting from a batch of random seeds shows
how quickly the extension washes the irregular start out.  Output is CSV
with one row per point, seeds first, in append order.
"""

import argparse
import io
import random
import sys

from greedyw2.greedy import SequenceState, extend
from greedyw2.numeric import Backend, parse_seed, seed_help


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=__doc__)
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--seeds",
        default="",
        help=f"comma-separated explicit seed points ({seed_help()})",
    )
    group.add_argument(
        "--random-seeds",
        type=int,
        default=None,
        metavar="N",
        help="start from N uniform random points instead of explicit seeds",
    )
    parser.add_argument("--count", type=int, default=1000, help="total points to reach")
    parser.add_argument(
        "--tie-rule", choices=("smallest", "largest"), default="smallest"
    )
    parser.add_argument(
        "--rng-seed", type=int, default=0, help="seed for --random-seeds draws"
    )
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.random_seeds is not None:
        rng = random.Random(args.rng_seed)
        seeds = [rng.random() for _ in range(args.random_seeds)]
        seed_desc = f"random:{args.random_seeds}"
    else:
        seeds = [parse_seed(s.strip(), Backend.FLOAT) for s in args.seeds.split(",") if s.strip()]
        seed_desc = args.seeds or "none"
    if args.count < max(len(seeds), 1):
        print(f"error: --count {args.count} is below the seed count", file=sys.stderr)
        return 2

    state = SequenceState(seeds, backend=Backend.FLOAT)
    chosen = extend(state, args.count, args.tie_rule)

    buf = io.StringIO()
    meta = {
        "artifact": "greedyw2-scatter",
        "seeds": seed_desc,
        "count": str(args.count),
        "tie_rule": args.tie_rule,
        "rng_seed": str(args.rng_seed),
    }
    for key, value in meta.items():
        buf.write(f"# {key}={value}\n")
    buf.write("step,relative_step,value,origin\n")
    values = [float(s) for s in seeds] + [float(c) for c in chosen]
    for step, value in enumerate(values, start=1):
        origin = "seed" if step <= len(seeds) else "greedy"
        buf.write(f"{step},{step / args.count!r},{value!r},{origin}\n")

    if args.out is None:
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
