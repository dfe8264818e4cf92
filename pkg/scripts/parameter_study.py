"""Trade-off study: mean N_a and FER of SDD over a grid of Q, lambda and tau.

    python scripts/parameter_study.py --snr 0 --frames 5000 -o study.csv

Defaults study the (64,16) code at order 3 around its usual operating point;
one parameter is varied at a time while the other two stay at the base value.
"""

from __future__ import annotations

import argparse
import sys

from sddosd.sim import ExperimentConfig, sweep


def floats(text):
    return [float(v) for v in text.split(",")]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--code", default="ebch:64,16")
    ap.add_argument("--order", type=int, default=3)
    ap.add_argument("--base", type=floats, default=[16, 13.0, 5.0], help="Q,lambda,tau")
    ap.add_argument("--Q", type=floats, default=[2, 4, 8, 16, 32])
    ap.add_argument("--lam", type=floats, default=[4, 7, 10, 13, 16, 20])
    ap.add_argument("--tau", type=floats, default=[0, 1, 2.5, 5, 7.5, 10])
    ap.add_argument("--snr", type=floats, default=[0.0])
    ap.add_argument("--frames", type=int, default=5000)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args(argv)

    q0, lam0, tau0 = args.base
    base = ExperimentConfig(code=args.code, order=args.order, Q=int(q0), lam=lam0, tau=tau0,
                            snr_points=args.snr, min_frames=args.frames, max_frames=args.frames,
                            min_frame_errors=0, workers=args.workers)
    grid = [base.replace(Q=int(q)) for q in args.Q]
    grid += [base.replace(lam=v) for v in args.lam if v != lam0]
    grid += [base.replace(tau=v) for v in args.tau if v != tau0]
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    for i, cfg in enumerate(grid):
        stats = sweep(cfg, out, header=i == 0)
        for p in stats.points:
            print(f"Q={cfg.Q} lambda={cfg.lam:g} tau={cfg.tau:g} snr={p.snr_db:g}: "
                  f"N_a={p.mean_na:.2f} FER={p.fer:.3g}", file=sys.stderr)
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
