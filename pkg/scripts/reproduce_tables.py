"""Measure mean N_a for every SDD row of the shipped reference table.

    python scripts/reproduce_tables.py --code ebch64_16 --frames 10000 -o na_64_16.csv

Prints measured vs published values; order-4/5 rows of the long codes take
hours at 10^4 frames, so filter with --code / --max-order.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from collections import defaultdict

from sddosd.channel import CONVENTIONS
from sddosd.sim import ExperimentConfig, reference_table, run_point


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--code", action="append", help="ebch64_16, ebch128_64 or ebch128_22 (repeatable; default all)")
    ap.add_argument("--max-order", type=int, default=3)
    ap.add_argument("--frames", type=int, default=10_000)
    ap.add_argument("--convention", choices=CONVENTIONS, default="es_sigma2")
    ap.add_argument("--stop-condition", default="fewer_than_l")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("-o", "--output", help="CSV file (default stdout)")
    args = ap.parse_args(argv)

    groups = defaultdict(list)
    for row in reference_table("sdd"):
        if args.code and row["code"] not in args.code:
            continue
        if int(row["order"]) > args.max_order:
            continue
        key = (row["code"], int(row["order"]), int(row["Q"]), float(row["lambda"]), float(row["tau"]))
        groups[key].append((float(row["snr_db"]), float(row["mean_na"])))

    out = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["code", "order", "snr_db", "convention", "frames", "published", "measured", "stddev", "rel_dev", "fer"])
    for (code, order, q, lam, tau), points in groups.items():
        cfg = ExperimentConfig(code=code, decoder="sdd", order=order, Q=q, lam=lam, tau=tau,
                               stop_condition=args.stop_condition, snr_convention=args.convention,
                               min_frames=args.frames, max_frames=args.frames, min_frame_errors=0,
                               seed=args.seed)
        for snr, ref in sorted(points):
            t0 = time.perf_counter()
            p = run_point(cfg, snr)
            w.writerow([code, order, snr, args.convention, p.frames, ref,
                        f"{p.mean_na:.4g}", f"{p.na_stddev:.4g}", f"{p.mean_na / ref - 1:+.3f}", f"{p.fer:.4g}"])
            out.flush()
            print(f"{code} m={order} {snr:+g} dB: {p.mean_na:.1f} vs {ref:g} "
                  f"({time.perf_counter() - t0:.0f}s)", file=sys.stderr)
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
