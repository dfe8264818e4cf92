"""FER and mean N_a curves of SDD against plain OSD on common random numbers.

    python scripts/fer_curves.py --code ebch:64,16 --order 3 --snr=-3,-2,-1,0,1 -o curves.dat

Writes a whitespace-separated table (gnuplot friendly) with one line per SNR.
"""

from __future__ import annotations

import argparse
import sys

from sddosd.sim import ExperimentConfig, compare_decoders

DEFAULTS = {  # code -> (Q, lambda, tau by order)
    "ebch:64,16": (16, 13.0, {2: 5.5, 3: 5.0}),
    "ebch:128,64": (22, 10.5, {3: 9.25, 4: 7.0}),
    "ebch:128,22": (16, 23.0, {3: 11.25, 4: 9.0, 5: 7.25}),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--code", default="ebch:64,16", choices=sorted(DEFAULTS))
    ap.add_argument("--order", type=int, default=3)
    ap.add_argument("--snr", type=lambda s: [float(v) for v in s.split(",")], default=[-3, -2, -1, 0, 1])
    ap.add_argument("--errors", type=int, default=100)
    ap.add_argument("--max-frames", type=int, default=100_000)
    ap.add_argument("-o", "--output", default="-")
    args = ap.parse_args(argv)

    q, lam, taus = DEFAULTS[args.code]
    sdd = ExperimentConfig(code=args.code, order=args.order, Q=q, lam=lam, tau=taus[args.order],
                           snr_points=args.snr, min_frame_errors=args.errors, max_frames=args.max_frames)
    osd = sdd.replace(decoder="osd")
    out = sys.stdout if args.output == "-" else open(args.output, "w")
    out.write("# snr_db frames fer_sdd fer_osd mean_na_sdd mean_na_osd only_sdd_wrong only_osd_wrong\n")
    for pp in compare_decoders(sdd, osd):
        out.write(f"{pp.snr_db:g} {pp.a.frames} {pp.a.fer:.6g} {pp.b.fer:.6g} {pp.a.mean_na:.6g} "
                  f"{pp.b.mean_na:.6g} {pp.only_a_wrong} {pp.only_b_wrong}\n")
        out.flush()
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
