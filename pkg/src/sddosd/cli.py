"""Command line: ``sddosd {codegen,decode,simulate,sweep,compare}``.

Exit codes: 0 success, 1 usage, 2 config validation, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import contextlib
import itertools
import logging
import sys

import numpy as np

from .channel import CONVENTIONS, RNG_ALGORITHM, snr_to_sigma
from .codes import (
    PRIMITIVE_POLYS,
    CodeSpec,
    ConstructionError,
    MatrixFormatError,
    bch_generator_poly_for_k,
    build_generator,
    ebch_generator,
    load_generator,
    parse_code,
    poly_str,
    save_generator,
)
from .gf2 import encode
from .osd import osd_decode
from .sdd import PRUNE_MODES, STOP_CONDITIONS, SddParams, sdd_decode
from .sim import ConfigError, compare_decoders, load_config, sweep

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.replace(",", " ").split()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sddosd", description="OSD / segmentation-discarding decoding toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    cg = sub.add_parser("codegen", help="write a generator matrix file")
    cg.add_argument("--family", choices=["ebch"], default="ebch")
    cg.add_argument("--n", type=int, required=True)
    cg.add_argument("--k", type=int, required=True)
    cg.add_argument("-o", "--output", required=True)

    de = sub.add_parser("decode", help="decode one random frame and print the trace")
    src = de.add_mutually_exclusive_group(required=True)
    src.add_argument("--gen", help="generator matrix file")
    src.add_argument("--code", help="code name, e.g. ebch:64,16")
    de.add_argument("--decoder", choices=["sdd", "osd"], default="sdd")
    de.add_argument("--order", type=int, default=2)
    de.add_argument("--Q", type=int, default=16)
    de.add_argument("--lambda", dest="lam", type=float, default=13.0)
    de.add_argument("--tau", type=float, default=5.5)
    de.add_argument("--prune", choices=PRUNE_MODES, default="full")
    de.add_argument("--stop-condition", choices=STOP_CONDITIONS, default="fewer_than_l")
    de.add_argument("--snr", type=float, required=True)
    de.add_argument("--convention", choices=CONVENTIONS, default="es_sigma2")
    de.add_argument("--seed", type=int, default=1)

    si = sub.add_parser("simulate", help="run a config file, write CSV")
    si.add_argument("--config", required=True)
    si.add_argument("-o", "--output", required=True)
    si.add_argument("--workers", type=int)

    sw = sub.add_parser("sweep", help="grid over Q, lambda, tau on top of a config")
    sw.add_argument("--config", required=True)
    sw.add_argument("-o", "--output", required=True)
    sw.add_argument("--Q", type=_ints)
    sw.add_argument("--lambda", dest="lam", type=_floats)
    sw.add_argument("--tau", type=_floats)
    sw.add_argument("--workers", type=int)

    co = sub.add_parser("compare", help="two decoders on common random numbers")
    co.add_argument("--config", required=True, help="decoder A")
    co.add_argument("--against", required=True, help="decoder B")
    co.add_argument("-o", "--output", required=True)
    return p


def _cmd_codegen(args) -> int:
    spec = CodeSpec(args.n, args.k, args.family)
    g = ebch_generator(spec)
    m = args.n.bit_length() - 1
    gpoly, t = bch_generator_poly_for_k(m, args.k)
    save_generator(g, args.output, [
        f"({args.n},{args.k}) extended narrow-sense BCH, design t={t}",
        f"primitive polynomial {poly_str(PRIMITIVE_POLYS[m])}",
        f"g(x) = {gpoly}",
    ])
    print(f"wrote {args.k}x{args.n} generator to {args.output}")
    return EXIT_OK


def _cmd_decode(args) -> int:
    try:
        g = load_generator(args.gen) if args.gen else build_generator(parse_code(args.code))
    except OSError as exc:
        raise ConfigError(f"cannot read generator: {exc}") from None
    k, n = g.shape
    rng = np.random.Generator(np.random.PCG64(args.seed))
    info = rng.integers(0, 2, k, dtype=np.uint8)
    c = encode(info, g)
    sigma = snr_to_sigma(args.snr, k / n, args.convention)
    r = 1.0 - 2.0 * c + sigma * rng.standard_normal(n)
    print(f"code ({n},{k})  snr={args.snr} dB ({args.convention})  sigma={sigma:.5f}  seed={args.seed} ({RNG_ALGORITHM})")
    print(f"hard-decision errors: {int(((r < 0) != c).sum())}")
    if args.decoder == "osd":
        out = osd_decode(r, g, args.order)
    else:
        params = SddParams(args.order, args.Q, args.lam, args.tau, args.prune, args.stop_condition)
        out = sdd_decode(r, g, params, trace=True)
        for ph in out.trace:
            print(f"phase {ph.l}: beta = {ph.betas}{'  -> stop' if ph.stopped else ''}")
            for s in ph.segments:
                tag = "discard" if s.discarded else f"checked {s.checked}"
                print(f"  segment {s.i:2d} beta={s.beta:3d}  L={s.first_tep_L:.4f}  "
                      f"D_lower={s.d_lower:.4f}  D_min={s.d_min:.4f}  {tag}")
    ok = np.array_equal(out.c_hat, c)
    print(f"termination={out.termination}  N_a={out.n_a}  D_min={out.d_min:.6f}  "
          f"flops={out.counters.flops}  bops={out.counters.bops}")
    print("decoded correctly" if ok else "frame error")
    return EXIT_OK


def _open_out(path):
    if path == "-":
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", newline="")


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    if args.workers:
        cfg = cfg.replace(workers=args.workers)
    with _open_out(args.output) as fh:
        stats = sweep(cfg, fh)
    logging.getLogger("sddosd").info("wall time %.1fs", stats.wall_time)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    base = load_config(args.config)
    if args.workers:
        base = base.replace(workers=args.workers)
    qs = args.Q or [base.Q]
    lams = args.lam or [base.lam]
    taus = args.tau or [base.tau]
    with _open_out(args.output) as fh:
        first = True
        for q, lam, tau in itertools.product(qs, lams, taus):
            cfg = base.replace(Q=q, lam=lam, tau=tau)
            cfg.validate()
            sweep(cfg, fh, header=first)
            first = False
    return EXIT_OK


def _cmd_compare(args) -> int:
    a, b = load_config(args.config), load_config(args.against)
    with _open_out(args.output) as fh:
        compare_decoders(a, b, fh)
    return EXIT_OK


COMMANDS = {
    "codegen": _cmd_codegen,
    "decode": _cmd_decode,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.cmd](args)
    except (ConfigError, ConstructionError, MatrixFormatError) as exc:
        print(f"sddosd: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyboardInterrupt:
        print("sddosd: interrupted; partial results were flushed", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001
        print(f"sddosd: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
