"""Seeded Monte-Carlo FER / complexity simulation.

Frames at one SNR point are produced in fixed-size chunks.  Chunk ``j`` of
the point at ``snr_db`` draws from its own PCG64 stream keyed by
``(seed, snr_db, j)``, so every decoder sees the same frames for the same
seed, and results do not depend on how many worker processes ran the chunks.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import logging
import math
import time
from importlib import resources
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from .channel import CONVENTIONS, RNG_ALGORITHM, snr_to_sigma
from .codes import CodeSpec, build_generator, parse_code
from .osd import osd_decode
from .sdd import SddParams, sdd_decode

log = logging.getLogger(__name__)

CSV_FIELDS = [
    "code", "n", "k", "decoder", "order", "Q", "lambda", "tau", "snr_db", "snr_convention",
    "frames", "frame_errors", "fer", "mean_na", "mean_flops", "mean_bops",
    "stopped_rate", "discarded_rate", "seed",
]
PAIRED_FIELDS = [
    "snr_db", "frames", "frame_errors_a", "frame_errors_b", "fer_a", "fer_b",
    "mean_na_a", "mean_na_b", "only_a_wrong", "only_b_wrong", "noise_sha_a", "noise_sha_b",
]


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    code: str = "ebch:64,16"
    decoder: str = "sdd"
    order: int = 2
    Q: int = 16
    lam: float = 13.0
    tau: float = 5.5
    prune: str = "full"
    stop_condition: str = "fewer_than_l"
    snr_points: list[float] = field(default_factory=lambda: [0.0])
    snr_convention: str = "es_sigma2"
    min_frames: int = 1
    min_frame_errors: int = 100
    max_frames: int = 10**6
    seed: int = 1
    workers: int = 1
    chunk_frames: int = 250

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.decoder not in ("osd", "sdd"):
            raise ConfigError(f"decoder must be 'osd' or 'sdd', got {self.decoder!r}")
        if not self.snr_points:
            raise ConfigError("at least one SNR point is required")
        if self.snr_convention not in CONVENTIONS:
            raise ConfigError(f"snr_convention must be one of {CONVENTIONS}")
        if self.order < 0:
            raise ConfigError("order must be >= 0")
        for name in ("min_frames", "max_frames", "workers", "chunk_frames"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.min_frame_errors < 0:
            raise ConfigError("min_frame_errors must be >= 0")
        if self.min_frames > self.max_frames:
            raise ConfigError("min_frames exceeds max_frames")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.decoder == "sdd":
            try:
                self.sdd_params()
            except ValueError as exc:
                raise ConfigError(str(exc)) from None

    def sdd_params(self) -> SddParams:
        return SddParams(self.order, self.Q, self.lam, self.tau, self.prune, self.stop_condition)

    def code_spec(self) -> CodeSpec:
        return parse_code(self.code)

    def replace(self, **changes) -> ExperimentConfig:
        return dataclasses.replace(self, **changes)


# -- config files -----------------------------------------------------------

_KEY_ALIASES = {"lambda": "lam"}
_LIST_KEYS = {"snr_points"}


def parse_config(text: str) -> ExperimentConfig:
    """Parse flat ``key = value`` text; ``#`` starts a comment."""
    types = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        key = _KEY_ALIASES.get(key, key)
        if key not in types:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            if key in _LIST_KEYS:
                values[key] = [float(v) for v in val.replace(",", " ").split()]
            elif types[key] == "int":
                values[key] = int(float(val)) if "e" in val.lower() else int(val)
            elif types[key] == "float":
                values[key] = float(val)
            else:
                values[key] = val
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value {val!r} for {key}") from None
    return ExperimentConfig(**values)


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text)


def dump_config(cfg: ExperimentConfig) -> str:
    lines = []
    for f in dataclasses.fields(cfg):
        val = getattr(cfg, f.name)
        key = "lambda" if f.name == "lam" else f.name
        if isinstance(val, list):
            val = ", ".join(repr(float(v)) for v in val)
        lines.append(f"{key} = {val}")
    return "\n".join(lines) + "\n"


# -- statistics -------------------------------------------------------------

@dataclass
class PointStats:
    snr_db: float
    frames: int = 0
    frame_errors: int = 0
    na_sum: int = 0
    na_sq: int = 0
    flops_sum: int = 0
    bops_sum: int = 0
    stopped: int = 0
    discarded: int = 0

    def add(self, outcome, correct: bool):
        self.frames += 1
        self.frame_errors += not correct
        self.na_sum += outcome.n_a
        self.na_sq += outcome.n_a * outcome.n_a
        self.flops_sum += outcome.counters.flops
        self.bops_sum += outcome.counters.bops
        self.stopped += outcome.termination == "stopped"
        self.discarded += outcome.counters.discarded_segments > 0

    def merge(self, other: PointStats) -> PointStats:
        for f in dataclasses.fields(self):
            if f.name != "snr_db":
                setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def _mean(self, total):
        return total / self.frames if self.frames else float("nan")

    @property
    def fer(self) -> float:
        return self._mean(self.frame_errors)

    @property
    def mean_na(self) -> float:
        return self._mean(self.na_sum)

    @property
    def na_stddev(self) -> float:
        if self.frames < 2:
            return 0.0
        var = (self.na_sq - self.na_sum ** 2 / self.frames) / (self.frames - 1)
        return math.sqrt(max(var, 0.0))

    @property
    def mean_flops(self) -> float:
        return self._mean(self.flops_sum)

    @property
    def mean_bops(self) -> float:
        return self._mean(self.bops_sum)

    @property
    def stopped_rate(self) -> float:
        return self._mean(self.stopped)

    @property
    def discarded_rate(self) -> float:
        return self._mean(self.discarded)


@dataclass
class SimulationStats:
    config: ExperimentConfig
    points: list[PointStats]
    wall_time: float = 0.0

    def rows(self) -> list[dict]:
        return [csv_row(self.config, p) for p in self.points]


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def csv_row(cfg: ExperimentConfig, p: PointStats) -> dict:
    spec = cfg.code_spec()
    sdd = cfg.decoder == "sdd"
    return {
        "code": spec.name, "n": spec.n, "k": spec.k, "decoder": cfg.decoder, "order": cfg.order,
        "Q": cfg.Q if sdd else "", "lambda": _fmt(cfg.lam) if sdd else "", "tau": _fmt(cfg.tau) if sdd else "",
        "snr_db": _fmt(p.snr_db), "snr_convention": cfg.snr_convention,
        "frames": p.frames, "frame_errors": p.frame_errors, "fer": _fmt(p.fer),
        "mean_na": _fmt(p.mean_na), "mean_flops": _fmt(p.mean_flops), "mean_bops": _fmt(p.mean_bops),
        "stopped_rate": _fmt(p.stopped_rate), "discarded_rate": _fmt(p.discarded_rate), "seed": cfg.seed,
    }


# -- frame generation -------------------------------------------------------

def chunk_rng(seed: int, snr_db: float, chunk: int) -> np.random.Generator:
    if math.isfinite(snr_db):
        key = int(round(snr_db * 1000)) & 0xFFFFFFFF
    else:
        key = 0x7FFFFFFF if snr_db > 0 else 0x80000000
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(key, chunk))))


def make_frames(cfg: ExperimentConfig, snr_db: float, chunk: int, size: int):
    """Codewords and received vectors for one chunk, shapes ``(size, N)``."""
    g = build_generator(cfg.code_spec())
    rng = chunk_rng(cfg.seed, snr_db, chunk)
    info = rng.integers(0, 2, size=(size, g.rows), dtype=np.uint8)
    noise = rng.standard_normal((size, g.cols))
    code = (info.astype(np.int64) @ g.bits.astype(np.int64)) % 2
    sigma = snr_to_sigma(snr_db, g.rows / g.cols, cfg.snr_convention)
    r = 1.0 - 2.0 * code + sigma * noise
    return code.astype(np.uint8), r


def make_decoder(cfg: ExperimentConfig):
    g = build_generator(cfg.code_spec())
    if cfg.decoder == "osd":
        return partial(osd_decode, g=g, m=cfg.order)
    return partial(sdd_decode, g=g, params=cfg.sdd_params())


def _run_chunk(cfg: ExperimentConfig, snr_db: float, chunk: int, size: int) -> PointStats:
    decode = make_decoder(cfg)
    code, r = make_frames(cfg, snr_db, chunk, size)
    stats = PointStats(snr_db)
    for c, rx in zip(code, r):
        out = decode(rx)
        stats.add(out, np.array_equal(out.c_hat, c))
    return stats


def _chunk_sizes(cfg: ExperimentConfig):
    done, j = 0, 0
    while done < cfg.max_frames:
        size = min(cfg.chunk_frames, cfg.max_frames - done)
        yield j, size
        done += size
        j += 1


def _finished(cfg: ExperimentConfig, frames: int, errors: int) -> bool:
    if frames >= cfg.max_frames:
        return True
    return frames >= cfg.min_frames and errors >= cfg.min_frame_errors


def run_point(cfg: ExperimentConfig, snr_db: float, pool: ProcessPoolExecutor | None = None) -> PointStats:
    """Simulate one SNR point until the stop rule fires."""
    stats = PointStats(snr_db)
    sizes = _chunk_sizes(cfg)
    if pool is None:
        for j, size in sizes:
            stats.merge(_run_chunk(cfg, snr_db, j, size))
            if _finished(cfg, stats.frames, stats.frame_errors):
                break
        return stats

    window = 2 * cfg.workers
    pending = []
    for j, size in sizes:
        pending.append(pool.submit(_run_chunk, cfg, snr_db, j, size))
        if len(pending) < window:
            continue
        stats.merge(pending.pop(0).result())
        if _finished(cfg, stats.frames, stats.frame_errors):
            break
    else:
        while pending and not _finished(cfg, stats.frames, stats.frame_errors):
            stats.merge(pending.pop(0).result())
    for fut in pending:
        fut.cancel()
    return stats


def sweep(cfg: ExperimentConfig, out=None, header: bool = True) -> SimulationStats:
    """Run every SNR point (ascending) and optionally stream CSV rows to ``out``.

    Rows already written survive a ``KeyboardInterrupt``; the exception is re-raised.
    """
    start = time.perf_counter()
    writer = None
    if out is not None:
        writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
        if header:
            write_header(out, cfg.seed)
            writer.writeheader()
        out.flush()
    points: list[PointStats] = []
    pool = ProcessPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        for snr in sorted(cfg.snr_points):
            p = run_point(cfg, snr, pool)
            points.append(p)
            log.info("snr=%s frames=%d errors=%d fer=%.3g mean_na=%.4g",
                     snr, p.frames, p.frame_errors, p.fer, p.mean_na)
            if writer is not None:
                writer.writerow(csv_row(cfg, p))
                out.flush()
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return SimulationStats(cfg, points, time.perf_counter() - start)


def write_header(out, seed: int):
    out.write(f"# rng={RNG_ALGORITHM} seed={seed}\n")


def to_csv(stats: SimulationStats) -> str:
    buf = io.StringIO()
    write_header(buf, stats.config.seed)
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(stats.rows())
    return buf.getvalue()


def read_csv(path_or_text) -> list[dict]:
    text = path_or_text if "\n" in str(path_or_text) else Path(path_or_text).read_text()
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def reference_table(decoder: str | None = None) -> list[dict]:
    """Published mean-N_a rows shipped with the package (strings, as in the file)."""
    text = (resources.files("sddosd") / "data" / "reference_tables.csv").read_text()
    rows = read_csv(text)
    return [r for r in rows if decoder is None or r["decoder"] == decoder]


# -- paired comparison ------------------------------------------------------

_SHARED = ("code", "snr_points", "snr_convention", "seed", "min_frames", "min_frame_errors",
           "max_frames", "chunk_frames")


@dataclass
class PairedPoint:
    snr_db: float
    a: PointStats
    b: PointStats
    only_a_wrong: int = 0
    only_b_wrong: int = 0
    sha_a: str = ""
    sha_b: str = ""

    def row(self) -> dict:
        return {
            "snr_db": _fmt(self.snr_db), "frames": self.a.frames,
            "frame_errors_a": self.a.frame_errors, "frame_errors_b": self.b.frame_errors,
            "fer_a": _fmt(self.a.fer), "fer_b": _fmt(self.b.fer),
            "mean_na_a": _fmt(self.a.mean_na), "mean_na_b": _fmt(self.b.mean_na),
            "only_a_wrong": self.only_a_wrong, "only_b_wrong": self.only_b_wrong,
            "noise_sha_a": self.sha_a[:16], "noise_sha_b": self.sha_b[:16],
        }


def compare_decoders(cfg_a: ExperimentConfig, cfg_b: ExperimentConfig, out=None) -> list[PairedPoint]:
    """Run two decoders on identical frames (common random numbers).

    A point ends when both decoders satisfy the error target or the frame
    cap is reached.
    """
    for name in _SHARED:
        if getattr(cfg_a, name) != getattr(cfg_b, name):
            raise ConfigError(f"configs differ in {name}: {getattr(cfg_a, name)!r} vs {getattr(cfg_b, name)!r}")
    dec_a, dec_b = make_decoder(cfg_a), make_decoder(cfg_b)
    writer = None
    if out is not None:
        write_header(out, cfg_a.seed)
        writer = csv.DictWriter(out, fieldnames=PAIRED_FIELDS, lineterminator="\n")
        writer.writeheader()
    result = []
    for snr in sorted(cfg_a.snr_points):
        pp = PairedPoint(snr, PointStats(snr), PointStats(snr))
        ha, hb = hashlib.sha256(), hashlib.sha256()
        for j, size in _chunk_sizes(cfg_a):
            code, r = make_frames(cfg_a, snr, j, size)
            for c, rx in zip(code, r):
                ha.update(rx.tobytes())
                oa = dec_a(rx)
                hb.update(rx.tobytes())
                ob = dec_b(rx)
                ok_a, ok_b = np.array_equal(oa.c_hat, c), np.array_equal(ob.c_hat, c)
                pp.a.add(oa, ok_a)
                pp.b.add(ob, ok_b)
                pp.only_a_wrong += ok_b and not ok_a
                pp.only_b_wrong += ok_a and not ok_b
            errs = min(pp.a.frame_errors, pp.b.frame_errors)
            if _finished(cfg_a, pp.a.frames, errs):
                break
        pp.sha_a, pp.sha_b = ha.hexdigest(), hb.hexdigest()
        result.append(pp)
        if writer is not None:
            writer.writerow(pp.row())
            out.flush()
    return result
