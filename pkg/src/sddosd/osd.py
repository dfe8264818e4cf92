"""Ordered-statistics machinery and the plain order-m OSD decoder.

Positions in the ordered domain are reported 1-based (position 1 is the most
reliable basis position); arrays are indexed 0-based internally.  A test
error pattern (TEP) is a sorted tuple of 1-based MRB positions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .gf2 import BinaryMatrix, DimensionError, reduce_systematic

TERMINATIONS = ("exhausted", "stopped", "order0")
_CHUNK = 8192


@dataclass
class Counters:
    """Operation counts for one decode.

    ``flops`` counts real-valued additions and comparisons (sorting is charged
    ``N * ceil(log2 N)``), ``bops`` counts single-bit XOR/sign operations, and
    ``seg_flops`` is the part of ``flops`` spent on boundaries and bounds.
    """

    flops: int = 0
    bops: int = 0
    seg_flops: int = 0
    discarded_segments: int = 0
    phases_run: int = 0

    @property
    def total(self) -> int:
        return self.flops + self.bops


@dataclass(frozen=True, eq=False)
class OrderedContext:
    r_tilde: np.ndarray
    alpha_tilde: np.ndarray
    y_tilde: np.ndarray
    gt_bits: np.ndarray
    p1: np.ndarray
    p2: np.ndarray

    @property
    def k(self) -> int:
        return self.gt_bits.shape[0]

    @property
    def n(self) -> int:
        return self.gt_bits.shape[1]

    @cached_property
    def G_tilde(self) -> BinaryMatrix:
        return BinaryMatrix.from_bits(self.gt_bits)

    @cached_property
    def order(self) -> np.ndarray:
        """Combined permutation: ``r_tilde == r[order]``."""
        return self.p1[self.p2]

    @cached_property
    def parity(self) -> np.ndarray:
        return np.ascontiguousarray(self.gt_bits[:, self.k:])

    @cached_property
    def alpha_mrb(self) -> np.ndarray:
        return self.alpha_tilde[:self.k]

    @cached_property
    def alpha_red(self) -> np.ndarray:
        return self.alpha_tilde[self.k:]

    @cached_property
    def c0(self) -> np.ndarray:
        """Phase-0 candidate ``y_B . G_tilde``."""
        yb = self.y_tilde[:self.k]
        sel = self.parity[yb.astype(bool)]
        red = np.bitwise_xor.reduce(sel, axis=0) if sel.shape[0] else np.zeros(self.n - self.k, np.uint8)
        return np.concatenate([yb, red]).astype(np.uint8)

    @cached_property
    def base_diff(self) -> np.ndarray:
        return self.c0[self.k:] ^ self.y_tilde[self.k:]

    def unorder(self, c_tilde) -> np.ndarray:
        """Map an ordered-domain vector back to the original positions."""
        out = np.empty_like(np.asarray(c_tilde))
        out[self.order] = c_tilde
        return out


def order_received(r, g: BinaryMatrix, counters: Counters | None = None) -> OrderedContext:
    """Sort by reliability (stable, descending) and reduce to ``[I_K P]``."""
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (g.cols,):
        raise DimensionError(f"received vector has shape {r.shape}, expected ({g.cols},)")
    alpha = np.abs(r)
    p1 = np.argsort(-alpha, kind="stable")
    counts: dict = {}
    reduced, p2 = reduce_systematic(g.bits[:, p1], counts)
    order = p1[p2]
    r_t = r[order]
    if counters is not None:
        n = g.cols
        counters.flops += n * max(1, math.ceil(math.log2(n)))
        counters.bops += counts.get("bops", 0)
    return OrderedContext(
        r_tilde=r_t,
        alpha_tilde=alpha[order],
        y_tilde=(r_t < 0).astype(np.uint8),
        gt_bits=reduced,
        p1=p1,
        p2=p2,
    )


def reencode(ctx: OrderedContext, tep) -> np.ndarray:
    """Candidate ``(y_B xor e) . G_tilde`` in the ordered domain."""
    c = ctx.c0.copy()
    for pos in tep:
        if not 1 <= pos <= ctx.k:
            raise IndexError(f"TEP position {pos} outside MRB 1..{ctx.k}")
        c ^= ctx.gt_bits[pos - 1]
    return c


def whd(ctx: OrderedContext, c) -> float:
    """Weighted Hamming distance of ``c`` to the ordered hard decision."""
    c = np.asarray(c, dtype=np.uint8)
    return float(ctx.alpha_tilde[c != ctx.y_tilde].sum())


def batch_whd(ctx: OrderedContext, teps: np.ndarray) -> np.ndarray:
    """WHD of the candidates for a block of TEPs given as 0-based index rows."""
    if teps.shape[1] == 0:
        return np.array([float(ctx.base_diff @ ctx.alpha_red)])
    d = ctx.parity[teps[:, 0]]
    for j in range(1, teps.shape[1]):
        d = d ^ ctx.parity[teps[:, j]]
    d ^= ctx.base_diff
    return ctx.alpha_mrb[teps].sum(axis=1) + d @ ctx.alpha_red


def reencode_cost(k: int, n: int) -> int:
    """Bit operations per re-encoding: K sign flips plus N-K parallel K-input XORs."""
    return k + k * (n - k)


def enumerate_weight_l(k: int, l: int, window: tuple[int, int] | None = None):
    """Yield weight-``l`` TEPs inside ``window`` (inclusive, 1-based), least reliable first.

    The order is colexicographic descending: the first pattern holds the
    ``l`` largest positions.
    """
    lo, hi = window if window is not None else (1, k)
    if not (1 <= lo and hi <= k):
        raise IndexError(f"window {window} outside 1..{k}")
    if l < 0 or hi - lo + 1 < l:
        return
    for combo in itertools.combinations(range(hi, lo - 1, -1), l):
        yield combo[::-1]


@lru_cache(maxsize=64)
def tep_table(k: int, l: int) -> np.ndarray:
    """All weight-``l`` supports over ``1..k`` as 0-based rows, in enumeration order."""
    if l == 0:
        return np.zeros((1, 0), dtype=np.intp)
    rows = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(k - 1, -1, -1), l)),
        dtype=np.intp,
    ).reshape(-1, l)[:, ::-1]
    rows = np.ascontiguousarray(rows)
    rows.setflags(write=False)
    return rows


@dataclass
class DecodeOutcome:
    c_hat: np.ndarray
    d_min: float
    n_a: int
    termination: str
    counters: Counters = field(default_factory=Counters)
    c_tilde: np.ndarray | None = None
    trace: list | None = None


class _Best:
    """Running minimum over candidates; ties keep the earlier candidate."""

    def __init__(self, ctx: OrderedContext, counters: Counters):
        self.ctx = ctx
        self.counters = counters
        self.d = float(batch_whd(ctx, np.zeros((1, 0), dtype=np.intp))[0])
        self.tep: tuple[int, ...] = ()
        self.n_a = 1
        self._charge(1)

    def _charge(self, count: int):
        k, n = self.ctx.k, self.ctx.n
        self.counters.bops += count * reencode_cost(k, n)
        self.counters.flops += count * (n + 1)

    def check(self, teps: np.ndarray) -> bool:
        improved = False
        for start in range(0, teps.shape[0], _CHUNK):
            block = teps[start:start + _CHUNK]
            dist = batch_whd(self.ctx, block)
            self.n_a += block.shape[0]
            self._charge(block.shape[0])
            j = int(np.argmin(dist))
            if dist[j] < self.d:
                self.d = float(dist[j])
                self.tep = tuple(int(x) + 1 for x in block[j])
                improved = True
        return improved

    def outcome(self, termination: str, trace=None) -> DecodeOutcome:
        c_t = reencode(self.ctx, self.tep)
        return DecodeOutcome(
            c_hat=self.ctx.unorder(c_t),
            d_min=whd(self.ctx, c_t),
            n_a=self.n_a,
            termination=termination,
            counters=self.counters,
            c_tilde=c_t,
            trace=trace,
        )


def osd_decode(r, g: BinaryMatrix, m: int) -> DecodeOutcome:
    """Order-``m`` OSD: check every TEP of weight ``0..m`` over the full MRB."""
    if m < 0:
        raise ValueError(f"order must be non-negative, got {m}")
    counters = Counters()
    ctx = order_received(r, g, counters)
    best = _Best(ctx, counters)
    for l in range(1, min(m, ctx.k) + 1):
        counters.phases_run += 1
        best.check(tep_table(ctx.k, l))
    return best.outcome("order0" if m == 0 else "exhausted")


def osd_list_size(k: int, m: int) -> int:
    return sum(math.comb(k, l) for l in range(min(m, k) + 1))


def complexity_estimate(n: int, k: int, m: int, q: int, n_a: float) -> float:
    """Estimated operations per decode.

    Sorting ``N log2 N``, elimination ``N * min(K, N-K)**2``, ``n_a``
    re-encodings of ``K + K(N-K)`` each, and ``(K+1) m Q`` for boundaries and
    discarding bounds.
    """
    return (
        n * math.log2(n)
        + n * min(k, n - k) ** 2
        + n_a * reencode_cost(k, n)
        + (k + 1) * m * q
    )
