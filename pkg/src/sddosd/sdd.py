"""Segmentation-discarding decoding (SDD) on top of the OSD machinery.

Each reprocessing phase ``l`` splits the weight-``l`` TEPs into ``Q``
segments using boundaries ``K+1 = b_0 > b_1 > ... > b_Q = 1`` over the MRB.
Segment ``i`` holds the patterns supported on ``[b_i, K]`` that touch
``[b_i, b_{i-1} - 1]``.  Boundaries follow the current best distance; a
segment whose cheapest pattern already implies a distance bound above the
best distance ends the phase, and a first boundary too close to ``K`` to fit
a weight-``l`` pattern ends the decode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .gf2 import BinaryMatrix
from .osd import Counters, DecodeOutcome, OrderedContext, _Best, order_received, tep_table

PRUNE_MODES = ("full", "no_discard", "no_stop", "none")
STOP_CONDITIONS = ("fewer_than_l", "at_most_l")


class DegenerateInputError(ValueError):
    pass


@dataclass(frozen=True)
class SddParams:
    m: int
    Q: int
    lam: float
    tau: float
    prune: str = "full"
    stop_condition: str = "fewer_than_l"

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"order must be non-negative, got {self.m}")
        if self.Q < 1:
            raise ValueError(f"segment count must be >= 1, got {self.Q}")
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if self.tau < 0:
            raise ValueError(f"tau must be non-negative, got {self.tau}")
        if self.prune not in PRUNE_MODES:
            raise ValueError(f"prune must be one of {PRUNE_MODES}, got {self.prune!r}")
        if self.stop_condition not in STOP_CONDITIONS:
            raise ValueError(f"stop_condition must be one of {STOP_CONDITIONS}, got {self.stop_condition!r}")

    @property
    def stops(self) -> bool:
        return self.prune in ("full", "no_discard")

    @property
    def discards(self) -> bool:
        return self.prune in ("full", "no_stop")

    def stop_threshold(self, k: int, l: int) -> int:
        """Smallest first boundary that ends the decode in phase ``l``.

        ``fewer_than_l`` stops once ``[b_1, K]`` cannot hold a weight-``l``
        pattern; ``at_most_l`` also stops when it holds exactly ``l`` positions.
        """
        return k - l + (2 if self.stop_condition == "fewer_than_l" else 1)


@dataclass
class SegmentStats:
    l: int
    i: int
    beta: int
    first_tep_L: float = 0.0
    d_lower: float = 0.0
    checked: int = 0
    discarded: bool = False
    d_min: float = 0.0


@dataclass
class PhaseTrace:
    l: int
    betas: list[int] = field(default_factory=list)
    segments: list[SegmentStats] = field(default_factory=list)
    stopped: bool = False


def mean_reliability(alpha, a: int, b: int) -> float:
    """Mean of ``alpha[a..b]`` (1-based, inclusive)."""
    alpha = np.asarray(alpha, dtype=np.float64)
    if not 1 <= a <= b <= alpha.size:
        raise IndexError(f"empty or out-of-range interval [{a}, {b}] for length {alpha.size}")
    return float(np.cumsum(alpha[a - 1:b])[-1] / (b - a + 1))


def _target(head_mean: float, d_min: float, lam: float, e_all: float) -> float:
    return head_mean * d_min / (lam * e_all)


def boundary_target(alpha, prev_beta: int, lam: float, d_min: float) -> float:
    """Reliability the next boundary should sit closest to.

    ``E[1, prev_beta-1] * d_min / (lam * E[1, N])``.
    """
    alpha = np.asarray(alpha, dtype=np.float64)
    if prev_beta < 2:
        raise IndexError("prev_beta must be >= 2")
    e_all = float(alpha.mean())
    if e_all == 0:
        raise DegenerateInputError("all reliabilities are zero")
    return _target(mean_reliability(alpha, 1, prev_beta - 1), d_min, lam, e_all)


def find_boundary(alpha, search_upper: int, target: float) -> int:
    """Position in ``1..search_upper-1`` whose reliability is nearest ``target``.

    Ties go to the larger (less reliable) position.
    """
    if search_upper < 2:
        raise IndexError("search_upper must be >= 2")
    dist = np.abs(np.asarray(alpha[:search_upper - 1], dtype=np.float64) - target)
    return int(search_upper - 1 - np.argmin(dist[::-1]))


@lru_cache(maxsize=64)
def segment_table(k: int, l: int) -> tuple[np.ndarray, np.ndarray]:
    """Weight-``l`` supports grouped by lowest position, descending.

    Within a group the colex-descending order is kept, so every segment is a
    contiguous slice and its first row is its cheapest pattern.  Returns the
    0-based rows and the negated lowest positions (ascending, for searching).
    """
    rows = tep_table(k, l)
    order = np.argsort(-rows[:, 0], kind="stable")
    grouped = np.ascontiguousarray(rows[order])
    grouped.setflags(write=False)
    neg_low = -grouped[:, 0]
    neg_low.setflags(write=False)
    return grouped, neg_low


def _segment_slice(k: int, l: int, beta: int, beta_prev: int) -> np.ndarray:
    rows, neg_low = segment_table(k, l)
    # lowest 0-based position must lie in [beta-1, beta_prev-2]
    start = np.searchsorted(neg_low, -(beta_prev - 2), side="left")
    stop = np.searchsorted(neg_low, -(beta - 1), side="right")
    return rows[start:stop]


def segment_teps(k: int, l: int, beta: int, beta_prev: int):
    """Yield the TEPs of the segment bounded by ``beta < beta_prev`` (1-based)."""
    if not 1 <= beta < beta_prev <= k + 1:
        raise IndexError(f"need 1 <= beta < beta_prev <= {k + 1}, got {beta}, {beta_prev}")
    if l < 1 or l > k - beta + 1:
        return
    for row in _segment_slice(k, l, beta, beta_prev):
        yield tuple(int(x) + 1 for x in row)


def _discard_scale(alpha: np.ndarray, k: int, tau: float) -> float:
    e_mrb = float(alpha[:k].mean())
    e_red = float(alpha[k:].mean())
    return 1.0 + tau * float(np.std(alpha)) * e_red / e_mrb


def discard_bound(ctx: OrderedContext, first_tep, tau: float) -> float:
    """Distance lower bound for a segment, from its first (cheapest) TEP."""
    if not first_tep:
        raise ValueError("first TEP must be non-empty")
    idx = np.asarray(first_tep, dtype=np.intp) - 1
    lsum = float(ctx.alpha_mrb[idx].sum())
    return lsum * _discard_scale(ctx.alpha_tilde, ctx.k, tau)


def sdd_decode(r, g: BinaryMatrix, params: SddParams, trace: bool = False) -> DecodeOutcome:
    counters = Counters()
    ctx = order_received(r, g, counters)
    best = _Best(ctx, counters)
    k = ctx.k
    alpha = ctx.alpha_tilde
    phases: list[PhaseTrace] | None = [] if trace else None

    e_all = float(alpha.mean())
    if params.m == 0 or e_all == 0:
        return best.outcome("order0", phases)

    head_means = np.cumsum(ctx.alpha_mrb) / np.arange(1, k + 1)
    scale = _discard_scale(alpha, k, params.tau)
    counters.flops += 3 * ctx.n
    counters.seg_flops += 3 * ctx.n

    for l in range(1, min(params.m, k) + 1):
        counters.phases_run += 1
        ph = PhaseTrace(l, [k + 1]) if trace else None
        if ph is not None:
            phases.append(ph)
        beta_prev = k + 1
        for i in range(1, params.Q + 1):
            if beta_prev == 1:
                break
            if i == params.Q:
                beta = 1
            else:
                target = _target(float(head_means[beta_prev - 2]), best.d, params.lam, e_all)
                beta = find_boundary(alpha, beta_prev, target)
                ops = beta_prev + 2
                counters.flops += ops
                counters.seg_flops += ops
            if ph is not None:
                ph.betas.append(beta)
            if params.stops and beta >= params.stop_threshold(k, l):
                if ph is not None:
                    ph.stopped = True
                return best.outcome("stopped", phases)

            seg = _segment_slice(k, l, beta, beta_prev) if l <= k - beta + 1 else None
            beta_prev = beta
            if seg is None or seg.shape[0] == 0:
                continue
            lsum = float(ctx.alpha_mrb[seg[0]].sum())
            bound = lsum * scale
            counters.flops += l + 1
            counters.seg_flops += l + 1
            stats = SegmentStats(l, i, beta, lsum, bound) if trace else None
            if params.discards and best.d < bound:
                counters.discarded_segments += params.Q - i + 1
                if stats is not None:
                    stats.discarded = True
                    stats.d_min = best.d
                    ph.segments.append(stats)
                break
            best.check(seg)
            if stats is not None:
                stats.checked = seg.shape[0]
                stats.d_min = best.d
                ph.segments.append(stats)

    return best.outcome("exhausted", phases)
