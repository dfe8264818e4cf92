"""Bit-packed GF(2) matrices, permutations and systematic reduction.

Columns are packed little-endian into 64-bit words: column ``j`` lives in bit
``j % 64`` of word ``j // 64``.  Vectors are plain ``uint8`` arrays of 0/1.
Permutations are 0-based integer arrays; ``apply(p, x)[j] == x[p[j]]``.
Error messages report 1-based positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

WORD = 64


class DimensionError(ValueError):
    pass


class RankError(ValueError):
    """Raised when a generator matrix is not of full row rank."""

    def __init__(self, pivot: int, rows: int):
        super().__init__(f"matrix is rank deficient: no independent column for pivot {pivot} of {rows}")
        self.pivot = pivot


def _pack(bits: np.ndarray) -> np.ndarray:
    rows, cols = bits.shape
    nwords = max(1, -(-cols // WORD))
    padded = np.zeros((rows, nwords * WORD), dtype=np.uint8)
    padded[:, :cols] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def _unpack(data: np.ndarray, cols: int) -> np.ndarray:
    raw = np.ascontiguousarray(data.astype("<u8")).view(np.uint8)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :cols]


@dataclass(frozen=True, eq=False)
class BinaryMatrix:
    """Immutable bit-packed binary matrix."""

    rows: int
    cols: int
    data: np.ndarray

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DimensionError(f"empty matrix {self.rows}x{self.cols}")
        nwords = max(1, -(-self.cols // WORD))
        if self.data.shape != (self.rows, nwords) or self.data.dtype != np.uint64:
            raise DimensionError(f"packed data has shape {self.data.shape}, expected {(self.rows, nwords)}")
        tail = self.cols % WORD
        if tail and np.any(self.data[:, -1] >> np.uint64(tail)):
            raise DimensionError("bits set outside the matrix")
        self.data.setflags(write=False)

    @classmethod
    def from_bits(cls, bits) -> BinaryMatrix:
        arr = np.asarray(bits)
        if arr.ndim != 2:
            raise DimensionError(f"expected a 2-D array, got shape {arr.shape}")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")
        return cls(arr.shape[0], arr.shape[1], _pack(arr.astype(np.uint8)))

    @classmethod
    def from_strings(cls, rows: list[str]) -> BinaryMatrix:
        return cls.from_bits([[int(ch) for ch in row] for row in rows])

    @classmethod
    def identity(cls, k: int) -> BinaryMatrix:
        return cls.from_bits(np.eye(k, dtype=np.uint8))

    @cached_property
    def bits(self) -> np.ndarray:
        """Unpacked ``uint8`` copy, shape ``(rows, cols)`` (read-only)."""
        out = _unpack(self.data, self.cols)
        out.setflags(write=False)
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_strings(self) -> list[str]:
        return ["".join("1" if b else "0" for b in row) for row in self.bits]

    def __eq__(self, other):
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self):
        body = "\n ".join(self.to_strings()) if self.rows <= 8 and self.cols <= 64 else "..."
        return f"BinaryMatrix({self.rows}x{self.cols}\n {body})"


# -- permutations -----------------------------------------------------------

def check_permutation(p, n: int | None = None) -> np.ndarray:
    p = np.asarray(p, dtype=np.intp)
    if p.ndim != 1:
        raise DimensionError("permutation must be 1-D")
    if n is not None and p.size != n:
        raise DimensionError(f"permutation has length {p.size}, expected {n}")
    if not np.array_equal(np.sort(p), np.arange(p.size)):
        raise ValueError("not a bijection on 0..n-1")
    return p


def identity_perm(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.intp)


def inverse(p) -> np.ndarray:
    p = np.asarray(p, dtype=np.intp)
    inv = np.empty_like(p)
    inv[p] = np.arange(p.size, dtype=np.intp)
    return inv


def compose(p, q) -> np.ndarray:
    """Permutation equal to applying ``p`` first, then ``q``."""
    return np.asarray(p, dtype=np.intp)[np.asarray(q, dtype=np.intp)]


def apply(p, x) -> np.ndarray:
    x = np.asarray(x)
    if x.shape[-1] != len(p):
        raise DimensionError(f"vector length {x.shape[-1]} != permutation length {len(p)}")
    return x[..., p]


def permute_columns(m: BinaryMatrix, p) -> BinaryMatrix:
    p = np.asarray(p, dtype=np.intp)
    if p.size != m.cols:
        raise DimensionError(f"permutation length {p.size} != {m.cols} columns")
    return BinaryMatrix.from_bits(m.bits[:, p])


# -- elimination ------------------------------------------------------------

def reduce_systematic(bits: np.ndarray, counts: dict | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Jordan reduce a full-rank ``k x n`` bit array to ``[I | P]``.

    Columns are scanned left to right; a column that depends on the pivots
    already chosen is pushed behind the basis, so the basis is the first
    ``k`` independent columns and both the basis and the remaining columns
    keep their original relative order.

    Returns ``(reduced, p2)`` where ``reduced`` is already column-permuted by
    ``p2``.  If ``counts`` is given, ``counts["bops"]`` is increased by the
    number of bit operations spent on row additions.
    """
    work = np.array(bits, dtype=np.uint8, copy=True)
    k, n = work.shape
    pivots: list[int] = []
    row_ops = 0
    for col in range(n):
        r = len(pivots)
        if r == k:
            break
        hits = np.flatnonzero(work[r:, col])
        if hits.size == 0:
            continue
        src = r + hits[0]
        if src != r:
            work[[r, src]] = work[[src, r]]
        others = np.flatnonzero(work[:, col])
        others = others[others != r]
        if others.size:
            work[others] ^= work[r]
            row_ops += others.size
        pivots.append(col)
    if len(pivots) < k:
        raise RankError(len(pivots) + 1, k)
    rest = np.setdiff1d(np.arange(n), pivots, assume_unique=True)
    p2 = np.concatenate([np.asarray(pivots, dtype=np.intp), rest.astype(np.intp)])
    if counts is not None:
        counts["bops"] = counts.get("bops", 0) + row_ops * n
    return work[:, p2], p2


def systematic_form(m: BinaryMatrix) -> tuple[BinaryMatrix, np.ndarray]:
    """Return ``(Gt, p2)`` with ``Gt = [I_K P]`` spanning the rows of ``m[:, p2]``."""
    if m.cols < m.rows:
        raise DimensionError(f"{m.rows}x{m.cols} matrix cannot have full row rank")
    reduced, p2 = reduce_systematic(m.bits)
    return BinaryMatrix.from_bits(reduced), p2


def rank(m: BinaryMatrix) -> int:
    work = m.data.copy()
    r = 0
    for col in range(m.cols):
        if r == m.rows:
            break
        word, bit = divmod(col, WORD)
        column = (work[r:, word] >> np.uint64(bit)) & np.uint64(1)
        hits = np.flatnonzero(column)
        if hits.size == 0:
            continue
        src = r + hits[0]
        work[[r, src]] = work[[src, r]]
        below = r + 1 + np.flatnonzero((work[r + 1:, word] >> np.uint64(bit)) & np.uint64(1))
        work[below] ^= work[r]
        r += 1
    return r


def vstack(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    if a.cols != b.cols:
        raise DimensionError(f"column mismatch {a.cols} != {b.cols}")
    return BinaryMatrix(a.rows + b.rows, a.cols, np.vstack([a.data, b.data]))


def row_space_equal(a: BinaryMatrix, b: BinaryMatrix) -> bool:
    if a.cols != b.cols:
        raise DimensionError(f"column mismatch {a.cols} != {b.cols}")
    ra, rb = rank(a), rank(b)
    return ra == rb == rank(vstack(a, b))


def encode(v, g: BinaryMatrix) -> np.ndarray:
    """GF(2) product ``v . g`` as a ``uint8`` vector of length ``g.cols``."""
    v = np.asarray(v, dtype=np.uint8)
    if v.shape != (g.rows,):
        raise DimensionError(f"message length {v.shape} does not match {g.rows} rows")
    sel = g.data[v.astype(bool)]
    if sel.shape[0] == 0:
        return np.zeros(g.cols, dtype=np.uint8)
    acc = np.bitwise_xor.reduce(sel, axis=0)
    return _unpack(acc[None, :], g.cols)[0]
