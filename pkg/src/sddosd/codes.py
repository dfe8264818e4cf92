"""Code construction: narrow-sense eBCH generators and generator-matrix files.

Polynomials over GF(2) are held as Python ints (bit ``j`` is the coefficient
of ``x**j``).  The primitive polynomials are fixed so that generated
matrices are reproducible bit for bit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .gf2 import BinaryMatrix, rank

PRIMITIVE_POLYS = {
    2: 0b111,
    3: 0b1011,         # x^3 + x + 1
    4: 0b10011,        # x^4 + x + 1
    5: 0b100101,       # x^5 + x^2 + 1
    6: 0b1000011,      # x^6 + x + 1
    7: 0b10001001,     # x^7 + x^3 + 1
    8: 0b100011101,    # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,   # x^9 + x^4 + 1
    10: 0b10000001001,  # x^10 + x^3 + 1
}

MAX_BRUTEFORCE_K = 20


class ConstructionError(ValueError):
    pass


class MatrixFormatError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def poly_str(p: int) -> str:
    if p == 0:
        return "0"
    terms = []
    for j in range(p.bit_length() - 1, -1, -1):
        if p >> j & 1:
            terms.append("1" if j == 0 else "x" if j == 1 else f"x^{j}")
    return " + ".join(terms)


@dataclass(frozen=True)
class Gf2Poly:
    coeffs: int

    @property
    def degree(self) -> int:
        return self.coeffs.bit_length() - 1

    def __mul__(self, other: Gf2Poly) -> Gf2Poly:
        return Gf2Poly(clmul(self.coeffs, other.coeffs))

    def __str__(self):
        return poly_str(self.coeffs)


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


class GF2m:
    """GF(2^m) via exp/log tables over a fixed primitive polynomial."""

    def __init__(self, m: int, prim: int | None = None):
        if prim is None:
            if m not in PRIMITIVE_POLYS:
                raise ConstructionError(f"no primitive polynomial on file for m={m}")
            prim = PRIMITIVE_POLYS[m]
        self.m = m
        self.q = 1 << m
        self.prim = prim
        self.exp = [0] * (2 * self.q)
        self.log = [0] * self.q
        x = 1
        for i in range(self.q - 1):
            self.exp[i] = x
            self.log[x] = i
            x <<= 1
            if x & self.q:
                x ^= prim
        if x != 1:
            raise ConstructionError(f"{poly_str(prim)} is not primitive")
        for i in range(self.q - 1, 2 * self.q):
            self.exp[i] = self.exp[i - (self.q - 1)]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def coset(self, i: int) -> list[int]:
        n = self.q - 1
        out, j = [], i % n
        while j not in out:
            out.append(j)
            j = 2 * j % n
        return out

    def minimal_poly(self, i: int) -> int:
        """Minimal polynomial of ``alpha**i`` as a GF(2) polynomial."""
        poly = [1]  # coefficients in GF(2^m), lowest degree first
        for j in self.coset(i):
            root = self.exp[j]
            nxt = [0] * (len(poly) + 1)
            for d, c in enumerate(poly):
                nxt[d + 1] ^= c
                nxt[d] ^= self.mul(c, root)
            poly = nxt
        out = 0
        for d, c in enumerate(poly):
            if c not in (0, 1):
                raise ConstructionError(f"minimal polynomial of alpha^{i} left GF(2)")
            out |= c << d
        return out


def bch_generator_poly(m: int, t: int) -> Gf2Poly:
    """Generator of the narrow-sense binary BCH code of length ``2**m - 1``.

    The roots are ``alpha**1 .. alpha**(2t)``; ``g`` is the product of the
    distinct minimal polynomials among them.
    """
    if t < 0:
        raise ConstructionError("t must be non-negative")
    field = GF2m(m)
    n = field.q - 1
    seen: set[int] = set()
    g = 1
    for i in range(1, 2 * t + 1):
        if i % n in seen:
            continue
        seen.update(field.coset(i))
        g = clmul(g, field.minimal_poly(i))
    return Gf2Poly(g)


def bch_dimensions(m: int) -> dict[int, int]:
    """Map attainable dimension ``k`` to the smallest design ``t`` giving it."""
    field = GF2m(m)
    n = field.q - 1
    out: dict[int, int] = {}
    seen: set[int] = set()
    t = 0
    while True:
        k = n - len(seen)
        out.setdefault(k, t)
        if k <= 1:
            break
        t += 1
        for i in (2 * t - 1, 2 * t):
            if i % n not in seen:
                seen.update(field.coset(i))
    return out


def bch_generator_poly_for_k(m: int, k: int) -> tuple[Gf2Poly, int]:
    dims = bch_dimensions(m)
    if k not in dims:
        attainable = ", ".join(str(d) for d in sorted(dims))
        raise ConstructionError(f"no narrow-sense BCH code of length {2**m - 1} has k={k}; attainable: {attainable}")
    t = dims[k]
    return bch_generator_poly(m, t), t


@dataclass(frozen=True)
class CodeSpec:
    n: int
    k: int
    family: str = "ebch"
    d: int | None = None
    path: str | None = None

    def __post_init__(self):
        if not 1 <= self.k < self.n:
            raise ConstructionError(f"need 1 <= k < n, got ({self.n},{self.k})")
        if self.family == "ebch" and self.n & (self.n - 1):
            raise ConstructionError(f"eBCH length must be a power of two, got {self.n}")
        if self.family not in ("ebch", "file"):
            raise ConstructionError(f"unknown code family {self.family!r}")

    @property
    def name(self) -> str:
        if self.family == "ebch":
            return f"ebch{self.n}_{self.k}"
        if self.path and self.path.startswith("shipped:"):
            return self.path.split(":", 1)[1]
        return Path(self.path).stem if self.path else f"code{self.n}_{self.k}"


def ebch_generator(spec: CodeSpec) -> BinaryMatrix:
    """``K x N`` generator: shifts of ``g(x)`` plus an even-parity column."""
    if spec.family != "ebch":
        raise ConstructionError(f"not an eBCH spec: {spec.family}")
    m = spec.n.bit_length() - 1
    g, _ = bch_generator_poly_for_k(m, spec.k)
    n0 = spec.n - 1
    bits = np.zeros((spec.k, spec.n), dtype=np.uint8)
    gbits = [(g.coeffs >> j) & 1 for j in range(g.degree + 1)]
    for i in range(spec.k):
        bits[i, i:i + g.degree + 1] = gbits
    bits[:, n0] = bits[:, :n0].sum(axis=1) % 2
    return BinaryMatrix.from_bits(bits)


def min_distance_bruteforce(g: BinaryMatrix) -> int:
    """Minimum weight over all nonzero codewords, by Gray-code enumeration."""
    if g.rows > MAX_BRUTEFORCE_K:
        raise ValueError(f"K={g.rows} exceeds the enumeration bound K <= {MAX_BRUTEFORCE_K}")
    rows = [int("".join(map(str, r[::-1])), 2) for r in g.bits]
    best = g.cols + 1
    word = 0
    for i in range(1, 1 << g.rows):
        word ^= rows[(i & -i).bit_length() - 1]
        w = word.bit_count()
        if w < best:
            best = w
    return best


# -- files ------------------------------------------------------------------

def save_generator(g: BinaryMatrix, path, comments: list[str] = ()) -> None:
    for c in comments:
        if len(f"#{c}".splitlines()) != 1:
            raise ValueError(f"comment spans several lines: {c!r}")
    lines = [f"# {c}" for c in comments]
    lines.append(f"{g.rows} {g.cols}")
    lines.extend(g.to_strings())
    Path(path).write_text("\n".join(lines) + "\n")


def parse_generator(text: str) -> BinaryMatrix:
    header = None
    rows: list[str] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            m = re.fullmatch(r"(\d+)\s+(\d+)", line)
            if not m:
                raise MatrixFormatError(lineno, f"expected header 'K N', got {line!r}")
            header = int(m.group(1)), int(m.group(2))
            if header[0] < 1 or header[1] < 1:
                raise MatrixFormatError(lineno, "dimensions must be positive")
            continue
        k, n = header
        if len(rows) == k:
            raise MatrixFormatError(lineno, f"more than {k} rows")
        if len(line) != n:
            raise MatrixFormatError(lineno, f"row has {len(line)} entries, expected {n}")
        if set(line) - {"0", "1"}:
            raise MatrixFormatError(lineno, "row contains characters other than 0/1")
        rows.append(line)
    if header is None:
        raise MatrixFormatError(lineno or 1, "missing header")
    if len(rows) != header[0]:
        raise MatrixFormatError(lineno, f"found {len(rows)} rows, expected {header[0]}")
    return BinaryMatrix.from_strings(rows)


def load_generator(path) -> BinaryMatrix:
    return parse_generator(Path(path).read_text())


def shipped_codes() -> list[str]:
    root = resources.files("sddosd") / "data" / "codes"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".txt"))


def load_shipped(name: str) -> BinaryMatrix:
    root = resources.files("sddosd") / "data" / "codes"
    return parse_generator((root / f"{name}.txt").read_text())


def parse_code(text: str) -> CodeSpec:
    """Parse ``ebch:N,K``, ``ebch N K`` style names, a shipped name, or a path."""
    m = re.fullmatch(r"ebch[:\s_]*(\d+)[,\s_]+(\d+)", text.strip(), flags=re.I)
    if m:
        return CodeSpec(int(m.group(1)), int(m.group(2)), "ebch")
    path = Path(text)
    if not path.exists() and text in shipped_codes():
        g = load_shipped(text)
        return CodeSpec(g.cols, g.rows, "file", path=f"shipped:{text}")
    g = load_generator(path)
    return CodeSpec(g.cols, g.rows, "file", path=str(path))


@lru_cache(maxsize=32)
def build_generator(spec: CodeSpec) -> BinaryMatrix:
    if spec.family == "ebch":
        g = ebch_generator(spec)
    elif spec.path and spec.path.startswith("shipped:"):
        g = load_shipped(spec.path.split(":", 1)[1])
    else:
        g = load_generator(spec.path)
    if g.shape != (spec.k, spec.n):
        raise ConstructionError(f"generator has shape {g.shape}, expected {(spec.k, spec.n)}")
    if rank(g) != spec.k:
        raise ConstructionError(f"generator for {spec.name} is rank deficient")
    return g
