"""Regenerate the generator matrices shipped in src/sddosd/data/codes."""

from pathlib import Path

import numpy as np

from sddosd.codes import (
    PRIMITIVE_POLYS,
    CodeSpec,
    bch_generator_poly_for_k,
    ebch_generator,
    min_distance_bruteforce,
    poly_str,
    save_generator,
)
from sddosd.gf2 import BinaryMatrix

OUT = Path(__file__).resolve().parents[1] / "src" / "sddosd" / "data" / "codes"
EBCH = [(8, 4), (32, 16), (64, 16), (128, 64), (128, 22)]


def best_random_systematic(n, k, seed, tries=400):
    """Seeded search for a systematic [I | P] code with the largest minimum distance."""
    rng = np.random.Generator(np.random.PCG64(seed))
    best, best_d = None, -1
    for _ in range(tries):
        p = rng.integers(0, 2, size=(k, n - k), dtype=np.uint8)
        g = BinaryMatrix.from_bits(np.hstack([np.eye(k, dtype=np.uint8), p]))
        d = min_distance_bruteforce(g)
        if d > best_d:
            best, best_d = g, d
    return best, best_d


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for n, k in EBCH:
        m = n.bit_length() - 1
        g_poly, t = bch_generator_poly_for_k(m, k)
        g = ebch_generator(CodeSpec(n, k))
        notes = [
            f"({n},{k}) extended narrow-sense BCH, design t={t}",
            f"primitive polynomial {poly_str(PRIMITIVE_POLYS[m])}",
            f"g(x) = {g_poly}",
        ]
        if k <= 20:
            notes.append(f"minimum distance {min_distance_bruteforce(g)} (enumerated)")
        save_generator(g, OUT / f"ebch{n}_{k}.txt", notes)
        print("wrote", n, k)
    g, d = best_random_systematic(16, 8, seed=2019)
    save_generator(g, OUT / "rand16_8.txt", [
        "(16,8) systematic code, best of 400 seeded random parity parts (PCG64 seed 2019)",
        f"minimum distance {d} (enumerated)",
    ])
    print("wrote 16 8, d =", d)


if __name__ == "__main__":
    main()
