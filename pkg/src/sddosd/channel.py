"""BPSK over AWGN with unit symbol energy."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

RNG_ALGORITHM = "numpy.PCG64"
CONVENTIONS = ("ebn0", "esn0", "es_sigma2")


def bpsk_modulate(c) -> np.ndarray:
    """Bit 0 maps to +1, bit 1 to -1."""
    return 1.0 - 2.0 * np.asarray(c, dtype=np.float64)


def hard_decision(r) -> np.ndarray:
    return (np.asarray(r) < 0).astype(np.uint8)


def snr_to_sigma(snr_db: float, rate: float, convention: str = "ebn0") -> float:
    """Noise standard deviation ``sqrt(N0/2)``.

    With ``convention="ebn0"`` the SNR is Eb/N0 and ``N0 = 1/(rate * 10**(snr/10))``;
    with ``"esn0"`` the rate is ignored (SNR is Es/N0).  ``"es_sigma2"`` reads
    the SNR as ``Es / sigma**2``, i.e. ``sigma = 10**(-snr/20)``.
    """
    if not 0 < rate <= 1:
        raise ValueError(f"rate must lie in (0, 1], got {rate}")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown SNR convention {convention!r}")
    if np.isposinf(snr_db):
        return 0.0
    if convention == "es_sigma2":
        return float(10.0 ** (-snr_db / 20.0))
    eff = rate if convention == "ebn0" else 1.0
    n0 = 1.0 / (eff * 10.0 ** (snr_db / 10.0))
    return float(np.sqrt(n0 / 2.0))


@dataclass(frozen=True)
class ChannelParams:
    snr_db: float
    rate: float
    convention: str = "ebn0"
    seed: int = 0
    sigma: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "sigma", snr_to_sigma(self.snr_db, self.rate, self.convention))

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))


def transmit(s, params: ChannelParams | float, rng: np.random.Generator) -> np.ndarray:
    """``r = s + n`` with i.i.d. N(0, sigma^2) noise; ``params`` may be a bare sigma."""
    sigma = params.sigma if isinstance(params, ChannelParams) else float(params)
    s = np.asarray(s, dtype=np.float64)
    return s + sigma * rng.standard_normal(s.shape)


def reliability(r) -> np.ndarray:
    return np.abs(np.asarray(r, dtype=np.float64))
