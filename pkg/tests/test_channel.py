from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sddosd.channel import (
    ChannelParams,
    bpsk_modulate,
    hard_decision,
    reliability,
    snr_to_sigma,
    transmit,
)


def test_modulate_examples():
    assert np.array_equal(bpsk_modulate(np.zeros(4, np.uint8)), np.ones(4))
    assert np.array_equal(bpsk_modulate([0, 1, 1, 0]), [1, -1, -1, 1])


@given(st.lists(st.integers(0, 1), min_size=1, max_size=64))
def test_modulate_hard_decision_roundtrip(bits):
    assert np.array_equal(hard_decision(bpsk_modulate(bits)), bits)


def test_sigma_examples():
    assert snr_to_sigma(0.0, 1.0) == pytest.approx(math.sqrt(0.5))
    sigma = snr_to_sigma(3.0, 0.5)
    assert sigma == pytest.approx(math.sqrt(1 / (2 * 0.5 * 10 ** 0.3)), rel=1e-12)
    assert round(sigma, 3) == 0.708
    assert snr_to_sigma(math.inf, 0.5) == 0.0
    assert snr_to_sigma(80.0, 0.5) < 1e-3


def test_sigma_conventions():
    # Es/N0 ignores the rate; Es/sigma^2 reads the SNR directly as 1/sigma^2
    assert snr_to_sigma(2.0, 0.25, "esn0") == pytest.approx(snr_to_sigma(2.0, 1.0, "ebn0"))
    assert snr_to_sigma(0.0, 0.25, "es_sigma2") == 1.0
    assert snr_to_sigma(6.0, 0.5, "es_sigma2") ** -2 == pytest.approx(10 ** 0.6)
    # for rate 1/4, Eb/N0 at snr + 10log10(2) equals Es/sigma^2 at snr
    shift = 10 * math.log10(2)
    assert snr_to_sigma(1.0 + shift, 0.25) == pytest.approx(snr_to_sigma(1.0, 0.25, "es_sigma2"))


@given(st.floats(-10, 20), st.floats(0.05, 1.0))
def test_sigma_monotone_in_snr(snr, rate):
    assert snr_to_sigma(snr + 0.5, rate) < snr_to_sigma(snr, rate)


@pytest.mark.parametrize("rate", [0.0, -0.5, 1.5])
def test_sigma_bad_rate(rate):
    with pytest.raises(ValueError):
        snr_to_sigma(1.0, rate)


def test_sigma_bad_convention():
    with pytest.raises(ValueError):
        snr_to_sigma(1.0, 0.5, "bogus")


def test_transmit_noiseless():
    s = bpsk_modulate([0, 1, 0])
    r = transmit(s, 0.0, np.random.default_rng(1))
    assert np.array_equal(r, s)
    assert np.array_equal(reliability(r), np.ones(3))


def test_transmit_deterministic():
    p = ChannelParams(1.0, 0.5, seed=7)
    s = np.ones(100)
    assert np.array_equal(transmit(s, p, p.rng()), transmit(s, p, p.rng()))
    assert not np.array_equal(transmit(s, p, p.rng()), transmit(s, p, ChannelParams(1.0, 0.5, seed=8).rng()))


def test_noise_variance():
    p = ChannelParams(2.0, 0.5, seed=3)
    noise = transmit(np.zeros(10**6), p, p.rng())
    assert abs(noise.var() / p.sigma**2 - 1) < 0.01
    assert abs(noise.mean()) < 5 * p.sigma / 1000


def test_reliability_example():
    assert np.array_equal(reliability([-0.3, 0.5]), [0.3, 0.5])
