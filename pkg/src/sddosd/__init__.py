"""Ordered-statistics and segmentation-discarding decoding for binary linear block codes."""

from .channel import ChannelParams, bpsk_modulate, reliability, snr_to_sigma, transmit
from .codes import CodeSpec, ebch_generator, load_generator, min_distance_bruteforce, save_generator
from .gf2 import BinaryMatrix, encode, permute_columns, row_space_equal, systematic_form
from .osd import DecodeOutcome, OrderedContext, complexity_estimate, order_received, osd_decode
from .sdd import SddParams, sdd_decode
from .sim import ExperimentConfig, compare_decoders, run_point, sweep

__version__ = "0.1.0"

__all__ = [
    "BinaryMatrix", "ChannelParams", "CodeSpec", "DecodeOutcome", "ExperimentConfig",
    "OrderedContext", "SddParams", "bpsk_modulate", "compare_decoders", "complexity_estimate",
    "ebch_generator", "encode", "load_generator", "min_distance_bruteforce", "order_received",
    "osd_decode", "permute_columns", "reliability", "row_space_equal", "run_point",
    "save_generator", "sdd_decode", "snr_to_sigma", "sweep", "systematic_form", "transmit",
]
