"""Approximate Lempel-Ziv parsing in few sequential passes.

The parser factors a byte string into literal and copy phrases the way
an exact left-to-right parser would, but touches the input only through
whole sequential passes and bounded range scans. A decreasing schedule
of block lengths drives one fingerprint pass per level; collisions are
caught by an exact verify step and the parse is retried with a fresh
base. The phrase count lands within a logarithmic factor of the exact
parse, which the oracle module computes directly for comparison.
"""

from .codec import DecodeError, Mismatch, VerificationError, decode, encode, verify
from .fingerprint import MERSENNE61, FingerprintConfig
from .iomodel import IoConfig, IoStats, SequentialReader
from .oracle import ExactParse, exact_lz77
from .parse_core import (
    LengthSchedule,
    Params,
    Parse,
    Phrase,
    RunStats,
    build_schedule,
    parse,
    parse_bytes,
    shrink,
)
from .report import REPORT_KEYS, build_run_report

__version__ = "0.1.0"

__all__ = [
    "DecodeError",
    "ExactParse",
    "FingerprintConfig",
    "IoConfig",
    "IoStats",
    "LengthSchedule",
    "MERSENNE61",
    "Mismatch",
    "Params",
    "Parse",
    "Phrase",
    "REPORT_KEYS",
    "RunStats",
    "SequentialReader",
    "VerificationError",
    "build_run_report",
    "build_schedule",
    "decode",
    "encode",
    "exact_lz77",
    "parse",
    "parse_bytes",
    "shrink",
    "verify",
    "__version__",
]
