"""Discretization of price series into symbol streams.

The binary movement encoding maps each consecutive price change to 1
(increase) or 0 (non-increase); a flat day counts as 0 unless strict mode
is requested, which rejects ties instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeriesError, SeriesTooShortError
from .ingest import PriceSeries, format_price


@dataclass(frozen=True)
class BinaryMovementSeries:
    bits: tuple[int, ...]
    source_id: str

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    def __len__(self) -> int:
        return len(self.bits)

    def to_ascii(self) -> str:
        return "".join(str(b) for b in self.bits)

    @classmethod
    def from_ascii(cls, text: str, source_id: str = "") -> "BinaryMovementSeries":
        text = text.strip()
        if not set(text) <= {"0", "1"}:
            raise ValueError("movement string may contain only '0' and '1'")
        return cls(tuple(int(c) for c in text), source_id)


def binarize(s: PriceSeries, strict: bool = False) -> BinaryMovementSeries:
    """Up/down encoding of consecutive price changes; one bit per change."""
    prices = s.prices()
    if len(prices) < 2:
        raise SeriesTooShortError(f"series {s.id!r} too short to binarize")
    diffs = np.diff(prices)
    if strict and np.any(diffs == 0):
        raise DegenerateSeriesError(
            f"series {s.id!r} has a zero price change (strict mode)"
        )
    return BinaryMovementSeries(tuple(int(d > 0) for d in diffs), s.id)


def serialize_prices(s: PriceSeries) -> bytes:
    """Canonical comma-joined decimal text of the prices, for feeding the
    real-value path of a generic lossless compressor."""
    return ",".join(format_price(p) for p in s.prices()).encode("ascii")
