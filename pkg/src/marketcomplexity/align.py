"""Peak-anchored linear time scaling and nearest-timestamp filtering.

Two markets are put on a common clock by mapping the absolute times of one
onto the other with the straight line through their two major price peaks,
then truncating to the overlapping span and pairing every source point with
the nearest destination point in time.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError
from .ingest import PriceSeries, SampledSeries


@dataclass(frozen=True)
class LinearTimeMap:
    slope: float
    intercept: float

    def __post_init__(self):
        if not self.slope > 0:
            raise ValueError(f"time map slope must be positive, got {self.slope}")

    def apply(self, t):
        return self.slope * np.asarray(t, dtype=float) + self.intercept

    def inverse(self) -> "LinearTimeMap":
        return LinearTimeMap(1.0 / self.slope, -self.intercept / self.slope)


@dataclass(frozen=True)
class AlignedPair:
    source_id: str
    dest_id: str
    times: np.ndarray
    source_prices: np.ndarray
    dest_prices: np.ndarray

    def __post_init__(self):
        n = len(self.times)
        if not (len(self.source_prices) == len(self.dest_prices) == n):
            raise ValueError("aligned pair arrays must have equal length")
        if n < 2:
            raise AlignmentError("aligned pair must contain at least 2 points")

    def __len__(self) -> int:
        return len(self.times)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("dest_time,source_price,dest_price\n")
        for t, sp, dp in zip(self.times, self.source_prices, self.dest_prices):
            buf.write(f"{float(t)!r},{float(sp)!r},{float(dp)!r}\n")
        return buf.getvalue()


def detect_peaks(s: PriceSeries, k: int) -> list[tuple[float, float]]:
    """The k largest local price maxima, returned in chronological order
    as (absolute time, price).

    A local maximum is strictly greater than both neighbours; an endpoint
    qualifies when greater than its single neighbour. Significance is raw
    price magnitude, not prominence.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if len(s) < 3:
        raise AlignmentError(f"series {s.id!r} too short for peak detection")
    prices = s.prices()
    times = s.abs_times()
    maxima = []
    n = len(prices)
    for i in range(n):
        left_ok = i == 0 or prices[i] > prices[i - 1]
        right_ok = i == n - 1 or prices[i] > prices[i + 1]
        if left_ok and right_ok:
            maxima.append(i)
    if len(maxima) < k:
        raise AlignmentError(
            f"series {s.id!r}: found {len(maxima)} local maxima, need {k}"
        )
    maxima.sort(key=lambda i: (-prices[i], times[i]))
    top = sorted(maxima[:k], key=lambda i: times[i])
    return [(float(times[i]), float(prices[i])) for i in top]


def fit_time_map(
    src_anchors: tuple[float, float], dst_anchors: tuple[float, float]
) -> LinearTimeMap:
    """Straight line mapping the two source anchor times onto the two
    destination anchor times exactly."""
    s1, s2 = (float(t) for t in src_anchors)
    d1, d2 = (float(t) for t in dst_anchors)
    if s2 <= s1:
        raise AlignmentError("source anchors must be distinct and chronological")
    if d2 <= d1:
        raise AlignmentError("destination anchors must be distinct and chronological")
    slope = (d2 - d1) / (s2 - s1)
    intercept = d1 - slope * s1
    return LinearTimeMap(slope, intercept)


def map_series(s: SampledSeries, m: LinearTimeMap) -> SampledSeries:
    """Apply a time map to a series' time axis; prices are untouched."""
    return SampledSeries(s.id, m.apply(s.times), s.prices)


def truncate_overlap(
    src: SampledSeries, dst: SampledSeries
) -> tuple[SampledSeries, SampledSeries]:
    """Restrict both series to the intersection of their time spans."""
    if len(src) == 0 or len(dst) == 0:
        raise AlignmentError("cannot truncate an empty series")
    lo = max(src.times[0], dst.times[0])
    hi = min(src.times[-1], dst.times[-1])
    if hi < lo:
        raise AlignmentError("series time spans are disjoint")
    out = []
    for s in (src, dst):
        mask = (s.times >= lo) & (s.times <= hi)
        if mask.sum() < 2:
            raise AlignmentError(
                f"series {s.id!r}: overlap [{lo}, {hi}] holds fewer than 2 points"
            )
        out.append(SampledSeries(s.id, s.times[mask], s.prices[mask]))
    return out[0], out[1]


def nearest_indices(src_times: np.ndarray, dst_times: np.ndarray) -> np.ndarray:
    """Index of the dst timestamp nearest each src timestamp; equidistant
    candidates resolve to the earlier dst timestamp."""
    right = np.searchsorted(dst_times, src_times, side="left")
    right = np.clip(right, 0, len(dst_times) - 1)
    left = np.clip(right - 1, 0, len(dst_times) - 1)
    d_left = np.abs(src_times - dst_times[left])
    d_right = np.abs(src_times - dst_times[right])
    return np.where(d_left <= d_right, left, right)


def nearest_filter(
    src: SampledSeries, dst: SampledSeries, unique: bool = False
) -> AlignedPair:
    """Pair every source point with the destination point nearest in time.

    Output length equals the source length. Destination points may be
    selected more than once unless `unique` is set, in which case reuse of
    a destination point is an error.
    """
    if len(dst) == 0:
        raise AlignmentError("destination series is empty")
    idx = nearest_indices(src.times, dst.times)
    if unique and len(np.unique(idx)) != len(idx):
        raise AlignmentError("destination points selected more than once")
    return AlignedPair(
        source_id=src.id,
        dest_id=dst.id,
        times=dst.times[idx].copy(),
        source_prices=src.prices.copy(),
        dest_prices=dst.prices[idx].copy(),
    )


def align(
    src: SampledSeries,
    dst: SampledSeries,
    src_anchors: tuple[float, float],
    dst_anchors: tuple[float, float],
    unique: bool = False,
) -> AlignedPair:
    """Full pipeline: fit the anchor map, rescale, truncate, filter."""
    m = fit_time_map(src_anchors, dst_anchors)
    mapped = map_series(src, m)
    mapped, trimmed_dst = truncate_overlap(mapped, dst)
    return nearest_filter(mapped, trimmed_dst, unique=unique)
