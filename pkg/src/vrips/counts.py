"""Distinct-color counting for every square (and any rectangle) sub-region.

Distinct counts do not decompose under sliding windows, but color *sets* do:
the fast engine keeps one 256-bit occupancy mask per region, stored as four
64-bit lanes. Because bitwise OR is idempotent, a row segment of any width is
the OR of two overlapping power-of-two segments taken from a precomputed
sparse table, and a block of rows collapses the same way vertically. A
region's count is the popcount of its mask.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .image import Image, RectRegion, write_text_atomic

_LANES = 4  # 4 x 64 bits covers color indices 0..255

if hasattr(np, "bitwise_count"):

    def _popcount(masks: np.ndarray) -> np.ndarray:
        return np.bitwise_count(masks).sum(axis=-1, dtype=np.uint16)

else:
    _POP8 = np.array([bin(v).count("1") for v in range(256)], dtype=np.uint16)

    def _popcount(masks: np.ndarray) -> np.ndarray:
        as_bytes = masks.view(np.uint8).reshape(masks.shape[:-1] + (-1,))
        return _POP8[as_bytes].sum(axis=-1, dtype=np.uint16)


def _bit_planes(pixels: np.ndarray) -> np.ndarray:
    """Per-pixel occupancy mask with shape (*pixels.shape, _LANES)."""
    planes = np.zeros(pixels.shape + (_LANES,), dtype=np.uint64)
    lanes = (pixels >> 6).astype(np.intp)
    bits = np.uint64(1) << (pixels.astype(np.uint64) & np.uint64(63))
    idx = np.indices(pixels.shape, sparse=True)
    planes[(*idx, lanes)] = bits
    return planes


def _or_rows(masks: np.ndarray, height: int) -> np.ndarray:
    """OR of every run of ``height`` consecutive rows, by doubling."""
    if height == 1:
        return masks
    acc = masks
    covered = 1
    while covered * 2 <= height:
        acc = acc[: acc.shape[0] - covered] | acc[covered:]
        covered *= 2
    rows_out = masks.shape[0] - height + 1
    if covered == height:
        return acc[:rows_out]
    return acc[:rows_out] | acc[height - covered : height - covered + rows_out]


class ColorMaskEngine:
    """Bit-mask tables for one image, shared by square and rectangle queries."""

    def __init__(self, image: Image):
        self.side_length = image.side_length
        self._planes = _bit_planes(image.pixels)
        # sparse table: level q holds row segments of width 2**q
        self._table = [self._planes]
        q = 1
        n = self.side_length
        while (1 << q) <= n:
            half = 1 << (q - 1)
            prev = self._table[-1]
            width_out = n - (1 << q) + 1
            self._table.append(prev[:, :width_out] | prev[:, half : half + width_out])
            q += 1

    def row_segments(self, width: int) -> np.ndarray:
        """Masks of all width-``width`` row segments, shape (N, N-width+1, lanes)."""
        if width == 1:
            return self._planes
        q = width.bit_length() - 1
        pw = 1 << q
        width_out = self.side_length - width + 1
        level = self._table[q]
        if pw == width:
            return level[:, :width_out]
        return level[:, :width_out] | level[:, width - pw : width - pw + width_out]

    def rect_counts(self, height: int, width: int) -> np.ndarray:
        """Distinct-color counts of every height x width rectangle, as a 2-D grid."""
        segments = self.row_segments(width)
        return _popcount(_or_rows(segments, height))


class Concentration(NamedTuple):
    """Colors-per-pixel ratio of a region, kept as an exact integer pair."""

    colors: int
    pixels: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.colors, self.pixels)


@dataclass(frozen=True, eq=False)
class SquareCountTable:
    """Distinct-color count of every square, indexed like the graph vertices.

    Level k (0-based) holds the (k+1)^2 squares of size N-k in row-major
    offset order; levels are concatenated coarse to fine.
    """

    side_length: int
    counts: np.ndarray

    def __post_init__(self) -> None:
        n = self.side_length
        expected = n * (n + 1) * (2 * n + 1) // 6
        if self.counts.shape != (expected,):
            raise ValueError(f"count table needs {expected} entries, got {self.counts.shape}")
        self.counts.flags.writeable = False

    @property
    def root_color_count(self) -> int:
        """Number of colors of the whole image."""
        return int(self.counts[0])

    def level(self, k: int) -> np.ndarray:
        """Counts of all size N-k squares as a (k+1, k+1) view."""
        base = k * (k + 1) * (2 * k + 1) // 6
        side = k + 1
        return self.counts[base : base + side * side].reshape(side, side)

    def count_at(self, k: int, i: int, j: int) -> int:
        return int(self.level(k)[i, j])

    def write_csv(self, path: str | os.PathLike) -> None:
        n = self.side_length
        rows = ["k,i,j,g_index,size,count"]
        g = 0
        for k in range(n):
            level = self.level(k)
            for i in range(k + 1):
                for j in range(k + 1):
                    rows.append(f"{k},{i},{j},{g},{n - k},{int(level[i, j])}")
                    g += 1
        write_text_atomic(path, "\n".join(rows) + "\n")


def distinct_colors_oracle(image: Image, region: RectRegion) -> int:
    """Reference count by direct enumeration of the region's pixels."""
    sub = image.region_pixels(region)
    return len(set(sub.ravel().tolist()))


def all_square_counts(image: Image) -> SquareCountTable:
    """Distinct-color counts of every square, via the mask engine."""
    engine = ColorMaskEngine(image)
    n = image.side_length
    levels = [engine.rect_counts(n - k, n - k).ravel() for k in range(n)]
    return SquareCountTable(n, np.concatenate(levels))


def rect_count(image: Image, region: RectRegion) -> int:
    """Distinct-color count of one rectangle, computed on demand.

    Uses the same occupancy-mask representation as the square engine but only
    touches the region's own pixels.
    """
    sub = image.region_pixels(region)
    mask = np.bitwise_or.reduce(_bit_planes(sub).reshape(-1, _LANES), axis=0)
    return int(_popcount(mask[np.newaxis])[0])


def information_concentration(image: Image, region: RectRegion) -> Concentration:
    """Distinct colors over pixel count of the region, as an exact pair."""
    return Concentration(rect_count(image, region), region.area)


def read_counts_csv(path: str | os.PathLike) -> SquareCountTable:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: empty count table")
    n = int(rows[0]["size"]) + int(rows[0]["k"])
    counts = np.zeros(n * (n + 1) * (2 * n + 1) // 6, dtype=np.uint16)
    for row in rows:
        counts[int(row["g_index"])] = int(row["count"])
    if counts.min() < 1:
        raise ValueError(f"{path}: incomplete count table (some squares missing)")
    return SquareCountTable(n, counts)
