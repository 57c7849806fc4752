"""Image-depth complexity indicator: brute force, fast path, and the
component-based variant.

Depth is (1/M) times the largest square size d such that some binarization of
the palette leaves a size-d square monochrome. A square can be made
monochrome exactly when its color set misses at least one attained color, so
the fast path reduces to "largest size whose minimum square count is below
the whole-image count".

The component-based variant is implemented verbatim as (d + 1)/M, where d is
the maximal size of a square outside the zero-weight component of the root.
On worked instances it exceeds the definition by exactly one size unit; the
report carries the signed discrepancy rather than reconciling the two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .counts import SquareCountTable, all_square_counts
from .graph import CsrGraph, build_graph, vertex_levels
from .homology import connected_components
from .image import Image

MAX_BRUTE_COLORS = 12  # 2**c - 2 binarizations enumerated


class TooManyColorsError(ValueError):
    """Brute-force depth would enumerate too many binarizations."""


def _window_sums(values: np.ndarray, d: int) -> np.ndarray:
    """Sum of every d x d window, via 2-D prefix sums."""
    n = values.shape[0]
    prefix = np.zeros((n + 1, n + 1), dtype=np.int64)
    np.cumsum(np.cumsum(values, axis=0), axis=1, out=prefix[1:, 1:])
    return prefix[d:, d:] - prefix[:-d, d:] - prefix[d:, :-d] + prefix[:-d, :-d]


def phi(image2: Image, d: int) -> int:
    """Color-bias score of the most uniform size-d square of a 2-valued image.

    Sums |f(i) - f(j)| over ordered pixel pairs inside a square, which equals
    2 * zeros * ones; the minimum over all size-d squares is returned.
    """
    if not image2.observed_colors() <= {0, 1}:
        raise ValueError("phi requires a two-valued image")
    m = image2.side_length
    if not 1 <= d <= m:
        raise ValueError(f"square size {d} not in [1, {m}]")
    ones = _window_sums(image2.pixels.astype(np.int64), d)
    zeros = d * d - ones
    return int((2 * zeros * ones).min())


def _max_monochrome_size(binary: np.ndarray) -> int:
    # largest d with some all-0 or all-1 d x d window; d = 1 always works
    m = binary.shape[0]
    for d in range(m, 1, -1):
        sums = _window_sums(binary, d)
        if (sums == 0).any() or (sums == d * d).any():
            return d
    return 1


def depth_bruteforce(image: Image) -> Fraction:
    """Depth by enumerating every surjection of the palette onto {0, 1}."""
    m = image.side_length
    colors = sorted(image.observed_colors())
    c = len(colors)
    if c == 1:
        return Fraction(1, m)  # no surjection exists; one-color convention
    if c > MAX_BRUTE_COLORS:
        raise TooManyColorsError(
            f"{c} colors would need {2 ** c - 2} binarizations (limit {MAX_BRUTE_COLORS})"
        )
    lookup = np.zeros(256, dtype=np.int64)
    best = 1
    for assignment in range(1, 2**c - 1):
        for pos, color in enumerate(colors):
            lookup[color] = (assignment >> pos) & 1
        binary = lookup[image.pixels]
        best = max(best, _max_monochrome_size(binary))
        if best == m:
            break
    return Fraction(best, m)


def depth_fast(image: Image, counts: SquareCountTable | None = None) -> Fraction:
    """Depth via square counts: largest size whose best square misses a color."""
    if counts is None:
        counts = all_square_counts(image)
    m = image.side_length
    c = counts.root_color_count
    if c == 1:
        return Fraction(1, m)
    for k in range(m):
        if int(counts.level(k).min()) < c:
            return Fraction(m - k, m)
    raise AssertionError("unreachable: single pixels always miss a color when c > 1")


def depth_via_complex(graph: CsrGraph) -> Fraction:
    """Component-based depth, stated form: (d + 1)/M with d the maximal size
    of a square outside the zero-weight component of the whole image.

    Raises on constant images, where that component swallows every vertex.
    """
    labeling = connected_components(graph, 0)
    if labeling.component_count == 1:
        raise ValueError("component-based depth requires a non-constant image")
    outside = np.flatnonzero(labeling.labels != 0)
    max_size = graph.side_length - int(vertex_levels(outside, graph.side_length).min())
    return Fraction(max_size + 1, graph.side_length)


@dataclass(frozen=True)
class DepthReport:
    """Depth by each route, held as numerators over the side length."""

    side_length: int
    fast_units: int | None
    brute_units: int | None  # None when not requested or guarded
    complex_units: int | None  # None for constant images or when not requested
    brute_skipped: bool = False  # enumeration guard tripped

    @property
    def fast(self) -> Fraction | None:
        return None if self.fast_units is None else Fraction(self.fast_units, self.side_length)

    @property
    def brute(self) -> Fraction | None:
        return None if self.brute_units is None else Fraction(self.brute_units, self.side_length)

    @property
    def via_complex(self) -> Fraction | None:
        return (
            None
            if self.complex_units is None
            else Fraction(self.complex_units, self.side_length)
        )

    @property
    def agree_brute_fast(self) -> bool | None:
        if self.brute_units is None or self.fast_units is None:
            return None
        return self.brute_units == self.fast_units

    @property
    def complex_discrepancy(self) -> int | None:
        if self.complex_units is None or self.fast_units is None:
            return None
        return self.complex_units - self.fast_units

    def summary(self) -> str:
        m = self.side_length
        parts = []
        if self.brute_units is not None:
            parts.append(f"brute={self.brute_units}/{m}")
        elif self.brute_skipped:
            parts.append("brute=skipped")
        if self.fast_units is not None:
            parts.append(f"fast={self.fast_units}/{m}")
        if self.complex_units is not None:
            parts.append(f"via_complex={self.complex_units}/{m}")
        if self.complex_discrepancy is not None:
            parts.append(f"discrepancy={self.complex_discrepancy:+d}")
        return " ".join(parts)


def depth_report(
    image: Image,
    method: str = "all",
    counts: SquareCountTable | None = None,
    graph: CsrGraph | None = None,
) -> DepthReport:
    """Evaluate the requested depth routes and collect them side by side."""
    if method not in ("all", "fast", "brute", "complex"):
        raise ValueError(f"unknown depth method {method!r}")
    m = image.side_length
    want_fast = method in ("all", "fast")
    want_brute = method in ("all", "brute")
    want_complex = method in ("all", "complex")

    fast_units = None
    if want_fast or want_complex:
        if counts is None:
            counts = all_square_counts(image)
        if want_fast:
            fast_units = int(depth_fast(image, counts) * m)

    brute_units = None
    brute_skipped = False
    if want_brute:
        try:
            brute_units = int(depth_bruteforce(image) * m)
        except TooManyColorsError:
            if method == "brute":
                raise
            brute_skipped = True

    complex_units = None
    if want_complex:
        if graph is None:
            graph = build_graph(image, counts)
        try:
            complex_units = int(depth_via_complex(graph) * m)
        except ValueError:
            if method == "complex":
                raise
            complex_units = None

    return DepthReport(m, fast_units, brute_units, complex_units, brute_skipped)
