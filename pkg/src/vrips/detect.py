"""Salient-region detection: minimal-size high-color-count regions.

Two routes to the same idea. The component route finds the smallest squares
sharing a component with the whole image under an edge-weight threshold. The
color-threshold route picks the smallest squares (or rectangles) holding at
least t distinct colors; with t = c it reproduces the component route at
threshold 0, and sweeping t = c - n*epsilon trades precision for noise
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .counts import ColorMaskEngine, SquareCountTable, rect_count
from .graph import CsrGraph, level_base, vertex_levels
from .homology import connected_components
from .image import Image, RectRegion, SquareRegion

GRAY_FILL = 128


@dataclass(frozen=True)
class DetectionResult:
    """Detected regions plus the parameters that selected them.

    Regions are ordered: ascending size/area, then row-major position. Every
    region satisfies the mode's qualifying predicate, and for rank 1 none of
    a smaller size/area does.
    """

    mode: str  # "component" | "threshold"
    regions: tuple[RectRegion, ...]
    selected_size_or_area: int
    epsilon: int | None = None
    color_threshold: int | None = None
    rank: int = 1
    aspect_min: Fraction | None = None
    aspect_max: Fraction | None = None


def render_overlay(image: Image, regions, fill: int = GRAY_FILL) -> Image:
    """Copy source pixels inside the regions; fill everything else.

    The overlay's palette widens to max(color_count, fill + 1) so the fill
    value is always representable.
    """
    if not 0 <= fill <= 255:
        raise ValueError(f"fill value {fill} not in [0, 255]")
    n = image.side_length
    out = np.full((n, n), fill, dtype=np.uint8)
    for region in regions:
        out[region.rows.as_slice(), region.cols.as_slice()] = image.region_pixels(region)
    return Image(out, max(image.color_count, fill + 1))


def coverage_mask(image: Image, regions) -> np.ndarray:
    n = image.side_length
    covered = np.zeros((n, n), dtype=bool)
    for region in regions:
        image.region_pixels(region)  # bounds check
        covered[region.rows.as_slice(), region.cols.as_slice()] = True
    return covered


def gray_fraction(image: Image, regions) -> Fraction:
    """Fraction of pixels left at the fill value, as an exact ratio."""
    covered = coverage_mask(image, regions)
    n = image.side_length
    return Fraction(int(covered.size - covered.sum()), n * n)


def _level_squares(side_length: int, level: int, member_indices: np.ndarray) -> list[SquareRegion]:
    base = level_base(level)
    size = side_length - level
    squares = []
    for idx in member_indices.tolist():
        rem = idx - base
        squares.append(
            SquareRegion.of_size(side_length, rem // (level + 1), rem % (level + 1), size)
        )
    return squares


def detect_component(
    image: Image, graph: CsrGraph, epsilon: int, fill: int = GRAY_FILL
) -> tuple[DetectionResult, Image]:
    """All minimal-size squares in the component of the whole image.

    The minimal size equals the size of the highest-indexed vertex of that
    component, since vertex indices grow as squares shrink.
    """
    labeling = connected_components(graph, epsilon)
    members = labeling.members(0)
    n = image.side_length
    levels = vertex_levels(members, n)
    deepest = int(levels.max())
    regions = tuple(_level_squares(n, deepest, members[levels == deepest]))
    result = DetectionResult(
        mode="component",
        regions=regions,
        selected_size_or_area=n - deepest,
        epsilon=epsilon,
    )
    return result, render_overlay(image, regions, fill)


def detect_squares_threshold(
    image: Image, counts: SquareCountTable, t: int, rank: int = 1
) -> DetectionResult:
    """All squares of the ``rank`` smallest sizes holding >= t colors."""
    c = counts.root_color_count
    if not 1 <= t <= c:
        raise ValueError(f"color threshold {t} not in [1, {c}]")
    if rank < 1:
        raise ValueError("rank must be >= 1")
    n = image.side_length
    regions: list[SquareRegion] = []
    selected = None
    found = 0
    for size in range(1, n + 1):
        level = n - size
        qualifying = np.argwhere(counts.level(level) >= t)
        if qualifying.size == 0:
            continue
        if selected is None:
            selected = size
        for i, j in qualifying.tolist():
            regions.append(SquareRegion.of_size(n, i, j, size))
        found += 1
        if found == rank:
            break
    assert selected is not None  # t <= c, so the whole image qualifies
    return DetectionResult(
        mode="threshold",
        regions=tuple(regions),
        selected_size_or_area=selected,
        color_threshold=t,
        rank=rank,
    )


def _shapes_of_area(area: int, side_length: int, aspect_min: Fraction, aspect_max: Fraction):
    # divisor pairs (h, w) with h * w == area, within the aspect band, h ascending
    for h in range(1, min(area, side_length) + 1):
        if area % h:
            continue
        w = area // h
        if w > side_length:
            continue
        if aspect_min <= Fraction(h, w) <= aspect_max:
            yield h, w


def detect_rects_threshold(
    image: Image,
    t: int,
    aspect_min: Fraction = Fraction(1, 3),
    aspect_max: Fraction = Fraction(3),
) -> DetectionResult:
    """All minimal-area rectangles within the aspect band holding >= t colors.

    Areas are scanned in increasing order and the scan stops at the first
    area with a qualifier, so only a thin slice of the O(N^4) rectangle
    family is ever counted.
    """
    if not 0 < aspect_min <= 1 <= aspect_max:
        raise ValueError("aspect bounds must satisfy 0 < min <= 1 <= max")
    engine = ColorMaskEngine(image)
    n = image.side_length
    c = int(engine.rect_counts(n, n)[0, 0])
    if not 1 <= t <= c:
        raise ValueError(f"color threshold {t} not in [1, {c}]")
    for area in range(1, n * n + 1):
        regions: list[RectRegion] = []
        for h, w in _shapes_of_area(area, n, aspect_min, aspect_max):
            hits = np.argwhere(engine.rect_counts(h, w) >= t)
            for row, col in hits.tolist():
                regions.append(RectRegion.at(n, row, col, h, w))
        if regions:
            return DetectionResult(
                mode="threshold",
                regions=tuple(regions),
                selected_size_or_area=area,
                color_threshold=t,
                aspect_min=aspect_min,
                aspect_max=aspect_max,
            )
    raise AssertionError("unreachable: the full image qualifies at t <= c")


def sweep(
    image: Image,
    counts: SquareCountTable,
    epsilon: int,
    n_max: int,
    cumulative: bool = True,
    fill: int = GRAY_FILL,
) -> list[tuple[DetectionResult, Image]]:
    """Detections at t = max(1, c - n*epsilon) for n = 0..n_max, with overlays.

    Cumulative overlays show the union of all regions found so far; plain
    overlays show only the n-th step's regions.
    """
    if epsilon < 1:
        raise ValueError("sweep step epsilon must be >= 1")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    c = counts.root_color_count
    steps: list[tuple[DetectionResult, Image]] = []
    shown: list[RectRegion] = []
    for n in range(n_max + 1):
        t = max(1, c - n * epsilon)
        result = detect_squares_threshold(image, counts, t)
        if cumulative:
            shown.extend(result.regions)
            overlay = render_overlay(image, shown, fill)
        else:
            overlay = render_overlay(image, result.regions, fill)
        steps.append((result, overlay))
    return steps


def regions_report(image: Image, result: DetectionResult) -> list[dict]:
    """JSON-ready region descriptions, in the result's deterministic order."""
    report = []
    for region in result.regions:
        report.append(
            {
                "kind": "square" if isinstance(region, SquareRegion) else "rect",
                "row": region.rows.start,
                "col": region.cols.start,
                "height": region.height,
                "width": region.width,
                "colors": rect_count(image, region),
            }
        )
    return report
