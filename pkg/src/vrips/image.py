"""Square grayscale images, axis-aligned sub-regions, and PGM/PNG ingestion.

An image is an N x N grid of color indices drawn from a palette of size
``color_count``. The palette size is a property of the source format (256 for
any 8-bit source), independent of how many values actually occur in the grid.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass

import numpy as np

MAX_COLORS = 256


class ImageFormatError(ValueError):
    """Unreadable, malformed, or unsupported image input."""


class RegionBoundsError(ValueError):
    """A region does not fit inside the image it is applied to."""


@dataclass(frozen=True)
class Interval:
    """The index range {start, ..., start+length-1} inside [0, bound)."""

    start: int
    length: int
    bound: int

    def __post_init__(self) -> None:
        if not 1 <= self.length <= self.bound:
            raise ValueError(f"interval length {self.length} not in [1, {self.bound}]")
        if not 0 <= self.start <= self.bound - self.length:
            raise ValueError(
                f"interval start {self.start} not in [0, {self.bound - self.length}]"
            )

    @property
    def stop(self) -> int:
        return self.start + self.length

    def as_slice(self) -> slice:
        return slice(self.start, self.stop)

    def contains(self, other: "Interval") -> bool:
        return self.start <= other.start and other.stop <= self.stop


@dataclass(frozen=True)
class RectRegion:
    """Axis-aligned rectangular sub-region, rows x cols."""

    rows: Interval
    cols: Interval

    @classmethod
    def at(cls, bound: int, row: int, col: int, height: int, width: int) -> "RectRegion":
        return cls(Interval(row, height, bound), Interval(col, width, bound))

    @property
    def height(self) -> int:
        return self.rows.length

    @property
    def width(self) -> int:
        return self.cols.length

    @property
    def area(self) -> int:
        return self.rows.length * self.cols.length

    def contains(self, other: "RectRegion") -> bool:
        return self.rows.contains(other.rows) and self.cols.contains(other.cols)


@dataclass(frozen=True)
class SquareRegion(RectRegion):
    """RectRegion with equal side lengths; the common length is its size."""

    def __post_init__(self) -> None:
        if self.rows.length != self.cols.length:
            raise ValueError("square region requires equal row and column lengths")
        if self.rows.bound != self.cols.bound:
            raise ValueError("square region requires equal row and column bounds")

    @classmethod
    def of_size(cls, bound: int, row: int, col: int, size: int) -> "SquareRegion":
        return cls(Interval(row, size, bound), Interval(col, size, bound))

    @property
    def size(self) -> int:
        return self.rows.length


@dataclass(frozen=True, eq=False)
class Image:
    """Immutable N x N grid of color indices in [0, color_count)."""

    pixels: np.ndarray
    color_count: int

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError(f"pixels must be a nonempty square grid, got {arr.shape}")
        if not 1 <= self.color_count <= MAX_COLORS:
            raise ValueError(f"color_count {self.color_count} not in [1, {MAX_COLORS}]")
        arr = arr.astype(np.uint8, copy=True)
        if int(arr.max()) >= self.color_count:
            raise ValueError(
                f"pixel value {int(arr.max())} exceeds color_count {self.color_count}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_rows(cls, rows, color_count: int | None = None) -> "Image":
        arr = np.asarray(rows, dtype=np.int64)
        if color_count is None:
            color_count = int(arr.max()) + 1
        return cls(arr, color_count)

    @property
    def side_length(self) -> int:
        return self.pixels.shape[0]

    def observed_colors(self) -> set[int]:
        return {int(v) for v in np.unique(self.pixels)}

    def region_pixels(self, region: RectRegion) -> np.ndarray:
        _check_region(self, region)
        return self.pixels[region.rows.as_slice(), region.cols.as_slice()]

    def whole_region(self) -> SquareRegion:
        n = self.side_length
        return SquareRegion.of_size(n, 0, 0, n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Image):
            return NotImplemented
        return self.color_count == other.color_count and np.array_equal(
            self.pixels, other.pixels
        )


def _check_region(image: Image, region: RectRegion) -> None:
    n = image.side_length
    if region.rows.bound != n or region.cols.bound != n:
        raise RegionBoundsError(
            f"region bounds {region.rows.bound}x{region.cols.bound} do not match image side {n}"
        )


def region_color_set(image: Image, region: RectRegion) -> set[int]:
    """Set of pixel values occurring in the region."""
    sub = image.region_pixels(region)
    return {int(v) for v in np.unique(sub)}


def rotate90(image: Image) -> Image:
    """Clockwise quarter turn: output (r, c) = input (N-1-c, r)."""
    return Image(np.rot90(image.pixels, k=-1).copy(), image.color_count)


# --- file ingestion -------------------------------------------------------

# BT.601 luma weights for RGB sources.
_LUMA_R, _LUMA_G, _LUMA_B = 0.299, 0.587, 0.114


def load_image(path: str | os.PathLike, crop: bool = False) -> Image:
    """Read a PGM (P2/P5) or PNG file as a square grayscale image.

    RGB/RGBA PNG is reduced to 8-bit luma (alpha ignored). Non-square inputs
    are center-cropped to the smaller dimension when ``crop`` is set and
    rejected otherwise; an odd surplus drops the extra row/column from the
    bottom/right.
    """
    path = os.fspath(path)
    try:
        with open(path, "rb") as fh:
            head = fh.read(2)
    except OSError as exc:
        raise ImageFormatError(f"cannot read {path}: {exc}") from exc
    if head in (b"P2", b"P5"):
        grid, color_count = _read_pgm(path)
    elif head == b"\x89P":
        grid, color_count = _read_png(path)
    else:
        raise ImageFormatError(f"{path}: not a PGM (P2/P5) or PNG file")
    grid = _square_crop(grid, path, crop)
    return Image(grid, color_count)


def _square_crop(grid: np.ndarray, path: str, crop: bool) -> np.ndarray:
    h, w = grid.shape
    if h == w:
        return grid
    if not crop:
        raise ImageFormatError(f"{path}: image is {h}x{w}, not square (pass crop to center-crop)")
    side = min(h, w)
    top = (h - side) // 2
    left = (w - side) // 2
    return grid[top : top + side, left : left + side]


def _read_pgm(path: str) -> tuple[np.ndarray, int]:
    with open(path, "rb") as fh:
        data = fh.read()
    magic, pos = _pgm_token(data, 0, path)
    fields = []
    for _ in range(3):
        tok, pos = _pgm_token(data, pos, path)
        fields.append(_pgm_int(tok, path))
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ImageFormatError(f"{path}: bad PGM dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise ImageFormatError(f"{path}: PGM maxval {maxval} unsupported (need 1..255)")
    if magic == b"P5":
        # binary raster begins after exactly one whitespace byte
        raster = data[pos + 1 : pos + 1 + width * height]
        if len(raster) < width * height:
            raise ImageFormatError(f"{path}: truncated P5 raster")
        grid = np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()
    else:
        values = []
        while len(values) < width * height:
            tok, pos = _pgm_token(data, pos, path)
            values.append(_pgm_int(tok, path))
        grid = np.array(values, dtype=np.int64).reshape(height, width)
    if int(grid.max()) > maxval:
        raise ImageFormatError(f"{path}: pixel value exceeds declared maxval {maxval}")
    return grid.astype(np.uint8), maxval + 1


def _pgm_token(data: bytes, pos: int, path: str) -> tuple[bytes, int]:
    # whitespace-separated token, skipping '#' comments through end of line
    n = len(data)
    while pos < n:
        b = data[pos]
        if b in b" \t\r\n\x0b\x0c":
            pos += 1
        elif b == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    if pos >= n:
        raise ImageFormatError(f"{path}: truncated PGM header")
    start = pos
    while pos < n and data[pos] not in b" \t\r\n\x0b\x0c":
        pos += 1
    return data[start:pos], pos


def _pgm_int(token: bytes, path: str) -> int:
    try:
        return int(token)
    except ValueError as exc:
        raise ImageFormatError(f"{path}: bad PGM token {token!r}") from exc


def _read_png(path: str) -> tuple[np.ndarray, int]:
    from PIL import Image as PilImage, UnidentifiedImageError

    try:
        with PilImage.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "1":
                arr = np.asarray(im.convert("L"))
            elif mode == "L":
                arr = np.asarray(im)
            elif mode == "LA":
                arr = np.asarray(im)[:, :, 0]
            elif mode in ("P", "RGB", "RGBA"):
                rgb = np.asarray(im.convert("RGBA"))[:, :, :3].astype(np.float64)
                luma = _LUMA_R * rgb[:, :, 0] + _LUMA_G * rgb[:, :, 1] + _LUMA_B * rgb[:, :, 2]
                arr = np.clip(np.rint(luma), 0, 255).astype(np.uint8)
            else:
                raise ImageFormatError(f"{path}: unsupported PNG mode {mode!r}")
    except UnidentifiedImageError as exc:
        raise ImageFormatError(f"{path}: corrupt PNG: {exc}") from exc
    return arr.astype(np.uint8).copy(), MAX_COLORS


# --- PGM emission ---------------------------------------------------------


def encode_pgm(image: Image) -> str:
    """Canonical P2 text: one grid row per line, maxval = color_count - 1."""
    lines = [f"P2\n{image.side_length} {image.side_length}\n{image.color_count - 1}"]
    for row in image.pixels:
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def write_pgm(image: Image, path: str | os.PathLike) -> None:
    write_text_atomic(path, encode_pgm(image))


def write_text_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see partial output."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
