"""Command-line interface: build, components, barcode, detect, sweep, depth.

Every command reads one image, writes its outputs under the chosen directory
as <stem>_<command>[_<n>].<ext>, and is deterministic: identical inputs and
flags produce byte-identical files. Exit codes: 0 success, 1 I/O error,
2 invalid arguments.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import click

from .counts import all_square_counts
from .detect import (
    GRAY_FILL,
    coverage_mask,
    detect_component,
    detect_rects_threshold,
    detect_squares_threshold,
    render_overlay,
    regions_report,
    sweep,
)
from .depth import depth_report
from .graph import build_graph, edge_count, vertex_count, write_csr_csv
from .homology import connected_components, h0_barcode, write_barcode_csv, write_labels_csv
from .image import Image, ImageFormatError, load_image, write_pgm, write_text_atomic


@dataclass
class RunConfig:
    """Validated inputs for one command invocation."""

    input_path: str
    out_dir: str
    crop: bool = False
    fill: int = GRAY_FILL
    epsilon: int | None = None
    color_threshold: int | None = None
    mode: str | None = None
    rank: int = 1
    region_class: str = "squares"
    aspect_min: Fraction = Fraction(1, 3)
    aspect_max: Fraction = Fraction(3)
    n_max: int | None = None
    cumulative: bool = False
    method: str = "all"

    @property
    def stem(self) -> str:
        return os.path.splitext(os.path.basename(self.input_path))[0]

    def out_path(self, suffix: str) -> str:
        return os.path.join(self.out_dir, f"{self.stem}_{suffix}")


def _load(config: RunConfig) -> Image:
    os.makedirs(config.out_dir, exist_ok=True)
    return load_image(config.input_path, crop=config.crop)


def cmd_build(config: RunConfig) -> list[str]:
    image = _load(config)
    graph = build_graph(image, all_square_counts(image))
    write_csr_csv(graph, config.out_path("build.csv"))
    n = image.side_length
    return [f"vertices={vertex_count(n)} edges={edge_count(n)}"]


def cmd_components(config: RunConfig) -> list[str]:
    image = _load(config)
    graph = build_graph(image, all_square_counts(image))
    labeling = connected_components(graph, config.epsilon)
    write_labels_csv(labeling, config.out_path("components.csv"))
    return [f"components={labeling.component_count}"]


def cmd_barcode(config: RunConfig) -> list[str]:
    image = _load(config)
    graph = build_graph(image, all_square_counts(image))
    barcode = h0_barcode(graph)
    write_barcode_csv(barcode, config.out_path("barcode.csv"))
    return [f"steps={len(barcode.thresholds)}"]


def cmd_detect(config: RunConfig) -> list[str]:
    image = _load(config)
    if config.mode == "component":
        counts = all_square_counts(image)
        graph = build_graph(image, counts)
        result, overlay = detect_component(image, graph, config.epsilon, fill=config.fill)
    elif config.region_class == "rectangles":
        result = detect_rects_threshold(
            image, config.color_threshold, config.aspect_min, config.aspect_max
        )
        overlay = render_overlay(image, result.regions, fill=config.fill)
    else:
        counts = all_square_counts(image)
        result = detect_squares_threshold(image, counts, config.color_threshold, config.rank)
        overlay = render_overlay(image, result.regions, fill=config.fill)
    report = regions_report(image, result)
    write_text_atomic(config.out_path("detect.json"), json.dumps(report, indent=2) + "\n")
    write_pgm(overlay, config.out_path("detect.pgm"))
    return [f"regions={len(result.regions)} selected={result.selected_size_or_area}"]


def cmd_sweep(config: RunConfig) -> list[str]:
    image = _load(config)
    counts = all_square_counts(image)
    steps = sweep(
        image,
        counts,
        config.epsilon,
        config.n_max,
        cumulative=config.cumulative,
        fill=config.fill,
    )
    lines = []
    shown = []
    for n, (result, overlay) in enumerate(steps):
        write_pgm(overlay, config.out_path(f"sweep_{n:03d}.pgm"))
        if config.cumulative:
            shown.extend(result.regions)
            covered = coverage_mask(image, shown)
        else:
            covered = coverage_mask(image, result.regions)
        gray = int(covered.size - covered.sum())
        lines.append(
            f"n={n} t={result.color_threshold} regions={len(result.regions)} "
            f"gray_fraction={gray}/{covered.size}"
        )
    return lines


def cmd_depth(config: RunConfig) -> list[str]:
    image = _load(config)
    report = depth_report(image, method=config.method)
    return [report.summary()]


# --- click wiring -----------------------------------------------------------


@click.group()
@click.option("--input", "input_path", required=True, help="Input PGM (P2/P5) or PNG file.")
@click.option("--out", "out_dir", required=True, help="Directory for output files.")
@click.option("--crop", is_flag=True, help="Center-crop non-square inputs.")
@click.option(
    "--fill",
    type=click.IntRange(0, 255),
    default=GRAY_FILL,
    show_default=True,
    help="Fill value for undetected overlay pixels.",
)
@click.pass_context
def main(ctx: click.Context, input_path: str, out_dir: str, crop: bool, fill: int) -> None:
    """Square-region color-count graphs: persistence and salient-region detection."""
    ctx.obj = RunConfig(input_path=input_path, out_dir=out_dir, crop=crop, fill=fill)


def _run(command, config: RunConfig) -> None:
    try:
        lines = command(config)
    except (ImageFormatError, OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    for line in lines:
        click.echo(line)


@main.command("build")
@click.pass_obj
def build_command(config: RunConfig) -> None:
    """Write the weighted graph as CSR CSV."""
    _run(cmd_build, config)


@main.command("components")
@click.option("--epsilon", type=click.IntRange(min=0), required=True)
@click.pass_obj
def components_command(config: RunConfig, epsilon: int) -> None:
    """Write the component labeling at a weight threshold."""
    config.epsilon = epsilon
    _run(cmd_components, config)


@main.command("barcode")
@click.pass_obj
def barcode_command(config: RunConfig) -> None:
    """Write the component-count step function over all thresholds."""
    _run(cmd_barcode, config)


@main.command("detect")
@click.option("--mode", type=click.Choice(["component", "threshold"]), required=True)
@click.option("--epsilon", type=click.IntRange(min=0), default=None)
@click.option("--threshold", "color_threshold", type=click.IntRange(min=1), default=None)
@click.option("--rank", type=click.IntRange(min=1), default=1, show_default=True)
@click.option(
    "--class",
    "region_class",
    type=click.Choice(["squares", "rectangles"]),
    default="squares",
    show_default=True,
)
@click.option("--aspect-min", default="1/3", show_default=True)
@click.option("--aspect-max", default="3", show_default=True)
@click.pass_obj
def detect_command(
    config: RunConfig,
    mode: str,
    epsilon: int | None,
    color_threshold: int | None,
    rank: int,
    region_class: str,
    aspect_min: str,
    aspect_max: str,
) -> None:
    """Write detected regions (JSON) and their overlay (PGM)."""
    if mode == "component":
        if epsilon is None:
            raise click.UsageError("--mode component requires --epsilon")
        if color_threshold is not None:
            raise click.UsageError("--threshold does not apply to component mode")
        if region_class == "rectangles":
            raise click.UsageError("component mode detects squares only")
    else:
        if color_threshold is None:
            raise click.UsageError("--mode threshold requires --threshold")
        if epsilon is not None:
            raise click.UsageError("--epsilon does not apply to threshold mode")
        if region_class == "rectangles" and rank != 1:
            raise click.UsageError("rectangle detection supports rank 1 only")
    config.mode = mode
    config.epsilon = epsilon
    config.color_threshold = color_threshold
    config.rank = rank
    config.region_class = region_class
    config.aspect_min = _parse_aspect(aspect_min, "--aspect-min")
    config.aspect_max = _parse_aspect(aspect_max, "--aspect-max")
    if not config.aspect_min <= 1 <= config.aspect_max:
        raise click.UsageError("aspect bounds must satisfy min <= 1 <= max")
    _run(cmd_detect, config)


def _parse_aspect(text: str, flag: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(f"{flag}: not a rational number: {text!r}") from exc
    if value <= 0:
        raise click.UsageError(f"{flag}: must be positive")
    return value


@main.command("sweep")
@click.option("--epsilon", type=click.IntRange(min=1), required=True)
@click.option("--n-max", type=click.IntRange(min=0), required=True)
@click.option("--cumulative", is_flag=True)
@click.pass_obj
def sweep_command(config: RunConfig, epsilon: int, n_max: int, cumulative: bool) -> None:
    """Write overlays for thresholds t = c - n*epsilon, n = 0..n_max."""
    config.epsilon = epsilon
    config.n_max = n_max
    config.cumulative = cumulative
    _run(cmd_sweep, config)


@main.command("depth")
@click.option(
    "--method",
    type=click.Choice(["all", "fast", "brute", "complex"]),
    default="all",
    show_default=True,
)
@click.pass_obj
def depth_command(config: RunConfig, method: str) -> None:
    """Print the depth indicator as exact fractions."""
    config.method = method
    _run(cmd_depth, config)
