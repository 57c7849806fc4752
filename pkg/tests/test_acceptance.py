"""Acceptance suite: one test per numbered criterion, each printing a
PASS line with its measured time (run with -s to see them)."""

import time
from collections import Counter
from fractions import Fraction
from itertools import product

import numpy as np

from vrips import (
    Image,
    RectRegion,
    all_square_counts,
    build_graph,
    connected_components,
    depth_bruteforce,
    depth_fast,
    depth_report,
    depth_via_complex,
    detect_component,
    detect_rects_threshold,
    detect_squares_threshold,
    distinct_colors_oracle,
    h0_barcode,
    rotate90,
    vertex_count,
    vertex_index,
    vertex_unindex,
    vr_edge_set,
)
from vrips.graph import VertexCoord, edge_count, shortest_path_lengths, level_base
from conftest import EX3_ROWS, random_image


def _partition_by_bfs(n_vertices, edges):
    adjacency = [set() for _ in range(n_vertices)]
    for a, b in edges:
        adjacency[a].add(b)
        adjacency[b].add(a)
    label = [-1] * n_vertices
    next_label = 0
    for start in range(n_vertices):
        if label[start] >= 0:
            continue
        stack = [start]
        label[start] = next_label
        while stack:
            v = stack.pop()
            for u in adjacency[v]:
                if label[u] < 0:
                    label[u] = next_label
                    stack.append(u)
        next_label += 1
    return label, next_label


def test_criterion_1_worked_example_components():
    image = Image.from_rows(EX3_ROWS, 2)
    graph = build_graph(image, all_square_counts(image))

    def run():
        results = [connected_components(graph, eps).component_count for eps in (0, 1, 2, 10)]
        return results, h0_barcode(graph).pairs()

    run()  # warm up
    best = min(_timed(run)[1] for _ in range(5))
    counts, barcode = run()
    assert counts == [7, 1, 1, 1]
    assert barcode == [(0, 7), (1, 1)]
    assert best < 1e-3, f"components+barcode took {best * 1e3:.3f} ms"
    print(f"\nPASS criterion 1 (worked-example components): {best * 1e6:.0f} us")


def _timed(fn):
    start = time.perf_counter()
    result = fn()
    return result, time.perf_counter() - start


def test_criterion_2_worked_example_indices():
    def run():
        table = {}
        for k in range(3):
            for i in range(k + 1):
                for j in range(k + 1):
                    g = vertex_index(VertexCoord(k, i, j), 3)
                    assert vertex_unindex(g, 3) == VertexCoord(k, i, j)
                    table[(k, i, j)] = g
        return table

    run()
    table, elapsed = _timed(run)
    assert table[(0, 0, 0)] == 0
    level1 = [table[(1, i, j)] for i in range(2) for j in range(2)]
    assert level1 == [1, 2, 3, 4]
    level2 = [table[(2, i, j)] for i in range(3) for j in range(3)]
    assert level2 == list(range(5, 14))
    assert elapsed < 1e-3, f"index table took {elapsed * 1e3:.3f} ms"
    print(f"\nPASS criterion 2 (worked-example indices): {elapsed * 1e6:.0f} us")


def _assert_counts_match_oracle(image):
    table = all_square_counts(image)
    n = image.side_length
    for k in range(n):
        size = n - k
        level = table.level(k)
        for i in range(k + 1):
            for j in range(k + 1):
                region = RectRegion.at(n, i, j, size, size)
                assert level[i, j] == distinct_colors_oracle(image, region), (k, i, j)


def test_criterion_3_count_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(2023)
    cases = [2] * 34 + [8] * 33 + [256] * 33
    for palette in cases:
        _assert_counts_match_oracle(random_image(rng, 16, palette))
    for bits in product((0, 1), repeat=9):
        _assert_counts_match_oracle(Image.from_rows(np.array(bits).reshape(3, 3), 2))
    elapsed = time.perf_counter() - start
    assert elapsed < 10, f"count cross-check took {elapsed:.1f} s"
    print(f"\nPASS criterion 3 (count oracle equivalence, 100+512 images): {elapsed:.2f} s")


def test_criterion_4_vr_semantics_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(4242)
    palettes = [2] * 10 + [4] * 10 + [8] * 10
    for palette in palettes:
        image = random_image(rng, 6, palette)
        graph = build_graph(image, all_square_counts(image))
        n = graph.vertex_count
        dist = [shortest_path_lengths(graph, a) for a in range(n)]
        max_w = int(graph.w.max()) if graph.edge_count else 0
        spot_eps = int(rng.integers(0, max_w + 1))
        derived_spot = {
            (a, b) for a in range(n) for b in range(a + 1, n) if dist[a][b] <= spot_eps
        }
        assert vr_edge_set(graph, spot_eps) == derived_spot
        for eps in range(max_w + 1):
            labeling = connected_components(graph, eps)
            vr_edges = [
                (a, b) for a in range(n) for b in range(a + 1, n) if dist[a][b] <= eps
            ]
            oracle_labels, oracle_count = _partition_by_bfs(n, vr_edges)
            assert labeling.component_count == oracle_count
            assert labeling.labels.tolist() == oracle_labels
    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"VR cross-check took {elapsed:.1f} s"
    print(f"\nPASS criterion 4 (VR semantics vs metric oracle, 30 images): {elapsed:.2f} s")


def test_criterion_5_depth_cross_checks():
    start = time.perf_counter()

    # exhaustive two-valued 3x3 set: fast == brute, and tabulate the relation
    # between 3*depth_fast and the complex-based maximal-outside size d
    relation = Counter()
    for bits in product((0, 1), repeat=9):
        image = Image.from_rows(np.array(bits).reshape(3, 3), 2)
        counts = all_square_counts(image)
        fast = depth_fast(image, counts)
        assert fast == depth_bruteforce(image), bits
        if len(image.observed_colors()) == 1:
            continue
        graph = build_graph(image, counts)
        d_outside = int(depth_via_complex(graph) * 3) - 1
        relation[(int(fast * 3), d_outside)] += 1
    print("\n  relation table over all 510 non-constant two-valued 3x3 images")
    print("  (M*depth_fast, complex-based d) -> images")
    for pair in sorted(relation):
        print(f"    {pair} -> {relation[pair]}")
    assert all(units == d for units, d in relation), relation
    assert sum(relation.values()) == 510

    # random 4x4 images with few colors
    rng = np.random.default_rng(555)
    for _ in range(100):
        image = random_image(rng, 4, 4)
        assert len(image.observed_colors()) <= 4
        assert depth_fast(image) == depth_bruteforce(image)

    # depth == 1/M exactly for constants; above it for rich-palette images
    # (>= 5 attained colors guarantees a color-deficient size-2 square)
    checked = 0
    while checked < 800:
        side = int(rng.integers(3, 8))
        image = random_image(rng, side, int(rng.integers(6, 257)))
        if len(image.observed_colors()) < 5:
            continue
        checked += 1
        assert depth_fast(image) > Fraction(1, side)
    for _ in range(200):
        side = int(rng.integers(1, 8))
        image = Image.from_rows([[int(rng.integers(0, 256))] * side] * side, 256)
        assert depth_fast(image) == Fraction(1, side)

    # the worked example's documented tension between the two formulas
    ex3 = Image.from_rows(EX3_ROWS, 2)
    report = depth_report(ex3)
    assert report.brute == Fraction(2, 3)
    assert report.via_complex == 1
    assert report.complex_discrepancy == 1
    elapsed = time.perf_counter() - start
    print(f"PASS criterion 5 (depth cross-checks + relation table): {elapsed:.2f} s")


def test_criterion_6_detection_properties():
    start = time.perf_counter()
    rng = np.random.default_rng(66)

    for _ in range(100):
        image = random_image(rng, 12, int(rng.integers(2, 17)))
        counts = all_square_counts(image)
        graph = build_graph(image, counts)
        c = counts.root_color_count

        # (a) the color-threshold shortcut at t = c reproduces component mode
        shortcut = detect_squares_threshold(image, counts, c)
        component, _ = detect_component(image, graph, 0)
        keys = lambda result: {(r.rows.start, r.cols.start, r.height) for r in result.regions}
        assert keys(shortcut) == keys(component)

        # (b) every square holding >= c - eps colors joins component 0
        for eps in range(6):
            labels = connected_components(graph, eps).labels
            need = c - eps
            for k in range(12):
                level_counts = counts.level(k)
                base = level_base(k)
                level_labels = labels[base : base + (k + 1) ** 2].reshape(k + 1, k + 1)
                assert (level_labels[level_counts >= need] == 0).all()

    for _ in range(50):
        image = random_image(rng, 12, int(rng.integers(2, 17)))
        counts = all_square_counts(image)
        c = counts.root_color_count
        turned = rotate90(image)
        turned_counts = all_square_counts(turned)

        # (c) detection commutes with rotation; barcode and depth are invariant
        base = detect_squares_threshold(image, counts, c)
        rotated = detect_squares_threshold(turned, turned_counts, c)
        expected = {
            (col, 12 - size - row, size)
            for row, col, size in (
                (r.rows.start, r.cols.start, r.height) for r in base.regions
            )
        }
        got = {(r.rows.start, r.cols.start, r.height) for r in rotated.regions}
        assert got == expected
        assert h0_barcode(build_graph(image, counts)) == h0_barcode(
            build_graph(turned, turned_counts)
        )
        assert depth_fast(image, counts) == depth_fast(turned, turned_counts)

    elapsed = time.perf_counter() - start
    assert elapsed < 30, f"detection properties took {elapsed:.1f} s"
    print(f"\nPASS criterion 6 (detection properties, 150 images): {elapsed:.2f} s")


def test_criterion_7_planted_object_detection():
    start = time.perf_counter()
    grid = np.zeros((64, 64), dtype=np.uint8)
    patch = np.arange(64).reshape(8, 8) // 2 + 1  # 32 distinct colors, each twice
    grid[20:28, 20:28] = patch
    image = Image(grid, 256)
    assert len(image.observed_colors()) == 33

    counts = all_square_counts(image)
    result = detect_squares_threshold(image, counts, t=33)

    # brute-force scan: smallest size with any square attaining 33 colors
    oracle_size = None
    oracle_hits = set()
    for size in range(1, 65):
        for r in range(65 - size):
            for col in range(65 - size):
                region = RectRegion.at(64, r, col, size, size)
                if distinct_colors_oracle(image, region) >= 33:
                    oracle_hits.add((r, col, size))
        if oracle_hits:
            oracle_size = size
            break

    assert result.selected_size_or_area == oracle_size
    got = {(r.rows.start, r.cols.start, r.size) for r in result.regions}
    assert got == oracle_hits
    for row, col, size in got:
        assert row < 28 and row + size > 20 and col < 28 and col + size > 20, (
            "detected square misses the planted patch"
        )
    elapsed = time.perf_counter() - start
    assert elapsed < 5, f"planted-object test took {elapsed:.1f} s"
    print(
        f"\nPASS criterion 7 (planted object, min size {oracle_size}, "
        f"{len(got)} squares): {elapsed:.2f} s"
    )


def test_criterion_8_performance_budget():
    rng = np.random.default_rng(100100)
    image = random_image(rng, 100, 256)

    start = time.perf_counter()
    counts = all_square_counts(image)
    graph = build_graph(image, counts)
    build_elapsed = time.perf_counter() - start
    assert vertex_count(100) == 338_350
    assert edge_count(100) == 1_313_400
    assert graph.vertex_count == 338_350
    assert graph.edge_count == 1_313_400
    assert build_elapsed <= 10, f"counts+graph took {build_elapsed:.2f} s"

    connected_components(graph, 2)  # warm up
    worst = 0.0
    for eps in (0, 1, 5, 50, 255):
        _, elapsed = _timed(lambda: connected_components(graph, eps))
        worst = max(worst, elapsed)
        assert elapsed <= 0.1, f"components at eps={eps} took {elapsed * 1e3:.1f} ms"

    c = counts.root_color_count
    start = time.perf_counter()
    rects = detect_rects_threshold(image, c)
    rect_elapsed = time.perf_counter() - start
    assert rect_elapsed <= 120, f"rectangle detection took {rect_elapsed:.1f} s"
    assert rects.regions

    print(
        f"\nPASS criterion 8 (performance, N=100): counts+graph {build_elapsed:.2f} s, "
        f"components worst {worst * 1e3:.1f} ms, rectangles {rect_elapsed:.2f} s "
        f"(area {rects.selected_size_or_area})"
    )


def test_criterion_9_cli_determinism(tmp_path):
    from click.testing import CliRunner

    from vrips.cli import main

    start = time.perf_counter()
    rng = np.random.default_rng(99)
    big = random_image(rng, 12, 64)
    from vrips import write_pgm

    source = tmp_path / "field.pgm"
    write_pgm(big, source)

    commands = [
        ["build"],
        ["components", "--epsilon", "1"],
        ["barcode"],
        ["detect", "--mode", "component", "--epsilon", "0"],
        ["detect", "--mode", "threshold", "--threshold", "4", "--rank", "2"],
        ["detect", "--mode", "threshold", "--threshold", "4", "--class", "rectangles"],
        ["sweep", "--epsilon", "2", "--n-max", "3"],
        ["sweep", "--epsilon", "2", "--n-max", "3", "--cumulative"],
        ["depth"],
        ["depth", "--method", "fast"],
    ]
    runner = CliRunner()
    for idx, command in enumerate(commands):
        outputs = []
        for attempt in ("a", "b"):
            out_dir = tmp_path / f"{idx}{attempt}"
            result = runner.invoke(
                main, ["--input", str(source), "--out", str(out_dir), *command]
            )
            assert result.exit_code == 0, (command, result.output)
            files = {
                path.name: path.read_bytes() for path in sorted(out_dir.iterdir())
            }
            outputs.append((result.output, files))
        assert outputs[0][0] == outputs[1][0], command
        assert outputs[0][1].keys() == outputs[1][1].keys(), command
        for name in outputs[0][1]:
            assert outputs[0][1][name] == outputs[1][1][name], (command, name)
    elapsed = time.perf_counter() - start
    print(f"\nPASS criterion 9 (CLI determinism, {len(commands)} commands x2): {elapsed:.2f} s")
