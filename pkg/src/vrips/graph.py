"""Vertex/edge index maps and the weighted inclusion graph over all squares.

Vertices are squares, addressed by (level k, row offset i, col offset j) with
size = N - k. Each square at level k <= N-2 has four edges to the size-1-
smaller squares it contains; the edge weight is the difference of distinct-
color counts (nonnegative, since a contained square never has more colors).
Edges are stored once, parent to child, as parallel CSR-style arrays in a
fixed enumeration order; connectivity treats them as undirected.
"""

from __future__ import annotations

import csv
import heapq
import os
from dataclasses import dataclass

import numpy as np

from .image import Image, SquareRegion, write_text_atomic
from .counts import SquareCountTable

CHILD_OFFSETS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class VertexCoord:
    """Square address: level k, offsets (i, j); the square's size is N - k."""

    k: int
    i: int
    j: int


def vertex_count(side_length: int) -> int:
    n = side_length
    return n * (n + 1) * (2 * n + 1) // 6


def edge_count(side_length: int) -> int:
    n = side_length
    return 4 * ((n - 1) * n * (2 * n - 1) // 6)


def level_base(k: int) -> int:
    """Index of the first vertex at level k (= number of coarser vertices)."""
    return k * (k + 1) * (2 * k + 1) // 6


def _check_coord(coord: VertexCoord, side_length: int) -> None:
    if not 0 <= coord.k <= side_length - 1:
        raise ValueError(f"level {coord.k} out of range for side {side_length}")
    if not (0 <= coord.i <= coord.k and 0 <= coord.j <= coord.k):
        raise ValueError(f"offsets {(coord.i, coord.j)} out of range for level {coord.k}")


def vertex_index(coord: VertexCoord, side_length: int) -> int:
    """Order-preserving index of a vertex: coarser levels first, then row-major."""
    _check_coord(coord, side_length)
    return level_base(coord.k) + (coord.k + 1) * coord.i + coord.j


def vertex_unindex(index: int, side_length: int) -> VertexCoord:
    """Inverse of vertex_index."""
    if not 0 <= index < vertex_count(side_length):
        raise ValueError(f"vertex index {index} out of range for side {side_length}")
    k = 0
    while level_base(k + 1) <= index:
        k += 1
    rem = index - level_base(k)
    return VertexCoord(k, rem // (k + 1), rem % (k + 1))


def vertex_levels(indices: np.ndarray, side_length: int) -> np.ndarray:
    """Level of each vertex index, vectorized."""
    bases = np.array([level_base(k) for k in range(side_length + 1)], dtype=np.int64)
    return np.searchsorted(bases, np.asarray(indices), side="right") - 1


def edge_index(parent: VertexCoord, child_slot: int, side_length: int) -> int:
    """Index of the edge from ``parent`` to its ``child_slot``-th child."""
    _check_coord(parent, side_length)
    if parent.k > side_length - 2:
        raise ValueError("vertices at the finest level have no children")
    if child_slot not in (0, 1, 2, 3):
        raise ValueError(f"child slot {child_slot} not in 0..3")
    return 4 * vertex_index(parent, side_length) + child_slot


def child_coord(parent: VertexCoord, child_slot: int) -> VertexCoord:
    di, dj = CHILD_OFFSETS[child_slot]
    return VertexCoord(parent.k + 1, parent.i + di, parent.j + dj)


def square_of(coord: VertexCoord, side_length: int) -> SquareRegion:
    _check_coord(coord, side_length)
    return SquareRegion.of_size(side_length, coord.i, coord.j, side_length - coord.k)


@dataclass(eq=False)
class CsrGraph:
    """Parallel edge arrays (source, target, weight) in edge-index order.

    ``w_tilde`` is absent until thresholding; entry 1 keeps the edge in the
    thresholded subgraph, 0 deletes it.
    """

    side_length: int
    v_from: np.ndarray
    v_to: np.ndarray
    w: np.ndarray
    w_tilde: np.ndarray | None = None

    def __post_init__(self) -> None:
        expected = edge_count(self.side_length)
        for name in ("v_from", "v_to", "w"):
            arr = getattr(self, name)
            if arr.shape != (expected,):
                raise ValueError(f"{name} must have {expected} entries, got {arr.shape}")
            arr.flags.writeable = False
        if self.w_tilde is not None:
            if self.w_tilde.shape != (expected,):
                raise ValueError("w_tilde length does not match the edge arrays")
            self.w_tilde.flags.writeable = False

    @property
    def vertex_count(self) -> int:
        return vertex_count(self.side_length)

    @property
    def edge_count(self) -> int:
        return self.w.shape[0]


def build_graph(image: Image, counts: SquareCountTable) -> CsrGraph:
    """Emit all parent-to-child edges with count-difference weights.

    The emission order is levels coarse to fine, parents row-major within a
    level, four children per parent; entry s therefore sits at edge index s.
    """
    n = image.side_length
    if counts.side_length != n:
        raise ValueError("count table does not match the image side length")
    from_parts: list[np.ndarray] = []
    to_parts: list[np.ndarray] = []
    w_parts: list[np.ndarray] = []
    for k in range(n - 1):
        side = k + 1
        parent_counts = counts.level(k).astype(np.int32)
        kid_counts = counts.level(k + 1).astype(np.int32)
        i, j = np.mgrid[0:side, 0:side]
        g_parent = level_base(k) + (k + 1) * i + j
        child_bases = level_base(k + 1)
        per_slot_to = []
        per_slot_w = []
        for di, dj in CHILD_OFFSETS:
            per_slot_to.append(child_bases + (k + 2) * (i + di) + (j + dj))
            per_slot_w.append(parent_counts - kid_counts[di : di + side, dj : dj + side])
        from_parts.append(np.repeat(g_parent.ravel(), 4))
        to_parts.append(np.stack(per_slot_to, axis=-1).ravel())
        w_parts.append(np.stack(per_slot_w, axis=-1).ravel())
    if from_parts:
        v_from = np.concatenate(from_parts).astype(np.int32)
        v_to = np.concatenate(to_parts).astype(np.int32)
        signed_w = np.concatenate(w_parts)
        if signed_w.size and int(signed_w.min()) < 0:
            raise ValueError("count table violates containment monotonicity")
        w = signed_w.astype(np.uint16)
    else:
        v_from = np.zeros(0, dtype=np.int32)
        v_to = np.zeros(0, dtype=np.int32)
        w = np.zeros(0, dtype=np.uint16)
    return CsrGraph(n, v_from, v_to, w)


def threshold(graph: CsrGraph, epsilon: int) -> CsrGraph:
    """Flag each edge: 1 = kept (weight <= epsilon), 0 = deleted."""
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    keep = (graph.w <= epsilon).astype(np.uint8)
    return CsrGraph(graph.side_length, graph.v_from, graph.v_to, graph.w, keep)


# --- shortest-path pseudo-metric (correctness oracle, small instances) -----


def _adjacency(graph: CsrGraph) -> list[list[tuple[int, int]]]:
    adj: list[list[tuple[int, int]]] = [[] for _ in range(graph.vertex_count)]
    for a, b, wt in zip(graph.v_from.tolist(), graph.v_to.tolist(), graph.w.tolist()):
        adj[a].append((b, wt))
        adj[b].append((a, wt))
    return adj


def shortest_path_lengths(graph: CsrGraph, source: int) -> list[int]:
    """Cheapest path weight from ``source`` to every vertex (Dijkstra)."""
    if not 0 <= source < graph.vertex_count:
        raise ValueError(f"vertex index {source} out of range")
    adj = _adjacency(graph)
    dist = [-1] * graph.vertex_count
    heap = [(0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if dist[v] >= 0:
            continue
        dist[v] = d
        for u, wt in adj[v]:
            if dist[u] < 0:
                heapq.heappush(heap, (d + wt, u))
    return dist


def pseudo_metric(graph: CsrGraph, a: int, b: int) -> int:
    """Minimal total edge weight over paths from a to b.

    Exhaustive shortest-path search; meant as a correctness oracle on small
    instances, not a bulk API.
    """
    if not 0 <= b < graph.vertex_count:
        raise ValueError(f"vertex index {b} out of range")
    return shortest_path_lengths(graph, a)[b]


# --- CSV interchange -------------------------------------------------------


def write_csr_csv(graph: CsrGraph, path: str | os.PathLike) -> None:
    """Rows "s,v_from,v_to,w[,w_tilde]" in edge-index order."""
    has_flags = graph.w_tilde is not None
    header = "s,v_from,v_to,w,w_tilde" if has_flags else "s,v_from,v_to,w"
    rows = [header]
    for s in range(graph.edge_count):
        row = f"{s},{graph.v_from[s]},{graph.v_to[s]},{graph.w[s]}"
        if has_flags:
            row += f",{graph.w_tilde[s]}"
        rows.append(row)
    write_text_atomic(path, "\n".join(rows) + "\n")


def read_csr_csv(path: str | os.PathLike, side_length: int) -> CsrGraph:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        has_flags = reader.fieldnames is not None and "w_tilde" in reader.fieldnames
        n_edges = edge_count(side_length)
        v_from = np.zeros(n_edges, dtype=np.int32)
        v_to = np.zeros(n_edges, dtype=np.int32)
        w = np.zeros(n_edges, dtype=np.uint16)
        w_tilde = np.zeros(n_edges, dtype=np.uint8) if has_flags else None
        seen = 0
        for row in reader:
            s = int(row["s"])
            v_from[s] = int(row["v_from"])
            v_to[s] = int(row["v_to"])
            w[s] = int(row["w"])
            if has_flags:
                w_tilde[s] = int(row["w_tilde"])
            seen += 1
    if seen != n_edges:
        raise ValueError(f"{path}: expected {n_edges} edges for side {side_length}, got {seen}")
    return CsrGraph(side_length, v_from, v_to, w, w_tilde)
