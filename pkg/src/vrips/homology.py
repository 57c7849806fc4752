"""Thresholded connected components and the 0-th persistence barcode.

Components are always relabeled so that ids follow the smallest member
vertex: the component of vertex 0 (the whole image) gets id 0. Small edge
sets go through a plain union-find; large ones through scipy's compiled
component search, with the same canonical relabeling either way.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _scipy_components

from .graph import CsrGraph, shortest_path_lengths, vertex_levels
from .image import write_text_atomic

_SMALL_EDGE_LIMIT = 4096
_ORACLE_SIDE_LIMIT = 8  # all-pairs shortest paths beyond this are not oracle material


class UnionFind:
    """Disjoint sets over 0..size-1 with path compression and union by size."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.size = [1] * size

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True, eq=False)
class ComponentLabeling:
    """Vertex -> component id map; ids ordered by smallest member vertex."""

    labels: np.ndarray
    component_count: int

    def members(self, component: int) -> np.ndarray:
        return np.flatnonzero(self.labels == component)


@dataclass(frozen=True)
class Barcode:
    """Component count as a step function of the merge threshold.

    ``counts[t]`` holds for epsilon in [thresholds[t], thresholds[t+1]);
    thresholds[0] is always 0.
    """

    thresholds: tuple[int, ...]
    counts: tuple[int, ...]

    def components_at(self, epsilon: int) -> int:
        if epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        pos = int(np.searchsorted(self.thresholds, epsilon, side="right")) - 1
        return self.counts[pos]

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.thresholds, self.counts))


def _canonical_labels(raw: np.ndarray, n_components: int) -> np.ndarray:
    """Renumber labels by first occurrence, so id = rank of smallest member."""
    first_seen = np.zeros(n_components, dtype=np.int64)
    first_seen[raw[::-1]] = np.arange(len(raw) - 1, -1, -1)
    order = np.argsort(first_seen)
    remap = np.empty(n_components, dtype=np.int32)
    remap[order] = np.arange(n_components, dtype=np.int32)
    return remap[raw]


def _component_labels(n_vertices: int, edge_a: np.ndarray, edge_b: np.ndarray) -> tuple[np.ndarray, int]:
    if len(edge_a) <= _SMALL_EDGE_LIMIT:
        uf = UnionFind(n_vertices)
        for a, b in zip(edge_a.tolist(), edge_b.tolist()):
            uf.union(a, b)
        raw = np.empty(n_vertices, dtype=np.int32)
        roots: dict[int, int] = {}
        for v in range(n_vertices):
            r = uf.find(v)
            raw[v] = roots.setdefault(r, len(roots))
        return raw, len(roots)
    if np.any(np.diff(edge_a) < 0):
        # the compressed rows below need sources grouped in ascending order
        order = np.argsort(edge_a, kind="stable")
        edge_a = edge_a[order]
        edge_b = edge_b[order]
    degrees = np.bincount(edge_a, minlength=n_vertices)
    indptr = np.concatenate([[0], np.cumsum(degrees)])
    matrix = sp.csr_matrix(
        (np.ones(len(edge_b), dtype=np.uint8), edge_b, indptr),
        shape=(n_vertices, n_vertices),
    )
    n_components, raw = _scipy_components(matrix, directed=True, connection="weak")
    return _canonical_labels(raw, n_components), n_components


def connected_components(graph: CsrGraph, epsilon: int) -> ComponentLabeling:
    """Components of the subgraph keeping edges of weight <= epsilon."""
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    keep = graph.w <= epsilon
    labels, n = _component_labels(graph.vertex_count, graph.v_from[keep], graph.v_to[keep])
    labels.flags.writeable = False
    return ComponentLabeling(labels, n)


def h0_barcode(graph: CsrGraph) -> Barcode:
    """Component counts at every threshold where a merge happens.

    Equivalent to connected_components at each distinct edge weight, computed
    incrementally: ascending weights contract the current components.
    """
    labeling = connected_components(graph, 0)
    labels = labeling.labels.copy()
    n_components = labeling.component_count
    thresholds = [0]
    counts = [n_components]
    distinct = np.unique(graph.w)
    for wt in distinct.tolist():
        if wt == 0:
            continue
        sel = graph.w == wt
        la = labels[graph.v_from[sel]]
        lb = labels[graph.v_to[sel]]
        cross = la != lb
        if not cross.any():
            continue
        pairs = np.unique(np.stack([la[cross], lb[cross]]), axis=1)
        merged, n_merged = _component_labels(n_components, pairs[0], pairs[1])
        if n_merged == n_components:
            continue
        labels = merged[labels]
        n_components = n_merged
        thresholds.append(int(wt))
        counts.append(n_components)
    return Barcode(tuple(thresholds), tuple(counts))


def zero_component_members(graph: CsrGraph, epsilon: int) -> set[int]:
    """Vertices in the component of the whole-image vertex at this threshold."""
    labeling = connected_components(graph, epsilon)
    return {int(v) for v in labeling.members(0)}


def maximal_simplices_eps0(graph: CsrGraph) -> list[set[int]]:
    """Zero-weight components; each is one maximal simplex at threshold 0.

    These are exactly the classes of pairwise pseudo-distance 0.
    """
    labeling = connected_components(graph, 0)
    blocks: list[set[int]] = [set() for _ in range(labeling.component_count)]
    for vertex, label in enumerate(labeling.labels.tolist()):
        blocks[label].add(vertex)
    return blocks


# --- small-instance Vietoris-Rips semantics (metric-side oracles) ----------


def _require_oracle_scale(graph: CsrGraph) -> None:
    if graph.side_length > _ORACLE_SIDE_LIMIT:
        raise ValueError(
            f"all-pairs metric oracle is restricted to side <= {_ORACLE_SIDE_LIMIT}"
        )


def vr_edge_set(graph: CsrGraph, epsilon: int) -> set[tuple[int, int]]:
    """All vertex pairs at pseudo-distance <= epsilon (the 1-skeleton)."""
    _require_oracle_scale(graph)
    edges: set[tuple[int, int]] = set()
    for a in range(graph.vertex_count):
        dist = shortest_path_lengths(graph, a)
        for b in range(a + 1, graph.vertex_count):
            if dist[b] <= epsilon:
                edges.add((a, b))
    return edges


def vr_simplex_membership(graph: CsrGraph, epsilon: int, vertices: set[int]) -> bool:
    """Whether the vertex set is a simplex: all pairs within epsilon."""
    _require_oracle_scale(graph)
    members = sorted(vertices)
    for idx, a in enumerate(members[:-1]):
        dist = shortest_path_lengths(graph, a)
        if any(dist[b] > epsilon for b in members[idx + 1 :]):
            return False
    return True


def component_sizes_present(graph: CsrGraph, labeling: ComponentLabeling, component: int) -> np.ndarray:
    """Sizes of the squares whose vertices lie in the given component."""
    members = labeling.members(component)
    return graph.side_length - vertex_levels(members, graph.side_length)


# --- CSV emission -----------------------------------------------------------


def write_barcode_csv(barcode: Barcode, path: str | os.PathLike) -> None:
    rows = ["epsilon,components"]
    rows.extend(f"{eps},{count}" for eps, count in barcode.pairs())
    write_text_atomic(path, "\n".join(rows) + "\n")


def write_labels_csv(labeling: ComponentLabeling, path: str | os.PathLike) -> None:
    rows = ["vertex,component"]
    rows.extend(f"{v},{c}" for v, c in enumerate(labeling.labels.tolist()))
    write_text_atomic(path, "\n".join(rows) + "\n")
