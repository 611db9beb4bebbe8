"""Bipartite multigraphs and their component analysis.

Graphs are immutable after construction: ``m`` left vertices, ``n`` right
vertices, and an ordered sequence of edge slots that may repeat (parallel
edges are preserved, never deduplicated). Component extraction uses
union-find with path compression and union by size, so sweeps can run
millions of analyses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

__all__ = [
    "BipartiteMultigraph",
    "Component",
    "ComponentSummary",
    "components",
    "tree_census",
    "is_connected",
    "min_degree",
    "max_degree",
    "degrees",
]


class BipartiteMultigraph:
    """m left vertices, n right vertices, ordered multi-edge list."""

    __slots__ = ("m", "n", "edges")

    def __init__(self, m: int, n: int, edges) -> None:
        if m < 0 or n < 0:
            raise InputError(f"vertex counts must be >= 0, got m={m}, n={n}")
        arr = np.asarray(edges, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, 2)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise InputError("edges must be a sequence of (left, right) pairs")
        if arr.size and (
            arr[:, 0].min() < 0
            or arr[:, 0].max() >= m
            or arr[:, 1].min() < 0
            or arr[:, 1].max() >= n
        ):
            raise InputError("edge endpoint out of range")
        arr.setflags(write=False)
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", arr)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("BipartiteMultigraph is immutable")

    @property
    def t(self) -> int:
        """Number of edge slots, counting parallel edges."""
        return self.edges.shape[0]

    def __repr__(self) -> str:
        return f"BipartiteMultigraph(m={self.m}, n={self.n}, t={self.t})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BipartiteMultigraph)
            and self.m == other.m
            and self.n == other.n
            and np.array_equal(self.edges, other.edges)
        )


@dataclass(frozen=True)
class Component:
    """One connected component: vertex counts per side and edge-slot count."""

    left: int
    right: int
    edges: int

    @property
    def size(self) -> int:
        return self.left + self.right

    @property
    def is_tree(self) -> bool:
        # A connected multigraph with exactly left+right-1 edge slots cannot
        # contain a repeated edge (it would disconnect), so this single test
        # covers both the edge count and the no-parallel-edge condition.
        return self.edges == self.left + self.right - 1


@dataclass(frozen=True)
class ComponentSummary:
    """All components of a graph plus the derived statistics sweeps need."""

    m: int
    n: int
    t: int
    components: tuple[Component, ...]
    largest: Component = field(init=False)
    largest_size: int = field(init=False)
    second_largest_size: int = field(init=False)
    isolated_left: int = field(init=False)
    isolated_right: int = field(init=False)

    def __post_init__(self):
        ordered = sorted(self.components, key=lambda c: c.size, reverse=True)
        largest = ordered[0] if ordered else Component(0, 0, 0)
        object.__setattr__(self, "largest", largest)
        object.__setattr__(self, "largest_size", largest.size)
        object.__setattr__(
            self, "second_largest_size", ordered[1].size if len(ordered) > 1 else 0
        )
        object.__setattr__(
            self,
            "isolated_left",
            sum(1 for c in self.components if c.edges == 0 and c.left == 1),
        )
        object.__setattr__(
            self,
            "isolated_right",
            sum(1 for c in self.components if c.edges == 0 and c.right == 1),
        )

    @property
    def n_components(self) -> int:
        return len(self.components)

    def tree_count(self, i: int, j: int) -> int:
        """Number of tree components with i left and j right vertices."""
        return sum(
            1
            for c in self.components
            if c.left == i and c.right == j and c.is_tree
        )


def _union_find_roots(m: int, n: int, edges: np.ndarray) -> list[int]:
    """Root label per vertex (right vertices offset by m)."""
    total = m + n
    parent = list(range(total))
    size = [1] * total
    lefts = edges[:, 0].tolist()
    rights = (edges[:, 1] + m).tolist()
    for x, y in zip(lefts, rights):
        # find with path halving
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        while parent[y] != y:
            parent[y] = parent[parent[y]]
            y = parent[y]
        if x == y:
            continue
        if size[x] < size[y]:
            x, y = y, x
        parent[y] = x
        size[x] += size[y]
    roots = [0] * total
    for v in range(total):
        r = v
        while parent[r] != r:
            parent[r] = parent[parent[r]]
            r = parent[r]
        roots[v] = r
    return roots


def components(g: BipartiteMultigraph) -> ComponentSummary:
    """Exact connected components; isolated vertices become their own
    zero-edge components."""
    roots = np.asarray(_union_find_roots(g.m, g.n, g.edges), dtype=np.int64)
    total = g.m + g.n
    left_counts = np.bincount(roots[: g.m], minlength=total)
    right_counts = np.bincount(roots[g.m :], minlength=total)
    edge_counts = (
        np.bincount(roots[g.edges[:, 0]], minlength=total)
        if g.t
        else np.zeros(total, dtype=np.int64)
    )
    comp_roots = np.flatnonzero(left_counts + right_counts)
    comps = tuple(
        Component(int(left_counts[r]), int(right_counts[r]), int(edge_counts[r]))
        for r in comp_roots
    )
    return ComponentSummary(m=g.m, n=g.n, t=g.t, components=comps)


def tree_census(summary: ComponentSummary, max_i: int, max_j: int) -> np.ndarray:
    """Matrix A with A[i][j] = number of (i, j)-tree components, 1 <= i <= max_i,
    1 <= j <= max_j. Row 0 and column 0 are unused and stay zero."""
    if max_i < 1 or max_j < 1:
        raise InputError("census bounds must be >= 1")
    census = np.zeros((max_i + 1, max_j + 1), dtype=np.int64)
    for c in summary.components:
        if c.is_tree and 1 <= c.left <= max_i and 1 <= c.right <= max_j:
            census[c.left, c.right] += 1
    return census


def is_connected(g: BipartiteMultigraph) -> bool:
    """True iff there is exactly one component and no isolated vertex.

    The empty graph (m = n = 0) is connected by convention; a lone
    degree-zero vertex is not.
    """
    if g.m + g.n == 0:
        return True
    if g.t == 0:
        return False
    if g.t < g.m + g.n - 1:
        return False
    roots = _union_find_roots(g.m, g.n, g.edges)
    first = roots[0]
    return all(r == first for r in roots)


def degrees(g: BipartiteMultigraph) -> tuple[np.ndarray, np.ndarray]:
    """Degree vectors (left, right), counting parallel edges with multiplicity."""
    left = np.bincount(g.edges[:, 0], minlength=g.m)
    right = np.bincount(g.edges[:, 1], minlength=g.n)
    return left, right


def min_degree(g: BipartiteMultigraph) -> tuple[int, int]:
    """(min left degree, min right degree); 0 for an empty side."""
    left, right = degrees(g)
    return (
        int(left.min()) if g.m else 0,
        int(right.min()) if g.n else 0,
    )


def max_degree(g: BipartiteMultigraph) -> int:
    """Largest degree over both sides; 0 for an edgeless graph."""
    left, right = degrees(g)
    best = 0
    if g.m:
        best = max(best, int(left.max()))
    if g.n:
        best = max(best, int(right.max()))
    return best
