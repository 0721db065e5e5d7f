"""Labelled DAGs, root-layerings and H-structures.

A :class:`LabelledDag` keeps its vertices in a topological *position* order:
``rows[p]`` is the successor bitset of position ``p`` and only has bits above
``p``, so a strictly upper-triangular bit matrix.  ``labels[p]`` is the
1-based label of position ``p``.  Acyclicity is therefore structural, and
relabelling never touches the adjacency bits.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

# above this many vertices edge extraction goes through numpy
_DENSE_THRESHOLD = 64


def _bits(x: int):
    """Indices of the set bits of ``x``, ascending."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class LabelledDag:
    """A directed acyclic graph on the labels ``1..num_vertices``.

    Parameters
    ----------
    num_vertices : int
        Number of vertices.
    edges : iterable of (int, int)
        Directed edges ``u -> v`` between labels.  Self-loops, duplicates,
        out-of-range labels and cycles raise ``ValueError``.
    """

    __slots__ = ("rows", "labels", "_edges")

    def __init__(self, num_vertices: int, edges: Iterable[tuple[int, int]] = ()):
        n = int(num_vertices)
        if n < 0:
            raise ValueError(f"num_vertices must be non-negative, got {n}")
        succ = [0] * n
        indeg = [0] * n
        seen = set()
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 1..{n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            succ[u - 1] |= 1 << (v - 1)
            indeg[v - 1] += 1
        # Kahn, smallest label first
        order = []
        ready = [i for i in range(n) if indeg[i] == 0]
        while ready:
            ready.sort(reverse=True)
            i = ready.pop()
            order.append(i)
            for j in _bits(succ[i]):
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
        if len(order) != n:
            raise ValueError("edge set contains a directed cycle")
        pos = [0] * n
        for p, i in enumerate(order):
            pos[i] = p
        rows = [0] * n
        for i in range(n):
            r = 0
            for j in _bits(succ[i]):
                r |= 1 << pos[j]
            rows[pos[i]] = r
        self.rows = tuple(rows)
        self.labels = tuple(i + 1 for i in order)
        self._edges = None

    @classmethod
    def _from_rows(cls, rows: Sequence[int], labels: Sequence[int]) -> LabelledDag:
        """Trusted constructor: ``rows`` must be strictly upper triangular."""
        g = object.__new__(cls)
        g.rows = tuple(rows)
        g.labels = tuple(labels)
        g._edges = None
        return g

    @classmethod
    def empty(cls, n: int = 0) -> LabelledDag:
        return cls._from_rows([0] * n, range(1, n + 1))

    @property
    def num_vertices(self) -> int:
        return len(self.rows)

    @property
    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    @property
    def edges(self) -> list[tuple[int, int]]:
        """All edges as label pairs, sorted lexicographically."""
        if self._edges is None:
            n = self.num_vertices
            if n > _DENSE_THRESHOLD:
                us, vs = np.nonzero(self.adjacency_matrix())
                edges = list(zip((us + 1).tolist(), (vs + 1).tolist()))
            else:
                lab = self.labels
                edges = sorted((lab[p], lab[q]) for p, r in enumerate(self.rows) for q in _bits(r))
            self._edges = edges
        return self._edges

    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def adjacency_matrix(self) -> np.ndarray:
        """Dense boolean matrix, ``A[u-1, v-1]`` true iff ``u -> v``."""
        n = self.num_vertices
        nbytes = (n + 7) // 8
        packed = np.zeros((n, nbytes), dtype=np.uint8)
        for p, r in enumerate(self.rows):
            if r:
                packed[p] = np.frombuffer(r.to_bytes(nbytes, "little"), dtype=np.uint8)
        pos_matrix = np.unpackbits(packed, axis=1, count=n, bitorder="little").astype(bool)
        lab = np.asarray(self.labels, dtype=np.intp) - 1
        out = np.zeros((n, n), dtype=bool)
        out[np.ix_(lab, lab)] = pos_matrix
        return out

    def has_edge(self, u: int, v: int) -> bool:
        pos = self._positions()
        return bool(self.rows[pos[u - 1]] >> pos[v - 1] & 1)

    def _positions(self) -> list[int]:
        pos = [0] * len(self.labels)
        for p, lab in enumerate(self.labels):
            pos[lab - 1] = p
        return pos

    def source_positions(self) -> list[int]:
        covered = 0
        for r in self.rows:
            covered |= r
        return [p for p in range(len(self.rows)) if not covered >> p & 1]

    def is_valid(self) -> bool:
        """Check the structural invariants: labels a permutation, rows upper triangular."""
        n = self.num_vertices
        if sorted(self.labels) != list(range(1, n + 1)):
            return False
        return all(r >> (p + 1) << (p + 1) == r and r >> n == 0 for p, r in enumerate(self.rows))

    def __eq__(self, other):
        if not isinstance(other, LabelledDag):
            return NotImplemented
        return self.num_vertices == other.num_vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.num_vertices, tuple(self.edges)))

    def __repr__(self):
        return f"LabelledDag(num_vertices={self.num_vertices}, edges={self.edges!r})"


def sources(g: LabelledDag) -> set[int]:
    """Labels of the vertices with in-degree zero."""
    lab = g.labels
    return {lab[p] for p in g.source_positions()}


def is_acyclic(num_vertices: int, edges: Iterable[tuple[int, int]]) -> bool:
    """Kahn-style acyclicity check on a raw edge list, independent of :class:`LabelledDag`."""
    succ = [[] for _ in range(num_vertices + 1)]
    indeg = [0] * (num_vertices + 1)
    for u, v in edges:
        succ[u].append(v)
        indeg[v] += 1
    stack = [v for v in range(1, num_vertices + 1) if indeg[v] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return seen == num_vertices


@dataclass(frozen=True)
class RootLayering:
    """Ordered partition of the vertices into successive source layers."""

    layers: tuple[frozenset[int], ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    def satisfies(self, g: LabelledDag) -> bool:
        """Both layering properties: no backward or intra-layer edge, and every
        vertex past the first layer has an in-edge from the layer just before."""
        index = {}
        for i, layer in enumerate(self.layers):
            for v in layer:
                index[v] = i
        if len(index) != g.num_vertices or any(not layer for layer in self.layers):
            return False
        fed = set()
        for u, v in g.edges:
            if index[u] >= index[v]:
                return False
            if index[u] == index[v] - 1:
                fed.add(v)
        return all(v in fed for layer in self.layers[1:] for v in layer)


def root_layering(g: LabelledDag) -> RootLayering:
    """Peel sources off repeatedly; the layers are the successive source sets."""
    n = g.num_vertices
    indeg = [0] * n
    for r in g.rows:
        for q in _bits(r):
            indeg[q] += 1
    current = [p for p in range(n) if indeg[p] == 0]
    layers = []
    while current:
        layers.append(frozenset(g.labels[p] for p in current))
        nxt = []
        for p in current:
            for q in _bits(g.rows[p]):
                indeg[q] -= 1
                if indeg[q] == 0:
                    nxt.append(q)
        current = nxt
    return RootLayering(tuple(layers))


def _check_permutation(perm: Sequence[int], n: int) -> None:
    if len(perm) != n or sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {list(perm)!r}")


def relabel(g: LabelledDag, perm: Sequence[int]) -> LabelledDag:
    """Rename every label ``i`` to ``perm[i-1]``."""
    _check_permutation(perm, g.num_vertices)
    return LabelledDag._from_rows(g.rows, [perm[lab - 1] for lab in g.labels])


def _shifted_labels(labels: list[int], source_positions: Sequence[int], v_pos: int) -> list[int]:
    """Rotate the source labels so the source at ``v_pos`` gets the smallest one."""
    src = sorted(source_positions, key=labels.__getitem__)
    k = len(src)
    j = src.index(v_pos)
    sorted_labels = [labels[p] for p in src]
    out = list(labels)
    for i, p in enumerate(src):
        out[p] = sorted_labels[(i - j) % k]
    return out


def cyclic_source_shift(h: LabelledDag, v: int) -> LabelledDag:
    """Cyclically permute source labels so that source ``v`` holds the smallest.

    Non-source labels are untouched.
    """
    src = h.source_positions()
    pos = h._positions()
    if not 1 <= v <= h.num_vertices or pos[v - 1] not in src:
        raise ValueError(f"vertex {v} is not a source")
    return LabelledDag._from_rows(h.rows, _shifted_labels(list(h.labels), src, pos[v - 1]))


@dataclass(frozen=True)
class HStructure:
    """A DAG with a distinguished isolated source holding the smallest source label."""

    dag: LabelledDag
    distinguished: int

    @property
    def num_vertices(self) -> int:
        return self.dag.num_vertices

    def is_valid(self) -> bool:
        g, v = self.dag, self.distinguished
        if not g.is_valid() or not 1 <= v <= g.num_vertices:
            return False
        if any(v in e for e in g.edges):
            return False
        return min(sources(g)) == v
