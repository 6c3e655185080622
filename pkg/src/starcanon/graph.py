"""Dense directed graphs, relabeling, matrix ordering and graph families.

Undirected graphs are stored as symmetric digraphs, so every routine in the
package follows a single code path for both kinds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

Permutation = tuple[int, ...]

# edge classes, in the order used by neighbour signatures
OUT_ONLY, IN_ONLY, BI = 0, 1, 2


class DegreeKey(NamedTuple):
    out_only: int
    in_only: int
    bi: int

    def order_key(self) -> tuple[int, int, int]:
        """Sort key used by the initial ordering: bidirectional count first."""
        return (self.bi, self.out_only, self.in_only)


@dataclass(frozen=True, eq=False)
class Graph:
    """Order-``n`` digraph on vertices ``0..n-1`` held as a read-only 0/1 matrix."""

    n: int
    adj: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adj, dtype=np.uint8, copy=True).reshape(self.n, self.n) if self.n else np.zeros((0, 0), np.uint8)
        if adj.shape != (self.n, self.n):
            raise ValueError(f"adjacency shape {adj.shape} does not match n={self.n}")
        if adj.size and adj.max() > 1:
            raise ValueError("adjacency entries must be 0 or 1")
        if np.any(np.diagonal(adj)):
            raise ValueError("self-loops are not supported")
        adj.setflags(write=False)
        object.__setattr__(self, "adj", adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], directed: bool = False) -> Graph:
        if n < 0:
            raise ValueError("n must be non-negative")
        adj = np.zeros((n, n), dtype=np.uint8)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adj[u, v] = 1
            if not directed:
                adj[v, u] = 1
        return cls(n, adj)

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, np.zeros((n, n), dtype=np.uint8))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edges()})"

    @cached_property
    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.adj, self.adj.T))

    def edges(self) -> list[tuple[int, int]]:
        """Directed edge list, sorted by (u, v)."""
        return [(int(u), int(v)) for u, v in zip(*np.nonzero(self.adj))]

    def edge_count(self) -> int:
        """Number of edges: unordered pairs for symmetric graphs, arcs otherwise."""
        total = int(self.adj.sum())
        return total // 2 if self.is_symmetric else total

    def complement(self) -> Graph:
        comp = 1 - self.adj
        np.fill_diagonal(comp, 0)
        return Graph(self.n, comp)

    def induced(self, vertices: Sequence[int]) -> Graph:
        idx = np.asarray(vertices, dtype=np.intp)
        return Graph(len(idx), self.adj[np.ix_(idx, idx)])

    def matrix_bytes(self) -> bytes:
        """Row-major serialization, one byte (0 or 1) per entry."""
        return self.adj.tobytes()

    @cached_property
    def neighbour_classes(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the ``(edge_class, neighbour)`` pairs of every incident neighbour."""
        a = self.adj.astype(bool)
        at = a.T
        out = []
        for v in range(self.n):
            row = []
            for u in np.nonzero(a[v] & ~at[v])[0]:
                row.append((OUT_ONLY, int(u)))
            for u in np.nonzero(at[v] & ~a[v])[0]:
                row.append((IN_ONLY, int(u)))
            for u in np.nonzero(a[v] & at[v])[0]:
                row.append((BI, int(u)))
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def degree_keys(self) -> tuple[DegreeKey, ...]:
        a = self.adj.astype(np.int64)
        bi = (a & a.T).sum(axis=1)
        out_only = a.sum(axis=1) - bi
        in_only = a.sum(axis=0) - bi
        return tuple(DegreeKey(int(o), int(i), int(b)) for o, i, b in zip(out_only, in_only, bi))


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical matrix of a graph, a labeling producing it, and ``|Aut|``."""

    n: int
    matrix: bytes
    labeling: Permutation
    aut_count: int

    def graph(self) -> Graph:
        return Graph(self.n, np.frombuffer(self.matrix, dtype=np.uint8).reshape(self.n, self.n))


def check_permutation(p: Sequence[int], n: int) -> Permutation:
    p = tuple(int(x) for x in p)
    if len(p) != n:
        raise ValueError(f"permutation of length {len(p)} applied to graph of order {n}")
    if sorted(p) != list(range(n)):
        raise ValueError(f"{p} is not a permutation of 0..{n - 1}")
    return p


def inverse(p: Sequence[int]) -> Permutation:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def compose(q: Sequence[int], p: Sequence[int]) -> Permutation:
    """``q∘p``: first ``p``, then ``q``."""
    return tuple(q[x] for x in p)


def apply(p: Sequence[int], g: Graph) -> Graph:
    """Relabel ``g`` so that vertex ``i`` becomes ``p[i]``."""
    p = check_permutation(p, g.n)
    if g.n == 0:
        return g
    inv = np.asarray(inverse(p), dtype=np.intp)
    return Graph(g.n, g.adj[np.ix_(inv, inv)])


def relabeled_bytes(g: Graph, p: Sequence[int]) -> bytes:
    # unchecked fast path for the search; p must already be a permutation
    if g.n == 0:
        return b""
    inv = np.empty(g.n, dtype=np.intp)
    inv[np.asarray(p, dtype=np.intp)] = np.arange(g.n)
    return g.adj[np.ix_(inv, inv)].tobytes()


def _flatten(m) -> bytes:
    if isinstance(m, Graph):
        return m.matrix_bytes()
    if isinstance(m, (bytes, bytearray)):
        return bytes(m)
    return np.asarray(m, dtype=np.uint8).tobytes()


def matrix_compare(a, b) -> int:
    """Lexicographic comparison of row-major 0/1 matrices: -1, 0 or 1.

    Accepts graphs, serialized matrices or array-likes.
    """
    fa, fb = _flatten(a), _flatten(b)
    if len(fa) != len(fb):
        raise ValueError(f"cannot compare matrices of {len(fa)} and {len(fb)} entries")
    return (fa > fb) - (fa < fb)


def degree_key(g: Graph, v: int) -> DegreeKey:
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range for n={g.n}")
    return g.degree_keys[v]


# --- graph families ---------------------------------------------------------

def gen_complete(n: int) -> Graph:
    return Graph.empty(n).complement()


def gen_path(n: int, directed: bool = False) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], directed)


def gen_cycle(n: int, directed: bool = False) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], directed)


def cherry() -> Graph:
    """Path on three vertices with the centre labelled 0."""
    return Graph.from_edges(3, [(0, 1), (0, 2)])


def disjoint_union(*graphs: Graph) -> Graph:
    n = sum(g.n for g in graphs)
    adj = np.zeros((n, n), dtype=np.uint8)
    off = 0
    for g in graphs:
        adj[off:off + g.n, off:off + g.n] = g.adj
        off += g.n
    return Graph(n, adj)


def gen_star(spokes: int, spoke_graph: Graph, attach_vertex: int) -> Graph:
    """Hub vertex 0 joined both ways to ``attach_vertex`` of each of ``spokes`` copies.

    Copy ``k`` occupies vertices ``1 + k*m .. (k+1)*m`` where ``m`` is the spoke order.
    """
    if spokes < 1:
        raise ValueError("need at least one spoke")
    if not 0 <= attach_vertex < spoke_graph.n:
        raise ValueError(f"attach vertex {attach_vertex} not in spoke graph")
    body = disjoint_union(Graph.empty(1), *([spoke_graph] * spokes))
    adj = body.adj.copy()
    m = spoke_graph.n
    for k in range(spokes):
        a = 1 + k * m + attach_vertex
        adj[0, a] = adj[a, 0] = 1
    return Graph(body.n, adj)


def gen_regular_tournament(n: int) -> Graph:
    """Circulant tournament with arcs ``i -> i+k (mod n)`` for ``k = 1..(n-1)/2``."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"regular tournaments need odd order, got {n}")
    half = (n - 1) // 2
    return Graph.from_edges(n, [(i, (i + k) % n) for i in range(n) for k in range(1, half + 1)], directed=True)


def max_edges(n: int, directed: bool) -> int:
    return n * (n - 1) if directed else n * (n - 1) // 2


def gen_erdos_renyi(n: int, l: int, directed: bool = False, seed: int = 0) -> Graph:
    """Uniform graph with exactly ``l`` edges.

    Sampling is by rejection using ``random.Random(seed)``: draw ``u`` then ``v``
    with ``randrange(n)``, drop loops, orient undirected pairs as ``(min, max)``,
    drop repeats, stop once ``l`` distinct edges are held.
    """
    top = max_edges(n, directed)
    if not 0 < l <= top:
        raise ValueError(f"edge count {l} outside (0, {top}] for n={n}")
    rng = random.Random(seed)
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < l:
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        if not directed and u > v:
            u, v = v, u
        chosen.add((u, v))
    return Graph.from_edges(n, sorted(chosen), directed)
