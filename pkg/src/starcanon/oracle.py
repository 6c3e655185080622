"""Exhaustive-permutation ground truth for small graphs.

Nothing here shares code with the search beyond the graph type and the
row-major matrix serialization, so agreement between the two is meaningful.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .graph import Graph

DEFAULT_CAP = 8
_CHUNK = 4096


class OracleRefused(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    aut_count: int
    min_matrix: bytes


def _permutation_chunks(n: int) -> Iterator[np.ndarray]:
    # itertools yields in lexicographic order, one permutation at a time
    perms = itertools.permutations(range(n))
    while True:
        block = list(itertools.islice(perms, _CHUNK))
        if not block:
            return
        yield np.array(block, dtype=np.intp)


def _relabeled(adj: np.ndarray, perms: np.ndarray) -> np.ndarray:
    # row k is adj with vertex perms[k][a] moved to position a
    return adj[perms[:, :, None], perms[:, None, :]]


def _guard(n: int, cap: int) -> None:
    if n > cap:
        raise OracleRefused(f"order {n} exceeds oracle cap {cap}")


def brute_force(g: Graph, cap: int = DEFAULT_CAP) -> OracleResult:
    _guard(g.n, cap)
    if g.n == 0:
        return OracleResult(1, b"")
    count = 0
    best = None
    for perms in _permutation_chunks(g.n):
        mats = _relabeled(g.adj, perms).reshape(len(perms), -1)
        count += int(np.all(mats == g.adj.reshape(-1), axis=1).sum())
        # lexicographic minimum of 0/1 rows, column by column
        rows = np.arange(len(mats))
        for col in range(mats.shape[1]):
            vals = mats[rows, col]
            low = vals.min()
            rows = rows[vals == low]
            if len(rows) == 1:
                break
        candidate = mats[rows[0]].tobytes()
        if best is None or candidate < best:
            best = candidate
    return OracleResult(count, best)


def iso_oracle(g1: Graph, g2: Graph, cap: int = DEFAULT_CAP) -> bool:
    if g1.n != g2.n:
        return False
    _guard(g1.n, cap)
    if int(g1.adj.sum()) != int(g2.adj.sum()):
        return False
    if g1.n == 0:
        return True
    target = g2.adj.reshape(-1)
    for perms in _permutation_chunks(g1.n):
        mats = _relabeled(g1.adj, perms).reshape(len(perms), -1)
        if np.any(np.all(mats == target, axis=1)):
            return True
    return False


def pair_slots(n: int, directed: bool) -> list[tuple[int, int]]:
    if directed:
        return [(i, j) for i in range(n) for j in range(n) if i != j]
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def graph_from_code(n: int, code: int, directed: bool = False) -> Graph:
    """Labeled graph whose edge set is the bit pattern ``code`` over :func:`pair_slots`."""
    slots = pair_slots(n, directed)
    edges = [s for k, s in enumerate(slots) if code >> k & 1]
    return Graph.from_edges(n, edges, directed)


def all_graphs(n: int, directed: bool = False) -> Iterator[Graph]:
    """Every labeled (di)graph of order ``n``."""
    for code in range(1 << len(pair_slots(n, directed))):
        yield graph_from_code(n, code, directed)
