"""Recursive individualization search for canonical forms and automorphism counts.

At every node the current range vector is refined.  A discrete vector is a
leaf with count 1.  Otherwise the star exploder gets the first attempt; if
it declines, each vertex of the first non-unit cell is individualized in turn
and the children's counts are summed per resulting matrix.  The node returns
the least matrix and the count accumulated against it, which equals the order
of the automorphism group of the graph restricted to the node's partition.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from . import explode as star_exploder
from .graph import CanonicalForm, Graph, Permutation, relabeled_bytes
from .refinement import (InvariantError, Range, RangeVector, initial_ranges,
                         is_discrete, labeling_from, refine_counted)

CountMap = dict[bytes, int]


class SearchTimeout(Exception):
    """The search passed its deadline and was abandoned."""


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    explosions: int = 0
    refine_calls: int = 0
    max_refine_passes: int = 0
    # largest passes/order ratio seen; must stay <= 1
    max_refine_ratio: float = 0.0
    piece_cache_hits: int = 0

    def record_refine(self, n: int, passes: int) -> None:
        self.refine_calls += 1
        self.max_refine_passes = max(self.max_refine_passes, passes)
        if n:
            self.max_refine_ratio = max(self.max_refine_ratio, passes / n)


def individualize(rv: Sequence[Range], cell: Range, j: int) -> RangeVector:
    m, M = cell
    if M - m < 2:
        raise ValueError(f"cell [{m}, {M}) is already a single label")
    if tuple(rv[j]) != (m, M):
        raise ValueError(f"vertex {j} is not in cell [{m}, {M})")
    rest = (m + 1, M)
    return tuple((m, m + 1) if v == j else (rest if r == (m, M) else r) for v, r in enumerate(rv))


def merge_count(counts: CountMap, matrix: bytes, count: int) -> CountMap:
    counts[matrix] = counts.get(matrix, 0) + count
    return counts


def first_nonunit_cell(rv: Sequence[Range]) -> Range:
    return min(r for r in rv if r[1] - r[0] > 1)


@dataclass
class _Search:
    explode: bool = True
    deadline: float | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    dual: bool = True
    piece_cache: dict = field(default_factory=dict)

    def canonicalize(self, g: Graph, attrs: Sequence[Hashable] | None = None) -> CanonicalForm:
        work = g
        # a graph and its complement share automorphisms; search the sparser one
        if self.dual and g.n > 1 and 2 * int(g.adj.sum()) > g.n * (g.n - 1):
            work = g.complement()
        rv, passes = refine_counted(work, initial_ranges(work, attrs))
        self.stats.record_refine(work.n, passes)
        _, labeling, count = self._node(work, rv, 0)
        return CanonicalForm(g.n, relabeled_bytes(g, labeling), labeling, count)

    def piece(self, g: Graph, attrs: Sequence[Hashable]) -> CanonicalForm:
        key = (g.n, g.matrix_bytes(), tuple(attrs))
        hit = self.piece_cache.get(key)
        if hit is not None:
            self.stats.piece_cache_hits += 1
            return hit
        form = self.canonicalize(g, attrs)
        self.piece_cache[key] = form
        return form

    def _node(self, g: Graph, rv: RangeVector, depth: int) -> tuple[bytes, Permutation, int]:
        if depth > g.n:
            raise InvariantError(f"search depth {depth} exceeds graph order {g.n}")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout
        self.stats.nodes += 1
        if is_discrete(rv):
            self.stats.leaves += 1
            labeling = labeling_from(rv)
            return relabeled_bytes(g, labeling), labeling, 1
        if self.explode:
            form = star_exploder.explode(g, rv, self.piece)
            if form is not None:
                self.stats.explosions += 1
                return form.matrix, form.labeling, form.aut_count
        cell = first_nonunit_cell(rv)
        counts: CountMap = {}
        witness: dict[bytes, Permutation] = {}
        for j in [v for v, r in enumerate(rv) if r == cell]:
            child, passes = refine_counted(g, individualize(rv, cell, j))
            self.stats.record_refine(g.n, passes)
            matrix, labeling, count = self._node(g, child, depth + 1)
            merge_count(counts, matrix, count)
            witness.setdefault(matrix, labeling)
        best = min(counts)
        return best, witness[best], counts[best]


def canonicalize(g: Graph, attrs: Sequence[Hashable] | None = None, *, explode: bool = True,
                 deadline: float | None = None, stats: SearchStats | None = None,
                 dual: bool = True) -> CanonicalForm:
    """Canonical form and automorphism group order of ``g``.

    ``attrs`` colours the vertices: only attribute-preserving relabelings count
    as automorphisms.  ``deadline`` is a ``time.monotonic()`` value after which
    :class:`SearchTimeout` is raised.  ``explode=False`` disables star
    decomposition and ``dual=False`` disables searching the complement of
    dense graphs; both leave the result's count unchanged.
    """
    search = _Search(explode=explode, deadline=deadline, dual=dual,
                     stats=stats if stats is not None else SearchStats())
    return search.canonicalize(g, attrs)
