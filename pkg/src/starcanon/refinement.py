"""Canonical label ranges and their refinement to a stable partition.

A range vector gives every vertex a half-open interval ``[lo, hi)`` of labels it
may still receive.  Vertices sharing an interval form a cell; the cell
``[m, M)`` holds exactly ``M - m`` vertices.

Frozen ordering convention (canonical forms are only comparable under it):

* initial key: attribute (if any), then degree as ``(bi, out_only, in_only)``,
  ascending, so low-degree vertices take the low labels;
* refinement key: the sorted tuple of ``(edge_class, lo, hi)`` over all
  neighbours, with edge classes ordered out-only < in-only < bidirectional.
  Sub-cells are laid out in ascending key order inside the parent interval.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Any, Hashable, Sequence

from .graph import Graph, Permutation

Range = tuple[int, int]
RangeVector = tuple[Range, ...]


class InvariantError(RuntimeError):
    """An internal consistency check failed; the result cannot be trusted."""


def check_ranges(rv: Sequence[Range], n: int) -> RangeVector:
    """Validate a range vector for an order-``n`` graph and return it as a tuple."""
    rv = tuple((int(lo), int(hi)) for lo, hi in rv)
    if len(rv) != n:
        raise ValueError(f"range vector of length {len(rv)} for graph of order {n}")
    sizes: dict[Range, int] = defaultdict(int)
    for lo, hi in rv:
        if not 0 <= lo < hi <= n:
            raise ValueError(f"bad range [{lo}, {hi}) for n={n}")
        sizes[(lo, hi)] += 1
    covered = 0
    for (lo, hi), count in sorted(sizes.items()):
        if count != hi - lo:
            raise ValueError(f"cell [{lo}, {hi}) holds {count} vertices")
        if lo != covered:
            raise ValueError(f"cells overlap or leave a gap at {covered}")
        covered = hi
    if covered != n:
        raise ValueError("cells do not cover [0, n)")
    return rv


def _assign(rv: list, members: Sequence[int], keys: Sequence[Any], base: int) -> int:
    """Sort ``members`` by ``keys`` and give each run of equal keys its interval.

    Returns the number of runs.
    """
    order = sorted(range(len(members)), key=keys.__getitem__)
    runs = 0
    start = 0
    while start < len(order):
        end = start + 1
        k = keys[order[start]]
        while end < len(order) and keys[order[end]] == k:
            end += 1
        interval = (base + start, base + end)
        for idx in order[start:end]:
            rv[members[idx]] = interval
        runs += 1
        start = end
    return runs


def initial_ranges(g: Graph, attrs: Sequence[Hashable] | None = None) -> RangeVector:
    if attrs is not None and len(attrs) != g.n:
        raise ValueError(f"{len(attrs)} attributes for graph of order {g.n}")
    dk = g.degree_keys
    if attrs is None:
        keys = [dk[v].order_key() for v in range(g.n)]
    else:
        keys = [(attrs[v], dk[v].order_key()) for v in range(g.n)]
    rv: list = [None] * g.n
    _assign(rv, range(g.n), keys, 0)
    return tuple(rv)


def signature(g: Graph, rv: Sequence[Range], v: int) -> tuple[tuple[int, int, int], ...]:
    """Sorted ``(edge_class, lo, hi)`` triples over the neighbours of ``v``."""
    return tuple(sorted((cls, *rv[u]) for cls, u in g.neighbour_classes[v]))


def refine_counted(g: Graph, rv: Sequence[Range]) -> tuple[RangeVector, int]:
    """Refine to the fixpoint; also return the number of passes made.

    Each pass recomputes every signature against the previous vector, then
    splits all cells at once.  A pass that splits nothing ends the loop, so a
    graph of order ``n`` needs at most ``n`` passes.
    """
    n = g.n
    if n <= 1:
        return tuple(rv), 0
    current = list(rv)
    passes = 0
    while True:
        passes += 1
        if passes > n:
            raise InvariantError(f"refinement exceeded {n} passes")
        cells: dict[Range, list[int]] = defaultdict(list)
        for v, r in enumerate(current):
            if r[1] - r[0] > 1:
                cells[r].append(v)
        if not cells:
            break
        snapshot = tuple(current)
        split = False
        for (lo, _hi), members in cells.items():
            keys = [signature(g, snapshot, v) for v in members]
            if _assign(current, members, keys, lo) > 1:
                split = True
        if not split:
            break
    return tuple(current), passes


def refine(g: Graph, rv: Sequence[Range]) -> RangeVector:
    rv = check_ranges(rv, g.n)
    return refine_counted(g, rv)[0]


def is_discrete(rv: Sequence[Range]) -> bool:
    return all(hi - lo == 1 for lo, hi in rv)


def labeling_from(rv: Sequence[Range]) -> Permutation:
    """Labeling given by the lower bounds of a discrete range vector."""
    if not is_discrete(rv):
        raise ValueError("labeling_from needs a discrete range vector")
    return tuple(lo for lo, _ in rv)


def cells(rv: Sequence[Range]) -> dict[Range, list[int]]:
    """Cells keyed by interval, in ascending interval order."""
    out: dict[Range, list[int]] = defaultdict(list)
    for v, r in enumerate(rv):
        out[r].append(v)
    return dict(sorted(out.items()))
