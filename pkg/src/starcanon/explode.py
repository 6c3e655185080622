"""Star decomposition: split on fixed vertices, canonicalize the spokes, recombine.

Removing every fixed vertex (unit range) from a refined graph may leave
several weakly connected pieces.  Each piece is canonicalized on its own, with
each vertex coloured by its range in the parent graph.  Pieces with equal
coloured canonical forms are interchangeable.  A class of ``c`` such pieces,
each with ``r`` automorphisms, contributes ``c! * r**c``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .graph import CanonicalForm, Graph, Permutation, relabeled_bytes
from .refinement import InvariantError, Range

# cross-check fixed-vertex adjacency of interchangeable pieces
VALIDATE = True

PieceCanonicalizer = Callable[[Graph, Sequence[Range]], CanonicalForm]


@dataclass(frozen=True)
class Piece:
    vertices: tuple[int, ...]
    graph: Graph
    attrs: tuple


@dataclass
class PieceClass:
    key: tuple
    members: list[Piece] = field(default_factory=list)
    forms: list[CanonicalForm] = field(default_factory=list)

    @property
    def c(self) -> int:
        return len(self.members)

    @property
    def r(self) -> int:
        return self.forms[0].aut_count


def fixed_vertices(rv: Sequence[Range]) -> list[int]:
    return [v for v, (lo, hi) in enumerate(rv) if hi - lo == 1]


def split_components(g: Graph, removed, rv: Sequence[Range] | None = None) -> list[Piece]:
    """Weak components of ``g`` minus ``removed``, ordered by least vertex.

    Each piece's attributes are its vertices' intervals in ``rv`` (empty
    tuples when no range vector is given).
    """
    removed = set(removed)
    und = g.adj | g.adj.T
    seen = set(removed)
    pieces = []
    for s in range(g.n):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in und[v].nonzero()[0].tolist():
                if u not in seen:
                    seen.add(u)
                    comp.append(u)
                    queue.append(u)
        comp.sort()
        attrs = tuple(rv[v] for v in comp) if rv is not None else ((),) * len(comp)
        pieces.append(Piece(tuple(comp), g.induced(comp), attrs))
    return pieces


def class_key(piece: Piece, form: CanonicalForm) -> tuple:
    """Coloured canonical form of a piece: matrix plus attributes in canonical order."""
    by_label = [None] * piece.graph.n
    for local, label in enumerate(form.labeling):
        by_label[label] = piece.attrs[local]
    return (piece.graph.n, form.matrix, tuple(by_label))


def total_count(classes: Sequence[PieceClass]) -> int:
    """Product over classes of ``c! * r**c``."""
    total = 1
    for cls in classes:
        total *= math.factorial(cls.c) * cls.r ** cls.c
    return total


def _check_fixed_adjacency(g: Graph, cls: PieceClass, fixed: Sequence[int]) -> None:
    patterns = set()
    for piece, form in zip(cls.members, cls.forms):
        rows = [None] * piece.graph.n
        for local, orig in enumerate(piece.vertices):
            rows[form.labeling[local]] = (g.adj[orig, fixed].tobytes(), g.adj[fixed, orig].tobytes())
        patterns.add(tuple(rows))
    if len(patterns) > 1:
        raise InvariantError("interchangeable pieces attach differently to the fixed vertices")


def assemble_labeling(g: Graph, rv: Sequence[Range], classes: Sequence[PieceClass],
                      fixed: Sequence[int]) -> Permutation:
    """Global labeling from piece forms.

    Vertices sort by parent interval, then class order, label inside the
    piece, rank of the piece among its class (by least original vertex), and
    finally original label.
    """
    keys: list = [None] * g.n
    for f in fixed:
        keys[f] = (rv[f], ())
    for index, cls in enumerate(classes):
        ranked = sorted(zip(cls.members, cls.forms), key=lambda pf: pf[0].vertices[0])
        for rank, (piece, form) in enumerate(ranked):
            for local, orig in enumerate(piece.vertices):
                keys[orig] = (rv[orig], (index, form.labeling[local], rank, orig))
    if any(k is None for k in keys):
        raise InvariantError("piece classes do not cover the non-fixed vertices")
    order = sorted(range(g.n), key=keys.__getitem__)
    labeling = [0] * g.n
    for pos, v in enumerate(order):
        lo, hi = rv[v]
        if not lo <= pos < hi:
            raise InvariantError(f"vertex {v} placed at {pos} outside [{lo}, {hi})")
        labeling[v] = pos
    if len(set(keys)) != g.n:
        raise InvariantError("sort keys collide; labeling is not discrete")
    return tuple(labeling)


def piece_classes(pieces: Sequence[Piece], canonicalize: PieceCanonicalizer) -> list[PieceClass]:
    """Canonicalize each piece and group interchangeable ones, in key order."""
    grouped: dict[tuple, PieceClass] = {}
    for piece in pieces:
        form = canonicalize(piece.graph, piece.attrs)
        key = class_key(piece, form)
        cls = grouped.setdefault(key, PieceClass(key))
        cls.members.append(piece)
        cls.forms.append(form)
    return [grouped[k] for k in sorted(grouped)]


def explode(g: Graph, rv: Sequence[Range], canonicalize: PieceCanonicalizer) -> CanonicalForm | None:
    """Canonical form via star decomposition, or ``None`` when it does not apply.

    Declines when there is no fixed vertex or when removing the fixed vertices
    leaves fewer than two pieces.  ``canonicalize`` handles each piece with
    its attributes and normally recurses into the full search.
    """
    fixed = fixed_vertices(rv)
    if not fixed:
        return None
    pieces = split_components(g, fixed, rv)
    if len(pieces) < 2:
        return None
    classes = piece_classes(pieces, canonicalize)
    if VALIDATE:
        for cls in classes:
            if cls.c > 1:
                _check_fixed_adjacency(g, cls, fixed)
    labeling = assemble_labeling(g, rv, classes, fixed)
    return CanonicalForm(g.n, relabeled_bytes(g, labeling), labeling, total_count(classes))
