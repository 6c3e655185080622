"""graph6 / digraph6 (McKay's formats.txt) and a plain edge-list format.

Edge-list records look like::

    <n> <edge count> [directed|undirected]
    u v
    ...

one ``u v`` line per edge; undirected edges are listed once.  Blank lines and
``#`` comments are skipped between and inside edge-list records.
"""

from __future__ import annotations

import enum
import itertools
from typing import IO, Iterator

import numpy as np

from .graph import Graph

_BIAS = 63
_MAX_SHORT = 62
_MAX_LONG = 258047


class GraphFormat(str, enum.Enum):
    GRAPH6 = "graph6"
    DIGRAPH6 = "digraph6"
    EDGELIST = "edgelist"


EXTENSIONS = {".g6": GraphFormat.GRAPH6, ".d6": GraphFormat.DIGRAPH6, ".el": GraphFormat.EDGELIST}


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, pos: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"byte {pos}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.pos = pos


def format_for_path(path: str) -> GraphFormat | None:
    for ext, fmt in EXTENSIONS.items():
        if path.endswith(ext):
            return fmt
    return None


# --- 6-bit packing ----------------------------------------------------------

def _encode_n(n: int) -> str:
    if n < 0 or n > _MAX_LONG:
        raise ValueError(f"order {n} not representable (max {_MAX_LONG})")
    if n <= _MAX_SHORT:
        return chr(n + _BIAS)
    return chr(126) + "".join(chr(((n >> s) & 63) + _BIAS) for s in (12, 6, 0))


def _decode_n(s: str, start: int, line: int | None) -> tuple[int, int]:
    """Order and index of the first payload byte."""
    if start >= len(s):
        raise ParseError("missing order header", line, start)
    head = ord(s[start])
    if not _BIAS <= head <= 126:
        raise ParseError(f"bad header character {s[start]!r}", line, start)
    if head < 126:
        return head - _BIAS, start + 1
    if start + 1 < len(s) and s[start + 1] == chr(126):
        raise ParseError("8-byte order header not supported", line, start)
    if start + 4 > len(s):
        raise ParseError("truncated order header", line, start)
    n = 0
    for k in range(start + 1, start + 4):
        c = ord(s[k])
        if not _BIAS <= c <= 126:
            raise ParseError(f"bad header character {s[k]!r}", line, k)
        n = (n << 6) | (c - _BIAS)
    if n <= _MAX_SHORT:
        raise ParseError(f"order {n} must use the short header", line, start)
    return n, start + 4


def _pack(bits: np.ndarray) -> str:
    pad = (-len(bits)) % 6
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)])
    groups = bits.reshape(-1, 6) @ np.array([32, 16, 8, 4, 2, 1])
    return "".join(chr(int(v) + _BIAS) for v in groups)


def _unpack(s: str, start: int, nbits: int, line: int | None) -> np.ndarray:
    payload = s[start:]
    need = -(-nbits // 6)
    if len(payload) != need:
        raise ParseError(f"payload has {len(payload)} bytes, expected {need}", line, start)
    codes = np.frombuffer(payload.encode("latin-1"), dtype=np.uint8).astype(np.int64) - _BIAS
    bad = np.nonzero((codes < 0) | (codes > 63))[0]
    if len(bad):
        raise ParseError(f"bad data character {payload[bad[0]]!r}", line, start + int(bad[0]))
    bits = ((codes[:, None] >> np.arange(5, -1, -1)) & 1).astype(np.uint8).reshape(-1)
    if bits[nbits:].any():
        raise ParseError("nonzero padding bits", line, len(s) - 1)
    return bits[:nbits]


def _upper_index(n: int) -> tuple[np.ndarray, np.ndarray]:
    # column-major upper triangle: j = 1..n-1, i = 0..j-1
    rows = [i for j in range(1, n) for i in range(j)]
    cols = [j for j in range(1, n) for _ in range(j)]
    return np.array(rows, dtype=np.intp), np.array(cols, dtype=np.intp)


# --- per-format codecs ------------------------------------------------------

def _parse_graph6(s: str, line: int | None) -> Graph:
    start = 10 if s.startswith(">>graph6<<") else 0
    n, pos = _decode_n(s, start, line)
    rows, cols = _upper_index(n)
    bits = _unpack(s, pos, len(rows), line)
    adj = np.zeros((n, n), dtype=np.uint8)
    adj[rows, cols] = bits
    adj[cols, rows] = bits
    return Graph(n, adj)


def _emit_graph6(g: Graph) -> str:
    if not g.is_symmetric:
        raise ValueError("graph6 needs an undirected (symmetric) graph")
    rows, cols = _upper_index(g.n)
    return _encode_n(g.n) + _pack(g.adj[rows, cols])


def _parse_digraph6(s: str, line: int | None) -> Graph:
    start = 12 if s.startswith(">>digraph6<<") else 0
    if not s.startswith("&", start):
        raise ParseError("digraph6 record must start with '&'", line, start)
    n, pos = _decode_n(s, start + 1, line)
    bits = _unpack(s, pos, n * n, line)
    adj = bits.reshape(n, n) if n else np.zeros((0, 0), np.uint8)
    loops = np.nonzero(np.diagonal(adj))[0]
    if len(loops):
        raise ParseError(f"self-loop at vertex {int(loops[0])}", line)
    return Graph(n, adj)


def _emit_digraph6(g: Graph) -> str:
    return "&" + _encode_n(g.n) + _pack(g.adj.reshape(-1))


def _content_lines(text: str, first_line: int = 1) -> Iterator[tuple[int, str]]:
    for k, raw in enumerate(text.splitlines(), start=first_line):
        s = raw.strip()
        if s and not s.startswith("#"):
            yield k, s


def _ints(fields: list[str], line: int) -> list[int]:
    try:
        return [int(x) for x in fields]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(fields)!r}", line) from None


def _parse_edgelist_lines(lines: Iterator[tuple[int, str]]) -> Graph | None:
    try:
        hline, header = next(lines)
    except StopIteration:
        return None
    fields = header.split()
    if len(fields) not in (2, 3):
        raise ParseError("edge-list header must be '<n> <count> [directed|undirected]'", hline)
    kind = fields[2] if len(fields) == 3 else "undirected"
    if kind not in ("directed", "undirected"):
        raise ParseError(f"unknown graph kind {kind!r}", hline)
    n, count = _ints(fields[:2], hline)
    if n < 0 or count < 0:
        raise ParseError("negative order or edge count", hline)
    directed = kind == "directed"
    adj = np.zeros((n, n), dtype=np.uint8)
    for _ in range(count):
        try:
            k, text = next(lines)
        except StopIteration:
            raise ParseError(f"expected {count} edges before end of input", hline) from None
        parts = text.split()
        if len(parts) != 2:
            raise ParseError("edge line must be 'u v'", k)
        u, v = _ints(parts, k)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex index out of range for n={n}", k)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", k)
        if adj[u, v]:
            raise ParseError(f"duplicate edge {u} {v}", k)
        adj[u, v] = 1
        if not directed:
            adj[v, u] = 1
    return Graph(n, adj)


def _emit_edgelist(g: Graph) -> str:
    if g.is_symmetric:
        edges = [(u, v) for u, v in g.edges() if u < v]
        kind = "undirected"
    else:
        edges = g.edges()
        kind = "directed"
    return "\n".join([f"{g.n} {len(edges)} {kind}"] + [f"{u} {v}" for u, v in edges])


# --- public API -------------------------------------------------------------

def parse(text: str, fmt: GraphFormat | str, line: int | None = None) -> Graph:
    """Parse one record; ``line`` is only used in error messages."""
    fmt = GraphFormat(fmt)
    if fmt is GraphFormat.EDGELIST:
        lines = _content_lines(text, line or 1)
        g = _parse_edgelist_lines(lines)
        if g is None:
            raise ParseError("empty edge-list record", line)
        extra = next(lines, None)
        if extra is not None:
            raise ParseError("trailing content after edge-list record", extra[0])
        return g
    s = text.strip("\r\n")
    if fmt is GraphFormat.GRAPH6:
        return _parse_graph6(s, line)
    return _parse_digraph6(s, line)


def emit(g: Graph, fmt: GraphFormat | str) -> str:
    fmt = GraphFormat(fmt)
    if fmt is GraphFormat.GRAPH6:
        return _emit_graph6(g)
    if fmt is GraphFormat.DIGRAPH6:
        return _emit_digraph6(g)
    return _emit_edgelist(g)


def read_records(stream: IO[str], fmt: GraphFormat | str) -> Iterator[tuple[int, Graph]]:
    """Stream ``(line_number, graph)`` pairs, one record at a time."""
    fmt = GraphFormat(fmt)
    if fmt is GraphFormat.EDGELIST:
        def lines():
            for k, raw in enumerate(stream, start=1):
                s = raw.strip()
                if s and not s.startswith("#"):
                    yield k, s
        it = lines()
        while True:
            peeked = next(it, None)
            if peeked is None:
                return
            yield peeked[0], _parse_edgelist_lines(itertools.chain([peeked], it))
    else:
        for k, raw in enumerate(stream, start=1):
            s = raw.strip("\r\n")
            if s.strip():
                yield k, parse(s, fmt, line=k)
