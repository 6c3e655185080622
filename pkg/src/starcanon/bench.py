"""Timed canonicalization sweeps over random and worst-case graph families."""

from __future__ import annotations

import csv
import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from .graph import Graph, gen_erdos_renyi, gen_regular_tournament, max_edges
from .refinement import InvariantError
from .search import SearchTimeout, canonicalize

log = logging.getLogger(__name__)

DEFAULT_LIMIT_US = 600 * 10**6
FIELDS = ("graph_id", "n", "l", "l_over_n", "elapsed_us", "status", "aut_count")


@dataclass(frozen=True)
class BenchRecord:
    graph_id: str
    n: int
    l: int
    l_over_n: str
    elapsed_us: int
    status: str
    aut_count: str

    def row(self) -> list[str]:
        return [self.graph_id, str(self.n), str(self.l), self.l_over_n,
                str(self.elapsed_us), self.status, self.aut_count]


def _ratio(l: int, n: int) -> str:
    return f"{l / n:.3f}" if n else "0.000"


def time_one(graph_id: str, g: Graph, limit_us: int) -> BenchRecord:
    """Canonicalize ``g`` under a hard wall-clock cap.

    The search checks a monotonic deadline at every node and abandons the
    whole computation when it passes; nothing from an aborted run survives.
    """
    l = g.edge_count()
    start = time.perf_counter_ns()
    try:
        form = canonicalize(g, deadline=time.monotonic() + limit_us / 1e6)
    except SearchTimeout:
        form = None
    elapsed_us = (time.perf_counter_ns() - start) // 1000
    if form is None or elapsed_us > limit_us:
        return BenchRecord(graph_id, g.n, l, _ratio(l, g.n), elapsed_us, "timeout", "")
    if math.factorial(g.n) % form.aut_count:
        raise InvariantError(f"{graph_id}: automorphism count {form.aut_count} does not divide {g.n}!")
    return BenchRecord(graph_id, g.n, l, _ratio(l, g.n), elapsed_us, "ok", str(form.aut_count))


def _time_job(job: tuple[str, Graph, int]) -> BenchRecord:
    return time_one(*job)


def _run(jobs: list[tuple[str, Graph, int]], workers: int) -> list[BenchRecord]:
    records = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map() yields in submission order regardless of completion order
            results: Iterable[BenchRecord] = pool.map(_time_job, jobs)
            for k, rec in enumerate(results, 1):
                log.info("[%d/%d] %s n=%d l=%d %s %dus", k, len(jobs), rec.graph_id, rec.n, rec.l, rec.status, rec.elapsed_us)
                records.append(rec)
    else:
        for k, job in enumerate(jobs, 1):
            rec = _time_job(job)
            log.info("[%d/%d] %s n=%d l=%d %s %dus", k, len(jobs), rec.graph_id, rec.n, rec.l, rec.status, rec.elapsed_us)
            records.append(rec)
    return records


def er_corpus(count: int, n_min: int, n_max: int, seed: int, directed: bool = False) -> list[tuple[str, Graph]]:
    """The graphs of an ER sweep; depends only on the arguments.

    ``n`` is uniform in ``[n_min, n_max)`` and ``l`` uniform in
    ``(0, max_edges(n)]``.  Order-1 graphs have no possible edge and are
    emitted empty.
    """
    if n_min < 1 or count < 1 or n_max <= n_min:
        raise ValueError("need count >= 1 and 1 <= n_min < n_max")
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = rng.randrange(n_min, n_max)
        top = max_edges(n, directed)
        l = rng.randint(1, top) if top else 0
        graph_seed = rng.getrandbits(32)
        g = gen_erdos_renyi(n, l, directed, graph_seed) if l else Graph.empty(n)
        out.append((f"er{seed}-{k}", g))
    return out


def run_er_sweep(count: int, n_min: int, n_max: int, seed: int, limit_us: int = DEFAULT_LIMIT_US,
                 directed: bool = False, workers: int = 1) -> list[BenchRecord]:
    corpus = er_corpus(count, n_min, n_max, seed, directed)
    return _run([(gid, g, limit_us) for gid, g in corpus], workers)


def run_worst_case(orders: Sequence[int], limit_us: int = DEFAULT_LIMIT_US, workers: int = 1) -> list[BenchRecord]:
    bad = [n for n in orders if n < 1 or n % 2 == 0]
    if bad:
        raise ValueError(f"regular tournaments need odd orders, got {bad}")
    return _run([(f"tournament-{n}", gen_regular_tournament(n), limit_us) for n in orders], workers)


def write_rows(records: Iterable[BenchRecord], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(FIELDS)
    for rec in records:
        w.writerow(rec.row())


def write_csv(records: Iterable[BenchRecord], path: str | Path) -> None:
    try:
        with open(path, "w", newline="") as fh:
            write_rows(records, fh)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_csv(path: str | Path) -> list[BenchRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != FIELDS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [BenchRecord(r["graph_id"], int(r["n"]), int(r["l"]), r["l_over_n"],
                            int(r["elapsed_us"]), r["status"], r["aut_count"]) for r in reader]


def parse_limit(text: str) -> int:
    """Duration such as ``10s``, ``500ms``, ``250us`` or bare seconds, in microseconds."""
    units = {"us": 1, "ms": 1000, "s": 10**6, "m": 60 * 10**6}
    t = text.strip().lower()
    for suffix in ("us", "ms", "s", "m"):
        if t.endswith(suffix):
            number, scale = t[: -len(suffix)], units[suffix]
            break
    else:
        number, scale = t, units["s"]
    try:
        value = float(number)
    except ValueError:
        raise ValueError(f"bad time limit {text!r}") from None
    if value <= 0:
        raise ValueError(f"time limit must be positive, got {text!r}")
    return max(1, int(round(value * scale)))
