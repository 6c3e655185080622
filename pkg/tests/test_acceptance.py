"""Acceptance suite.  Run with ``pytest tests/test_acceptance.py -v``; the
terminal summary prints one PASS/FAIL line per criterion."""
import io
import math
import random
import statistics
import time

import pytest

from starcanon import cli, explode
from starcanon.formats import emit, parse
from starcanon.graph import apply, cherry, gen_erdos_renyi, gen_regular_tournament, gen_star
from starcanon.oracle import all_graphs, brute_force, graph_from_code
from starcanon.search import SearchStats, SearchTimeout, canonicalize

from conftest import random_permutation

SAMPLE_SEED = 20240601
ER_SEED = 7


def criterion(k, title):
    return pytest.mark.criterion(k, title)


def compare_with_oracle(graphs, stats):
    """Count mismatches and canonical-matrix inconsistencies against the oracle."""
    count_bad = []
    ours_by_class = {}
    classes_by_ours = {}
    for g in graphs:
        truth = brute_force(g)
        form = canonicalize(g, stats=stats)
        if form.aut_count != truth.aut_count:
            count_bad.append(g)
        ours_by_class.setdefault((g.n, truth.min_matrix), set()).add(form.matrix)
        classes_by_ours.setdefault((g.n, form.matrix), set()).add(truth.min_matrix)
    split = [k for k, v in ours_by_class.items() if len(v) > 1]
    merged = [k for k, v in classes_by_ours.items() if len(v) > 1]
    return count_bad, split, merged, len(ours_by_class)


@pytest.fixture(scope="module")
def refine_stats():
    return SearchStats()


@pytest.fixture(scope="module")
def undirected_corpus():
    graphs = [g for n in range(6) for g in all_graphs(n)]
    codes = random.Random(SAMPLE_SEED).sample(range(2 ** 15), 5000)
    graphs += [graph_from_code(6, c) for c in codes]
    return graphs


@pytest.fixture(scope="module")
def directed_corpus():
    return [g for n in range(5) for g in all_graphs(n, directed=True)]


@pytest.fixture(scope="module")
def undirected_report(undirected_corpus, refine_stats):
    start = time.monotonic()
    report = compare_with_oracle(undirected_corpus, refine_stats)
    return report, time.monotonic() - start


@pytest.fixture(scope="module")
def directed_report(directed_corpus, refine_stats):
    start = time.monotonic()
    report = compare_with_oracle(directed_corpus, refine_stats)
    return report, time.monotonic() - start


@pytest.fixture(scope="module")
def er_report(refine_stats):
    rng = random.Random(ER_SEED)
    unstable, not_idempotent = [], []
    for k in range(500):
        n = rng.randrange(10, 60)
        g = gen_erdos_renyi(n, rng.randint(1, n * (n - 1) // 2), seed=k)
        form = canonicalize(g, stats=refine_stats)
        if canonicalize(form.graph(), stats=refine_stats).matrix != form.matrix:
            not_idempotent.append(k)
        for _ in range(20):
            h = apply(random_permutation(n, rng), g)
            if canonicalize(h, stats=refine_stats).matrix != form.matrix:
                unstable.append(k)
                break
    return unstable, not_idempotent


@criterion(1, "oracle equivalence, undirected n <= 5 plus 5000 graphs at n = 6")
def test_c1_undirected_oracle(undirected_corpus, undirected_report):
    (count_bad, split, merged, classes), elapsed = undirected_report
    assert len(undirected_corpus) == 1 + 1 + 2 + 8 + 64 + 1024 + 5000
    assert count_bad == [] and split == [] and merged == []
    # 1, 1, 2, 4, 11, 34 classes for n = 0..5 and some of the 156 at n = 6
    assert 53 < classes <= 53 + 156
    assert elapsed < 300


@criterion(2, "oracle equivalence, directed n <= 4")
def test_c2_directed_oracle(directed_corpus, directed_report):
    (count_bad, split, merged, classes), elapsed = directed_report
    assert sum(g.n == 4 for g in directed_corpus) == 4096
    assert count_bad == [] and split == [] and merged == []
    # 1, 1, 3, 16, 218 classes for n = 0..4
    assert classes == 1 + 1 + 3 + 16 + 218
    assert elapsed < 60


@criterion(3, "relabeling invariance on 500 ER graphs and S(S(g)) = S(g)")
def test_c3_relabeling_invariance(er_report):
    unstable, not_idempotent = er_report
    assert unstable == []
    assert not_idempotent == []


@criterion(4, "star of cherries: oracle count 8, printed product fails, c!*2^c for c = 3..8")
def test_c4_oracle_decides_star_count():
    g = gen_star(2, cherry(), 0)
    truth = brute_force(g).aut_count
    assert truth == 8
    assert canonicalize(g).aut_count == truth


@criterion(4, "star of cherries: oracle count 8, printed product fails, c!*2^c for c = 3..8")
def test_c4_product_of_c_factorial_times_r_fails_oracle(monkeypatch):
    g = gen_star(2, cherry(), 0)
    monkeypatch.setattr(explode, "total_count",
                        lambda classes: math.prod(math.factorial(cls.c) * cls.r for cls in classes))
    printed = canonicalize(g).aut_count
    assert printed == 4
    assert printed != brute_force(g).aut_count


@criterion(4, "star of cherries: oracle count 8, printed product fails, c!*2^c for c = 3..8")
@pytest.mark.parametrize("c", range(3, 9))
def test_c4_closed_form(c):
    assert canonicalize(gen_star(c, cherry(), 0)).aut_count == math.factorial(c) * 2 ** c


@criterion(5, "star of 12 cherries under 1 s; no exploding is 100x slower or capped")
def test_c5_exploder_speedup():
    g = gen_star(12, cherry(), 0)
    assert g.n == 37
    start = time.perf_counter()
    form = canonicalize(g)
    fast = time.perf_counter() - start
    assert form.aut_count == math.factorial(12) * 2 ** 12
    assert fast < 1.0

    budget = min(60.0, 100 * fast)
    start = time.perf_counter()
    try:
        canonicalize(g, explode=False, deadline=time.monotonic() + budget)
    except SearchTimeout:
        return
    slow = time.perf_counter() - start
    assert slow > 100 * fast


def median_time(g, repeats=15):
    canonicalize(g)
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        canonicalize(g)
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


@criterion(6, "regular tournaments n = 3, 5, 7: oracle counts, increasing time, t7 >= 5 t5")
def test_c6_tournament_counts():
    for n in (3, 5, 7):
        g = gen_regular_tournament(n)
        assert canonicalize(g).aut_count == brute_force(g).aut_count


@criterion(6, "regular tournaments n = 3, 5, 7: oracle counts, increasing time, t7 >= 5 t5")
def test_c6_tournament_growth():
    t3, t5, t7 = (median_time(gen_regular_tournament(n)) for n in (3, 5, 7))
    print(f"tournament medians: n=3 {t3 * 1e6:.0f} us, n=5 {t5 * 1e6:.0f} us, n=7 {t7 * 1e6:.0f} us, "
          f"t7/t5 = {t7 / t5:.2f}")
    assert t3 < t5 < t7
    assert t7 >= 5 * t5


@criterion(7, "refinement passes never exceed n across criteria 1-3")
def test_c7_refinement_bound(undirected_report, directed_report, er_report, refine_stats):
    assert refine_stats.refine_calls > 10_000
    assert refine_stats.max_refine_ratio <= 1


@criterion(8, "graph6/digraph6 round trips and hand-packed encodings")
def test_c8_round_trips(undirected_corpus, directed_corpus):
    for g in undirected_corpus:
        for fmt in ("graph6", "digraph6"):
            line = emit(g, fmt)
            assert parse(line, fmt) == g and emit(parse(line, fmt), fmt) == line
    for g in directed_corpus:
        line = emit(g, "digraph6")
        assert parse(line, "digraph6") == g and emit(parse(line, "digraph6"), "digraph6") == line


@criterion(8, "graph6/digraph6 round trips and hand-packed encodings")
def test_c8_hand_packed():
    # K3: n = 3 -> chr(66); bits 111 padded to 111000 -> 56 + 63 = chr(119)
    k3 = parse("Bw", "graph6")
    assert k3.n == 3 and sorted(k3.edges()) == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]
    # 0->1->2->0: rows 010 001 100 -> 010001 100000 -> chr(80) chr(95)
    c3 = parse("&BP_", "digraph6")
    assert c3.n == 3 and sorted(c3.edges()) == [(0, 1), (1, 2), (2, 0)]


def bench_once(tmp_path, name):
    out = tmp_path / name
    code = cli.main(["bench", "er", "--count", "100", "--n-min", "10", "--n-max", "40", "--limit", "10s",
                     "--out", str(out)], out=io.StringIO())
    return code, out.read_text().splitlines()


@criterion(9, "bench er protocol: 100 rows, deterministic graph columns, no invariant failures")
def test_c9_bench_protocol(tmp_path):
    code_a, lines_a = bench_once(tmp_path, "a.csv")
    code_b, lines_b = bench_once(tmp_path, "b.csv")
    assert code_a == code_b == 0
    assert lines_a[0] == "graph_id,n,l,l_over_n,elapsed_us,status,aut_count"
    rows_a = [line.split(",") for line in lines_a[1:]]
    rows_b = [line.split(",") for line in lines_b[1:]]
    assert len(rows_a) == len(rows_b) == 100
    assert all(len(row) == 7 for row in rows_a)
    assert [row[:4] for row in rows_a] == [row[:4] for row in rows_b]
    for gid, n, l, ratio, elapsed, status, count in rows_a:
        assert 10 <= int(n) < 40 and 1 <= int(l) <= int(n) * (int(n) - 1) // 2
        assert ratio == f"{int(l) / int(n):.3f}" and int(elapsed) >= 0
        assert status in ("ok", "timeout")
        if status == "ok":
            assert math.factorial(int(n)) % int(count) == 0
