import itertools

import pytest

from ramsq.errors import ResourceLimitError
from ramsq.powers import (
    BurrParameters,
    SimpleGraph,
    bfs_distances,
    burr_lower_bound,
    complete_graph,
    cycle_graph,
    exact_colouring_stats,
    graph6_decode,
    graph6_encode,
    graph_power,
    independence_number,
    path_graph,
    square_cycle,
    square_path,
)


def test_graph_power_small():
    assert graph_power(path_graph(3), 2) == complete_graph(3)
    p4sq = graph_power(path_graph(4), 2)
    assert p4sq.edge_count() == 5 and not p4sq.has_edge(0, 3)
    with pytest.raises(ValueError):
        graph_power(path_graph(3), 0)


def test_graph_power_c6_by_bfs_oracle():
    g = graph_power(cycle_graph(6), 2)
    assert g.edge_count() == 12
    assert all(g.degree(v) == 4 for v in range(6))
    base = cycle_graph(6)
    for u in range(6):
        dist = bfs_distances(base, u)
        for v in range(6):
            if u != v:
                assert g.has_edge(u, v) == (dist[v] <= 2)


def test_power_monotone_and_identity():
    for n in (5, 8):
        g = cycle_graph(n)
        assert graph_power(g, 1) == g
        for k in (1, 2, 3):
            gk, gk1 = graph_power(g, k), graph_power(g, k + 1)
            for u, v in gk.edges():
                assert gk1.has_edge(u, v)


def test_square_path_shapes():
    assert square_path(3) == complete_graph(3)
    assert square_path(10).edge_count() == 17
    for n in range(2, 30):
        assert square_path(n).edge_count() == 2 * n - 3
        assert square_path(n) == graph_power(path_graph(n), 2)


def test_square_cycle_shapes():
    assert square_cycle(4) == complete_graph(4)
    for n in range(5, 25):
        g = square_cycle(n)
        assert g.edge_count() == 2 * n
        assert g == graph_power(cycle_graph(n), 2)
    with pytest.raises(ValueError):
        square_cycle(2)


def test_burr_lower_bound():
    assert burr_lower_bound(BurrParameters(3, 3, 1)) == 5
    assert burr_lower_bound(BurrParameters(3, 12, 4)) == 26
    assert burr_lower_bound(BurrParameters(2, 7, 1)) == 7


def test_colouring_stats_small():
    assert exact_colouring_stats(complete_graph(3)) == (3, 1)
    assert exact_colouring_stats(square_path(9)) == (3, 3)
    assert exact_colouring_stats(SimpleGraph(5)) == (1, 5)


def test_colouring_stats_square_paths():
    for n in range(2, 7):
        assert exact_colouring_stats(square_path(3 * n)) == (3, n)


def _brute_sigma(g, chi):
    best = None
    for colouring in itertools.product(range(chi), repeat=g.n):
        if any(colouring[u] == colouring[v] for u, v in g.edges()):
            continue
        if len(set(colouring)) != chi:
            continue
        sizes = [colouring.count(c) for c in range(chi)]
        m = min(s for s in sizes)
        best = m if best is None else min(best, m)
    return best


def test_colouring_stats_brute_force_oracle():
    import random
    rng = random.Random(4)
    for _ in range(15):
        n = rng.randint(3, 8)
        g = SimpleGraph(n)
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.45:
                    g.add_edge(i, j)
        chi, sigma = exact_colouring_stats(g)
        assert sigma == _brute_sigma(g, chi)


def test_colouring_stats_limit():
    with pytest.raises(ResourceLimitError):
        exact_colouring_stats(SimpleGraph(30))


def test_independence_number():
    assert independence_number(square_path(8)) == 3
    assert independence_number(complete_graph(5)) == 1
    assert independence_number(SimpleGraph(6)) == 6
    # alpha(P_m^2) = ceil(m/3) (indices pairwise more than 2 apart)
    for m in range(2, 21):
        assert independence_number(square_path(m)) == (m + 2) // 3
    with pytest.raises(ResourceLimitError):
        independence_number(SimpleGraph(25))


def test_graph6_codec():
    assert graph6_encode(complete_graph(3)) == "Bw"
    for g in (path_graph(7), square_path(12), cycle_graph(9), SimpleGraph(1)):
        assert graph6_decode(graph6_encode(g)) == g
    import random
    rng = random.Random(8)
    for _ in range(10):
        n = rng.randint(1, 70)
        g = SimpleGraph(n)
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.3:
                    g.add_edge(i, j)
        assert graph6_decode(graph6_encode(g)) == g
    assert graph6_decode(">>graph6<<Bw") == complete_graph(3)
