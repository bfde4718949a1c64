import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from oracles import best_modularity, best_modularity_batched, modularity_loops, set_partitions
from topiknet.cluster import (
    ClusterParams, Clustering, canonical_labels, cluster, merge_small, modularity, relabel_by_size,
)
from topiknet.cooc import Network


def two_cliques(size=5, bridge=0.0):
    n = 2 * size
    A = np.zeros((n, n))
    A[:size, :size] = 1
    A[size:, size:] = 1
    np.fill_diagonal(A, 0)
    if bridge:
        A[size - 1, size] = A[size, size - 1] = bridge
    return A


def random_graph(rng, n, p=0.45):
    A = np.triu((rng.random((n, n)) < p) * rng.uniform(0.1, 1.0, (n, n)), 1)
    return A + A.T


def blocks(assignment):
    out = {}
    for i, c in enumerate(assignment):
        out.setdefault(c, []).append(i)
    return list(out.values())


def test_two_cliques_every_start():
    A = two_cliques()
    assert abs(best_modularity_batched(A) - 0.5) < 1e-12
    c = cluster(Network.from_adjacency(A), ClusterParams(n_random_starts=10))
    assert c.k == 2
    assert abs(c.quality - 0.5) < 1e-9
    assert abs(modularity_loops(A.tolist(), blocks(c.assignment)) - 0.5) < 1e-12
    assert len(c.starts) == 10
    for s in c.starts:
        assert len(set(s.assignment)) == 2
        assert set(s.assignment[:5]).isdisjoint(s.assignment[5:])
        assert abs(s.quality - 0.5) < 1e-9


def test_small_cliques_optimum_unique():
    # 2 triangles: exhaustive search confirms the clique split is the unique maximizer
    A = two_cliques(3)
    W = A.tolist()
    scored = sorted((modularity_loops(W, p), sorted(map(sorted, p))) for p in set_partitions(range(6)))
    assert scored[-1][1] == [[0, 1, 2], [3, 4, 5]]
    assert scored[-1][0] - scored[-2][0] > 1e-6


def test_single_node():
    c = cluster(Network.from_adjacency(np.zeros((1, 1))))
    assert c.assignment == (0,) and c.k == 1 and c.quality == 0.0


def test_edgeless_graph():
    c = cluster(Network.from_adjacency(np.zeros((4, 4))))
    assert c.k == 4 and c.quality == 0.0


@pytest.mark.parametrize("graph_seed", range(20))
def test_matches_exhaustive_optimum(graph_seed):
    rng = np.random.default_rng(graph_seed)
    n = int(rng.integers(3, 9))
    A = random_graph(rng, n)
    c = cluster(Network.from_adjacency(A), ClusterParams(merge_small=False))
    assert abs(c.quality - best_modularity(A.tolist())) < 1e-9


def test_batched_oracle_agrees_with_loops():
    for seed in range(5):
        A = random_graph(np.random.default_rng(seed), 6)
        assert best_modularity_batched(A) == pytest.approx(best_modularity(A.tolist()), abs=1e-12)


@pytest.mark.parametrize("gamma", [0.5, 2.0])
def test_resolution_optimum(gamma):
    rng = np.random.default_rng(99)
    A = random_graph(rng, 7, 0.6)
    c = cluster(Network.from_adjacency(A), ClusterParams(resolution=gamma, merge_small=False))
    assert abs(c.quality - best_modularity(A.tolist(), gamma)) < 1e-9


def test_modularity_formulas():
    A = two_cliques(3, bridge=1.0)
    net = Network.from_adjacency(A)
    k = A.sum(1)
    two_m = A.sum()
    # one cluster: every edge is inside and the null term sums to gamma
    assert modularity(net, [0] * 6) == pytest.approx(0.0, abs=1e-12)
    assert modularity(net, [0] * 6, gamma=0.5) == pytest.approx(0.5)
    assert modularity(net, list(range(6))) == pytest.approx(-((k / two_m) ** 2).sum())
    split = [0, 0, 0, 1, 1, 1]
    assert modularity(net, split) == pytest.approx(modularity_loops(A.tolist(), blocks(split)), abs=1e-12)


@given(st.lists(st.integers(0, 3), min_size=6, max_size=6), st.permutations(range(4)))
def test_label_permutation_invariance(labels, perm):
    net = Network.from_adjacency(two_cliques(3, bridge=0.5))
    relabelled = [perm[x] for x in labels]
    assert modularity(net, labels) == pytest.approx(modularity(net, relabelled), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 12))
def test_trace_monotone(seed, n):
    A = random_graph(np.random.default_rng(seed), n)
    c = cluster(Network.from_adjacency(A), ClusterParams(seed=seed))
    for s in c.starts:
        assert all(b >= a - 1e-12 for a, b in zip(s.trace, s.trace[1:]))
        assert s.trace[0] - 1e-12 <= s.quality <= max(s.trace) + 1e-12


def test_deterministic_and_thread_independent():
    A = random_graph(np.random.default_rng(5), 25, 0.2)
    net = Network.from_adjacency(A)
    p = ClusterParams(seed=11)
    a, b, c = cluster(net, p), cluster(net, p), cluster(net, p, n_jobs=4)
    assert a == b == c
    assert [s.assignment for s in a.starts] == [s.assignment for s in c.starts]


def test_relabel_by_size():
    assert relabel_by_size([5, 7, 7, 5, 7, 9]) == (1, 0, 0, 1, 0, 2)
    assert canonical_labels([3, 3, 1]).tolist() == [0, 0, 1]


def test_merge_small_identity():
    net = Network.from_adjacency(two_cliques(3, bridge=1.0))
    c = cluster(net, ClusterParams(merge_small=False))
    assert merge_small(net, c, 1).assignment == c.assignment


def test_merge_singleton_into_only_neighbour():
    A = two_cliques(3)
    A = np.pad(A, ((0, 1), (0, 1)))
    A[6, 4] = A[4, 6] = 0.1
    net = Network.from_adjacency(A)
    c = Clustering((0, 0, 0, 1, 1, 1, 2), 3, 0.0)
    m = merge_small(net, c, 2)
    assert m.assignment[6] == m.assignment[4] and m.k == 2


def test_merge_tie_goes_to_lower_id():
    A = np.zeros((5, 5))
    A[0, 1] = A[2, 3] = 1.0
    A[4, 1] = A[4, 3] = 0.5  # equal pull from clusters 0 and 1
    A = A + A.T
    net = Network.from_adjacency(A)
    m = merge_small(net, Clustering((0, 0, 1, 1, 2), 3, 0.0), 2)
    assert m.assignment[4] == m.assignment[0] != m.assignment[2]
    # the outcome does not depend on which ids the clusters carried
    m2 = merge_small(net, Clustering((1, 1, 0, 0, 2), 3, 0.0), 2)
    assert m2.assignment[4] == m2.assignment[2]


def test_min_cluster_size_param():
    A = two_cliques(4, bridge=0.2)
    A = np.pad(A, ((0, 1), (0, 1)))
    A[8, 0] = A[0, 8] = 0.01
    c = cluster(Network.from_adjacency(A), ClusterParams(min_cluster_size=3))
    assert min(np.bincount(c.assignment)) >= 3


def test_isolated_node_does_not_disturb():
    A = two_cliques(4, bridge=0.3)
    base = cluster(Network.from_adjacency(A))
    bigger = cluster(Network.from_adjacency(np.pad(A, ((0, 1), (0, 1)))))
    assert canonical_labels(bigger.assignment[:8]).tolist() == canonical_labels(base.assignment).tolist()
    assert bigger.assignment[8] not in bigger.assignment[:8]


@pytest.mark.parametrize("bad", [dict(resolution=0), dict(n_random_starts=0), dict(min_cluster_size=0)])
def test_param_validation(bad):
    with pytest.raises(ValueError):
        ClusterParams(**bad)
