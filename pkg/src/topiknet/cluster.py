"""Modularity-based community detection.

Smart local moving: single-node local moving, refinement of each community
into subcommunities, aggregation, and recursion on the aggregated graph.
Several seeded random starts, a resolution parameter ``gamma`` and a
merge-small-clusters post-pass. Each start runs up to ``n_iterations``
rounds, every round starting from the partition the previous one produced.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cooc import Network

_GAIN_EPS = 1e-12
_THETA = 0.01  # refinement randomness


@dataclass(frozen=True)
class ClusterParams:
    resolution: float = 1.0
    min_cluster_size: int = 1
    n_random_starts: int = 10
    n_iterations: int = 10
    seed: int = 0
    merge_small: bool = True

    def __post_init__(self):
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")
        for name in ("min_cluster_size", "n_random_starts", "n_iterations"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass(frozen=True)
class StartResult:
    start: int
    assignment: tuple
    quality: float
    trace: tuple  # modularity after every local-moving sweep


@dataclass(frozen=True)
class Clustering:
    assignment: tuple
    k: int
    quality: float
    start_index: int = 0
    starts: tuple = field(default=(), repr=False, compare=False)

    def clusters(self) -> list[list[int]]:
        out = [[] for _ in range(self.k)]
        for node, c in enumerate(self.assignment):
            out[c].append(node)
        return out


def canonical_labels(assignment: Sequence[int]) -> np.ndarray:
    """Relabel clusters 0, 1, ... in order of first appearance."""
    seen: dict = {}
    return np.array([seen.setdefault(c, len(seen)) for c in assignment], dtype=np.int64)


def _modularity_matrix(W: np.ndarray, assignment, gamma: float) -> float:
    two_m = W.sum()
    if two_m <= 0:
        return 0.0
    labels = canonical_labels(assignment)
    k = W.sum(axis=1)
    q = 0.0
    for c in range(labels.max() + 1 if len(labels) else 0):
        mask = labels == c
        inside = W[np.ix_(mask, mask)].sum()
        tot = k[mask].sum()
        q += inside / two_m - gamma * (tot / two_m) ** 2
    return float(q)


def modularity(net: Network, c, gamma: float = 1.0) -> float:
    """Resolution-scaled modularity of a partition (``Clustering`` or label list)."""
    assignment = c.assignment if isinstance(c, Clustering) else c
    if len(assignment) != net.n:
        raise ValueError("assignment does not cover every node")
    return _modularity_matrix(net.adjacency(), assignment, gamma)


def _local_moving(W, comm, gamma, rng, on_sweep=None, k=None, two_m=None):
    """Move single nodes to the best neighbouring (or an empty) community
    until a sweep makes no move. ``comm`` is modified in place.

    ``k`` and ``two_m`` default to the degrees and total weight of ``W``; a
    subnetwork passes the values of the full network instead.
    """
    n = W.shape[0]
    k = W.sum(axis=1) if k is None else k
    two_m = W.sum() if two_m is None else two_m
    if two_m <= 0 or n < 2:
        return False
    tot = np.bincount(comm, weights=k, minlength=n).astype(float)
    size = np.bincount(comm, minlength=n)
    neighbours = [np.flatnonzero(W[i]) for i in range(n)]
    moved_any = False
    while True:
        moved = 0
        for i in rng.permutation(n):
            ci = comm[i]
            tot[ci] -= k[i]
            size[ci] -= 1
            links: dict[int, float] = {}
            for j in neighbours[i]:
                if j != i:
                    links[comm[j]] = links.get(comm[j], 0.0) + W[i, j]
            scale = gamma * k[i] / two_m
            best_c = ci
            best_gain = links.get(ci, 0.0) - scale * tot[ci]
            for c in sorted(links):
                gain = links[c] - scale * tot[c]
                if gain > best_gain + _GAIN_EPS:
                    best_c, best_gain = c, gain
            if best_gain < -_GAIN_EPS and size[ci] > 0:
                # isolating the node beats every available community
                best_c = int(np.flatnonzero(size == 0)[0])
            comm[i] = best_c
            tot[best_c] += k[i]
            size[best_c] += 1
            if best_c != ci:
                moved += 1
        if moved == 0:
            return moved_any
        moved_any = True
        if on_sweep is not None:
            on_sweep()


def _aggregate(W, labels):
    K = labels.max() + 1
    P = np.zeros((W.shape[0], K))
    P[np.arange(W.shape[0]), labels] = 1.0
    return P.T @ W @ P


def _refine(W, gamma, rng, k, two_m, theta=_THETA):
    """Randomized merge of singletons into subcommunities of one community.

    Each still-singleton node joins a subcommunity with non-negative gain,
    drawn with probability proportional to exp(gain / theta).
    """
    n = W.shape[0]
    sub = np.arange(n)
    tot = k.astype(float).copy()
    size = np.ones(n, dtype=np.int64)
    for i in rng.permutation(n):
        if size[sub[i]] != 1:
            continue
        ci = sub[i]
        tot[ci] -= k[i]
        size[ci] -= 1
        links: dict[int, float] = {ci: 0.0}
        for j in np.flatnonzero(W[i]):
            if j != i:
                links[sub[j]] = links.get(sub[j], 0.0) + W[i, j]
        scale = gamma * k[i] / two_m
        cands = sorted(links)
        gains = np.array([links[c] - scale * tot[c] for c in cands])
        ok = gains >= 0
        ok[cands.index(ci)] = True
        g = np.where(ok, gains, -np.inf)
        w = np.exp((g - g.max()) / theta)
        target = cands[int(rng.choice(len(cands), p=w / w.sum()))]
        sub[i] = target
        tot[target] += k[i]
        size[target] += 1
    return canonical_labels(sub)


def _smart_local_moving(W, comm, gamma, rng, two_m, record):
    """Local moving, then split every community into locally-moved
    subcommunities, aggregate those, and recurse with each aggregate node
    starting in its parent community. Returns the new labels for ``W``."""
    comm = canonical_labels(comm)
    _local_moving(W, comm, gamma, rng, lambda: record(comm), two_m=two_m)
    comm = canonical_labels(comm)
    n = W.shape[0]
    n_comm = comm.max() + 1
    if n_comm == n:
        return comm
    k = W.sum(axis=1)
    sub = np.empty(n, dtype=np.int64)
    parent = []
    offset = 0
    for c in range(n_comm):
        members = np.flatnonzero(comm == c)
        local = np.arange(len(members))
        if len(members) > 1:
            local = _refine(W[np.ix_(members, members)], gamma, rng, k[members], two_m)
        sub[members] = local + offset
        n_sub = int(local.max()) + 1
        parent.extend([c] * n_sub)
        offset += n_sub
    if offset == n:
        # refinement left every node alone; aggregate by community instead
        sub = comm
        parent = list(range(n_comm))
    agg = _aggregate(W, sub)
    agg_comm = _smart_local_moving(
        agg, np.array(parent), gamma, rng, two_m, lambda a: record(a[sub])
    )
    return canonical_labels(agg_comm[sub])


def _kl_pass(W, comm, gamma, two_m):
    """Kernighan-Lin style sweep: move every node once, each time taking the
    best available move even if it lowers quality, then roll back to the
    best prefix. Returns the labels and whether quality rose."""
    n = W.shape[0]
    if two_m <= 0 or n < 2:
        return comm, False
    k = W.sum(axis=1)
    A = W.copy()
    np.fill_diagonal(A, 0.0)
    comm = canonical_labels(comm)
    # column n-1 at most is needed for an empty community
    M = np.zeros((n, n))
    M[np.arange(n), comm] = 1.0
    tot = k @ M
    locked = np.zeros(n, dtype=bool)
    delta = 0.0
    best_delta, best_step = 0.0, 0
    history = []
    for step in range(n):
        links = A @ M
        own = links[np.arange(n), comm] - gamma * k * (tot[comm] - k) / two_m
        gain = links - gamma * np.outer(k, tot) / two_m - own[:, None]
        gain[np.arange(n), comm] = -np.inf
        empty = np.flatnonzero(M.sum(axis=0) == 0)
        keep = M.sum(axis=0) > 0
        if len(empty):
            keep[empty[0]] = True
        gain[:, ~keep] = -np.inf
        gain[locked] = -np.inf
        flat = int(np.argmax(gain))
        i, c = divmod(flat, n)
        if not np.isfinite(gain[i, c]):
            break
        history.append((i, comm[i]))
        M[i, comm[i]] = 0.0
        tot[comm[i]] -= k[i]
        comm[i] = c
        M[i, c] = 1.0
        tot[c] += k[i]
        locked[i] = True
        delta += gain[i, c]
        if delta > best_delta + _GAIN_EPS:
            best_delta, best_step = delta, step + 1
    for i, old in reversed(history[best_step:]):
        comm[i] = old
    return canonical_labels(comm), best_step > 0


def _run_start(W, params: ClusterParams, r: int) -> StartResult:
    rng = np.random.default_rng(np.random.SeedSequence([params.seed % 2**32, r]))
    n = W.shape[0]
    if r == 0:
        assignment = canonical_labels(np.arange(n))
    else:
        # later starts begin from a random partition to explore other basins
        assignment = canonical_labels(rng.integers(0, rng.integers(1, n + 1), size=n))
    gamma = params.resolution
    quality = _modularity_matrix(W, assignment, gamma)
    trace = [quality]

    def record(a):
        trace.append(_modularity_matrix(W, a, gamma))

    two_m = W.sum()
    if two_m <= 0:
        singletons = tuple(range(n))
        return StartResult(r, singletons, 0.0, (0.0,))
    for _ in range(params.n_iterations):
        new = _smart_local_moving(W, assignment, gamma, rng, two_m, record)
        while True:
            new, moved = _kl_pass(W, new, gamma, two_m)
            if not moved:
                break
            record(new)
        new_quality = _modularity_matrix(W, new, gamma)
        if new_quality <= quality + _GAIN_EPS:
            break
        assignment, quality = new, new_quality
    return StartResult(r, tuple(int(x) for x in assignment), quality, tuple(trace))


def relabel_by_size(assignment: Sequence[int]) -> tuple:
    """Contiguous ids, largest cluster first, ties by lowest member node."""
    groups: dict = {}
    for node, c in enumerate(assignment):
        groups.setdefault(c, []).append(node)
    order = sorted(groups, key=lambda c: (-len(groups[c]), groups[c][0]))
    new_id = {c: i for i, c in enumerate(order)}
    return tuple(new_id[c] for c in assignment)


def merge_small(net: Network, c: Clustering, min_size: int, gamma: float = 1.0) -> Clustering:
    """Fold clusters smaller than ``min_size`` into their most similar neighbour cluster."""
    A = net.adjacency()
    labels = [int(x) for x in c.assignment]
    while True:
        sizes: dict[int, int] = {}
        for x in labels:
            sizes[x] = sizes.get(x, 0) + 1
        small = [x for x in sizes if sizes[x] < min_size]
        if not small or len(sizes) < 2:
            break
        victim = min(small, key=lambda x: (sizes[x], x))
        members = [i for i, x in enumerate(labels) if x == victim]
        links: dict[int, float] = {}
        for i in members:
            for j in np.flatnonzero(A[i]):
                if labels[j] != victim:
                    links[labels[j]] = links.get(labels[j], 0.0) + A[i, j]
        candidates = sorted(x for x in sizes if x != victim)
        target = max(candidates, key=lambda x: (links.get(x, 0.0), -x))
        labels = [target if x == victim else x for x in labels]
    assignment = relabel_by_size(labels)
    k = len(set(assignment))
    return Clustering(assignment, k, modularity(net, assignment, gamma), c.start_index, c.starts)


def cluster(net: Network, p: ClusterParams | None = None, n_jobs: int = 1) -> Clustering:
    p = p or ClusterParams()
    if net.n == 0:
        raise ValueError("cannot cluster an empty network")
    W = net.adjacency()
    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            results = list(pool.map(lambda r: _run_start(W, p, r), range(p.n_random_starts)))
    else:
        results = [_run_start(W, p, r) for r in range(p.n_random_starts)]
    # max quality; ties go to the lowest start index
    best = results[0]
    for res in results[1:]:
        if res.quality > best.quality + 1e-12:
            best = res
    assignment = relabel_by_size(best.assignment)
    out = Clustering(
        assignment,
        len(set(assignment)),
        modularity(net, assignment, p.resolution),
        best.start,
        tuple(results),
    )
    if p.merge_small:
        out = merge_small(net, out, p.min_cluster_size, p.resolution)
    return out
