"""Independent reference implementations used as test oracles.

Deliberately naive (loops, enumeration); nothing here imports topiknet.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def pair_counts(docs, terms):
    """Brute-force binary co-occurrence: dict[(a, b)] over every document."""
    out = {(a, b): 0 for a in terms for b in terms}
    for doc in docs:
        present = set(doc)
        for a in terms:
            for b in terms:
                if a != b and a in present and b in present:
                    out[a, b] += 1
    return out


def vector_cosine(u, v):
    dot = sum(x * y for x, y in zip(u, v))
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(y * y for y in v))
    if nu == 0 or nv == 0:
        return 0.0
    return dot / (nu * nv)


def set_partitions(items):
    """Every partition of ``items`` (Bell number many)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def modularity_loops(W, blocks, gamma=1.0):
    """Q = 1/2m sum_ij (A_ij - gamma k_i k_j / 2m) delta(c_i, c_j), by double loop."""
    n = len(W)
    k = [sum(W[i]) for i in range(n)]
    two_m = sum(k)
    if two_m == 0:
        return 0.0
    label = {}
    for c, block in enumerate(blocks):
        for i in block:
            label[i] = c
    q = 0.0
    for i in range(n):
        for j in range(n):
            if label[i] == label[j]:
                q += W[i][j] - gamma * k[i] * k[j] / two_m
    return q / two_m


def best_modularity(W, gamma=1.0):
    return max(modularity_loops(W, p, gamma) for p in set_partitions(range(len(W))))


def simple_path_distances(L):
    """Shortest path lengths by enumerating every simple path (inf if none)."""
    n = len(L)
    D = [[math.inf] * n for _ in range(n)]
    for s in range(n):
        D[s][s] = 0.0

        def walk(node, visited, length):
            for nxt in range(n):
                if nxt not in visited and L[node][nxt] > 0:
                    total = length + L[node][nxt]
                    if total < D[s][nxt]:
                        D[s][nxt] = total
                    walk(nxt, visited | {nxt}, total)

        walk(s, {s}, 0.0)
    return D


def stress_energy(pos, D, scale=1.0, k0=1.0):
    e = 0.0
    n = len(pos)
    for i, j in itertools.combinations(range(n), 2):
        dist = math.hypot(pos[i][0] - pos[j][0], pos[i][1] - pos[j][1])
        e += 0.5 * (k0 / D[i][j] ** 2) * (dist - scale * D[i][j]) ** 2
    return e


def intersection_count(a, b):
    n = 0
    for x in a:
        for y in b:
            if x == y:
                n += 1
                break
    return n


def restricted_growth_strings(n):
    """All set partitions of n items as label arrays (a[0] = 0, a[i] <= max(a[:i]) + 1)."""
    rows = [[0]] if n else [[]]
    for _ in range(1, n):
        rows = [r + [c] for r in rows for c in range(max(r) + 2)]
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def best_modularity_batched(W, gamma=1.0, chunk=20000):
    """Exhaustive maximum of modularity over every partition, vectorized in chunks."""
    A = np.asarray(W, dtype=float)
    n = len(A)
    k = A.sum(1)
    two_m = A.sum()
    labels = restricted_growth_strings(n)
    best = -np.inf
    for start in range(0, len(labels), chunk):
        lab = labels[start:start + chunk]
        P = (lab[:, :, None] == np.arange(n)[None, None, :]).astype(float)
        inside = np.einsum("bic,ij,bjc->b", P, A, P)
        tot = np.einsum("i,bic->bc", k, P)
        q = (inside - gamma * (tot**2).sum(1) / two_m) / two_m
        best = max(best, q.max())
    return float(best)
