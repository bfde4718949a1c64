"""Kamada-Kawai stress layout over shortest-path distances of a similarity graph."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .cooc import Network

JITTER = 1e-9
MIN_EDGE_LENGTH = 1e-6


@dataclass(frozen=True)
class LayoutParams:
    ideal_edge_scale: float = 1.0
    spring_constant: float = 1.0
    gradient_tolerance: float = 1e-4
    max_node_updates: int | None = None  # None -> 100 * n
    disconnected_distance_factor: float = math.sqrt(2)
    seed: int = 0
    distance_transform: str = "inverse"  # or "complement" (1 - s)

    def __post_init__(self):
        for name in ("ideal_edge_scale", "spring_constant", "gradient_tolerance",
                     "disconnected_distance_factor"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_node_updates is not None and self.max_node_updates < 1:
            raise ValueError("max_node_updates must be positive")
        if self.distance_transform not in ("inverse", "complement"):
            raise ValueError(f"unknown distance transform {self.distance_transform!r}")


@dataclass(frozen=True)
class Layout:
    positions: np.ndarray  # (n, 2)
    final_energy: float
    updates_performed: int
    converged: bool
    energy_trace: tuple = ()


def edge_length(s: float, transform: str = "inverse") -> float:
    if transform == "inverse":
        return 1.0 / s
    return max(1.0 - s, MIN_EDGE_LENGTH)


def graph_distances(net: Network, p: LayoutParams | None = None) -> np.ndarray:
    """All-pairs shortest paths with edge length 1/s; disconnected pairs get
    ``factor * max finite distance``."""
    p = p or LayoutParams()
    n = net.n
    L = np.zeros((n, n))
    for i, j, s in net.edges:
        L[i, j] = L[j, i] = edge_length(s, p.distance_transform)
    D = shortest_path(L, method="D", directed=False) if n else L
    finite = np.isfinite(D)
    off = finite & ~np.eye(n, dtype=bool)
    max_finite = D[off].max() if off.any() else 1.0
    D[~finite] = p.disconnected_distance_factor * max_finite
    return D


def _springs(D, p: LayoutParams):
    n = D.shape[0]
    with np.errstate(divide="ignore"):
        k = np.where(np.eye(n, dtype=bool), 0.0, p.spring_constant / D**2)
    return p.ideal_edge_scale * D, k


def energy(positions, D, p: LayoutParams | None = None) -> float:
    p = p or LayoutParams()
    pos = np.asarray(positions, dtype=float)
    lengths, k = _springs(D, p)
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff**2).sum(-1))
    iu = np.triu_indices(len(pos), 1)
    return float(0.5 * (k[iu] * (dist[iu] - lengths[iu]) ** 2).sum())


def _separate(pos, m, seed):
    """Nudge nodes that coincide with node m by a seeded 1e-9 offset."""
    d = np.sqrt(((pos - pos[m]) ** 2).sum(1))
    d[m] = np.inf
    clash = np.flatnonzero(d == 0)
    if len(clash) == 0:
        return pos
    pos = pos.copy()
    rng = np.random.default_rng(np.random.SeedSequence([seed % 2**32, m]))
    for i in clash:
        angle = rng.uniform(0, 2 * math.pi)
        pos[i] += JITTER * np.array([math.cos(angle), math.sin(angle)])
    return pos


def _node_terms(pos, m, lengths, k):
    diff = pos[m] - pos
    dist = np.sqrt((diff**2).sum(1))
    dist[m] = 1.0
    return diff, dist, lengths[m], k[m]


def _gradient(pos, m, lengths, k):
    diff, dist, l, km = _node_terms(pos, m, lengths, k)
    coef = km * (1.0 - l / dist)
    coef[m] = 0.0
    return (coef[:, None] * diff).sum(0)


def gradient(positions, D, p: LayoutParams | None = None, m: int = 0) -> tuple[float, float]:
    """Analytic (dE/dx_m, dE/dy_m)."""
    p = p or LayoutParams()
    pos = _separate(np.asarray(positions, dtype=float), m, p.seed)
    lengths, k = _springs(D, p)
    g = _gradient(pos, m, lengths, k)
    return float(g[0]), float(g[1])


def _all_gradients(pos, lengths, k):
    diff = pos[:, None, :] - pos[None, :, :]
    dist = np.sqrt((diff**2).sum(-1))
    np.fill_diagonal(dist, 1.0)
    coef = k * (1.0 - lengths / dist)
    np.fill_diagonal(coef, 0.0)
    return (coef[:, :, None] * diff).sum(1)


def _pair_pull(pos, m, lengths, k):
    """Term of each node's gradient that involves node m."""
    diff = pos - pos[m]
    dist = np.sqrt((diff**2).sum(1))
    dist[m] = 1.0
    coef = k[m] * (1.0 - lengths[m] / dist)
    coef[m] = 0.0
    return coef[:, None] * diff


def _hessian(pos, m, lengths, k):
    diff, dist, l, km = _node_terms(pos, m, lengths, k)
    d3 = dist**3
    dx, dy = diff[:, 0], diff[:, 1]
    mask = np.arange(len(pos)) != m
    hxx = (km * (1 - l * dy**2 / d3))[mask].sum()
    hyy = (km * (1 - l * dx**2 / d3))[mask].sum()
    hxy = (km * l * dx * dy / d3)[mask].sum()
    return np.array([[hxx, hxy], [hxy, hyy]])


def _local_energy(pos, m, lengths, k):
    diff, dist, l, km = _node_terms(pos, m, lengths, k)
    e = 0.5 * km * (dist - l) ** 2
    e[m] = 0.0
    return e.sum()


def initial_positions(n: int, D: np.ndarray, p: LayoutParams) -> np.ndarray:
    """Nodes on a circle of radius L*max(D)/2 with seeded angular jitter."""
    if n == 1:
        return np.zeros((1, 2))
    radius = p.ideal_edge_scale * D.max() / 2
    rng = np.random.default_rng(p.seed % 2**32)
    step = 2 * math.pi / n
    angles = step * np.arange(n) + rng.uniform(-0.25, 0.25, size=n) * step
    return radius * np.column_stack([np.cos(angles), np.sin(angles)])


def layout(net: Network, p: LayoutParams | None = None) -> Layout:
    """Move one node at a time (largest gradient first) by a safeguarded
    Newton step until every gradient norm is below the tolerance."""
    p = p or LayoutParams()
    n = net.n
    if n == 0:
        raise ValueError("cannot lay out an empty network")
    if n == 1:
        return Layout(np.zeros((1, 2)), 0.0, 0, True, (0.0,))
    D = graph_distances(net, p)
    lengths, k = _springs(D, p)
    pos = initial_positions(n, D, p)
    max_updates = p.max_node_updates or 100 * n
    E = energy(pos, D, p)
    trace = [E]
    grads = _all_gradients(pos, lengths, k)
    norms = np.sqrt((grads**2).sum(1))
    updates = 0
    while norms.max() > p.gradient_tolerance and updates < max_updates:
        m = int(np.argmax(norms))
        separated = _separate(pos, m, p.seed)
        if separated is not pos:
            pos = separated
            grads = _all_gradients(pos, lengths, k)
        g = _gradient(pos, m, lengths, k)
        before = _local_energy(pos, m, lengths, k)
        candidate = None
        H = _hessian(pos, m, lengths, k)
        try:
            step = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            step = None
        if step is not None and np.all(np.isfinite(step)):
            trial = pos.copy()
            trial[m] += step
            after = _local_energy(trial, m, lengths, k)
            if after <= before:
                candidate = (trial, after)
        if candidate is None:
            # fall back to gradient descent, halving the step until energy drops
            alpha = 1.0 / max(k[m].sum(), 1e-12)
            for _ in range(60):
                trial = pos.copy()
                trial[m] -= alpha * g
                after = _local_energy(trial, m, lengths, k)
                if after <= before:
                    candidate = (trial, after)
                    break
                alpha /= 2
        updates += 1
        if candidate is None:
            # no descent step exists numerically; stop polishing this node
            norms[m] = 0.0
            continue
        old_pull = _pair_pull(pos, m, lengths, k)
        pos, after = candidate
        E += after - before
        trace.append(E)
        if updates % n == 0:
            grads = _all_gradients(pos, lengths, k)
        else:
            # only the pair terms involving m changed
            grads += _pair_pull(pos, m, lengths, k) - old_pull
            grads[m] = _gradient(pos, m, lengths, k)
        norms = np.sqrt((grads**2).sum(1))
    pos = pos - pos.mean(axis=0)
    final = energy(pos, D, p)
    final_norms = np.sqrt((_all_gradients(pos, lengths, k) ** 2).sum(1))
    converged = bool(final_norms.max() <= p.gradient_tolerance)
    return Layout(pos, final, updates, converged, tuple(trace))
