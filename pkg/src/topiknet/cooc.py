"""Top-N term selection, binary co-occurrence counting, cosine normalization
and network assembly."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySelectionError
from .ingest import DocumentSet
from .terms import HASHTAG, KEYWORD, Term


@dataclass(frozen=True)
class TermSelection:
    ranked: tuple  # ((Term, document frequency), ...)
    target_n: int
    achieved_n: int
    min_freq: int | None = None

    @property
    def terms(self) -> list[Term]:
        return [t for t, _ in self.ranked]

    @property
    def frequencies(self) -> list[int]:
        return [f for _, f in self.ranked]


def document_frequencies(docs: Iterable[tuple]) -> Counter:
    freq: Counter = Counter()
    for _, terms in docs:
        freq.update(set(terms))
    return freq


def _rank_key(item):
    term, f = item
    return (-f, term.canonical, term.kind)


def tie_safe_cut(freqs: Sequence[int], target_n: int) -> int:
    """Largest prefix length <= target_n that does not split a run of equal values."""
    if len(freqs) <= target_n:
        return len(freqs)
    cut = target_n
    boundary = freqs[target_n]
    while cut > 0 and freqs[cut - 1] == boundary:
        cut -= 1
    return cut


def select_top_terms(
    docset: DocumentSet | Iterable[tuple],
    target_n: int,
    min_freq: int | None = None,
    kind: str | None = None,
) -> TermSelection:
    if target_n < 1:
        raise ValueError("target_n must be >= 1")
    docs = docset.docs if isinstance(docset, DocumentSet) else docset
    freq = document_frequencies(docs)
    items = [
        (t, f) for t, f in freq.items()
        if (min_freq is None or f >= min_freq) and (kind is None or t.kind == kind)
    ]
    items.sort(key=_rank_key)
    cut = tie_safe_cut([f for _, f in items], target_n)
    if cut == 0:
        raise EmptySelectionError("empty selection: no terms survive the frequency/tie cut")
    return TermSelection(tuple(items[:cut]), target_n, cut, min_freq)


def select_mixed(
    docset: DocumentSet, n_keywords: int = 35, n_hashtags: int = 35, min_freq: int | None = None
) -> TermSelection:
    """Independent top-N for keywords and for hashtags, then their union."""
    kw = select_top_terms(docset, n_keywords, min_freq, kind=KEYWORD)
    ht = select_top_terms(docset, n_hashtags, min_freq, kind=HASHTAG)
    ranked = tuple(sorted(kw.ranked + ht.ranked, key=_rank_key))
    return TermSelection(ranked, n_keywords + n_hashtags, len(ranked), min_freq)


@dataclass(frozen=True)
class CoocMatrix:
    terms: tuple
    counts: np.ndarray  # symmetric int64, zero diagonal
    n_docs: int

    def __post_init__(self):
        c = self.counts
        if c.shape != (len(self.terms), len(self.terms)):
            raise ValueError("count matrix shape does not match the term list")


def incidence(docs: Iterable[tuple], terms: Sequence[Term]) -> np.ndarray:
    index = {t: i for i, t in enumerate(terms)}
    docs = list(docs)
    X = np.zeros((len(docs), len(terms)), dtype=np.int64)
    for r, (_, doc_terms) in enumerate(docs):
        for t in doc_terms:
            j = index.get(t)
            if j is not None:
                X[r, j] = 1
    return X


def build_cooccurrence(docset: DocumentSet | Iterable[tuple], sel: TermSelection | Sequence[Term]) -> CoocMatrix:
    docs = list(docset.docs if isinstance(docset, DocumentSet) else docset)
    terms = tuple(sel.terms if isinstance(sel, TermSelection) else sel)
    X = incidence(docs, terms)
    C = X.T @ X
    np.fill_diagonal(C, 0)
    return CoocMatrix(terms, C, len(docs))


def merge_counts(parts: Sequence[CoocMatrix]) -> CoocMatrix:
    """Combine counts from document shards that share a term list."""
    terms = parts[0].terms
    if any(p.terms != terms for p in parts):
        raise ValueError("shards disagree on the term list")
    return CoocMatrix(terms, sum(p.counts for p in parts), sum(p.n_docs for p in parts))


def cosine_normalize(C: CoocMatrix, method: str = "cosine") -> np.ndarray:
    """Similarity table with zero diagonal.

    ``cosine`` compares co-occurrence row vectors; ``salton`` divides each
    count by the geometric mean of the two terms' total counts.
    """
    c = C.counts.astype(float)
    if method == "cosine":
        norms = np.sqrt((c * c).sum(axis=1))
        dots = c @ c.T
    elif method == "salton":
        norms = np.sqrt(c.sum(axis=1))
        dots = c
    else:
        raise ValueError(f"unknown normalization {method!r}")
    denom = np.outer(norms, norms)
    with np.errstate(invalid="ignore", divide="ignore"):
        S = np.where(denom > 0, dots / np.where(denom > 0, denom, 1.0), 0.0)
    S = np.minimum(S, 1.0)
    np.fill_diagonal(S, 0.0)
    return S


def node_weights(C: CoocMatrix) -> list[int]:
    return [int(w) for w in C.counts.sum(axis=1)]


@dataclass(frozen=True)
class Node:
    term: Term
    weight: int
    frequency: int


@dataclass(frozen=True)
class Network:
    nodes: tuple  # (Node, ...)
    edges: tuple  # ((i, j, similarity), ...) with i < j

    def __post_init__(self):
        n = len(self.nodes)
        for i, j, s in self.edges:
            if not 0 <= i < j < n:
                raise ValueError(f"bad edge ({i}, {j}) for {n} nodes")

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def terms(self) -> list[Term]:
        return [nd.term for nd in self.nodes]

    @property
    def labels(self) -> list[str]:
        return [nd.term.label for nd in self.nodes]

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for i, j, s in self.edges:
            A[i, j] = A[j, i] = s
        return A

    @classmethod
    def from_adjacency(cls, A, labels=None) -> "Network":
        """Convenience constructor for tests and hand-built graphs."""
        A = np.asarray(A, dtype=float)
        n = A.shape[0]
        labels = labels or [f"N{i}" for i in range(n)]
        nodes = tuple(Node(Term(lbl), 0, 0) for lbl in labels)
        edges = tuple(
            (i, j, float(A[i, j])) for i in range(n) for j in range(i + 1, n) if A[i, j] > 0
        )
        return cls(nodes, edges)


def build_network(sim: np.ndarray, weights: Sequence[int], sel: TermSelection, eps: float = 0.0) -> Network:
    n = len(sel.ranked)
    sim = np.asarray(sim)
    if sim.shape != (n, n) or len(weights) != n:
        raise ValueError(
            f"dimension mismatch: {n} terms, similarity {sim.shape}, {len(weights)} weights"
        )
    nodes = tuple(Node(t, int(w), int(f)) for (t, f), w in zip(sel.ranked, weights))
    edges = tuple(
        (i, j, float(sim[i, j])) for i in range(n) for j in range(i + 1, n) if sim[i, j] > eps
    )
    return Network(nodes, edges)
