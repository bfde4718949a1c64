"""Term-set overlap between networks, as percentage of the smaller network."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .errors import EmptyNetworkError
from .terms import Term


@dataclass(frozen=True)
class OverlapResult:
    count: int
    pct: float
    size_a: int
    size_b: int

    @property
    def denominator(self) -> int:
        return min(self.size_a, self.size_b)

    @property
    def pct_text(self) -> str:
        return _fmt_pct(self.pct)


def term_key(t) -> tuple[str, str]:
    """Identity used for matching: (kind, case-folded canonical)."""
    if isinstance(t, Term):
        return (t.kind, t.canonical.casefold())
    return term_key(Term.from_label(str(t)))


def overlap(a: Iterable, b: Iterable) -> OverlapResult:
    ka = {term_key(t) for t in a}
    kb = {term_key(t) for t in b}
    if not ka or not kb:
        raise EmptyNetworkError("empty network: cannot compute overlap")
    count = len(ka & kb)
    return OverlapResult(count, 100.0 * count / min(len(ka), len(kb)), len(ka), len(kb))


@dataclass(frozen=True)
class OverlapMatrix:
    """Diagonal holds sizes, upper triangle percentages, lower triangle counts."""

    labels: tuple
    sizes: tuple
    counts: tuple  # full symmetric count table
    pcts: tuple  # full symmetric percentage table

    def cell(self, i: int, j: int):
        if i == j:
            return self.sizes[i]
        return self.pcts[i][j] if i < j else self.counts[i][j]

    def to_tsv(self) -> str:
        lines = ["\t".join(["network", *self.labels])]
        for i, name in enumerate(self.labels):
            row = [name]
            for j in range(len(self.labels)):
                row.append(_fmt_pct(self.cell(i, j)) if i < j else str(self.cell(i, j)))
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        n = len(self.labels)
        cells = [
            [self.labels[i]] + [
                (_fmt_pct(self.cell(i, j)) + "%") if i < j else str(self.cell(i, j))
                for j in range(n)
            ]
            for i in range(n)
        ]
        header = [""] + list(self.labels)
        widths = [max(len(r[c]) for r in cells + [header]) for c in range(n + 1)]
        out = []
        for row in [header] + cells:
            out.append("  ".join(
                row[0].ljust(widths[0]) if c == 0 else row[c].rjust(widths[c])
                for c in range(n + 1)
            ).rstrip())
        return "\n".join(out) + "\n"


def _fmt_pct(x: float) -> str:
    """One decimal, halves rounded up (52/64 = 81.25 prints as 81.3)."""
    return str(Decimal(repr(x)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def overlap_matrix(nets: Sequence[tuple]) -> OverlapMatrix:
    if len(nets) < 2:
        raise ValueError("need at least two networks to compare")
    labels = tuple(name for name, _ in nets)
    sets = [list(terms) for _, terms in nets]
    n = len(sets)
    counts = [[0] * n for _ in range(n)]
    pcts = [[100.0] * n for _ in range(n)]
    sizes = []
    for i in range(n):
        for j in range(i, n):
            r = overlap(sets[i], sets[j])
            if i == j:
                sizes.append(r.size_a)
            counts[i][j] = counts[j][i] = r.count
            pcts[i][j] = pcts[j][i] = r.pct
    return OverlapMatrix(labels, tuple(sizes), tuple(map(tuple, counts)), tuple(map(tuple, pcts)))
