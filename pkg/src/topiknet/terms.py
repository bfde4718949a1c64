"""Keyword / hashtag canonicalization and synonym merging."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

KEYWORD = "keyword"
HASHTAG = "hashtag"
KINDS = (KEYWORD, HASHTAG)


@dataclass(frozen=True, order=True)
class Term:
    canonical: str
    kind: str = KEYWORD

    def __post_init__(self):
        if not self.canonical:
            raise ValueError("term canonical form is empty")
        if self.kind not in KINDS:
            raise ValueError(f"unknown term kind {self.kind!r}")
        if self.canonical.startswith("#") or any(c.isspace() for c in self.canonical):
            raise ValueError(f"non-canonical term {self.canonical!r}")

    @property
    def label(self) -> str:
        """Display label; hashtags keep their '#' so mixed networks stay readable."""
        return "#" + self.canonical if self.kind == HASHTAG else self.canonical

    @classmethod
    def from_label(cls, label: str) -> "Term":
        if label.startswith("#"):
            return cls(label[1:], HASHTAG)
        return cls(label, KEYWORD)


def _fold(text: str) -> str:
    # upper() first so variants like dotless i collapse before folding
    return text.upper().casefold()


def canonicalize_keyword(raw: str) -> Term:
    """'  PAIN  management ' -> Term('Pain_management')."""
    text = "_".join(raw.split()).lstrip("#")
    if not text:
        raise ValueError(f"empty keyword: {raw!r}")
    folded = _fold(text)
    return Term(folded[0].upper() + folded[1:], KEYWORD)


def canonicalize_hashtag(raw: str) -> Term:
    text = raw.strip()
    if text.startswith("#"):
        text = text[1:]
    text = "_".join(text.split())
    if not text:
        raise ValueError(f"empty hashtag: {raw!r}")
    return Term(_fold(text).upper(), HASHTAG)


@dataclass(frozen=True)
class MergeRule:
    source: str
    target: str
    provenance: str = ""


@dataclass(frozen=True)
class RuleSet:
    """Source -> target table over canonical forms.

    ``rules`` keeps every row as loaded (duplicates included) so that
    :func:`validate_rules` can report them; lookups use the first row per source.
    """

    rules: tuple[MergeRule, ...] = ()
    kinds: frozenset = field(default_factory=lambda: frozenset({KEYWORD}))

    @property
    def table(self) -> dict[str, str]:
        out: dict[str, str] = {}
        for r in self.rules:
            out.setdefault(r.source, r.target)
        return out

    def __len__(self):
        return len(self.rules)


def apply_merge_rules(t: Term, rs: RuleSet) -> Term:
    if t.kind not in rs.kinds:
        return t
    target = rs.table.get(t.canonical)
    if target is None:
        return t
    return Term(target, t.kind)


def validate_rules(rs: RuleSet) -> list[str]:
    """Return a list of problems; empty means the rule set is usable."""
    problems = []
    seen: dict[str, str] = {}
    for r in rs.rules:
        if r.source in seen:
            problems.append(
                f"duplicate source {r.source!r} ({seen[r.source]!r} and {r.target!r})"
            )
        else:
            seen[r.source] = r.target
    table = rs.table
    for src, tgt in table.items():
        if src == tgt:
            problems.append(f"cycle: {src} -> {src}")
            continue
        if tgt not in table:
            continue
        # walk the chain to see whether it loops back
        path = [src, tgt]
        node = tgt
        while node in table and table[node] not in path:
            node = table[node]
            path.append(node)
        if node in table and table[node] in path:
            path.append(table[node])
            problems.append("cycle: " + " -> ".join(path))
        else:
            problems.append("chain: " + " -> ".join(path))
    return problems


def _read_rule_rows(lines: Iterable[str]) -> list[MergeRule]:
    rows = []
    content = [ln for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    for lineno, row in enumerate(csv.reader(content, delimiter="\t"), 1):
        if len(row) < 2:
            raise ValueError(f"merge rule row {lineno}: expected source<TAB>target")
        source = canonicalize_keyword(row[0]).canonical
        target = canonicalize_keyword(row[1]).canonical
        rows.append(MergeRule(source, target, row[2].strip() if len(row) > 2 else ""))
    return rows


def load_rules(path: str | Path | None = None, kinds=(KEYWORD,)) -> RuleSet:
    """Load a rule TSV (source, target, provenance). ``None`` loads the shipped defaults."""
    if path is None:
        text = resources.files("topiknet").joinpath("data/merge_rules.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return RuleSet(tuple(_read_rule_rows(text.splitlines())), frozenset(kinds))


def default_rules() -> RuleSet:
    return load_rules(None)
