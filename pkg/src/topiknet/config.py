"""Pipeline configuration with a JSON file form."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .cluster import ClusterParams
from .layout import LayoutParams

SEED_ENV = "TOPIKNET_SEED"


@dataclass(frozen=True)
class VariantTarget:
    target_n: int = 70
    min_freq: int | None = None
    n_keywords: int | None = None  # mixed variants only
    n_hashtags: int | None = None


def default_targets() -> dict[str, VariantTarget]:
    return {
        "V1": VariantTarget(70),
        "V2": VariantTarget(70),
        "V3": VariantTarget(70),
        # "more than five times" -> at least 6 documents
        "V4": VariantTarget(70, min_freq=6),
        "V5": VariantTarget(70, min_freq=6),
        "V6": VariantTarget(70),
        "V7": VariantTarget(70),
        "V8": VariantTarget(70, n_keywords=35, n_hashtags=35),
        "V9": VariantTarget(70, n_keywords=35, n_hashtags=35),
    }


@dataclass(frozen=True)
class PipelineConfig:
    publications: str | None = None
    tweets: str | None = None
    scores: str | None = None
    merge_rules: str | None = None  # None -> shipped default rules
    publications_format: str | None = None
    variants: tuple = ("V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8", "V9")
    targets: dict = field(default_factory=default_targets)
    cluster: ClusterParams = field(default_factory=ClusterParams)
    layout: LayoutParams = field(default_factory=LayoutParams)
    normalization: str = "cosine"
    edge_epsilon: float = 0.0
    out: str = "out"
    availability_threshold: int = 90
    min_accounts: int = 2
    bot_threshold: float = 0.5
    missing_score_policy: str = "unclassified"
    histogram_bin_width: float = 0.05

    def to_dict(self) -> dict:
        d = asdict(self)
        d["variants"] = list(self.variants)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        kw = dict(d)
        if "targets" in kw:
            targets = default_targets()
            targets.update({k: VariantTarget(**v) for k, v in kw["targets"].items()})
            kw["targets"] = targets
        if "cluster" in kw:
            kw["cluster"] = ClusterParams(**kw["cluster"])
        if "layout" in kw:
            kw["layout"] = LayoutParams(**kw["layout"])
        if "variants" in kw:
            kw["variants"] = tuple(kw["variants"])
        return cls(**kw)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        return cls.from_dict(json.loads(Path(path).read_text("utf-8")))

    def digest(self) -> str:
        """Hash of the settings that shape outputs (input paths excluded)."""
        d = self.to_dict()
        for key in ("publications", "tweets", "scores", "merge_rules", "out"):
            d.pop(key)
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def with_seed(self, seed: int) -> "PipelineConfig":
        return replace(
            self, cluster=replace(self.cluster, seed=seed), layout=replace(self.layout, seed=seed)
        )

    def with_env(self, environ=os.environ) -> "PipelineConfig":
        raw = environ.get(SEED_ENV)
        if raw is None or raw == "":
            return self
        return self.with_seed(int(raw))
