"""End-to-end wiring: ingest -> variant -> selection -> co-occurrence ->
clustering -> layout -> files."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .bots import BotSummary, parse_scores, summarize
from .cluster import Clustering, cluster
from .compare import OverlapMatrix, overlap, overlap_matrix
from .config import PipelineConfig
from .cooc import (
    Network, TermSelection, build_cooccurrence, build_network, cosine_normalize,
    node_weights, select_mixed, select_top_terms,
)
from .errors import EmptyVariantError
from .export import bundle_to_dict, dumps, export_clu, export_pajek, render_svg
from .ingest import (
    VARIANT_TITLES, Corpus, CorpusConfig, DocumentSet, build_corpus, corpus_summary,
    parse_publications, parse_tweets, select_variant,
)
from .layout import Layout, layout
from .terms import load_rules

log = logging.getLogger(__name__)


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class Inputs:
    corpus: Corpus
    scores: list
    rules: object
    digests: dict


def load_inputs(cfg: PipelineConfig) -> Inputs:
    for name in ("publications", "tweets", "scores"):
        if getattr(cfg, name) is None:
            raise FileNotFoundError(f"no {name} file configured")
    pubs = parse_publications(cfg.publications, cfg.publications_format)
    tweets = parse_tweets(cfg.tweets)
    scores = parse_scores(cfg.scores)
    rules = load_rules(cfg.merge_rules)
    corpus = build_corpus(
        pubs, tweets, scores, None,
        CorpusConfig(cfg.availability_threshold, cfg.min_accounts, cfg.bot_threshold,
                     cfg.missing_score_policy),
    )
    digests = {
        name: file_digest(getattr(cfg, name)) for name in ("publications", "tweets", "scores")
    }
    digests["merge_rules"] = file_digest(cfg.merge_rules) if cfg.merge_rules else "default"
    return Inputs(corpus, scores, rules, digests)


def provenance(cfg: PipelineConfig, inputs: Inputs) -> dict:
    return {"config_hash": cfg.digest(), "inputs": dict(inputs.digests), "tool_version": __version__}


def ingest_report(cfg: PipelineConfig, inputs: Inputs) -> dict:
    report = corpus_summary(inputs.corpus)
    bots = summarize(inputs.scores, cfg.histogram_bin_width, cfg.bot_threshold)
    report["score_file"] = bots.to_dict()
    report["provenance"] = provenance(cfg, inputs)
    return report


@dataclass
class NetworkBundle:
    variant: str
    docset: DocumentSet
    selection: TermSelection
    network: Network
    clustering: Clustering
    layout: Layout
    provenance: dict

    def to_dict(self) -> dict:
        meta = {
            "variant": self.variant,
            "title": VARIANT_TITLES[self.variant],
            "unit": self.docset.unit,
            "n_docs": len(self.docset.docs),
            "selection": {
                "target_n": self.selection.target_n,
                "achieved_n": self.selection.achieved_n,
                "min_freq": self.selection.min_freq,
            },
            "provenance": self.provenance,
        }
        return bundle_to_dict(self.network, self.clustering, self.layout, meta)

    def svg(self) -> str:
        p = self.provenance
        comment = f"{self.variant} config {p['config_hash'][:16]} topiknet {p['tool_version']}"
        return render_svg(self.network, self.clustering, self.layout,
                          title=f"{self.variant}: {VARIANT_TITLES[self.variant]}", comment=comment)


def select_terms(docset: DocumentSet, cfg: PipelineConfig) -> TermSelection:
    t = cfg.targets[docset.variant]
    if t.n_keywords is not None or t.n_hashtags is not None:
        return select_mixed(docset, t.n_keywords or 0, t.n_hashtags or 0, t.min_freq)
    return select_top_terms(docset, t.target_n, t.min_freq)


def build_variant_network(docset: DocumentSet, cfg: PipelineConfig) -> tuple[TermSelection, Network]:
    sel = select_terms(docset, cfg)
    C = build_cooccurrence(docset, sel)
    sim = cosine_normalize(C, cfg.normalization)
    return sel, build_network(sim, node_weights(C), sel, cfg.edge_epsilon)


def run_variant(cfg: PipelineConfig, inputs: Inputs, variant: str) -> NetworkBundle:
    try:
        docset = select_variant(inputs.corpus, variant, inputs.rules)
        sel, net = build_variant_network(docset, cfg)
    except EmptyVariantError as exc:
        raise type(exc)(f"{variant}: {exc}") from None
    clus = cluster(net, cfg.cluster)
    lay = layout(net, cfg.layout)
    return NetworkBundle(variant, docset, sel, net, clus, lay, provenance(cfg, inputs))


def write_bundle(bundle: NetworkBundle, out_dir) -> dict[str, Path]:
    out = Path(out_dir) / bundle.variant
    out.mkdir(parents=True, exist_ok=True)
    p = bundle.provenance
    files = {
        "json": out / "network.json",
        "net": out / "network.net",
        "clu": out / "network.clu",
        "svg": out / "network.svg",
        "provenance": out / "provenance.json",
    }
    files["json"].write_text(dumps(bundle.to_dict()), encoding="utf-8")
    files["net"].write_text(export_pajek(bundle.network), encoding="utf-8")
    files["clu"].write_text(export_clu(bundle.clustering), encoding="utf-8")
    files["svg"].write_text(bundle.svg(), encoding="utf-8")
    files["provenance"].write_text(dumps({"variant": bundle.variant, **p}), encoding="utf-8")
    return files


# Networks grouped the way the overlap tables compare them
COMPARISONS = {
    "bots_vs_nonbots": [("V2", "V3"), ("V4", "V5"), ("V6", "V7"), ("V8", "V9")],
    "all_accounts": ["V1", "V2", "V4"],
    "nonbot_accounts": ["V1", "V3", "V5"],
}


def compare_bundles(bundles: dict[str, NetworkBundle]) -> dict[str, OverlapMatrix]:
    terms = {v: b.network.terms for v, b in bundles.items()}
    out: dict[str, OverlapMatrix] = {}
    for name in ("all_accounts", "nonbot_accounts"):
        group = [v for v in COMPARISONS[name] if v in terms]
        if len(group) >= 2:
            out[name] = overlap_matrix([(v, terms[v]) for v in group])
    present = [v for v in terms]
    if len(present) >= 2:
        out["all_variants"] = overlap_matrix([(v, terms[v]) for v in present])
    return out


def pair_overlaps(bundles: dict[str, NetworkBundle]) -> str:
    """All-accounts vs non-bot pairs as a TSV (one row per pair)."""
    lines = ["network_a\tnetwork_b\tsize_a\tsize_b\tcount\tpct"]
    for a, b in COMPARISONS["bots_vs_nonbots"]:
        if a in bundles and b in bundles:
            r = overlap(bundles[a].network.terms, bundles[b].network.terms)
            lines.append(f"{a}\t{b}\t{r.size_a}\t{r.size_b}\t{r.count}\t{r.pct_text}")
    return "\n".join(lines) + "\n"


def bot_report(cfg: PipelineConfig, scores) -> BotSummary:
    return summarize(scores, cfg.histogram_bin_width, cfg.bot_threshold)
