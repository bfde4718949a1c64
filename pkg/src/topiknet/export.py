"""Pajek (.net/.clu), JSON and SVG writers."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .cluster import Clustering
from .cooc import Network, Node
from .layout import Layout
from .terms import Term

SCHEMA_ID = "topiknet.network/1"


def _quote(label: str) -> str:
    return '"' + label.replace('"', '""') + '"'


def export_pajek(net: Network) -> str:
    lines = [f"*Vertices {net.n}"]
    lines += [f"{i} {_quote(lbl)}" for i, lbl in enumerate(net.labels, 1)]
    lines.append("*Edges")
    lines += [f"{i + 1} {j + 1} {s!r}" for i, j, s in net.edges]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PajekGraph:
    labels: tuple
    edges: tuple  # ((i, j, w), ...) 0-based

    def to_network(self) -> Network:
        nodes = tuple(Node(Term.from_label(lbl), 0, 0) for lbl in self.labels)
        return Network(nodes, self.edges)


def _parse_vertex(line: str, lineno: int) -> tuple[int, str]:
    idx, _, rest = line.strip().partition(" ")
    rest = rest.strip()
    if not rest.startswith('"'):
        return int(idx), rest.split()[0] if rest else idx
    out, i = [], 1
    while i < len(rest):
        ch = rest[i]
        if ch == '"':
            if i + 1 < len(rest) and rest[i + 1] == '"':
                out.append('"')
                i += 2
                continue
            return int(idx), "".join(out)
        out.append(ch)
        i += 1
    raise ValueError(f"line {lineno}: unterminated vertex label")


def parse_pajek(text: str) -> PajekGraph:
    labels: list[str] = []
    edges = []
    section = None
    n = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("%"):
            continue
        head = line.split()[0].lower()
        if head == "*vertices":
            section, n = "v", int(line.split()[1])
            continue
        if head in ("*edges", "*arcs"):
            section = "e"
            continue
        if section == "v":
            idx, label = _parse_vertex(line, lineno)
            if idx != len(labels) + 1:
                raise ValueError(f"line {lineno}: vertices out of order")
            labels.append(label)
        elif section == "e":
            parts = line.split()
            i, j = int(parts[0]) - 1, int(parts[1]) - 1
            w = float(parts[2]) if len(parts) > 2 else 1.0
            edges.append((min(i, j), max(i, j), w))
        else:
            raise ValueError(f"line {lineno}: data outside a section")
    if len(labels) != n:
        raise ValueError(f"expected {n} vertices, found {len(labels)}")
    return PajekGraph(tuple(labels), tuple(edges))


def export_clu(c: Clustering) -> str:
    return "\n".join([f"*Vertices {len(c.assignment)}"] + [str(x + 1) for x in c.assignment]) + "\n"


def parse_clu(text: str) -> list[int]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines[0].lower().startswith("*vertices"):
        raise ValueError("missing *Vertices header")
    n = int(lines[0].split()[1])
    ids = [int(x) - 1 for x in lines[1:]]
    if len(ids) != n:
        raise ValueError(f"expected {n} cluster ids, found {len(ids)}")
    return ids


# -- JSON -----------------------------------------------------------------

def bundle_to_dict(
    net: Network,
    clustering: Clustering | None = None,
    lay: Layout | None = None,
    meta: dict | None = None,
) -> dict:
    nodes = []
    for i, nd in enumerate(net.nodes):
        rec = {
            "id": i,
            "label": nd.term.label,
            "term": nd.term.canonical,
            "kind": nd.term.kind,
            "weight": nd.weight,
            "frequency": nd.frequency,
        }
        if clustering is not None:
            rec["cluster"] = clustering.assignment[i]
        if lay is not None:
            rec["x"], rec["y"] = float(lay.positions[i, 0]), float(lay.positions[i, 1])
        nodes.append(rec)
    out = {
        "schema": SCHEMA_ID,
        "nodes": nodes,
        "edges": [{"source": i, "target": j, "similarity": s} for i, j, s in net.edges],
    }
    if clustering is not None:
        out["clustering"] = {
            "k": clustering.k,
            "quality": clustering.quality,
            "start_index": clustering.start_index,
        }
    if lay is not None:
        out["layout"] = {
            "final_energy": lay.final_energy,
            "updates_performed": lay.updates_performed,
            "converged": lay.converged,
        }
    out.update(meta or {})
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def network_from_dict(d: dict) -> Network:
    nodes = tuple(
        Node(Term(n["term"], n["kind"]), n["weight"], n["frequency"]) for n in d["nodes"]
    )
    edges = tuple((e["source"], e["target"], e["similarity"]) for e in d["edges"])
    return Network(nodes, edges)


# -- SVG ------------------------------------------------------------------

PALETTE = (
    "#d62728", "#2ca02c", "#1f77b4", "#bcbd22", "#9467bd", "#17becf",
    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f", "#aec7e8", "#98df8a",
)
MIN_RADIUS = 3.0


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def render_svg(
    net: Network,
    clustering: Clustering | None,
    lay: Layout,
    size: int = 800,
    margin: int = 60,
    title: str | None = None,
    comment: str | None = None,
) -> str:
    pos = np.asarray(lay.positions, dtype=float)
    span = np.ptp(pos, axis=0) if len(pos) else np.zeros(2)
    scale = (size - 2 * margin) / max(span.max(), 1e-12)
    lo = pos.min(axis=0) if len(pos) else np.zeros(2)
    xy = [(margin + (x - lo[0]) * scale, margin + (y - lo[1]) * scale) for x, y in pos]
    if len(pos) == 1:
        xy = [(size / 2, size / 2)]
    max_w = max((nd.weight for nd in net.nodes), default=0)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
    ]
    if comment:
        out.append(f"<!-- {_esc(comment).replace('--', '- -')} -->")
    if title:
        out.append(f"<title>{_esc(title)}</title>")
    out.append('<rect width="100%" height="100%" fill="white"/>')
    out.append('<g stroke="#999999" stroke-opacity="0.6">')
    for i, j, s in net.edges:
        (x1, y1), (x2, y2) = xy[i], xy[j]
        out.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke-width="{0.5 + 3.5 * s:.3f}"/>'
        )
    out.append("</g>")
    out.append('<g stroke="white" stroke-width="0.5">')
    for i, nd in enumerate(net.nodes):
        r = MIN_RADIUS
        if max_w > 0:
            r = max(MIN_RADIUS, 20.0 * math.sqrt(nd.weight / max_w))
        cid = clustering.assignment[i] if clustering is not None else 0
        x, y = xy[i]
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r:.2f}" fill="{PALETTE[cid % len(PALETTE)]}"/>')
    out.append("</g>")
    out.append('<g font-family="sans-serif" font-size="10" text-anchor="middle" fill="#222222">')
    for i, nd in enumerate(net.nodes):
        x, y = xy[i]
        out.append(f'<text x="{x:.2f}" y="{y - 4:.2f}">{_esc(nd.term.label)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
