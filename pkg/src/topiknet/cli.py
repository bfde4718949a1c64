"""Command-line interface: ``topiknet {ingest,run,compare,report,demo}``."""

from __future__ import annotations

import argparse
import json
import logging
import shutil
import sys
import time
from dataclasses import replace
from importlib import resources
from pathlib import Path

from . import __version__
from .bots import scoring_eta_minutes
from .compare import overlap_matrix
from .config import PipelineConfig, VariantTarget
from .errors import EmptyNetworkError, EmptyVariantError, ParseError, TopiknetError
from .export import dumps, network_from_dict
from .ingest import VARIANTS
from .pipeline import (
    bot_report, compare_bundles, file_digest, ingest_report, load_inputs, pair_overlaps,
    run_variant, write_bundle,
)
from .terms import Term

log = logging.getLogger("topiknet")

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_EMPTY = 4
EXIT_IO = 5


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--publications", help="publications TSV or JSON lines")
    p.add_argument("--tweets", help="tweets JSON lines")
    p.add_argument("--scores", help="bot score TSV")
    p.add_argument("--rules", help="merge rule TSV (default: shipped rules)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, help="seed for clustering and layout")
    p.add_argument("--variant", action="append", help="variant V1..V9 or 'all' (repeatable)")
    p.add_argument("--bot-threshold", type=float)
    p.add_argument("--min-accounts", type=int)
    p.add_argument("--availability-threshold", type=int)
    p.add_argument("--target-n", type=int, help="override top-N for the selected variants")
    p.add_argument("--min-freq", type=int, help="override minimum document frequency")
    p.add_argument("--resolution", type=float)
    p.add_argument("--starts", type=int, help="number of random starts")
    p.add_argument("--iterations", type=int)
    p.add_argument("-v", "--verbose", action="store_true")


def build_config(args) -> PipelineConfig:
    cfg = PipelineConfig.load(args.config) if getattr(args, "config", None) else PipelineConfig()
    cfg = cfg.with_env()
    updates = {}
    for flag, key in [("publications", "publications"), ("tweets", "tweets"), ("scores", "scores"),
                      ("rules", "merge_rules"), ("out", "out"),
                      ("bot_threshold", "bot_threshold"), ("min_accounts", "min_accounts"),
                      ("availability_threshold", "availability_threshold")]:
        value = getattr(args, flag, None)
        if value is not None:
            updates[key] = value
    if getattr(args, "variant", None):
        chosen = []
        for v in args.variant:
            chosen.extend(VARIANTS if v.lower() == "all" else [v.upper()])
        bad = [v for v in chosen if v not in VARIANTS]
        if bad:
            raise SystemExit(f"unknown variant(s): {', '.join(bad)}")
        updates["variants"] = tuple(dict.fromkeys(chosen))
    cfg = replace(cfg, **updates)
    if args.target_n is not None or args.min_freq is not None:
        targets = dict(cfg.targets)
        for v in cfg.variants:
            t = targets[v]
            if args.target_n is not None:
                if t.n_keywords is not None:
                    half = args.target_n // 2
                    t = VariantTarget(args.target_n, t.min_freq, half, args.target_n - half)
                else:
                    t = replace(t, target_n=args.target_n)
            if args.min_freq is not None:
                t = replace(t, min_freq=args.min_freq)
            targets[v] = t
        cfg = replace(cfg, targets=targets)
    cl = {}
    if args.resolution is not None:
        cl["resolution"] = args.resolution
    if args.starts is not None:
        cl["n_random_starts"] = args.starts
    if args.iterations is not None:
        cl["n_iterations"] = args.iterations
    if cl:
        cfg = replace(cfg, cluster=replace(cfg.cluster, **cl))
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def cmd_ingest(cfg: PipelineConfig, inputs=None) -> dict:
    inputs = inputs or load_inputs(cfg)
    report = ingest_report(cfg, inputs)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "corpus_summary.json").write_text(dumps(report), encoding="utf-8")
    return report


def cmd_run(cfg: PipelineConfig, inputs=None) -> dict:
    inputs = inputs or load_inputs(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(cfg.to_json(), encoding="utf-8")
    bundles = {}
    for v in cfg.variants:
        t0 = time.perf_counter()
        bundles[v] = run_variant(cfg, inputs, v)
        write_bundle(bundles[v], out)
        b = bundles[v]
        log.info("%s: %d nodes, %d edges, %d clusters (%.2fs)", v, b.network.n,
                 len(b.network.edges), b.clustering.k, time.perf_counter() - t0)
    return bundles


def _load_term_set(path: Path) -> list:
    text = path.read_text("utf-8")
    if path.suffix == ".json":
        return network_from_dict(json.loads(text)).terms
    return [Term.from_label(line.strip()) for line in text.splitlines()
            if line.strip() and not line.startswith("%")]


def cmd_compare(paths: list, out_dir, labels: list | None = None):
    """Overlap matrix over bundle JSON files or term-list files (one label per line)."""
    paths = [Path(p) for p in paths]
    if len(paths) < 2:
        raise SystemExit("compare needs at least two inputs")
    labels = labels or [p.parent.name if p.name == "network.json" else p.stem for p in paths]
    matrix = overlap_matrix([(lbl, _load_term_set(p)) for lbl, p in zip(labels, paths)])
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "overlap.tsv").write_text(matrix.to_tsv(), encoding="utf-8")
    (out / "overlap.txt").write_text(matrix.to_text(), encoding="utf-8")
    prov = {"inputs": {lbl: file_digest(p) for lbl, p in zip(labels, paths)},
            "tool_version": __version__}
    (out / "overlap.provenance.json").write_text(dumps(prov), encoding="utf-8")
    return matrix


def cmd_report(cfg: PipelineConfig, eta: bool = False):
    from .bots import parse_scores

    if cfg.scores is None:
        raise FileNotFoundError("no scores file configured")
    scores = parse_scores(cfg.scores)
    summary = bot_report(cfg, scores)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    body = summary.to_dict()
    body["threshold"] = cfg.bot_threshold
    body["provenance"] = {"config_hash": cfg.digest(), "inputs": {"scores": file_digest(cfg.scores)},
                          "tool_version": __version__}
    (out / "bot_summary.json").write_text(dumps(body), encoding="utf-8")
    (out / "bot_histogram.tsv").write_text(summary.histogram_tsv(), encoding="utf-8")
    if eta:
        minutes = scoring_eta_minutes(len(scores))
        print(f"scoring {len(scores)} accounts at 180 per 15 min takes ~{minutes / 60:.1f} h")
    return summary


def bundled_demo_dir() -> Path:
    return Path(str(resources.files("topiknet").joinpath("data/demo")))


def cmd_demo(cfg: PipelineConfig):
    out = Path(cfg.out)
    inputs_dir = out / "inputs"
    inputs_dir.mkdir(parents=True, exist_ok=True)
    src = bundled_demo_dir()
    for name in ("publications.tsv", "tweets.jsonl", "scores.tsv"):
        shutil.copyfile(src / name, inputs_dir / name)
    cfg = replace(
        cfg,
        publications=str(inputs_dir / "publications.tsv"),
        tweets=str(inputs_dir / "tweets.jsonl"),
        scores=str(inputs_dir / "scores.tsv"),
    )
    inputs = load_inputs(cfg)
    report = cmd_ingest(cfg, inputs)
    runnable = replace(cfg, variants=tuple(
        v for v in cfg.variants if report["variants"][v]["available"]))
    bundles = cmd_run(runnable, inputs)
    tables = compare_bundles(bundles)
    for name, matrix in tables.items():
        (out / f"overlap_{name}.tsv").write_text(matrix.to_tsv(), encoding="utf-8")
        (out / f"overlap_{name}.txt").write_text(matrix.to_text(), encoding="utf-8")
    (out / "overlap_pairs.tsv").write_text(pair_overlaps(bundles), encoding="utf-8")
    cmd_report(cfg)
    return bundles, tables


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topiknet", description=__doc__)
    parser.add_argument("--version", action="version", version=f"topiknet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("ingest", "parse inputs and write corpus statistics"),
                        ("run", "build, cluster and lay out network variants"),
                        ("report", "bot score summary and histogram"),
                        ("demo", "run everything on the bundled synthetic corpus")]:
        p = sub.add_parser(name, help=help_)
        _add_common(p)
        if name == "report":
            p.add_argument("--eta", action="store_true", help="print scoring time estimate")
    p = sub.add_parser("compare", help="term overlap between networks")
    p.add_argument("inputs", nargs="+", help="network.json bundles or term-list files")
    p.add_argument("--labels", help="comma-separated names for the inputs")
    p.add_argument("--out", default="out")
    p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "compare":
            labels = args.labels.split(",") if args.labels else None
            matrix = cmd_compare(args.inputs, args.out, labels)
            sys.stdout.write(matrix.to_text())
            return EXIT_OK
        cfg = build_config(args)
        if args.command == "ingest":
            report = cmd_ingest(cfg)
            print(json.dumps({k: v for k, v in report.items() if k != "provenance"}, indent=2))
        elif args.command == "run":
            bundles = cmd_run(cfg)
            for v, b in bundles.items():
                print(f"{v}\t{b.network.n} nodes\t{len(b.network.edges)} edges\t"
                      f"{b.clustering.k} clusters\tQ={b.clustering.quality:.4f}")
        elif args.command == "report":
            s = cmd_report(cfg, eta=args.eta)
            print(f"bots {s.n_bots}  non-bots {s.n_nonbots}  unclassified {s.n_unclassified}")
        elif args.command == "demo":
            if args.out is None and not args.config:
                cfg = replace(cfg, out="demo_out")
            bundles, tables = cmd_demo(cfg)
            print(f"wrote {len(bundles)} networks to {cfg.out}")
            for name, matrix in tables.items():
                if name != "all_variants":
                    print(f"\n[{name}]")
                    sys.stdout.write(matrix.to_text())
        return EXIT_OK
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (EmptyVariantError, EmptyNetworkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TopiknetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
