"""Build every network variant on a corpus and print a one-line summary per variant."""

import argparse
import time

from topiknet.cli import bundled_demo_dir
from topiknet.config import PipelineConfig
from topiknet.errors import EmptyVariantError
from topiknet.ingest import VARIANTS
from topiknet.pipeline import load_inputs, run_variant

if __name__ == "__main__":
    demo = bundled_demo_dir()
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--publications", default=str(demo / "publications.tsv"))
    ap.add_argument("--tweets", default=str(demo / "tweets.jsonl"))
    ap.add_argument("--scores", default=str(demo / "scores.tsv"))
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = PipelineConfig(publications=args.publications, tweets=args.tweets,
                         scores=args.scores).with_seed(args.seed)
    inputs = load_inputs(cfg)
    print("variant\tdocs\tnodes\tedges\tclusters\tmodularity\tstress\tseconds")
    for v in VARIANTS:
        start = time.perf_counter()
        try:
            b = run_variant(cfg, inputs, v)
        except EmptyVariantError as exc:
            print(f"{v}\tunavailable ({exc})")
            continue
        print(f"{v}\t{len(b.docset.docs)}\t{b.network.n}\t{len(b.network.edges)}\t{b.clustering.k}\t"
              f"{b.clustering.quality:.4f}\t{b.layout.final_energy:.3f}\t{time.perf_counter() - start:.2f}")
