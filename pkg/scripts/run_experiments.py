"""Run named experiments with one client and write a CSV + plot-data JSON per experiment.

Offline sanity runs:
    python scripts/run_experiments.py --client mock-oracle --per-k 20
    python scripts/run_experiments.py --client mock-uniform --only productivity

Against a chat-completions endpoint (CHAT_BASE_URL, CHAT_MODEL, CHAT_API_KEY):
    python scripts/run_experiments.py --client live --only productivity productivity_zero_shot
"""

import argparse
import logging
from pathlib import Path

from spatialhops.dataset import build_dataset
from spatialhops.harness import PromptSpec, RunConfig, make_client, run_eval
from spatialhops.harness.experiments import EXPERIMENTS
from spatialhops.harness.report import report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--client", default="mock-oracle", choices=["live", "mock-oracle", "mock-uniform"])
    ap.add_argument("--only", nargs="*", help="experiment names (default: all)")
    ap.add_argument("--per-k", type=int, help="instances per k (default: the experiment's own)")
    ap.add_argument("--repeats", type=int)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--out", default="runs/experiments")
    ap.add_argument("--model")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO)

    client = make_client(args.client, model=args.model)
    names = args.only or sorted(EXPERIMENTS)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in names:
        exp = EXPERIMENTS[name]
        data = list(build_dataset(exp.build_config(args.seed, args.per_k)))
        cfg = RunConfig(repeats=args.repeats or exp.repeats, workers=args.workers)
        table, _ = run_eval(data, PromptSpec(exp.mode, exp.language, exp.naming), client, cfg,
                            transcript_path=out / f"{name}.transcript.jsonl")
        report({name: [table]}, out)
        cells = "  ".join(f"k={r.k}:{r.mean:.2f}" for r in table.rows)
        print(f"{name:<40} {cells}")


if __name__ == "__main__":
    main()
