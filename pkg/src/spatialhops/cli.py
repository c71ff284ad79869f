"""Command line entry point: generate, verify, eval, report, experiment."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .dataset import BuildConfig, load_dataset, read_jsonl, write_dataset
from .solver import verify_instance


def cmd_generate(args) -> int:
    cfg = BuildConfig.from_file(args.config) if args.config else BuildConfig()
    if args.seed is not None:
        cfg.master_seed = args.seed
    if args.per_k is not None:
        cfg.per_k_count = args.per_k
    manifest = write_dataset(cfg, args.out, workers=args.workers)
    print(f"wrote {manifest['total']} instances to {args.out}")
    return 0


def cmd_verify(args) -> int:
    path = Path(args.dataset)
    data = path / "instances.jsonl" if path.is_dir() else path
    bad = [inst.id for inst in read_jsonl(data) if not verify_instance(inst)]
    manifest = path / "manifest.json"
    if path.is_dir() and manifest.exists():
        from .dataset import file_sha256

        expected = json.loads(manifest.read_text(encoding="utf-8"))["files"]["instances.jsonl"]
        if file_sha256(data) != expected:
            print("instances.jsonl does not match the manifest checksum")
            return 1
    if bad:
        print(f"{len(bad)} instances failed verification, first: {bad[:5]}")
        return 1
    print("all instances verified")
    return 0


def _eval(dataset, mode, language, naming, client_kind, repeats, workers, out, transcript=None, **endpoint):
    from .harness import PromptSpec, RunConfig, make_client, run_eval
    from .harness.report import report

    client = make_client(client_kind, transcript=transcript, **endpoint)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    table, records = run_eval(dataset, PromptSpec(mode, language, naming), client,
                              RunConfig(repeats=repeats, workers=workers),
                              transcript_path=out / "transcript.jsonl")
    report({mode: [table]}, out)
    for r in table.rows:
        std = "" if r.std is None else f" ± {r.std:.2f}"
        print(f"k={r.k:<4d} {r.mean:.2f}{std}  (n={r.n}, other={r.other_rate:.2f})")
    return table


def cmd_eval(args) -> int:
    dataset = load_dataset(args.dataset)
    language = args.language or (dataset[0].meta["language"] if dataset else "english")
    naming = dataset[0].meta["naming"] if dataset else "symbolic"
    _eval(dataset, args.mode, language, naming, args.client, args.repeats, args.workers, args.out,
          transcript=args.transcript, model=args.model, base_url=args.base_url, max_tokens=args.max_tokens)
    return 0


def cmd_experiment(args) -> int:
    from .dataset import build_dataset
    from .harness.experiments import get

    exp = get(args.name)
    cfg = exp.build_config(master_seed=args.seed, per_k_count=args.per_k)
    dataset = list(build_dataset(cfg))
    _eval(dataset, exp.mode, exp.language, exp.naming, args.client, args.repeats or exp.repeats,
          args.workers, Path(args.out) / exp.name, transcript=args.transcript,
          model=args.model, base_url=args.base_url, max_tokens=args.max_tokens)
    return 0


def cmd_report(args) -> int:
    from .harness.report import report
    from .harness.scoring import EvalRecord, ScoreTable

    fields = set(EvalRecord.__dataclass_fields__)
    tables = {}
    for path in args.transcripts:
        recs, model = [], None
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    obj = json.loads(line)
                    model = model or obj.get("model", Path(path).stem)
                    recs.append(EvalRecord(**{k: v for k, v in obj.items() if k in fields}))
        tables.setdefault(Path(path).parent.name or "run", []).append(ScoreTable.from_records(model or "unknown", recs))
    for p in report(tables, args.out):
        print(p)
    return 0


def _endpoint_args(p):
    p.add_argument("--model", help="model name for the live client (default: $CHAT_MODEL)")
    p.add_argument("--base-url", help="chat-completions base URL (default: $CHAT_BASE_URL)")
    p.add_argument("--max-tokens", type=int, default=None)
    p.add_argument("--transcript", help="recorded transcript for the replay client")
    p.add_argument("--workers", type=int, default=4)


def build_parser() -> argparse.ArgumentParser:
    from .harness.clients import CLIENTS
    from .harness.prompts import MODES

    ap = argparse.ArgumentParser(prog="spatialhops")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", help="build a dataset directory")
    g.add_argument("--config", help="YAML file with BuildConfig fields")
    g.add_argument("--seed", type=int)
    g.add_argument("--per-k", type=int)
    g.add_argument("--out", required=True)
    g.add_argument("--workers", type=int, default=1, help="parallel shard builders")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="re-verify every instance of a dataset")
    v.add_argument("dataset")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate a dataset with a chat client")
    e.add_argument("--dataset", required=True)
    e.add_argument("--mode", choices=MODES, default="five_shot_default")
    e.add_argument("--language")
    e.add_argument("--client", choices=CLIENTS, default="mock-oracle")
    e.add_argument("--repeats", type=int, default=3)
    e.add_argument("--out", default="runs/eval")
    _endpoint_args(e)
    e.set_defaults(func=cmd_eval)

    x = sub.add_parser("experiment", help="generate data for a named experiment and evaluate it")
    x.add_argument("name")
    x.add_argument("--client", choices=CLIENTS, default="mock-oracle")
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--per-k", type=int)
    x.add_argument("--repeats", type=int)
    x.add_argument("--out", default="runs")
    _endpoint_args(x)
    x.set_defaults(func=cmd_experiment)

    r = sub.add_parser("report", help="tables and plot data from transcript files")
    r.add_argument("transcripts", nargs="+")
    r.add_argument("--out", default="runs/report")
    r.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
