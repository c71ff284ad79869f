"""Build every (variant, k) cell and report how many instances the oracle pipeline reproduces.

    python scripts/oracle_check.py --per-k 200 --seed 0
"""

import argparse
import time
from collections import Counter

from spatialhops.dataset import DEFAULT_K_VALUES, VARIANTS, BuildConfig, Builder, build_dataset
from spatialhops.solver import verify_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--per-k", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--language", default="english")
    ap.add_argument("--naming", default="symbolic")
    args = ap.parse_args()

    cfg = BuildConfig(k_values=list(DEFAULT_K_VALUES), per_k_count=args.per_k, language=args.language,
                      naming=args.naming, variants=list(VARIANTS), master_seed=args.seed)
    builder = Builder(cfg)
    ok, total = Counter(), Counter()
    start = time.perf_counter()
    for inst in build_dataset(cfg, builder, verify=False):
        variant = inst.id.split("-", 2)[2]
        total[variant, inst.k] += 1
        ok[variant, inst.k] += verify_instance(inst, builder.pack)
    print(f"{'k':>5} " + " ".join(f"{v:>15}" for v in VARIANTS))
    for k in cfg.k_values:
        print(f"{k:>5} " + " ".join(f"{ok[v, k] / total[v, k]:>15.2f}" for v in VARIANTS))
    n = sum(total.values())
    print(f"{sum(ok.values())}/{n} verified in {time.perf_counter() - start:.1f}s")
    return 0 if sum(ok.values()) == n else 1


if __name__ == "__main__":
    raise SystemExit(main())
