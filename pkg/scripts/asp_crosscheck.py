"""Compare the coordinate solver against clingo on emitted programs (needs the `asp` extra).

    python scripts/asp_crosscheck.py --n 200
"""

import argparse
import random

import clingo

from spatialhops.dataset import VARIANTS, BuildConfig, Builder
from spatialhops.oracle import emit_asp, parse_story
from spatialhops.solver import solve


def clingo_answer(program: str) -> list[str]:
    ctl = clingo.Control(["--warn=none"])
    ctl.add("base", [], program)
    ctl.ground([("base", [])])
    shown = []
    ctl.solve(on_model=lambda m: shown.extend(str(s.arguments[0]) for s in m.symbols(shown=True)))
    return shown


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    b = Builder(BuildConfig(master_seed=args.seed))
    disagree = 0
    for i in range(args.n):
        k = rng.choice([1, 2, 3, 5, 10, 20, 50, 100])
        inst = b.instance(k, i, rng.choice(VARIANTS))
        prog = parse_story(inst.story, b.pack, question=inst.question)
        ours = solve(prog.facts, prog.query).direction.value
        theirs = clingo_answer(emit_asp(prog, include_knowledge=True))
        if theirs != [ours]:
            disagree += 1
            print(f"{inst.id}: solver={ours} clingo={theirs}")
    print(f"{args.n - disagree}/{args.n} agree")
    return 1 if disagree else 0


if __name__ == "__main__":
    raise SystemExit(main())
