"""Compare ker B with the torsion of the Gamma coinvariants on random lattices."""

import argparse
import random
import sys
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from conftest import random_lattice, sym_oracle_coinvariants  # noqa: E402
from twotype.forms import b_map  # noqa: E402
from twotype.groupring import parse_group  # noqa: E402


@dataclass
class SweepConfig:
    groups: tuple[str, ...] = ("C2(T)", "C3(g)")
    count: int = 50
    max_rank: int = 4
    seed: int = 0


def sweep(cfg: SweepConfig) -> int:
    rng = random.Random(cfg.seed)
    bad = 0
    for text in cfg.groups:
        G = parse_group(text)
        hits = 0
        for _ in range(cfg.count):
            A = random_lattice(G, rng, cfg.max_rank)
            kb = b_map(A).kernel
            tors = sym_oracle_coinvariants(A, {}).torsion_subgroup()
            hits += kb == tors
            if kb != tors:
                print(f"  mismatch over {text}: rank {A.rank}, ker B = {kb}, torsion = {tors}")
        bad += cfg.count - hits
        print(f"{text}: {hits}/{cfg.count} agree")
    return bad


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--max-rank", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    sys.exit(1 if sweep(SweepConfig(count=a.count, max_rank=a.max_rank, seed=a.seed)) else 0)


if __name__ == "__main__":
    main()
