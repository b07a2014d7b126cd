"""Twisted group homology H_k(G; Z^v) for the supported groups and characters."""

import argparse
import itertools

from twotype.groupring import Character, parse_group
from twotype.resolutions import homology_twisted

GROUPS = ["C2(T)", "C3(g)", "C4(g)", "C5(g)", "C6(g)", "Z", "Dinf", "ZxC2"]


def characters(G):
    gens = [g for g in G.generators if G.gen_order(g) in (None, 2) or G.gen_order(g) % 2 == 0]
    for signs in itertools.product((1, -1), repeat=len(gens)):
        yield Character.from_dict(G, dict(zip(gens, signs)))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-degree", type=int, default=5)
    ap.add_argument("groups", nargs="*", default=GROUPS)
    args = ap.parse_args()
    for text in args.groups:
        G = parse_group(text)
        for v in characters(G):
            row = [str(homology_twisted(G, v, k, args.max_degree + 1)) for k in range(args.max_degree + 1)]
            print(f"{G.render():16s} {v.render() or '-':12s} " + " | ".join(row))


if __name__ == "__main__":
    main()
