"""Decision matrix for the four spin-cover manifests and the CP^2 pair."""

import argparse

from twotype.classify import append_cp2, builtin_manifest, decide_dinfty

FAMILY = ["EE", "EsE", "sEE", "sEsE"]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--unbased", action="store_true")
    args = ap.parse_args()
    ms = [builtin_manifest(n) for n in FAMILY]
    print("       " + " ".join(f"{n:>6s}" for n in FAMILY))
    for a in ms:
        cells = []
        for b in ms:
            v = decide_dinfty(a, b, args.unbased).verdict.value
            cells.append({"HOMEOMORPHIC": "H", "NOT_HOMEOMORPHIC": "-", "UNDETERMINED": "?"}[v])
        print(f"{a.name:>6s} " + " ".join(f"{c:>6s}" for c in cells))
    for x, y in (("EFCP2", "FFCP2"), ("EE", "sEsE")):
        print(f"{x} vs {y}: {decide_dinfty(builtin_manifest(x), builtin_manifest(y))}")
    print(f"EE#CP2 vs sEsE#CP2: {decide_dinfty(append_cp2(ms[0]), append_cp2(ms[3]))}")


if __name__ == "__main__":
    main()
