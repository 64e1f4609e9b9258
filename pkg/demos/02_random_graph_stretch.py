"""How far from optimal are the protocol's detours on random graphs?

Each detour is compared with a shortest path in the graph with the failed
node removed. Ratios equal to 1 mean the protocol found an optimal detour.
"""
from __future__ import annotations

import argparse

from snfr import generate_biconnected, run_protocol, stretch_report


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200])
    ap.add_argument("--degrees", type=float, nargs="+", default=[4, 8, 16])
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()

    print(f"{'n':>5} {'deg':>5} {'entries':>8} {'mean':>8} {'max':>8} {'optimal%':>9}")
    for n in args.sizes:
        for deg in args.degrees:
            ratios = []
            for seed in range(args.seeds):
                g = generate_biconnected(n, deg, seed)
                ratios += [e.ratio for e in stretch_report(g, 0, run_protocol(g).tables).entries]
            exact = sum(r == 1.0 for r in ratios) / len(ratios)
            print(f"{n:>5} {deg:>5g} {len(ratios):>8} {sum(ratios) / len(ratios):>8.4f} "
                  f"{max(ratios):>8.4f} {100 * exact:>8.1f}%")


if __name__ == "__main__":
    main()
