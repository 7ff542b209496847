"""Numeric exploration of the small-max integral for k = 1, 2, 3.

Prints p^(2k) times the integral over a grid of p; the k = 1 column is
proven to decay, higher k are exploratory only. Optionally writes a CSV.
"""

import argparse
import csv
import sys

from glassoknots.nulltheory import NullMarginal, conjecture_integral


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", type=int, nargs="+", default=[100, 500, 5000])
    ap.add_argument("--ps", type=int, nargs="+", default=[20, 50, 100, 200, 500])
    ap.add_argument("--ks", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--output", help="CSV path")
    args = ap.parse_args()

    rows = []
    for n in args.ns:
        nm = NullMarginal(n)
        for k in args.ks:
            scaled = []
            for p in args.ps:
                value, sc = conjecture_integral(nm, p, k)
                rows.append({"n": n, "k": k, "p": p, "integral": value, "scaled": sc})
                scaled.append(sc)
            trend = "decreasing" if all(b < a for a, b in zip(scaled, scaled[1:])) else "not monotone"
            print(f"n={n:>5} k={k}: " + "  ".join(f"{v:.4g}" for v in scaled) + f"   [{trend}]")
    if args.output:
        with open(args.output, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        print(f"wrote {args.output}", file=sys.stderr)


if __name__ == "__main__":
    main()
