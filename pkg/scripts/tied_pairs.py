"""Growth of the signal-step statistics with n: tied versus distinct pair strengths.

With three pairs of identical correlation the gaps between their knots shrink
like 1/sqrt(n), so T at the second signal step grows like sqrt(n) only.
"""

import argparse

import numpy as np

from glassoknots.montecarlo import Scenario, run


def medians(kind, n, args, **kw):
    s = Scenario(kind, n=n, p=args.p, signal_size=6, reps=args.reps, seed=args.seed, null_steps=1, **kw)
    raw = run(s, workers=args.workers).raw_statistics
    return np.nanmedian(raw[:, :4], axis=0)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", type=int, nargs="+", default=[200, 400, 800, 1600])
    ap.add_argument("--p", type=int, default=100)
    ap.add_argument("--reps", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--strength", type=float, default=0.7)
    ap.add_argument("--distinct", type=float, nargs=3, default=[0.8, 0.6, 0.4])
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    rows = []
    for n in args.ns:
        tied = medians("tied_pairs", n, args, signal_strength=args.strength)
        distinct = medians("disconnected_pairs", n, args, signal_strengths=tuple(args.distinct))
        rows.append((n, tied, distinct))
        print(f"n={n:>5}  tied median T_1..T_4: {np.round(tied, 3)}  distinct: {np.round(distinct, 3)}")
    base_n, base_tied, base_distinct = rows[0]
    for n, tied, distinct in rows[1:]:
        print(f"n x{n / base_n:g}: tied step-2 median x{tied[1] / base_tied[1]:.2f} "
              f"(sqrt rate {np.sqrt(n / base_n):.2f}); distinct step-1 median "
              f"x{distinct[0] / base_distinct[0]:.2f} (linear rate {n / base_n:.2f})")


if __name__ == "__main__":
    main()
