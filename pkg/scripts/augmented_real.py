"""Real variables plus appended independent noise columns.

Each replication subsamples rows of the data file without replacement and
appends fresh Gaussian columns up to width p. The real columns play the
role of the signal block.

    python scripts/augmented_real.py data.csv --header --n 100 --p 200
"""

import argparse

from glassoknots.ingest import load_csv
from glassoknots.montecarlo import Scenario, run

from _common import print_steps, write_result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("data")
    ap.add_argument("--header", action="store_true")
    ap.add_argument("--n", type=int, required=True, help="rows drawn per replication")
    ap.add_argument("--p", type=int, required=True, help="total width after adding noise")
    ap.add_argument("--reps", type=int, default=500)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--steps", type=int, default=5)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()

    real = load_csv(args.data, has_header=args.header)
    s = Scenario("augmented_real", n=args.n, p=args.p, reps=args.reps, seed=args.seed,
                 null_steps=args.steps, real_data=real)
    res = run(s, workers=args.workers)
    print_steps(res, f"{real.p} real columns + {args.p - real.p} noise, n={args.n}")
    write_result(res, args.outdir, "augmented_real")


if __name__ == "__main__":
    main()
