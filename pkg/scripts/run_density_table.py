#!/usr/bin/env python3
"""Fraction of anomalous target amplitudes per noise level.

Uniformly sampled amplitudes are classified as anomalous when the
information matrix is nearly singular for the depth-limit-matched
exponential schedule (beta above the threshold).  The density collapses
to zero once the noise level caps the schedule at shallow depths.
"""
import argparse
import csv
import sys

from aemle import anomaly_density


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kappas", default="1e-6,1e-5,1e-4,1e-3,1e-2,1e-1",
                    help="comma-separated noise levels")
    ap.add_argument("--samples", type=int, default=100_000, help="amplitudes per level")
    ap.add_argument("--threshold", type=float, default=0.9, help="beta cutoff")
    ap.add_argument("--seed", type=int, default=20250817)
    ap.add_argument("--output", default="density_table.csv")
    args = ap.parse_args()

    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["kappa", "density_percent", "stderr_percent",
                         "samples", "skipped"])
        for tok in args.kappas.split(","):
            kappa = float(tok)
            row = anomaly_density(kappa, args.samples, args.threshold, seed=args.seed)
            writer.writerow([
                f"{row.kappa:.17g}", f"{row.density_percent:.17g}",
                f"{row.stderr_percent:.17g}", row.samples, row.skipped,
            ])
            print(f"kappa={kappa:g}: {row.density_percent:.2f}% "
                  f"+/- {row.stderr_percent:.2f}%")
    print(f"wrote table to {args.output} (seed {args.seed})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
