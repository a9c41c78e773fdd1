#!/usr/bin/env python3
"""Sweep sample sizes and seeds; report convergence to the exact table.

For each n the script draws with several consecutive seeds and prints the
worst absolute deviation between empirical frequencies and the exact
probabilities, plus how many runs clear the 95% chi-square bar.  Output is
CSV so it can be piped straight into a plotting tool.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from hardysim import circuitdsl, engine, montecarlo

CIRCUITS = pathlib.Path(__file__).resolve().parent.parent / "circuits"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--circuit", default=str(CIRCUITS / "hardy_full.circ"))
    parser.add_argument("--seeds", type=int, default=10, help="seeds per sample size")
    parser.add_argument("--seed0", type=int, default=montecarlo.DEFAULT_SEED)
    parser.add_argument(
        "--sizes", type=int, nargs="+",
        default=[100, 300, 1000, 3000, 10000, 30000, 100000],
    )
    args = parser.parse_args()

    circuit = circuitdsl.parse(pathlib.Path(args.circuit).read_text())
    table = engine.run(circuit)
    exact = {key: float(q / table.total()) for key, q in table.rows.items()}

    print("n,seeds,worst_abs_deviation,mean_chi_square,pass_95_rate")
    for n in args.sizes:
        worst = 0.0
        chi_total = 0.0
        passed = 0
        for offset in range(args.seeds):
            record = montecarlo.run(table, n, seed=args.seed0 + offset)
            for key, count in record.counts.items():
                worst = max(worst, abs(count / n - exact[key]))
            chi_total += record.chi_square
            passed += record.pass_95
        print(f"{n},{args.seeds},{worst:.6f},{chi_total / args.seeds:.4f},"
              f"{passed / args.seeds:.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
