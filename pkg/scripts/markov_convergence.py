"""Distribution of the aggregate NIST circuit and its distance to the two
Clifford 2-designs, m = 1..40.

    python3 scripts/markov_convergence.py [max_m]
"""

import sys

from rbgatesets import experiments


def main(max_m=40):
    _, tv = experiments.markov_tables(max_m)
    print(f"{'m':>3}  {'TV to C12':>12}  {'TV to sqrtZ.C12':>16}  {'TV to C':>10}")
    for m, a, b, c in tv:
        print(f"{m:>3}  {a:12.3e}  {b:16.3e}  {c:10.4f}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 40)
