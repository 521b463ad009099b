"""Running infimum of v_{E_n}(I_m)/m against the limit (2^n - 1)/2^(n-1).

Shows that the infimum is first reached at m = 2^(n-1) and then recurs at
every multiple.

    python scripts/gamma_convergence.py --n-max 6
"""

import argparse
from fractions import Fraction

from fibercone.filtration_values import gamma, paper_value_sequence


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-max", type=int, default=6)
    args = ap.parse_args()

    print("n\tlimit\tgamma\twitness\thits<=M\tM")
    for n in range(1, args.n_max + 1):
        M = 2 ** (n + 2)
        seq = paper_value_sequence(n, M)
        rep = gamma(seq)
        limit = Fraction(2**n - 1, 2 ** (n - 1))
        hits = sum(Fraction(seq[m], m) == limit for m in range(1, M + 1))
        print(f"{n}\t{limit}\t{rep.gamma}\t{getattr(rep.status, 'witness', '-')}\t{hits}\t{M}")


if __name__ == "__main__":
    main()
