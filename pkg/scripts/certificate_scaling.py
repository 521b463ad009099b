"""Time certificate construction plus matrix re-verification as N grows.

    python scripts/certificate_scaling.py --n-max 40
"""

import argparse
import time

from fibercone.filtration_values import distinct_components_certificate, verify_certificate


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-max", type=int, default=30)
    args = ap.parse_args()

    print("N\tm\tl\tmin_intersection\tseconds")
    for N in range(2, args.n_max + 1):
        t0 = time.perf_counter()
        cert = distinct_components_certificate(N)
        problems = verify_certificate(cert)
        dt = time.perf_counter() - t0
        if problems:
            raise SystemExit(f"N={N}: {problems[:3]}")
        print(f"{N}\t{cert.m}\t{cert.l}\t{min(cert.intersections)}\t{dt:.3f}")


if __name__ == "__main__":
    main()
