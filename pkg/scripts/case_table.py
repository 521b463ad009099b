"""Print which residue case governs (-D(l)_m . E_n) for a small window of m.

    python scripts/case_table.py --l 5 --m-max 40
"""

import argparse

from fibercone.blowup_chain import paper_chain
from fibercone.qdivisor import classify_case, intersect, paper_D


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--l", type=int, default=5)
    ap.add_argument("--m-max", type=int, default=32)
    args = ap.parse_args()

    form = paper_chain(args.l).form()
    print("m\t" + "\t".join(f"E_{n}" for n in range(1, args.l + 1)))
    for m in range(1, args.m_max + 1):
        D = paper_D(args.l, m)
        cells = []
        for n in range(1, args.l + 1):
            case, _, value = classify_case(m, n, args.l)
            assert value == intersect(-D, n, form)
            cells.append(f"{value} ({case})")
        print(f"{m}\t" + "\t".join(cells))


if __name__ == "__main__":
    main()
