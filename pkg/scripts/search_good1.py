"""Search a bin2 grid around the good1 slopes for the z = -1/16 series and list every outcome."""

import argparse
import time
from collections import Counter
from fractions import Fraction

from wzpairs.ansatz import Family, search
from wzpairs.catalog import get_entry, print_pair

H = Fraction(1, 2)
GRID = {"j1": [-1, -H, 0, 1], "j2": [-1, 0, 1], "j4": [H, 1], "j5": [1, 2], "j6": [0, 1, 2], "j7": [H, 1]}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--t", type=Fraction, default=Fraction(1, 3), help="t of the k-raised part")
    args = ap.parse_args()
    fam = Family("bin2", Fraction(1, 3), args.t)
    start = time.perf_counter()
    results = search(fam, get_entry("tableII-z-1/16"), GRID, jobs=args.jobs)
    print(f"{len(results)} candidates in {time.perf_counter() - start:.1f}s")
    for status, count in sorted(Counter(c.status for c in results).items()):
        print(f"  {status:<24} {count}")
    for c in results:
        if c.status == "found":
            print("\n" + ", ".join(f"{k}={v}" for k, v in c.j.items()))
            print(print_pair(c.pair))


if __name__ == "__main__":
    main()
