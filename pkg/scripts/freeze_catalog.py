"""Re-solve every stored pair from its family and j-values and diff against the catalog.

Prints the regenerated R, S and y in the catalog's text form; exits 1 on any drift.
"""

import sys

from wzpairs.ansatz import run_candidate
from wzpairs.catalog import builtin_catalog
from wzpairs.dsl import format_rational, print_rational_function


def main() -> int:
    drift = 0
    for e in builtin_catalog():
        if not e.has_pair:
            continue
        fam, j = e.family()
        c = run_candidate(fam, j, e)
        same = c.pair is not None and c.pair == e.pair()
        drift += not same
        print(f"{e.id}: {'ok' if same else 'DRIFT (' + c.status + ')'}")
        if c.pair is not None:
            print(f"  y {format_rational(c.pair.y)}")
            print(f"  R {print_rational_function(*c.pair.R)}")
            print(f"  S {print_rational_function(*c.pair.S)}")
    return 1 if drift else 0


if __name__ == "__main__":
    sys.exit(main())
