"""Run verify_pair over every catalog pair, entries in parallel, reports in catalog order."""

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from wzpairs.catalog import builtin_catalog, get_entry
from wzpairs.verify import verify_pair


def _check(args):
    eid, precision = args
    e = get_entry(eid)
    return eid, verify_pair(e.pair(), e, precision)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--precision", type=int, default=40)
    ap.add_argument("--jobs", type=int, default=4)
    args = ap.parse_args()
    ids = [e.id for e in builtin_catalog() if e.has_pair]
    bad = 0
    with ProcessPoolExecutor(args.jobs) as pool:
        for eid, records in pool.map(_check, [(i, args.precision) for i in ids]):
            failed = [r for r in records if not r.ok()]
            bad += bool(failed)
            print(f"{eid:<10} {'ok' if not failed else 'FAILED: ' + ', '.join(r.name for r in failed)}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
