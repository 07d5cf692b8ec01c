#!/usr/bin/env python3
"""Exhaustive small-height search over totally split integer polynomials,
compared against the height floor (half the sum of log p / (p^f + 1) terms).

Usage: python scripts/search_floor.py [deg_max [coeff_bound]]
"""

import sys

from padic_heights.oracle import search_small_height
from padic_heights.verify import lower_bound_value


def main(deg_max, bound):
    for primes in ([2], [3], [2, 3]):
        record = search_small_height(primes, deg_max, bound)
        floor = lower_bound_value([(p, 1, 1) for p in primes])
        print(
            "primes %-8s searched %-6d survivors %-5d floor %.5f  min nonzero height %s"
            % (
                ",".join(map(str, primes)),
                record.searched,
                len(record.entries),
                floor,
                "%.5f" % record.min_nonzero_height if record.min_nonzero_height else "-",
            )
        )
        bad = [(c, h) for c, h in record.entries if 1e-12 < h < floor]
        if bad:
            print("  !! floor violated by", bad)
            return 1
    print("no violations: every nonzero-height survivor sits above the floor")
    return 0


if __name__ == "__main__":
    deg_max = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    bound = int(sys.argv[2]) if len(sys.argv) > 2 else 8
    sys.exit(main(deg_max, bound))
