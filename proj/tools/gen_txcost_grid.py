#!/usr/bin/env python3
"""Writes data/txcost_grid.json: equal-probability quantile midpoints of the
standard normal truncated at M, and their exponentials, for the grid sizes
used by the transaction-cost scenario.  Values carry 30 significant digits.

    python3 tools/gen_txcost_grid.py > data/txcost_grid.json
"""
import json

import mpmath

mpmath.mp.dps = 60
SIZES = [2, 4, 8, 16, 32]
TRUNCATION = 3


def fmt(x):
    return mpmath.nstr(x, 30, min_fixed=-5, max_fixed=5)


def grid(n, m):
    pts = []
    for k in range(n):
        u = mpmath.mpf(2 * k + 1) / (2 * n)
        pts.append(min(mpmath.sqrt(2) * mpmath.erfinv(2 * u - 1), m))
    return pts


def main():
    out = {"truncation": str(TRUNCATION), "digits": 30, "grids": {}}
    for n in SIZES:
        g = grid(n, mpmath.mpf(TRUNCATION))
        out["grids"][str(n)] = {"points": [fmt(x) for x in g],
                                "exp": [fmt(mpmath.e ** x) for x in g]}
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
