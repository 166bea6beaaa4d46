#!/usr/bin/env python3
"""Brute-force Kendall tau oracle used to freeze expected values in tests.

Counts concordant/discordant/tied pairs directly from the definitions:
    tau_a = (C - D) / (n(n-1)/2)
    tau_b = (C - D) / sqrt((C+D+Tx)(C+D+Ty))
where Tx/Ty count pairs tied only in x / only in y and pairs tied in both
enter neither sum. Values are printed as exact fractions where possible.

Usage:
    tau_oracle.py 1,2,3,4 2,1,4,3
"""

import math
import sys
from fractions import Fraction


def pair_counts(x, y):
    c = d = tx = ty = 0
    n = len(x)
    for i in range(n - 1):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            if dx == 0 and dy == 0:
                continue
            if dx == 0:
                tx += 1
            elif dy == 0:
                ty += 1
            elif (dx > 0) == (dy > 0):
                c += 1
            else:
                d += 1
    return c, d, tx, ty


def tau_a(x, y):
    c, d, _, _ = pair_counts(x, y)
    n = len(x)
    return Fraction(c - d, n * (n - 1) // 2)


def tau_b(x, y):
    c, d, tx, ty = pair_counts(x, y)
    denominator = (c + d + ty) * (c + d + tx)
    if denominator == 0:
        raise ZeroDivisionError("undefined tau: zero denominator")
    return (c - d) / math.sqrt(denominator)


def main():
    if len(sys.argv) != 3:
        print(__doc__)
        return 2
    x = [float(v) for v in sys.argv[1].split(",")]
    y = [float(v) for v in sys.argv[2].split(",")]
    if len(x) != len(y) or len(x) < 2:
        print("error: need two equal-length vectors of length >= 2")
        return 2
    c, d, tx, ty = pair_counts(x, y)
    print(f"C={c} D={d} Tx={tx} Ty={ty}")
    a = tau_a(x, y)
    print(f"tau_a = {a} = {float(a):.17g}")
    try:
        print(f"tau_b = {tau_b(x, y):.17g}")
    except ZeroDivisionError as err:
        print(f"tau_b = {err}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
