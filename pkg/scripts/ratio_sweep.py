#!/usr/bin/env python3
"""Contact-order ratio experiments.

Sweeps the model family r_m = 2 Re z2 + |z1|^(2m) and a few perturbed
variants through the monomial curve search, tabulating the best certified
lower bound for the type at each m.

Usage:  python scripts/ratio_sweep.py [max_m]
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from germforge import HermitianForm, monomial_curve_search
from germforge.coeffs import ONE
from germforge import formats


def power_form(m: int, precision: int) -> HermitianForm:
    pairs = {
        ((0, 1), (0, 0)): ONE,
        ((0, 0), (0, 1)): ONE,
        ((m, 0), (m, 0)): ONE,
    }
    return HermitianForm(2, precision, pairs)


def cross_form(precision: int) -> HermitianForm:
    """2 Re z3 + |z1^2 - z2^3|^2: carries an infinite-type direction."""
    pairs = {
        ((0, 0, 1), (0, 0, 0)): ONE,
        ((0, 0, 0), (0, 0, 1)): ONE,
        ((2, 0, 0), (2, 0, 0)): ONE,
        ((2, 0, 0), (0, 3, 0)): -ONE,
        ((0, 3, 0), (2, 0, 0)): -ONE,
        ((0, 3, 0), (0, 3, 0)): ONE,
    }
    return HermitianForm(3, precision, pairs)


def main() -> int:
    max_m = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    print("model family: 2 Re z2 + |z1|^(2m)")
    print(f"{'m':>3} {'best ratio':>12} {'curve':<24} {'time':>7}")
    for m in range(1, max_m + 1):
        r = power_form(m, 8 * m + 4)
        start = time.monotonic()
        results = monomial_curve_search(r, 3, 2)
        elapsed = time.monotonic() - start
        curve, ratio = results[0]
        ctext = ", ".join(formats.format_series(c, ["t"]) for c in curve.components)
        print(f"{m:>3} {str(ratio):>12} ({ctext:<22}) {elapsed:6.2f}s")

    print()
    print("infinite-type example: 2 Re z3 + |z1^2 - z2^3|^2")
    start = time.monotonic()
    results = monomial_curve_search(cross_form(24), 3, 2)
    elapsed = time.monotonic() - start
    for curve, ratio in results[:5]:
        ctext = ", ".join(formats.format_series(c, ["t"]) for c in curve.components)
        print(f"  ratio {str(ratio):>10}  curve ({ctext})")
    print(f"  search time {elapsed:.2f}s")
    print("  flagged ratios certify vanishing only through the stated order;")
    print("  they are lower bounds for the supremum, never the supremum itself")
    return 0


if __name__ == "__main__":
    sys.exit(main())
