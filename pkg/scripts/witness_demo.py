#!/usr/bin/env python3
"""End-to-end demo: find and certify a formal curve inside an
infinite-type hypersurface germ.

Runs the full pipeline on r = 2 Re z3 + |z1^2 - z2^3|^2, prints the
certificate bundle, and re-checks it from the embedded inputs alone.

Usage:  python scripts/witness_demo.py [order]
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from germforge import formats, recheck_bundle, run_pipeline

R_TEXT = """vars 3; N=60;
+ 1 z3 + 1 zbar3
+ 1 z1^2 zbar1^2
- 1 z1^2 zbar2^3 - 1 z2^3 zbar1^2
+ 1 z2^3 zbar2^3;
"""


def main() -> int:
    order = int(sys.argv[1]) if len(sys.argv) > 1 else 50
    r = formats.parse_hermitian(R_TEXT)
    start = time.monotonic()
    result = run_pipeline(r, N=order, A=3, d=2, bound=6, r_text=R_TEXT)
    elapsed = time.monotonic() - start
    print(result.bundle)
    print(f"# pipeline finished in {elapsed:.2f}s with exit code {result.exit_code}")
    code, message = recheck_bundle(result.bundle)
    print(f"# independent re-check: {message} (exit {code})")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
