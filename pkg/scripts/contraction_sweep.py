#!/usr/bin/env python3
"""Size/timing sweep of the exhaustive homotopy-contraction verification.

Useful for picking weight bounds: prints monomial counts and wall time per
(arity, degree, weight) configuration, optionally fanning out over worker
processes.
"""

import argparse
import time

from operad_forge.coeffs import LAMBDA
from operad_forge.contraction import verify_parallel
from operad_forge.dif_operads import enumerate_monomials


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-arity", type=int, default=5)
    parser.add_argument("--max-degree", type=int, default=3)
    parser.add_argument("--weights", type=int, nargs="+", default=[3, 4, 5])
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    for w in args.weights:
        count = len(enumerate_monomials(args.max_arity, w, min_degree=1,
                                        max_degree=args.max_degree))
        started = time.monotonic()
        checked, bad = verify_parallel(args.max_arity, args.max_degree, w,
                                       LAMBDA, args.jobs)
        elapsed = time.monotonic() - started
        status = "ok" if not bad else f"{len(bad)} VIOLATIONS"
        print(f"weight<={w}: {count:6d} monomials  {elapsed:8.2f}s  {status}")
        assert checked == count


if __name__ == "__main__":
    main()
