#!/usr/bin/env python3
"""Deformation-theory round trip on a concrete algebra.

Loads (or builds) a weighted differential algebra, confirms it is a
Maurer-Cartan element, twists, and prints the total cohomology dimensions.
"""

import argparse

from operad_forge.algebras import (
    DifAlgebraData,
    is_differential_algebra,
    load_algebra,
)
from operad_forge.cochain import CochainComplexes
from operad_forge.compare import da_twist_mismatches, do_twist_mismatches
from operad_forge.linf import mc_residual_of_algebra


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--algebra", default=None,
                        help="algebra JSON file; default: the rank-1"
                             " idempotent with d(e) = -e at weight 1")
    parser.add_argument("--max-level", type=int, default=3)
    args = parser.parse_args()

    if args.algebra:
        with open(args.algebra) as fh:
            alg = load_algebra(fh.read())
    else:
        alg = DifAlgebraData.build([[[1]]], [[-1]], 1)

    print(f"dim A = {alg.dim}, weight = {alg.lam}")
    print(f"axioms hold: {is_differential_algebra(alg)}")
    print(f"Maurer-Cartan residual zero: "
          f"{mc_residual_of_algebra(alg).is_zero()}")
    print(f"twisted l1 = -dDA at levels <= {args.max_level}: "
          f"{da_twist_mismatches(alg, args.max_level) == []}")
    print(f"(l1^beta)^tau = dDO at levels <= {args.max_level}: "
          f"{do_twist_mismatches(alg, args.max_level) == []}")
    dims = CochainComplexes(alg).cohomology_ranks(args.max_level)
    for n, d in enumerate(dims):
        print(f"H^{n}: dim {d}")


if __name__ == "__main__":
    main()
