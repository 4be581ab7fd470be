#!/usr/bin/env python3
"""Idempotents of M_n(K), which of them are full, and the corner each one cuts out."""

import argparse

from kleene_morita import find_algebra_isomorphism, matrix_algebra, resolve_algebra
from kleene_morita.morita import corner_algebra, full_idempotents, lift_semiring_morita


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("algebra", nargs="?", default="bool2")
    ap.add_argument("n", nargs="?", type=int, default=2)
    ap.add_argument("--lift", action="store_true", help="also build and verify a witness for each full one")
    args = ap.parse_args(argv)
    K = resolve_algebra(args.algebra)
    M = matrix_algebra(K, args.n)
    scan = full_idempotents(M)
    small = {k: matrix_algebra(K, k) for k in range(1, args.n + 1)}
    print(f"{M.name}: {len(scan)} idempotents, {sum(f for _, f in scan)} full")
    for e, full in scan:
        C = corner_algebra(M, e)
        shape = next((f"M{k}({K.name})" for k, A in small.items()
                      if A.size == C.size and find_algebra_isomorphism(C, A) is not None), f"|{C.size}|")
        line = f"  {M.label(e):<24} {'full' if full else 'not full':<9} corner {shape}"
        if args.lift and full:
            line += "  lift " + lift_semiring_morita(K, args.n, e).report.verdict
        print(line)


if __name__ == "__main__":
    main()
