"""Rank-3 closed forms against the brute-force sum at m = 2.

Each profile needs a sweep over (Z/4)^15, about 10^9 classes, so a run takes
one to two minutes per profile even with numba.  Too slow for the test suite;
run by hand:

    python3 benchmarks/validate_rank3_m2.py
    python3 benchmarks/validate_rank3_m2.py --profiles 0,0,1 1,1,2
"""

import argparse
import sys
import time

from spinlf.jordan import HermMatrix
from spinlf.local_factors import ValProfile, closed_series, interior_sum_oracle
from spinlf.quaternion import QuatAlgebra
from spinlf.scalars import CycloValue

DEFAULT = ["0,0,1", "0,1,1", "1,1,1", "0,0,2", "0,1,2", "1,1,2"]


def main():
    ap = argparse.ArgumentParser(description="rank-3 oracle sweep at m = 2")
    ap.add_argument("--ell", type=int, default=2)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--algebra", default="disc7")
    ap.add_argument("--profiles", nargs="*", default=DEFAULT)
    args = ap.parse_args()

    alg = QuatAlgebra.named(args.algebra)
    bad = 0
    for spec in args.profiles:
        vals = tuple(int(v) for v in spec.split(","))
        h = HermMatrix.diag(alg, *(args.ell**v for v in vals))
        t0 = time.perf_counter()
        got = interior_sum_oracle(3, args.ell, args.m, h, alg=alg, budget=10**12)
        want = closed_series(ValProfile(3, args.ell, vals)).coefficient(args.m)
        ok = want == CycloValue.rational(got)
        bad += not ok
        print(f"{vals}  oracle {got:>8}  closed {want!s:>8}  {'OK' if ok else 'MISMATCH'}  {time.perf_counter() - t0:.1f}s", flush=True)
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
