"""Time the character-sum kernels under numba and under the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

The numba column includes nothing from JIT compilation: every case is run
once untimed first.  Both backends must return the same sum, which is checked.
"""

import argparse
import time

from spinlf import _kernels
from spinlf.jordan import HermMatrix
from spinlf.local_factors import interior_sum_oracle
from spinlf.quaternion import QuatAlgebra

CASES = [
    # (label, rank, ell, m, diagonal)
    ("rank2 l=3 m=2", 2, 3, 2, (1, 3, 0)),
    ("rank2 l=5 m=2", 2, 5, 2, (1, 5, 0)),
    ("rank3 l=2 m=1", 3, 2, 1, (1, 1, 2)),
    ("rank3 l=3 m=1", 3, 3, 1, (1, 1, 3)),
]


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--algebra", default="disc7")
    args = ap.parse_args()

    alg = QuatAlgebra.named(args.algebra)
    print(f"algebra {args.algebra}, numba available: {_kernels.HAVE_NUMBA}")
    print(f"{'case':<16}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    for label, j, ell, m, diag in CASES:
        h = HermMatrix.diag(alg, *diag)

        def run(fast):
            return interior_sum_oracle(j, ell, m, h, alg=alg, budget=10**9, use_numba=fast)

        t_np, v_np = best_of(lambda: run(False), args.repeat)
        if _kernels.HAVE_NUMBA:
            run(True)  # compile
            t_nb, v_nb = best_of(lambda: run(True), args.repeat)
            assert v_nb == v_np, (label, v_nb, v_np)
            print(f"{label:<16}{t_np:>10.3f}{t_nb:>10.3f}{t_np / t_nb:>8.1f}x")
        else:
            print(f"{label:<16}{t_np:>10.3f}{'-':>10}{'-':>9}")


if __name__ == "__main__":
    main()
