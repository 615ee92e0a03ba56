"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--size 60]

Prints one line per kernel with the best time of each backend and the speedup.
Both backends must return identical results; the script exits 1 otherwise.
"""
from __future__ import annotations

import argparse
import random
import sys
import timeit
from fractions import Fraction

from loopcalc import _kernels_py

try:
    from loopcalc import _kernels
except ImportError:
    _kernels = None


def random_matrix(rng: random.Random, n: int, density: float = 0.3):
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if rng.random() < density:
                row.append(Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
            else:
                row.append(Fraction(0))
        rows.append(row)
    return rows


def random_monomials(rng: random.Random, count: int, ngens: int = 8):
    odd = tuple(rng.random() < 0.5 for _ in range(ngens))
    pairs = []
    for _ in range(count):
        a = tuple(rng.randint(0, 1) if o else rng.randint(0, 3) for o in odd)
        b = tuple(rng.randint(0, 1) if o else rng.randint(0, 3) for o in odd)
        pairs.append((a, b))
    return odd, pairs


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=60)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 2
    rng = random.Random(args.seed)
    mats = [random_matrix(rng, args.size) for _ in range(3)]
    odd, pairs = random_monomials(rng, 20000)

    cases = {
        "rref": lambda k: [k.rref([list(r) for r in m], args.size) for m in mats],
        "mul_exponents": lambda k: [k.mul_exponents(a, b, odd) for a, b in pairs],
    }
    status = 0
    print(f"{'kernel':<16}{'python (s)':>12}{'cython (s)':>12}{'speedup':>10}")
    for name, fn in cases.items():
        if fn(_kernels_py) != fn(_kernels):
            print(f"{name}: backends disagree", file=sys.stderr)
            status = 1
        t_py = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        t_cy = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        print(f"{name:<16}{t_py:>12.4f}{t_cy:>12.4f}{t_py / t_cy:>9.2f}x")
    return status


if __name__ == "__main__":
    sys.exit(main())
