"""Compiled vs numpy kernels on the transforms that dominate run time.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import importlib.util
import math
import timeit

import numpy as np

from taut import kernels
from taut.characters import AddChar
from taut.field import make_field
from taut.transform import Pairing, external_product, fourier, random_root_function

CASES = [
    ("factored FT", (3, 1), 6, "factored"),
    ("factored FT", (5, 1), 4, "factored"),
    ("factored FT", (2, 2), 5, "factored"),
    ("factored FT", (7, 1), 3, "factored"),
    ("naive FT", (3, 1), 4, "naive"),
    ("naive FT", (5, 1), 3, "naive"),
    ("external product", (3, 1), 6, "outer"),
]


def _job(pf, N, kind, rng):
    F = make_field(*pf)
    psi = AddChar(F)
    order = math.lcm(F.q - 1, 2)
    f = random_root_function(F, N, order, rng)
    if kind == "outer":
        g = random_root_function(F, 2, order, rng)
        return lambda: external_product(f, g)
    if kind == "naive":
        P = Pairing(F, N, [[1 if j == (i + 1) % N else 0 for j in range(N)] for i in range(N)])
        return lambda: fourier(f, psi, P)
    return lambda: fourier(f, psi, path="factored")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if importlib.util.find_spec("taut._kernels") is None:
        print("compiled extension not built; only the numpy backend is available")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':18s} {'q':>3s} {'N':>2s} {'points':>7s} {'numpy ms':>10s} "
          f"{'compiled ms':>12s} {'speedup':>8s}")
    before = kernels.BACKEND
    try:
        for label, pf, N, kind in CASES:
            job = _job(pf, N, kind, rng)
            times = {}
            outs = {}
            for b in ("python", "compiled"):
                kernels.use(b)
                outs[b] = job().data
                times[b] = min(timeit.repeat(job, number=1, repeat=args.repeat)) * 1e3
            assert np.array_equal(outs["python"], outs["compiled"])
            q = pf[0] ** pf[1]
            print(f"{label:18s} {q:3d} {N:2d} {q ** N:7d} {times['python']:10.2f} "
                  f"{times['compiled']:12.2f} {times['python'] / times['compiled']:7.1f}x")
    finally:
        kernels.use(before)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
