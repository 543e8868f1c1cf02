"""Time the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel is called with identical inputs on both backends; the script
also checks that the outputs agree before reporting timings.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from metalab import _kernels_py

try:
    from metalab import _ckernels
except ImportError:
    _ckernels = None


def cases(rng: np.random.Generator):
    Z = rng.uniform(-50, 50, (50, 30))
    X = rng.uniform(-100, 100, (40, 10))
    mass = rng.random(40)
    mass /= mass.sum()
    weights = rng.random((40, 40))
    active = np.zeros(40, dtype=bool)
    active[np.argsort(-mass)[:20]] = True
    out = [(f"eval_base[{name}] 50x30", "eval_base", (code, Z))
           for code, name in ((0, "sphere"), (5, "rastrigin"), (6, "ackley"), (8, "schwefel"),
                              (9, "levy"))]
    out.append(("social_force 40x10", "social_force", (X, 0.5, 1.5)))
    out.append(("gravity 40x10 kbest=20", "gravity", (X, mass, active, weights, 1.0)))
    out.append(("signed_rank_counts n=30", "signed_rank_counts", (30,)))
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=200, help="calls per timing (default 200)")
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; only the numpy backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<28} {'numpy us':>10} {'cython us':>10} {'speedup':>8}")
    for label, name, inputs in cases(rng):
        py_fn = getattr(_kernels_py, name)
        t_py = min(timeit.repeat(lambda: py_fn(*inputs), number=args.repeat, repeat=3))
        t_py = 1e6 * t_py / args.repeat
        if _ckernels is None:
            print(f"{label:<28} {t_py:>10.1f} {'-':>10} {'-':>8}")
            continue
        c_fn = getattr(_ckernels, name)
        if not np.allclose(py_fn(*inputs), c_fn(*inputs), rtol=1e-12, atol=1e-12):
            raise SystemExit(f"backends disagree on {label}")
        t_c = min(timeit.repeat(lambda: c_fn(*inputs), number=args.repeat, repeat=3))
        t_c = 1e6 * t_c / args.repeat
        print(f"{label:<28} {t_py:>10.1f} {t_c:>10.1f} {t_py / t_c:>7.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
