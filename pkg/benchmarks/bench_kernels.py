"""Timing comparison of the two Jacobi eigensolver kernels.

Runs both the numba-compiled and the pure-numpy implementation on random
Hermitian matrices of a few sizes and reports wall times plus the agreement
between the eigenvalue sets.  Numba is warmed up once before timing so JIT
compilation does not pollute the numbers.

Usage: python3 benchmarks/bench_kernels.py [--dims 16,64,128] [--repeats 5]
"""
import argparse
import time

import numpy as np

from mrdiv._kernels import HAS_NUMBA, jacobi_numba, jacobi_numpy

OFF_THRESH_FACTOR = 1e-13
MAX_SWEEPS = 100


def rand_herm(rng, n: int) -> np.ndarray:
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (m + m.conj().T) / 2.0


def bench(kernel, mats, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for a in mats:
            thresh = OFF_THRESH_FACTOR * np.linalg.norm(a)
            kernel(a.copy(), thresh, MAX_SWEEPS)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", default="16,64,128")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--mats-per-dim", type=int, default=4)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()
    dims = [int(t) for t in args.dims.split(",") if t.strip()]
    rng = np.random.default_rng(args.seed)

    if not HAS_NUMBA:
        print("numba not installed; timing the pure-numpy kernel only")
    else:
        warm = rand_herm(rng, 8)
        jacobi_numba(warm, OFF_THRESH_FACTOR * np.linalg.norm(warm), MAX_SWEEPS)

    header = f"{'dim':>5} {'numpy [s]':>12}"
    if HAS_NUMBA:
        header += f" {'numba [s]':>12} {'speedup':>9}"
    header += f" {'max |dw|':>10}"
    print(header)

    for n in dims:
        mats = [rand_herm(rng, n) for _ in range(args.mats_per_dim)]
        t_np = bench(jacobi_numpy, mats, args.repeats)
        line = f"{n:>5} {t_np:>12.4f}"
        dw = 0.0
        if HAS_NUMBA:
            t_nb = bench(jacobi_numba, mats, args.repeats)
            line += f" {t_nb:>12.4f} {t_np / t_nb:>8.1f}x"
            for a in mats:
                thresh = OFF_THRESH_FACTOR * np.linalg.norm(a)
                w1, _, _, _ = jacobi_numpy(a.copy(), thresh, MAX_SWEEPS)
                w2, _, _, _ = jacobi_numba(a.copy(), thresh, MAX_SWEEPS)
                dw = max(dw, float(np.max(np.abs(np.sort(w1) - np.sort(w2)))))
        else:
            for a in mats:
                thresh = OFF_THRESH_FACTOR * np.linalg.norm(a)
                w1, _, _, _ = jacobi_numpy(a.copy(), thresh, MAX_SWEEPS)
                dw = max(dw, float(np.max(np.abs(np.sort(w1) - np.linalg.eigvalsh(a)))))
        print(line + f" {dw:>10.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
