"""Time the compiled kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both paths are checked for equal output before timing. When numba is not
installed (or GRH_EXPANDERS_NO_NUMBA=1) only the numpy column is filled.
"""
import argparse
import time

import numpy as np

from grh_expanders import _kernels
from grh_expanders.residue_graphs import GrhGraphConfig, build_grh_graph


def best_of(fn, repeat):
    fn()  # warm-up (and JIT compile)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases():
    g = build_grh_graph(GrhGraphConfig(9973, B=2.5))
    G = g.group
    chars = G.elements()
    moduli = np.asarray(G.moduli, dtype=np.int64)
    w = g.multiplicities.astype(float)
    yield ("character sums, q=9973", lambda k: k.character_sums(chars, g.unique_generators, w, moduli),
           lambda k: k.character_sums_numpy(chars, g.unique_generators, w, moduli))

    p = 1999
    leg = _kernels.legendre_table(p)
    rng = np.random.default_rng(0)
    a = rng.integers(0, p, 4000)
    b = rng.integers(0, p, 4000)
    yield ("point-count traces, 4000 curves, p=1999", lambda k: k.traces(p, a, b, leg),
           lambda k: k.traces_numpy(p, a, b, leg))

    steps = rng.integers(0, g.degree, size=(10_000, 12))
    start = np.zeros(G.rank, dtype=np.int64)
    yield ("walk endpoints, 1e4 x 12 steps", lambda k: k.walk_endpoints(start, g.generators, moduli, steps),
           lambda k: k.walk_endpoints_numpy(start, g.generators, moduli, steps))

    nbr = g.neighbor_table()
    dist = np.zeros(G.order)
    dist[0] = 1.0
    wn = w / g.degree
    yield ("distribution evolution, 50 steps", lambda k: k.evolve(dist, nbr, wn, 50),
           lambda k: k.evolve_numpy(dist, nbr, wn, 50))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"backend: {_kernels.backend()}")
    print(f"{'kernel':<42} {'numba [s]':>10} {'numpy [s]':>10} {'speedup':>8}")
    for name, fast, slow in cases():
        ref = slow(_kernels)
        t_np = best_of(lambda: slow(_kernels), args.repeat)
        if _kernels.HAVE_NUMBA:
            out = fast(_kernels)
            if not np.allclose(out, ref, atol=1e-9):
                raise SystemExit(f"{name}: numba and numpy disagree")
            t_nb = best_of(lambda: fast(_kernels), args.repeat)
            print(f"{name:<42} {t_nb:>10.4f} {t_np:>10.4f} {t_np / t_nb:>7.1f}x")
        else:
            print(f"{name:<42} {'-':>10} {t_np:>10.4f} {'-':>8}")


if __name__ == "__main__":
    main()
