"""Hot numeric loops, compiled with numba when available.

Set ``GRH_EXPANDERS_NO_NUMBA=1`` to force the pure-numpy implementations
(used by the benchmark and by the equivalence tests).  Both paths take and
return the same array shapes and dtypes.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("GRH_EXPANDERS_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------- numpy paths

def character_sums_numpy(chars, gens, weights, moduli):
    """lambda_a = sum_s w_s cos(2 pi sum_j a_j s_j / d_j) for every row a of chars."""
    L = int(np.lcm.reduce(moduli)) if len(moduli) else 1
    scale = (L // moduli).astype(np.int64)
    # Integer phases modulo L keep the cosine arguments small and exact.
    g = (gens * scale) % L  # (k, r)
    out = np.empty(chars.shape[0], dtype=np.float64)
    block = max(1, 4_000_000 // max(1, gens.shape[0]))
    for lo in range(0, chars.shape[0], block):
        a = chars[lo:lo + block]
        ph = (a @ g.T) % L
        out[lo:lo + block] = np.cos(2.0 * np.pi * ph / L) @ weights
    return out


def legendre_table(p: int) -> np.ndarray:
    t = -np.ones(p, dtype=np.int8)
    sq = (np.arange(1, p, dtype=np.int64) ** 2) % p
    t[sq] = 1
    t[0] = 0
    return t


def traces_numpy(p, a_arr, b_arr, leg):
    """Frobenius traces t = -sum_x leg(x^3 + a x + b) for each model (a_i, b_i)."""
    x = np.arange(p, dtype=np.int64)
    x3 = (x * x % p) * x % p
    out = np.empty(len(a_arr), dtype=np.int64)
    block = max(1, 2_000_000 // p)
    for lo in range(0, len(a_arr), block):
        a = a_arr[lo:lo + block, None]
        b = b_arr[lo:lo + block, None]
        rhs = (x3[None, :] + a * x[None, :] + b) % p
        out[lo:lo + block] = -leg[rhs].astype(np.int64).sum(axis=1)
    return out


def walk_endpoints_numpy(start, gens, moduli, steps):
    """Endpoints of abelian walks: start + sum of the chosen generators."""
    total = gens[steps].sum(axis=1)  # (trials, r)
    return (start[None, :] + total) % moduli[None, :]


def evolve_numpy(dist, nbr, weights, t):
    """t steps of p <- sum_i w_i p[nbr[:, i]] (normalized adjacency on a Cayley graph)."""
    for _ in range(t):
        dist = dist[nbr] @ weights
    return dist


# ---------------------------------------------------------------- numba paths

if HAVE_NUMBA:

    @njit(cache=True)
    def _character_sums_nb(chars, g, weights, L):
        n, r = chars.shape
        k = g.shape[0]
        out = np.empty(n, dtype=np.float64)
        tw = 2.0 * np.pi / L
        for i in range(n):
            acc = 0.0
            for s in range(k):
                ph = 0
                for j in range(r):
                    ph += chars[i, j] * g[s, j]
                acc += weights[s] * np.cos(tw * (ph % L))
            out[i] = acc
        return out

    def character_sums(chars, gens, weights, moduli):
        L = int(np.lcm.reduce(moduli)) if len(moduli) else 1
        g = (gens * (L // moduli).astype(np.int64)) % L
        return _character_sums_nb(np.ascontiguousarray(chars, dtype=np.int64),
                                  np.ascontiguousarray(g, dtype=np.int64),
                                  np.ascontiguousarray(weights, dtype=np.float64), L)

    @njit(cache=True)
    def _traces_nb(p, a_arr, b_arr, leg):
        m = a_arr.shape[0]
        out = np.empty(m, dtype=np.int64)
        for i in range(m):
            a = a_arr[i]
            b = b_arr[i]
            s = 0
            for x in range(p):
                v = ((x * x % p) * x + a * x + b) % p
                s += leg[v]
            out[i] = -s
        return out

    def traces(p, a_arr, b_arr, leg):
        return _traces_nb(p, np.asarray(a_arr, dtype=np.int64), np.asarray(b_arr, dtype=np.int64), leg)

    @njit(cache=True)
    def _walk_endpoints_nb(start, gens, moduli, steps):
        trials, length = steps.shape
        r = start.shape[0]
        out = np.empty((trials, r), dtype=np.int64)
        for i in range(trials):
            for j in range(r):
                out[i, j] = start[j]
            for s in range(length):
                g = steps[i, s]
                for j in range(r):
                    v = out[i, j] + gens[g, j]
                    if v >= moduli[j]:
                        v -= moduli[j]
                    out[i, j] = v
        return out

    def walk_endpoints(start, gens, moduli, steps):
        return _walk_endpoints_nb(np.asarray(start, dtype=np.int64), np.ascontiguousarray(gens, dtype=np.int64),
                                  np.asarray(moduli, dtype=np.int64), np.ascontiguousarray(steps, dtype=np.int64))

    @njit(cache=True)
    def _evolve_nb(dist, nbr, weights, t):
        n, k = nbr.shape
        cur = dist.copy()
        nxt = np.empty_like(cur)
        for _ in range(t):
            for v in range(n):
                acc = 0.0
                for i in range(k):
                    acc += weights[i] * cur[nbr[v, i]]
                nxt[v] = acc
            cur, nxt = nxt, cur
        return cur

    def evolve(dist, nbr, weights, t):
        return _evolve_nb(np.asarray(dist, dtype=np.float64), np.ascontiguousarray(nbr, dtype=np.int64),
                          np.asarray(weights, dtype=np.float64), int(t))

else:
    character_sums = character_sums_numpy
    traces = traces_numpy
    walk_endpoints = walk_endpoints_numpy
    evolve = evolve_numpy
