"""Dense univariate polynomials over F_p, stored low degree first."""
from __future__ import annotations

import random

import numpy as np

# numpy paths are used when every intermediate product fits comfortably in int64
_NP_SAFE = 3_000_000_000
ROOT_SCAN_MAX_P = 1 << 16  # below this, small polynomials are scanned at every point


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def deg(f) -> int:
    return len(f) - 1  # -1 for the zero polynomial (after trim)


def add(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def sub(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def scale(f, c, p):
    return trim([x * c % p for x in f])


def mul(f, g, p):
    if not f or not g:
        return []
    if p < _NP_SAFE and min(len(f), len(g)) > 8 and (p - 1) ** 2 * min(len(f), len(g)) < 2**62:
        out = np.convolve(np.asarray(f, dtype=np.int64), np.asarray(g, dtype=np.int64)) % p
        return trim(out.tolist())
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] += x * y
    return trim([v % p for v in out])


def divmod_(f, g, p):
    f = trim(f)
    g = trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(g[-1], -1, p)
    if len(g) > 8 and len(f) >= len(g) and p < _NP_SAFE and (p - 1) ** 2 < 2**62:
        return _divmod_np(f, g, inv, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    r = f[:]
    dg = len(g) - 1
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k] * inv % p
        if c:
            q[k - dg] = c
            for i in range(dg + 1):
                r[k - dg + i] = (r[k - dg + i] - c * g[i]) % p
    return trim(q), trim(r[:dg] if dg > 0 else [])


def _divmod_np(f, g, inv, p):
    r = np.asarray(f, dtype=np.int64) % p
    gg = np.asarray(g, dtype=np.int64) % p
    dg = len(g) - 1
    q = np.zeros(len(f) - dg, dtype=np.int64)
    for k in range(len(f) - 1, dg - 1, -1):
        c = int(r[k]) * inv % p
        if c:
            q[k - dg] = c
            seg = r[k - dg:k + 1]
            seg -= c * gg
            seg %= p
    return trim(q.tolist()), trim(r[:dg].tolist())


def mod(f, g, p):
    return divmod_(f, g, p)[1]


def monic(f, p):
    f = trim(f)
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [x * inv % p for x in f]


def gcd(f, g, p):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, mod(f, g, p)
    return monic(f, p)


def mulmod(f, g, m, p):
    return mod(mul(f, g, p), m, p)


class _Reducer:
    """Reduction modulo a fixed monic m via a precomputed table of x^(n+i) mod m."""

    def __init__(self, m, p):
        m = monic(m, p)
        self.n = n = len(m) - 1
        self.p = p
        table = np.zeros((max(n - 1, 0), n), dtype=np.int64)
        low = np.asarray(m[:n], dtype=np.int64)
        row = (-low) % p  # x^n mod m
        for i in range(n - 1):
            table[i] = row
            top = int(row[-1])  # multiply by x and reduce
            row = np.concatenate(([0], row[:-1]))
            row = (row - top * low) % p
        self.table = table

    def mulmod(self, f, g):
        n, p = self.n, self.p
        if not f or not g:
            return []
        prod = np.convolve(np.asarray(f, dtype=np.int64), np.asarray(g, dtype=np.int64)) % p
        low = np.zeros(n, dtype=np.int64)
        low[: min(n, len(prod))] = prod[:n]
        high = prod[n:]
        if len(high):
            low = (low + high @ self.table[: len(high)]) % p
        return trim((low % p).tolist())


def _use_reducer(m, p) -> bool:
    n = len(m) - 1
    return n > 8 and p < _NP_SAFE and (p - 1) ** 2 * n < 2**62


def powmod(f, e, m, p):
    base = mod(f, m, p)
    if _use_reducer(m, p):
        step = _Reducer(m, p).mulmod  # m and monic(m) give the same residues
    else:
        step = lambda u, v: mulmod(u, v, m, p)  # noqa: E731
    result = [1]
    while e:
        if e & 1:
            result = step(result, base)
        base = step(base, base)
        e >>= 1
    return mod(result, m, p)


def invmod(f, m, p):
    """Inverse of f modulo m (extended Euclid)."""
    r0, r1 = trim(m), mod(f, m, p)
    s0, s1 = [], [1]
    while r1:
        q, r = divmod_(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
    if len(r0) != 1:
        raise ZeroDivisionError("polynomial not invertible modulo m")
    return scale(s0, pow(r0[0], -1, p), p)


def evaluate(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def compose_mod(f, g, m, p):
    """f(g(x)) mod m, Horner."""
    acc = []
    for c in reversed(trim(f)):
        acc = add(mulmod(acc, g, m, p), [c], p)
    return mod(acc, m, p)


def derivative(f, p):
    return trim([i * f[i] % p for i in range(1, len(f))])


def root_multiplicity(f, r, p) -> int:
    """Multiplicity of r as a root of f (f must be nonzero)."""
    f = trim(f)
    m = 0
    while f and evaluate(f, r, p) == 0:
        # synthetic division by (x - r)
        out = [0] * (len(f) - 1)
        acc = 0
        for i in range(len(f) - 1, 0, -1):
            acc = (acc * r + f[i]) % p
            out[i - 1] = acc
        f = trim(out)
        m += 1
    return m


def roots(f, p) -> dict[int, int]:
    """F_p-rational roots of a nonzero f, with multiplicity."""
    f = trim(f)
    if not f:
        raise ValueError("zero polynomial has every element as a root")
    if p <= ROOT_SCAN_MAX_P and len(f) <= 16:
        xs = np.arange(p, dtype=np.int64)
        acc = np.zeros(p, dtype=np.int64)
        for c in reversed(f):
            acc = (acc * xs + c) % p
        return {int(r): root_multiplicity(f, int(r), p) for r in np.nonzero(acc == 0)[0]}
    return roots_cantor_zassenhaus(f, p)


def roots_cantor_zassenhaus(f, p) -> dict[int, int]:
    f = trim(f)
    # split off the product of distinct linear factors: gcd(f, x^p - x)
    xp = powmod([0, 1], p, f, p) if len(f) > 1 else []
    lin = gcd(f, sub(xp, [0, 1], p), p) if len(f) > 1 else [1]
    out = {}
    for r, _ in _equal_degree_split(lin, 1, p):
        z = (-r[0]) % p
        out[z] = root_multiplicity(f, z, p)
    return out


def _equal_degree_split(f, d, p, rng=None):
    """Split a squarefree monic product of degree-d irreducibles (Cantor-Zassenhaus, odd p)."""
    f = monic(f, p)
    if deg(f) <= 0:
        return []
    if deg(f) == d:
        return [(f, 1)]
    if p == 2:
        raise NotImplementedError("characteristic 2 is out of scope")
    rng = rng or random.Random(deg(f) * 1_000_003 + p)
    e = (p**d - 1) // 2
    while True:
        a = trim([rng.randrange(p) for _ in range(deg(f))])
        if deg(a) < 1:
            continue
        g = gcd(a, f, p)
        if 0 < deg(g) < deg(f):
            break
        b = sub(powmod(a, e, f, p), [1], p)
        g = gcd(b, f, p)
        if 0 < deg(g) < deg(f):
            break
    h = divmod_(f, g, p)[0]
    return _equal_degree_split(g, d, p, rng) + _equal_degree_split(h, d, p, rng)


def factor_squarefree(f, p) -> list[list[int]]:
    """Monic irreducible factors of a squarefree f over F_p (distinct-degree then equal-degree)."""
    f = monic(f, p)
    factors = []
    d = 1
    xq = [0, 1]
    while deg(f) >= 2 * d:
        xq = powmod(xq, p, f, p)
        g = gcd(f, sub(xq, [0, 1], p), p)
        if deg(g) > 0:
            factors.extend(h for h, _ in _equal_degree_split(g, d, p))
            f = divmod_(f, g, p)[0]
            xq = mod(xq, f, p)
        d += 1
    if deg(f) > 0:
        factors.append(f)
    return sorted(factors, key=lambda h: (len(h), h))


def elementary_to_power_sums(h, count, p):
    """Power sums p_1..p_count of the roots of the monic polynomial h (Newton's identities)."""
    h = monic(h, p)
    n = deg(h)
    # h = x^n + c_{n-1} x^{n-1} + ... ; e_k = (-1)^k c_{n-k}
    e = [1] + [((-1) ** k * h[n - k]) % p for k in range(1, n + 1)]
    ps = [n % p]
    for k in range(1, count + 1):
        s = 0
        for i in range(1, min(k, n + 1)):
            s += (-1) ** (i - 1) * e[i] * ps[k - i]
        if k <= n:
            s += (-1) ** (k - 1) * k * e[k]
        ps.append(s % p)
    return ps


def trace_mod(a, h, p):
    """Sum of a(z) over the roots z of the squarefree monic h."""
    a = mod(a, h, p)
    ps = elementary_to_power_sums(h, max(len(a) - 1, 0), p)
    return sum(c * ps[k] for k, c in enumerate(a)) % p
