"""Integer and modular arithmetic used by every other module.

Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

TRIAL_DIVISION_BOUND = 10**6
RHO_ITERATION_CAP = 2**24

# Jaeschke / Sorenson-Webster: these bases are deterministic below 3.3e24.
_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_RANDOM_ROUNDS = 64


class NonResidue(ValueError):
    """Raised by sqrt_mod when the argument is a quadratic nonresidue."""


class FactorizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        return self.sign * math.prod(p**e for p, e in self.factors)

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def __str__(self):
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors) or "1"
        return ("-" if self.sign < 0 else "") + body


def _miller_rabin_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, 64 seeded rounds above."""
    if n < 2:
        return False
    for p in _MR_BASES_64:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _MR_DETERMINISTIC_LIMIT:
        bases = _MR_BASES_64
    else:
        rng = random.Random(n)
        bases = [rng.randrange(2, n - 1) for _ in range(_MR_RANDOM_ROUNDS)]
    return all(_miller_rabin_round(n, d, s, a) for a in bases)


def primes_up_to(x: int) -> list[int]:
    """Sieve of Eratosthenes."""
    x = int(x)
    if x < 2:
        return []
    sieve = np.ones(x + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(x) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).tolist()


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    return tuple(primes_up_to(TRIAL_DIVISION_BOUND))


def _pollard_brent(n: int, seed: int, budget: int) -> int:
    """Return a nontrivial factor of the composite n (Brent's cycle variant)."""
    rng = random.Random(seed)
    used = 0
    while used < budget:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            used += r
            r *= 2
            if used > budget:
                break
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise FactorizationError(f"Pollard rho exceeded {budget} iterations on {n}")


def _split_large(n: int, out: dict, budget: int) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split_large(r, out, budget)
        _split_large(r, out, budget)
        return
    d = _pollard_brent(n, seed=n & 0xFFFFFFFF, budget=budget)
    _split_large(d, out, budget)
    _split_large(n // d, out, budget)


def factorize(n: int, rho_budget: int = RHO_ITERATION_CAP) -> Factorization:
    """Complete factorization: trial division to 10**6, then Pollard-Brent."""
    n = int(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    found: dict[int, int] = {}
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    if n > 1:
        if n < TRIAL_DIVISION_BOUND**2:
            found[n] = found.get(n, 0) + 1
        else:
            _split_large(n, found, rho_budget)
    return Factorization(sign, tuple(sorted(found.items())))


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n)."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 and D % 8 in (3, 5):
            result = -result
    # now n odd positive: Jacobi symbol
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod(a: int, p: int) -> tuple[int, int]:
    """Both square roots of a modulo the odd prime p, smaller first (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return (0, 0)
    if pow(a, (p - 1) // 2, p) != 1:
        raise NonResidue(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return tuple(sorted((r, p - r)))


def _simpson(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm, flm, left = _simpson(f, a, fa, m, fm)
    rm, frm, right = _simpson(f, m, fm, b, fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (_adaptive_simpson(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1)
            + _adaptive_simpson(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1))


def integrate_simpson(f, a: float, b: float, tol: float = 1e-10, max_depth: int = 50) -> float:
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    return _adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol, max_depth)


def _inv_log(t: float) -> float:
    return 1.0 / math.log(t)


def li(x: float) -> float:
    """Offset logarithmic integral, integral of 1/log t from 2 to x."""
    if x < 2:
        raise ValueError(f"li is defined here only for x >= 2, got {x}")
    if x <= 10:
        return integrate_simpson(_inv_log, 2.0, float(x))
    return integrate_simpson(_inv_log, 2.0, 10.0) + integrate_simpson(_inv_log, 10.0, float(x))


def euler_phi(n: int) -> int:
    f = factorize(n)
    return reduce(lambda acc, pe: acc * (pe[0] - 1) * pe[0] ** (pe[1] - 1), f.factors, 1)


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)
