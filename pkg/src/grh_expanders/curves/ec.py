"""Short Weierstrass curves y^2 = x^3 + a x + b over prime fields F_p."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .. import _kernels
from ..arith import factorize, kronecker, sqrt_mod
from . import polyfp as P

Point = tuple[int, int] | None  # None is the point at infinity
POINT_COUNT_CAP = 10**5


class SingularCurve(ValueError):
    pass


@lru_cache(maxsize=32)
def _legendre(p: int) -> np.ndarray:
    return _kernels.legendre_table(p)


@dataclass(frozen=True)
class Curve:
    p: int
    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)
        if (4 * self.a**3 + 27 * self.b**2) % self.p == 0:
            raise SingularCurve(f"y^2 = x^3 + {self.a}x + {self.b} is singular over F_{self.p}")

    def __str__(self):
        return f"y^2 = x^3 + {self.a}x + {self.b} over F_{self.p}"

    @property
    def j(self) -> int:
        p = self.p
        num = 4 * pow(self.a, 3, p)
        return 1728 * num * pow((num + 27 * self.b * self.b) % p, -1, p) % p

    def rhs(self, x: int) -> int:
        return (x * x * x + self.a * x + self.b) % self.p

    def is_on(self, P_: Point) -> bool:
        if P_ is None:
            return True
        x, y = P_
        return (y * y - self.rhs(x)) % self.p == 0

    def neg(self, P_: Point) -> Point:
        return None if P_ is None else (P_[0], (-P_[1]) % self.p)

    def add(self, P1: Point, P2: Point) -> Point:
        if P1 is None:
            return P2
        if P2 is None:
            return P1
        p = self.p
        x1, y1 = P1
        x2, y2 = P2
        if x1 == x2:
            if (y1 + y2) % p == 0:
                return None
            lam = (3 * x1 * x1 + self.a) * pow(2 * y1, -1, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (lam * lam - x1 - x2) % p
        return x3, (lam * (x1 - x3) - y1) % p

    def sub(self, P1: Point, P2: Point) -> Point:
        return self.add(P1, self.neg(P2))

    def mul(self, n: int, P_: Point) -> Point:
        if n < 0:
            return self.mul(-n, self.neg(P_))
        R = None
        Q = P_
        while n:
            if n & 1:
                R = self.add(R, Q)
            Q = self.add(Q, Q)
            n >>= 1
        return R

    def points(self) -> list[Point]:
        """Every rational point, the point at infinity first."""
        p = self.p
        pts: list[Point] = [None]
        for x in range(p):
            r = self.rhs(x)
            if r == 0:
                pts.append((x, 0))
            elif kronecker(r, p) == 1:
                y1, y2 = sqrt_mod(r, p)
                pts.extend([(x, y1), (x, y2)])
        return pts

    def random_point(self, rng: random.Random) -> Point:
        p = self.p
        while True:
            x = rng.randrange(p)
            r = self.rhs(x)
            if r == 0:
                return (x, 0)
            if kronecker(r, p) == 1:
                y = sqrt_mod(r, p)[rng.randrange(2)]
                return (x, y)

    def order(self) -> int:
        return count_points(self)

    def point_order(self, P_: Point, group_order: int | None = None) -> int:
        """Order of P_ by the factored-group-order method."""
        n = group_order if group_order is not None else self.order()
        if P_ is None:
            return 1
        for q, e in factorize(n).factors:
            for _ in range(e):
                if self.mul(n // q, P_) is None:
                    n //= q
                else:
                    break
        return n

    def twist(self, c: int) -> "Curve":
        """The model y^2 = x^3 + a c^2 x + b c^3 (a quadratic twist when c is a nonsquare)."""
        return Curve(self.p, self.a * c * c, self.b * c * c * c)

    def division_polynomial(self, n: int) -> list[int]:
        return division_polynomials(self, n)[n]


def count_points(curve: Curve) -> int:
    """#E(F_p) = p + 1 + sum_x (x^3 + a x + b | p)."""
    p = curve.p
    if p > POINT_COUNT_CAP:
        raise ValueError(f"exhaustive point counting capped at p <= {POINT_COUNT_CAP}")
    t = _kernels.traces(p, np.array([curve.a]), np.array([curve.b]), _legendre(p))[0]
    return p + 1 - int(t)


def traces(p: int, a_arr, b_arr) -> np.ndarray:
    return _kernels.traces(p, np.asarray(a_arr, dtype=np.int64), np.asarray(b_arr, dtype=np.int64), _legendre(p))


def isomorphism_scale(E1: Curve, E2: Curve) -> int | None:
    """Some u with (a2, b2) = (u^4 a1, u^6 b1), or None if the models are not F_p-isomorphic."""
    p = E1.p
    for u in range(1, p):
        u2 = u * u % p
        if (u2 * u2 * E1.a - E2.a) % p == 0 and (u2 * u2 * u2 * E1.b - E2.b) % p == 0:
            return u
    return None


def map_isomorphism(u: int, P_: Point, p: int) -> Point:
    if P_ is None:
        return None
    return (u * u * P_[0] % p, pow(u, 3, p) * P_[1] % p)


def division_polynomials(curve: Curve, n: int) -> list[list[int]]:
    """x-only division polynomials f_0..f_n: psi_k = f_k for odd k, psi_k = y f_k for even k."""
    p, a, b = curve.p, curve.a, curve.b
    F = [b, a, 0, 1]
    F2 = P.mul(F, F, p)
    f = [[], [1], [2], P.trim([(-a * a) % p, 12 * b % p, 6 * a % p, 0, 3]),
         P.scale(P.trim([(-8 * b * b - a**3) % p, (-4 * a * b) % p, (-5 * a * a) % p, 20 * b % p, 5 * a % p, 0, 1]), 4, p)]
    half = pow(2, -1, p)
    for k in range(5, n + 1):
        m = k // 2
        if k % 2:
            t1 = P.mul(f[m + 2], P.mul(f[m], P.mul(f[m], f[m], p), p), p)
            t2 = P.mul(f[m - 1], P.mul(f[m + 1], P.mul(f[m + 1], f[m + 1], p), p), p)
            if m % 2 == 0:
                t1 = P.mul(t1, F2, p)
            else:
                t2 = P.mul(t2, F2, p)
            f.append(P.sub(t1, t2, p))
        else:
            t1 = P.mul(f[m + 2], P.mul(f[m - 1], f[m - 1], p), p)
            t2 = P.mul(f[m - 2], P.mul(f[m + 1], f[m + 1], p), p)
            f.append(P.scale(P.mul(f[m], P.sub(t1, t2, p), p), half, p))
    return f[: n + 1]


def multiplication_x(curve: Curve, n: int, fs=None) -> tuple[list[int], list[int]]:
    """(num, den) with x([n]P) = num(x) / den(x)."""
    p = curve.p
    fs = fs if fs is not None and len(fs) > n + 1 else division_polynomials(curve, n + 1)
    F = [curve.b, curve.a, 0, 1]
    fn2 = P.mul(fs[n], fs[n], p)
    prod = P.mul(fs[n - 1], fs[n + 1], p)
    if n % 2:
        num = P.sub(P.mul([0, 1], fn2, p), P.mul(F, prod, p), p)
        return num, fn2
    den = P.mul(F, fn2, p)
    return P.sub(P.mul([0, 1], den, p), prod, p), den
