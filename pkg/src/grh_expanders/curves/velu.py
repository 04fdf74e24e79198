"""Separable isogenies from rational kernels via Velu's formulas.

A kernel is described by its kernel polynomial h(x) = prod (x - x(Q)) over
the kernel points Q != O taken up to sign. Kernels defined over F_p are
found by factoring the division polynomial and grouping factors that are
permuted by multiplication by a generator of (Z/lZ)*.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..arith import is_prime
from ..residue_graphs import primitive_root
from . import polyfp as P
from .ec import Curve, Point, division_polynomials, multiplication_x


class NotRational(ValueError):
    pass


@dataclass(frozen=True)
class Isogeny:
    domain: Curve
    codomain: Curve
    degree: int
    kernel_poly: tuple[int, ...]  # monic, low degree first

    def __call__(self, Q: Point) -> Point:
        if Q is None:
            return None
        p = self.domain.p
        h = list(self.kernel_poly)
        x0, y0 = Q
        if self.degree == 1:
            return Q
        if P.evaluate(h, x0, p) == 0:
            return None
        a, b = self.domain.a, self.domain.b
        v, u = _vu_polys(self.degree, a, b, p)
        inv = P.invmod([x0, p - 1], h, p)  # 1 / (x0 - z) as a polynomial in z
        inv2 = P.mulmod(inv, inv, h, p)
        inv3 = P.mulmod(inv2, inv, h, p)
        X = (x0 + P.trace_mod(P.add(P.mulmod(v, inv, h, p), P.mulmod(u, inv2, h, p), p), h, p)) % p
        dX = (1 - P.trace_mod(P.add(P.mulmod(v, inv2, h, p), P.scale(P.mulmod(u, inv3, h, p), 2, p), p), h, p)) % p
        return X, y0 * dX % p


def _vu_polys(ell: int, a: int, b: int, p: int):
    """v(z), u(z) per kernel x-coordinate z."""
    if ell == 2:
        return [a % p, 0, 3], []
    v = [2 * a % p, 0, 6]
    u = [4 * b % p, 4 * a % p, 0, 4]
    return v, u


def velu_from_kernel_polynomial(E: Curve, ell: int, h) -> Isogeny:
    """Isogeny of prime degree ell whose kernel has x-coordinates the roots of h."""
    p = E.p
    h = P.monic(h, p)
    if ell == 1:
        return Isogeny(E, E, 1, (1,))
    if not is_prime(ell):
        raise ValueError(f"isogeny degree must be prime, got {ell}")
    want = 1 if ell == 2 else (ell - 1) // 2
    if P.deg(h) != want:
        raise ValueError(f"kernel polynomial of a degree-{ell} isogeny has degree {want}, got {P.deg(h)}")
    if not is_rational_kernel(E, ell, h):
        raise NotRational(f"kernel polynomial {h} does not cut out an F_{p}-rational subgroup of order {ell}")
    a, b = E.a, E.b
    v, u = _vu_polys(ell, a, b, p)
    vsum = P.trace_mod(v, h, p)
    wsum = P.trace_mod(P.add(u, P.mul([0, 1], v, p), p), h, p)
    cod = Curve(p, a - 5 * vsum, b - 7 * wsum)
    return Isogeny(E, cod, ell, tuple(h))


def is_rational_kernel(E: Curve, ell: int, h) -> bool:
    p = E.p
    h = P.monic(h, p)
    if ell == 2:
        return P.deg(h) == 1 and P.evaluate([E.b, E.a, 0, 1], (-h[0]) % p, p) == 0
    fs = division_polynomials(E, ell + 2)
    if P.mod(fs[ell], h, p):
        return False
    # closed under x -> x([g] P) for a generator g of (Z/ell)*
    g = primitive_root(ell)
    num, den = multiplication_x(E, g, fs)
    image = P.mulmod(num, P.invmod(den, h, p), h, p)
    return not P.compose_mod(h, image, h, p)


def rational_kernels(E: Curve, ell: int) -> list[list[int]]:
    """Kernel polynomials of all F_p-rational subgroups of order ell."""
    p = E.p
    if ell == 2:
        return [[(-r) % p, 1] for r in sorted(P.roots([E.b, E.a, 0, 1], p))]
    if ell == p:
        raise ValueError("inseparable degree ell = p is out of scope")
    fs = division_polynomials(E, ell + 2)
    psi = P.monic(fs[ell], p)
    factors = P.factor_squarefree(psi, p)
    g = primitive_root(ell)
    num, den = multiplication_x(E, g, fs)
    # factor i -> factor j with h_j(x([g]P)) = 0 for roots of h_i
    succ = []
    for hi in factors:
        image = P.mulmod(num, P.invmod(den, hi, p), hi, p)
        succ.append(next(k for k, hk in enumerate(factors) if not P.compose_mod(hk, image, hi, p)))
    seen = [False] * len(factors)
    out = []
    for start in range(len(factors)):
        if seen[start]:
            continue
        orbit, k = [], start
        while not seen[k]:
            seen[k] = True
            orbit.append(k)
            k = succ[k]
        if sum(P.deg(factors[i]) for i in orbit) == (ell - 1) // 2:
            h = [1]
            for i in orbit:
                h = P.mul(h, factors[i], p)
            out.append(h)
    return sorted(out)


def rational_isogenies(E: Curve, ell: int) -> list[Isogeny]:
    return [velu_from_kernel_polynomial(E, ell, h) for h in rational_kernels(E, ell)]


def velu_isogeny(E: Curve, ell: int, kernel_point: Point) -> Isogeny:
    """Isogeny with kernel generated by an F_p-rational point of prime order ell."""
    p = E.p
    if ell == 1:
        return Isogeny(E, E, 1, (1,))
    if kernel_point is None or E.mul(ell, kernel_point) is not None:
        raise ValueError(f"kernel point does not have order {ell}")
    xs, Q = set(), kernel_point
    for _ in range(max(1, (ell - 1) // 2)):
        xs.add(Q[0])
        Q = E.add(Q, kernel_point)
    h = [1]
    for x in sorted(xs):
        h = P.mul(h, [(-x) % p, 1], p)
    return velu_from_kernel_polynomial(E, ell, h)
