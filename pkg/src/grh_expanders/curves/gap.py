"""Conductor gaps: the largest prime at which conductors inside one isogeny class can differ."""
from __future__ import annotations

import math

from ..arith import Factorization, factorize, is_prime, primes_up_to
from ..classgroup import fundamental_from_factorization
from .isogeny_class import IsogenyClass


class FixtureError(ValueError):
    pass


def largest_prime_factor(n: int) -> int:
    n = abs(n)
    return max(factorize(n).primes()) if n > 1 else 1


def conductor_gap(cls: IsogenyClass) -> int:
    """Largest prime dividing f; 1 when the class is a single level (f = 1)."""
    return largest_prime_factor(cls.f)


def gap_from_factored_discriminant(fac: Factorization) -> tuple[int, int]:
    """(f, gap) for d = f^2 D0 given the factorization of d."""
    if fac.sign >= 0:
        raise ValueError("Frobenius discriminants are negative")
    _, f = fundamental_from_factorization(fac)
    gap = 1
    for q, _ in fac.factors:
        if f % q == 0:
            gap = max(gap, q)
    return f, gap


def parse_factorization(text: str, check_primes: bool = True) -> Factorization:
    """Parse a fixture: a sign line (+1 or -1), then one "prime exponent" pair per line."""
    rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows or len(rows[0]) != 1 or rows[0][0] not in ("1", "+1", "-1"):
        raise FixtureError("first line must be the sign, +1 or -1")
    sign = int(rows[0][0])
    factors: dict[int, int] = {}
    for n, r in enumerate(rows[1:], start=2):
        if len(r) != 2:
            raise FixtureError(f"line {n}: expected 'prime exponent', got {' '.join(r)!r}")
        try:
            q, e = int(r[0]), int(r[1])
        except ValueError as exc:
            raise FixtureError(f"line {n}: {exc}") from None
        if e < 1 or q < 2 or (check_primes and not is_prime(q)):
            raise FixtureError(f"line {n}: {q}^{e} is not a prime power")
        factors[q] = factors.get(q, 0) + e
    return Factorization(sign, tuple(sorted(factors.items())))


def format_factorization(fac: Factorization) -> str:
    return "\n".join([f"{fac.sign:+d}"] + [f"{q} {e}" for q, e in fac.factors]) + "\n"


def gap_probability_heuristic(beta: float, q: float) -> float:
    """1 - prod_{beta < l <= 2 sqrt(q)} (1 - l^-2): chance of a repeated prime factor above beta."""
    if beta < 2:
        raise ValueError("beta must be >= 2")
    hi = 2 * math.sqrt(q)
    if beta >= hi:
        return 0.0
    prod = 1.0
    for ell in primes_up_to(int(hi)):
        if ell > beta:
            prod *= 1.0 - 1.0 / (ell * ell)
    return 1.0 - prod
