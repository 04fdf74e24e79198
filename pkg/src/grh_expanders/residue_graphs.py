"""Cayley graphs of (Z/qZ)* generated by small primes.

The unit group is made concrete as a product of cyclic groups through the
Chinese remainder theorem and primitive roots, with discrete logarithms read
from enumeration tables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .abelian import AbelianGroup, CayleyGraph, Character, expansion_report, nonabelian_girth, odd_girth, spectrum
from .arith import euler_phi, factorize, kronecker, primes_up_to

UNIT_GROUP_CAP = 10**7


def _multiplicative_order(g: int, m: int, phi: int, phi_primes) -> int:
    order = phi
    for r in phi_primes:
        while order % r == 0 and pow(g, order // r, m) == 1:
            order //= r
    return order


def primitive_root(m: int) -> int:
    """Smallest positive primitive root modulo an odd prime power m."""
    phi = euler_phi(m)
    phi_primes = factorize(phi).primes()
    for g in range(2, m):
        if math.gcd(g, m) == 1 and _multiplicative_order(g, m, phi, phi_primes) == phi:
            return g
    raise ValueError(f"no primitive root modulo {m}")


@dataclass
class _Component:
    modulus: int  # prime power p^e
    moduli: tuple[int, ...]  # cyclic factors contributed (0, 1 or 2 of them)
    generators: tuple[int, ...]
    table: np.ndarray  # residue -> flat coordinate(s), -1 for non-units


class UnitGroup:
    """(Z/qZ)* together with an explicit isomorphism onto an AbelianGroup."""

    def __init__(self, q: int):
        q = int(q)
        if q < 3:
            raise ValueError(f"unit group needs q >= 3, got {q}")
        if q > UNIT_GROUP_CAP:
            raise ValueError(f"q = {q} exceeds the enumeration cap {UNIT_GROUP_CAP}")
        self.q = q
        self.factorization = factorize(q)
        self.components: list[_Component] = []
        for p, e in self.factorization.factors:
            comp = self._component(p, e)
            if comp is not None:
                self.components.append(comp)
        moduli = tuple(d for c in self.components for d in c.moduli)
        self.group = AbelianGroup(moduli)
        self.phi = euler_phi(q)
        if self.group.order != self.phi:
            raise AssertionError(f"unit group order {self.group.order} != phi({q}) = {self.phi}")

    @staticmethod
    def _component(p: int, e: int) -> _Component | None:
        m = p**e
        if p == 2:
            if e == 1:
                return None
            if e == 2:
                table = np.full((m, 1), -1, dtype=np.int64)
                table[1, 0], table[3, 0] = 0, 1
                return _Component(m, (2,), (m - 1,), table)
            half = 2 ** (e - 2)
            table = np.full((m, 2), -1, dtype=np.int64)
            x = 1
            for b in range(half):
                table[x] = (0, b)
                table[m - x] = (1, b)
                x = x * 5 % m
            return _Component(m, (2, half), (m - 1, 5), table)
        g = primitive_root(m)
        phi = m // p * (p - 1)
        table = np.full((m, 1), -1, dtype=np.int64)
        x = 1
        for k in range(phi):
            table[x, 0] = k
            x = x * g % m
        return _Component(m, (phi,), (g,), table)

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.group.moduli

    def forward(self, r) -> np.ndarray:
        """Residue(s) coprime to q -> exponent vector(s)."""
        r = np.asarray(r, dtype=np.int64)
        parts = [c.table[r % c.modulus] for c in self.components]
        out = np.concatenate(parts, axis=-1) if parts else np.zeros(r.shape + (0,), dtype=np.int64)
        if np.any(out < 0):
            raise ValueError("residue not coprime to q")
        return out

    def inverse(self, v) -> int:
        """Exponent vector -> residue in [1, q)."""
        v = [int(t) for t in np.asarray(v).tolist()]
        residue, modulus, pos = 0, 1, 0
        for c in self.components:
            val = 1
            for g, d in zip(c.generators, c.moduli):
                val = val * pow(g, v[pos] % d, c.modulus) % c.modulus
                pos += 1
            # CRT step
            t = (val - residue) * pow(modulus, -1, c.modulus) % c.modulus
            residue += modulus * t
            modulus *= c.modulus
        # factors of 2 contributing nothing (q = 2 * odd) keep the residue odd
        if self.q % 2 == 0 and self.q % 4 != 0:
            if residue % 2 == 0:
                residue += modulus
            modulus *= 2
        return residue % self.q


@lru_cache(maxsize=64)
def unit_group_structure(q: int) -> UnitGroup:
    return UnitGroup(q)


@dataclass(frozen=True)
class GrhGraphConfig:
    q: int
    B: float | None = None
    x: int | None = None

    def resolved_x(self) -> int:
        if self.x is not None:
            x = int(self.x)
        elif self.B is not None:
            x = math.ceil(math.log(self.q) ** self.B)
        else:
            raise ValueError("either B or x must be given")
        if x < 2:
            raise ValueError(f"x must be >= 2, got {x}")
        return x


def generator_primes(q: int, x: int) -> list[int]:
    return [p for p in primes_up_to(x) if q % p]


def generator_multiset(q: int, x: int) -> list[int]:
    """S_x as residues: p and p^{-1} mod q for every prime p <= x not dividing q."""
    if x < 2:
        raise ValueError("x must be >= 2")
    out = []
    for p in generator_primes(q, x):
        out.append(p % q)
        out.append(pow(p, -1, q))
    return out


def build_grh_graph(config: GrhGraphConfig) -> CayleyGraph:
    q = config.q
    x = config.resolved_x()
    ug = unit_group_structure(q)
    residues = generator_multiset(q, x)
    if not residues:
        smallest = next(p for p in primes_up_to(max(4 * q, 100)) if q % p)
        raise ValueError(f"no prime <= {x} is coprime to q = {q}; smallest admissible x is {smallest}")
    gens = ug.forward(np.array(residues))
    return CayleyGraph(ug.group, gens, allow_loops=True, label=f"grh(q={q},x={x})")


def character_prime_sum(q: int, character, x: float) -> float:
    """2 Re sum_{p <= x, p not dividing q} chi(p)."""
    ug = unit_group_structure(q)
    a = character.exponents if isinstance(character, Character) else tuple(int(v) for v in character)
    if x < 2:
        return 0.0
    chi = Character(ug.group, a)
    total = 0.0
    for p in generator_primes(q, int(math.floor(x))):
        total += 2.0 * chi(ug.forward(p % q)).real
    return total


def quadratic_character(q: int) -> tuple[int, ...]:
    """Exponent vector of the Legendre symbol mod an odd prime q."""
    ug = unit_group_structure(q)
    if len(ug.moduli) != 1 or ug.factorization.factors[0][1] != 1:
        raise ValueError("quadratic_character expects an odd prime q")
    return (ug.moduli[0] // 2,)


def least_prime_nonresidue(q: int) -> int:
    for p in primes_up_to(max(100, q)):
        if kronecker(p, q) == -1:
            return p
    raise ValueError(f"no prime nonresidue found for q = {q}")


def unit_graph_report(q: int, B: float | None = None, x: int | None = None, girth_base=(2, 3, 5),
                      girth_max_len: int = 30) -> dict:
    """Spectral summary of the GRH graph for one modulus, as a JSON-ready dict."""
    cfg = GrhGraphConfig(q, B=B, x=x)
    xr = cfg.resolved_x()
    g = build_grh_graph(cfg)
    lam = spectrum(g)
    rep = expansion_report(g, B if B is not None else 2.5, lam)
    ug = unit_group_structure(q)
    base = [p for p in girth_base if q % p]
    nag = nonabelian_girth(g, ug.forward(np.array(base)), girth_max_len) if base else None
    og = odd_girth(g, girth_max_len)
    return {
        "q": q,
        "x": xr,
        "B": B,
        "k": g.degree,
        "lambda_triv": rep.lambda_triv,
        "max_nontrivial": rep.max_nontrivial_abs,
        "delta": rep.delta,
        "grh_ratio": rep.grh_ratio,
        "components": rep.connected_components,
        "min_eigenvalue": rep.min_eigenvalue,
        "group_moduli": list(ug.moduli),
        "nonabelian_girth": None if nag is None else nag.length,
        "nonabelian_girth_base": base,
        "odd_girth": og.length,
        "girth_max_len": girth_max_len,
        "log_k_minus_1_order": math.log(g.order) / math.log(g.degree - 1) if g.degree > 2 else None,
    }
