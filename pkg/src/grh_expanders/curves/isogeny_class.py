"""Isogeny classes S_{N,p} of ordinary curves, their levels, and horizontal isogeny graphs.

Vertices are j-invariants. Each vertex keeps one stored model with exactly N
points; for j other than 0 and 1728 that model is unique up to isomorphism.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..arith import factorize, is_prime, kronecker
from ..classgroup import ClassGroup, class_cayley_graph, class_generators, class_group, fundamental_decomposition
from ..abelian import spectra_match, spectrum
from . import polyfp as P
from .ec import Curve, traces
from .modpoly import UnsupportedModularLevel, default_db
from .velu import rational_isogenies

ENUMERATION_CAP = 2000
DEFAULT_B = 1.2


class NotOrdinary(ValueError):
    pass


@dataclass
class IsogenyClass:
    p: int
    N: int
    t: int
    d: int
    D0: int
    f: int
    members: dict[int, Curve]  # j -> model with N points
    _nbr: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def j_invariants(self) -> list[int]:
        return sorted(self.members)

    def __len__(self):
        return len(self.members)

    def expected_size(self) -> int:
        return sum(class_group(c * c * self.D0).h for c in _divisors(self.f))


def _divisors(n: int) -> list[int]:
    return [c for c in range(1, n + 1) if n % c == 0]


def _nonresidue(p: int) -> int:
    return next(c for c in range(2, p) if kronecker(c, p) == -1)


@lru_cache(maxsize=8)
def _j_model_traces(p: int):
    """Traces of the model a = 3j(1728-j), b = 2j(1728-j)^2 for every j != 0, 1728."""
    js = np.array([j for j in range(p) if j not in (0, 1728 % p)], dtype=np.int64)
    k = (1728 - js) % p
    a = 3 * js % p * k % p
    b = 2 * js % p * k % p * k % p
    return js, a, b, traces(p, a, b)


def enumerate_isogeny_class(p: int, N: int) -> IsogenyClass:
    if p > ENUMERATION_CAP:
        raise ValueError(f"isogeny class enumeration is capped at p <= {ENUMERATION_CAP}")
    if p < 5 or not is_prime(p):
        raise ValueError(f"p must be a prime >= 5, got {p}")
    t = p + 1 - N
    if t * t >= 4 * p:
        raise ValueError(f"N = {N} is outside the Hasse interval for p = {p}")
    if t % p == 0:
        raise NotOrdinary(f"trace t = {t} is divisible by p = {p}: supersingular")
    d = t * t - 4 * p
    D0, f = fundamental_decomposition(d)
    members: dict[int, Curve] = {}
    js, a, b, tr = _j_model_traces(p)
    c = _nonresidue(p)
    for j, aj, bj, tj in zip(js.tolist(), a.tolist(), b.tolist(), tr.tolist()):
        if tj == t:
            members[j] = Curve(p, aj, bj)
        elif tj == -t:
            members[j] = Curve(p, aj, bj).twist(c)
    # j = 0 and j = 1728 have extra twists: scan them all
    for j, models in ((0, [(0, bb) for bb in range(1, p)]), (1728 % p, [(aa, 0) for aa in range(1, p)])):
        aa = np.array([m[0] for m in models])
        bb = np.array([m[1] for m in models])
        hit = np.nonzero(traces(p, aa, bb) == t)[0]
        if len(hit):
            members[j] = Curve(p, int(aa[hit[0]]), int(bb[hit[0]]))
    cls = IsogenyClass(p, N, t, d, D0, f, dict(sorted(members.items())))
    if len(cls) != cls.expected_size():
        raise AssertionError(f"class ({p}, {N}) has {len(cls)} members, class numbers predict {cls.expected_size()}")
    return cls


def ordinary_classes(p: int) -> list[int]:
    """Every N for which S_{N,p} is a nonempty ordinary class."""
    lo = p + 1 - math.isqrt(4 * p)
    out = []
    for N in range(lo, 2 * p + 2 - lo + 1):
        t = p + 1 - N
        if t * t < 4 * p and t % p:
            out.append(N)
    return out


# ---------------------------------------------------------------- neighbours

def neighbours(cls: IsogenyClass, j: int, ell: int, velu_fallback: bool = False) -> dict[int, int]:
    """Rational ell-isogenous j-invariants of j, with multiplicity (number of kernels)."""
    key = (j, ell)
    if key not in cls._nbr:
        cls._nbr[key] = _neighbours(cls, j, ell, velu_fallback)
    return cls._nbr[key]


def _neighbours(cls, j, ell, velu_fallback):
    db = default_db()
    p = cls.p
    if ell in db:
        return P.roots(db.univariate(ell, j, p), p)
    if not velu_fallback:
        raise UnsupportedModularLevel(f"no modular polynomial for ell = {ell}; pass velu_fallback=True")
    out: dict[int, int] = {}
    for phi in rational_isogenies(cls.members[j], ell):
        out[phi.codomain.j] = out.get(phi.codomain.j, 0) + 1
    return out


def _is_floor(cls, j, ell, velu_fallback) -> bool:
    return sum(neighbours(cls, j, ell, velu_fallback).values()) < ell + 1


def _distance_to_floor(cls, j, ell, velu_fallback) -> int:
    frontier, seen, dist = [j], {j}, 0
    while frontier:
        if any(_is_floor(cls, v, ell, velu_fallback) for v in frontier):
            return dist
        nxt = []
        for v in frontier:
            for w in neighbours(cls, v, ell, velu_fallback):
                if w not in seen and w in cls.members:
                    seen.add(w)
                    nxt.append(w)
        frontier, dist = nxt, dist + 1
    raise AssertionError(f"no floor reached from j = {j} in the {ell}-volcano")


def valuation(n: int, ell: int) -> int:
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def conductor_of(j: int | Curve, cls: IsogenyClass, velu_fallback: bool = False) -> int:
    """Conductor c of End(E) inside the maximal order, found volcano by volcano."""
    if isinstance(j, Curve):
        j = j.j
    if j not in cls.members:
        raise ValueError(f"j = {j} is not in the class ({cls.p}, {cls.N})")
    c = 1
    for ell, v in factorize(cls.f).factors:
        depth = v - _distance_to_floor(cls, j, ell, velu_fallback)
        c *= ell**depth
    return c


@dataclass
class Level:
    c: int
    D: int
    members: list[int]
    class_group: ClassGroup = field(repr=False)
    p: int = 0

    @property
    def h(self) -> int:
        return self.class_group.h


def partition_levels(cls: IsogenyClass, velu_fallback: bool = False) -> list[Level]:
    by_c: dict[int, list[int]] = {}
    for j in cls.members:
        by_c.setdefault(conductor_of(j, cls, velu_fallback), []).append(j)
    levels = []
    for c in sorted(by_c):
        D = c * c * cls.D0
        lv = Level(c, D, sorted(by_c[c]), class_group(D), cls.p)
        if len(lv.members) != lv.h:
            raise AssertionError(f"level c = {c} has {len(lv.members)} curves but h({D}) = {lv.h}")
        levels.append(lv)
    return levels


def modular_edge_check(j1: int, j2: int, ell: int, p: int) -> bool:
    return default_db().evaluate(ell, j1 % p, j2 % p, p) == 0


# ---------------------------------------------------------------- horizontal graphs

def isogeny_bound(p: int, B: float) -> float:
    return math.log(4 * p) ** B


@dataclass
class IsogenyGraph:
    vertices: list[int]
    adjacency: np.ndarray
    primes: list[tuple[int, str]]  # (ell, "split" | "ramified")
    M: float
    omitted: list[int]  # non-inert primes below M with no modular polynomial

    @property
    def truncated(self) -> bool:
        return bool(self.omitted)

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    @property
    def regularity(self) -> int | None:
        deg = set(self.degrees().tolist())
        return deg.pop() if len(deg) == 1 else None

    def spectrum(self) -> np.ndarray:
        return np.sort(np.linalg.eigvalsh(self.adjacency.astype(float)))


def _prime_set(level: Level, M: float, velu_fallback: bool):
    db = default_db()
    used, omitted = [], []
    for g in class_generators(level.D, M):
        if g.ell in db or velu_fallback:
            used.append((g.ell, g.kind))
        else:
            omitted.append(g.ell)
    return used, omitted


def isogeny_graph(level: Level, cls: IsogenyClass, B: float | None = None, M: float | None = None,
                  velu_fallback: bool = False) -> IsogenyGraph:
    """Horizontal prime-degree isogeny multigraph on one level.

    An ell-edge j1 -> j2 has the multiplicity of j2 as a root of Phi_ell(j1, Y);
    ramified primes count twice so the degree matches the class-group generator multiset.
    """
    if M is None:
        M = isogeny_bound(cls.p, B if B is not None else DEFAULT_B)
    used, omitted = _prime_set(level, M, velu_fallback)
    if not used:
        raise ValueError(f"no usable prime below M = {M:g} for D = {level.D} (all inert, dividing c, or beyond the table)")
    idx = {j: i for i, j in enumerate(level.members)}
    A = np.zeros((len(idx), len(idx)), dtype=np.int64)
    for ell, kind in used:
        w = 2 if kind == "ramified" else 1
        for j1 in level.members:
            for j2, m in neighbours(cls, j1, ell, velu_fallback).items():
                if j2 in idx:
                    A[idx[j1], idx[j2]] += w * m
    return IsogenyGraph(list(level.members), A, used, M, omitted)


def verify_cayley_correspondence(level: Level, cls: IsogenyClass, B: float | None = None, M: float | None = None,
                                 velu_fallback: bool = False, graph: IsogenyGraph | None = None) -> tuple[bool, dict]:
    """Compare the horizontal isogeny graph with Cay(Cl(O_D), S) over the same primes."""
    g = graph if graph is not None else isogeny_graph(level, cls, B, M, velu_fallback)
    # the Cayley side uses exactly the primes the isogeny side could use
    M_eff = (max(ell for ell, _ in g.primes) + 1) if g.omitted else g.M
    cay = class_cayley_graph(level.D, M=M_eff)
    lam_cay = np.sort(spectrum(cay))
    lam_iso = g.spectrum()
    report = {
        "c": level.c,
        "D": level.D,
        "h": level.h,
        "vertices": len(g.vertices),
        "primes": [ell for ell, _ in g.primes],
        "omitted_primes": g.omitted,
        "regularity": g.regularity,
        "cayley_degree": cay.degree,
    }
    ok = (len(g.vertices) == cay.order and g.regularity == cay.degree and len(lam_iso) == len(lam_cay)
          and spectra_match(lam_iso, lam_cay))
    report["max_spectral_diff"] = float(np.max(np.abs(lam_iso - lam_cay))) if len(lam_iso) == len(lam_cay) else None
    report["match"] = bool(ok)
    return bool(ok), report


# ---------------------------------------------------------------- vertical navigation

@dataclass(frozen=True)
class VerticalStep:
    ell: int
    j_from: int
    j_to: int
    direction: str  # "up" (towards the surface) or "down"


def level_navigate(j: int | Curve, cls: IsogenyClass, target_conductor: int,
                   velu_fallback: bool = False) -> list[VerticalStep]:
    """Vertical isogenies from j to a curve whose conductor is target_conductor."""
    if isinstance(j, Curve):
        j = j.j
    if cls.f % target_conductor:
        raise ValueError(f"target conductor {target_conductor} does not divide f = {cls.f}")
    c = conductor_of(j, cls, velu_fallback)
    path = []
    for ell, v in factorize(cls.f).factors:
        cur, want = valuation(c, ell), valuation(target_conductor, ell)
        while cur != want:
            nxt = cur - 1 if cur > want else cur + 1
            for w in sorted(neighbours(cls, j, ell, velu_fallback)):
                if w in cls.members and v - _distance_to_floor(cls, w, ell, velu_fallback) == nxt:
                    path.append(VerticalStep(ell, j, w, "up" if nxt < cur else "down"))
                    j, cur = w, nxt
                    break
            else:
                raise AssertionError(f"no vertical {ell}-neighbour of j = {j} at depth {nxt}")
    return path
