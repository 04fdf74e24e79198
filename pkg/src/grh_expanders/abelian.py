"""Finite abelian groups, their characters, and Cayley multigraphs.

Groups are products of cyclic factors Z/d_1 x ... x Z/d_r; elements are
integer vectors and are also addressed by a mixed-radix index so that the
numeric kernels can work on flat arrays.
"""
from __future__ import annotations

import io
import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels

DENSE_ORACLE_CAP = 4096
SPECTRUM_TOL = 1e-8
COMPONENT_TOL = 1e-9


class AbelianGroup:
    def __init__(self, moduli: Sequence[int]):
        moduli = tuple(int(d) for d in moduli)
        if any(d < 1 for d in moduli):
            raise ValueError(f"cyclic factor orders must be positive: {moduli}")
        self.moduli = moduli
        self.order = math.prod(moduli)
        self._mod = np.array(moduli, dtype=np.int64)
        # index = sum_j g_j * radix_j, with the last factor varying fastest
        radix = [1] * len(moduli)
        for j in range(len(moduli) - 2, -1, -1):
            radix[j] = radix[j + 1] * moduli[j + 1]
        self._radix = np.array(radix, dtype=np.int64)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    def __repr__(self):
        return "AbelianGroup(" + " x ".join(f"C{d}" for d in self.moduli) + ")" if self.moduli else "AbelianGroup(1)"

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.moduli == other.moduli

    def __hash__(self):
        return hash(self.moduli)

    def identity(self) -> np.ndarray:
        return np.zeros(self.rank, dtype=np.int64)

    def add(self, g, h) -> np.ndarray:
        return (np.asarray(g, dtype=np.int64) + np.asarray(h, dtype=np.int64)) % self._mod

    def neg(self, g) -> np.ndarray:
        return (-np.asarray(g, dtype=np.int64)) % self._mod

    def index(self, g) -> np.ndarray | int:
        g = np.asarray(g, dtype=np.int64)
        idx = (g % self._mod) @ self._radix
        return int(idx) if np.ndim(idx) == 0 else idx

    def element(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self._radix) % self._mod

    def elements(self) -> np.ndarray:
        """All elements as an (order, rank) array, in index order."""
        return self.element(np.arange(self.order))

    def element_order(self, g) -> int:
        g = np.asarray(g, dtype=np.int64) % self._mod
        o = 1
        for gj, d in zip(g.tolist(), self.moduli):
            o = math.lcm(o, d // math.gcd(gj, d))
        return o

    def exponent(self) -> int:
        return math.lcm(*self.moduli) if self.moduli else 1


@dataclass(frozen=True)
class Character:
    """chi(g) = exp(2 pi i sum_j a_j g_j / d_j)."""

    group: AbelianGroup
    exponents: tuple[int, ...]

    def __call__(self, g) -> complex:
        g = np.asarray(g, dtype=np.int64).tolist()
        phase = sum((a * x % d) / d for a, x, d in zip(self.exponents, g, self.group.moduli))
        return complex(math.cos(2 * math.pi * phase), math.sin(2 * math.pi * phase))

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def order(self) -> int:
        return self.group.element_order(self.exponents)


def characters(group: AbelianGroup) -> list[Character]:
    return [Character(group, tuple(int(v) for v in a)) for a in group.elements()]


class CayleyGraph:
    """Cay(G, S) for a multiset S that is closed under inversion (with multiplicity).

    Edges join g and g + s.  An identity generator is a self-loop adding 1 to
    the diagonal of the adjacency matrix; it is rejected unless
    ``allow_loops`` is set.
    """

    def __init__(self, group: AbelianGroup, generators, allow_loops: bool = False, label: str = ""):
        gens = np.asarray(generators, dtype=np.int64).reshape(len(generators), group.rank) % group._mod
        self.group = group
        self.generators = gens
        self.label = label
        idx = group.index(gens) if len(gens) else np.zeros(0, dtype=np.int64)
        idx = np.atleast_1d(idx)
        counts = Counter(idx.tolist())
        inv_counts = Counter(np.atleast_1d(group.index(group.neg(gens))).tolist()) if len(gens) else Counter()
        if counts != inv_counts:
            raise ValueError("generator multiset is not closed under inversion")
        if not allow_loops and counts.get(0, 0):
            raise ValueError("identity generator (self-loop) present but allow_loops is False")
        self.allow_loops = allow_loops
        uniq = sorted(counts)
        self.unique_indices = np.array(uniq, dtype=np.int64)
        self.unique_generators = group.element(self.unique_indices).reshape(len(uniq), group.rank)
        self.multiplicities = np.array([counts[u] for u in uniq], dtype=np.int64)

    @property
    def degree(self) -> int:
        return int(self.generators.shape[0])

    @property
    def order(self) -> int:
        return self.group.order

    def self_loops(self) -> int:
        return int(self.multiplicities[self.unique_indices == 0].sum()) if len(self.unique_indices) else 0

    def neighbor_table(self) -> np.ndarray:
        """(|G|, #unique generators) array of vertex indices g + s."""
        elts = self.group.elements()
        nb = (elts[:, None, :] + self.unique_generators[None, :, :]) % self.group._mod
        return self.group.index(nb).reshape(self.order, -1)

    def adjacency_matrix(self) -> np.ndarray:
        n = self.order
        A = np.zeros((n, n), dtype=np.float64)
        if self.degree:
            nbr = self.neighbor_table()
            rows = np.repeat(np.arange(n), nbr.shape[1])
            np.add.at(A, (rows, nbr.ravel()), np.tile(self.multiplicities, n).astype(np.float64))
        return A

    def components(self) -> int:
        """Number of connected components, by union-find."""
        parent = list(range(self.order))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        if self.degree:
            nbr = self.neighbor_table()
            for v in range(self.order):
                for w in nbr[v].tolist():
                    rv, rw = find(v), find(w)
                    if rv != rw:
                        parent[rv] = rw
        return len({find(v) for v in range(self.order)})

    def edge_list(self) -> str:
        """One 'u v' line per edge; vertices are comma-separated residue vectors."""
        elts = self.group.elements()

        def fmt(i):
            return ",".join(str(int(v)) for v in elts[i]) if self.group.rank else "0"

        buf = io.StringIO()
        if self.degree:
            nbr = self.neighbor_table()
            for u in range(self.order):
                for col, v in enumerate(nbr[u].tolist()):
                    if u < v or (u == v):
                        for _ in range(int(self.multiplicities[col])):
                            buf.write(f"{fmt(u)} {fmt(v)}\n")
        return buf.getvalue()


def spectrum(graph: CayleyGraph) -> np.ndarray:
    """Eigenvalues lambda_chi = sum_{s in S} chi(s), indexed like group.elements()."""
    group = graph.group
    if group.rank == 0 or graph.degree == 0:
        return np.full(group.order, float(graph.degree))
    chars = group.elements()
    return _kernels.character_sums(chars, graph.unique_generators, graph.multiplicities.astype(np.float64), group._mod)


def dense_spectrum_oracle(graph: CayleyGraph) -> np.ndarray:
    """Sorted eigenvalues of the materialized adjacency matrix."""
    if graph.order > DENSE_ORACLE_CAP:
        raise ValueError(f"dense oracle limited to |G| <= {DENSE_ORACLE_CAP}, got {graph.order}")
    return np.linalg.eigvalsh(graph.adjacency_matrix())


def spectra_match(a, b, tol: float = SPECTRUM_TOL) -> bool:
    a, b = np.sort(np.asarray(a, dtype=float)), np.sort(np.asarray(b, dtype=float))
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= tol))


def spectrum_csv(graph: CayleyGraph, values: np.ndarray | None = None) -> str:
    values = spectrum(graph) if values is None else values
    buf = io.StringIO()
    cols = [f"a{j + 1}" for j in range(graph.group.rank)] + ["lambda"]
    buf.write(",".join(cols) + "\n")
    for a, lam in zip(graph.group.elements().tolist(), values.tolist()):
        buf.write(",".join(str(v) for v in a) + f",{lam:.12g}\n")
    return buf.getvalue()


@dataclass
class ExpansionReport:
    lambda_triv: float
    max_nontrivial_abs: float
    delta: float
    grh_ratio: float
    B: float
    connected_components: int
    min_eigenvalue: float = 0.0
    degree: int = 0
    order: int = 0

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def expansion_report(graph: CayleyGraph, B: float, values: np.ndarray | None = None) -> ExpansionReport:
    values = spectrum(graph) if values is None else np.asarray(values)
    lam_triv = float(graph.degree)
    if lam_triv <= 1:
        raise ValueError(f"grh_ratio undefined for lambda_triv = {lam_triv} <= 1")
    nontriv = np.abs(values[1:]) if len(values) > 1 else np.zeros(0)
    mx = float(nontriv.max()) if nontriv.size else 0.0
    comps = int(np.sum(np.abs(values - lam_triv) <= COMPONENT_TOL))
    ratio = mx / (lam_triv * math.log(lam_triv)) ** (0.5 + 1.0 / B)
    return ExpansionReport(
        lambda_triv=lam_triv,
        max_nontrivial_abs=mx,
        delta=1.0 - mx / lam_triv,
        grh_ratio=ratio,
        B=float(B),
        connected_components=comps,
        min_eigenvalue=float(values.min()),
        degree=graph.degree,
        order=graph.order,
    )


@dataclass
class GirthResult:
    length: int | None
    max_len: int
    # exponent vector over the base generators; positive entries on one side of
    # the relation, negative entries on the other
    witness: tuple[int, ...] | None = None

    def __str__(self):
        return str(self.length) if self.length is not None else f">= {self.max_len}"


def nonabelian_girth(graph: CayleyGraph, base_generators, max_len: int) -> GirthResult:
    """Shortest closed word using each base generator with a single sign.

    In an abelian group such a word is a nonzero exponent vector e with
    sum_i e_i s_i = 0, of length sum |e_i|.  Writing e = u - v with u, v >= 0
    of disjoint support, a cycle is a collision between two 'monomials'.
    Monomials are enumerated by increasing degree; the search stops once the
    degree alone exceeds the best cycle found.
    """
    if max_len > 30:
        raise ValueError("max_len is capped at 30")
    group = graph.group
    base = np.asarray(base_generators, dtype=np.int64).reshape(-1, group.rank) % group._mod
    k = base.shape[0]
    best: tuple[int, tuple[int, ...]] | None = None
    buckets: dict[int, list[tuple[int, ...]]] = {}
    layer = {tuple([0] * k): group.identity()}
    for deg in range(0, max_len + 1):
        if best is not None and deg >= best[0]:
            break
        for mono, val in layer.items():
            key = group.index(val)
            for other in buckets.get(key, ()):
                if any(a and b for a, b in zip(mono, other)):
                    continue
                length = deg + sum(other)
                if length <= max_len and (best is None or length < best[0]):
                    best = (length, tuple(a - b for a, b in zip(mono, other)))
            buckets.setdefault(key, []).append(mono)
        nxt = {}
        for mono, val in layer.items():
            # extend only at or after the last nonzero slot so each monomial is generated once
            last = max((i for i, e in enumerate(mono) if e), default=0)
            for i in range(last, k):
                m2 = list(mono)
                m2[i] += 1
                nxt[tuple(m2)] = group.add(val, base[i])
        layer = nxt
    if best is None:
        return GirthResult(None, max_len)
    return GirthResult(best[0], max_len, best[1])


def odd_girth(graph: CayleyGraph, max_len: int) -> GirthResult:
    """Shortest odd closed walk through the identity (BFS on the bipartite double cover).

    Cayley graphs are vertex transitive and a shortest odd closed walk is a
    cycle, so this is the odd girth.
    """
    if graph.degree == 0:
        return GirthResult(None, max_len)
    nbr = graph.neighbor_table()
    n = graph.order
    dist = np.full((n, 2), -1, dtype=np.int64)
    dist[0, 0] = 0
    queue = deque([(0, 0)])
    while queue:
        v, par = queue.popleft()
        d = dist[v, par]
        if d >= max_len:
            break
        for w in nbr[v].tolist():
            if dist[w, 1 - par] < 0:
                dist[w, 1 - par] = d + 1
                if w == 0 and par == 0:
                    return GirthResult(int(d + 1), max_len)
                queue.append((w, 1 - par))
    return GirthResult(None, max_len)
