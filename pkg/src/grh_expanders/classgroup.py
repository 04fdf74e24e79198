"""Class groups of imaginary quadratic orders via binary quadratic forms."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .abelian import AbelianGroup, CayleyGraph
from .arith import Factorization, factorize, kronecker, primes_up_to

CLASS_GROUP_CAP = 10**8


class InvalidDiscriminant(ValueError):
    pass


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    @classmethod
    def parse(cls, text: str) -> "QuadForm":
        a, b, c = (int(t) for t in text.strip().strip("()").split(","))
        return cls(a, b, c)


def is_discriminant(D: int) -> bool:
    return D < 0 and D % 4 in (0, 1)


def principal_form(D: int) -> QuadForm:
    if not is_discriminant(D):
        raise InvalidDiscriminant(f"{D} is not a negative discriminant")
    k = D % 2
    return QuadForm(1, k, (k - D) // 4)


def _normalize(a: int, b: int, c: int) -> tuple[int, int, int]:
    r = (a - b) // (2 * a)
    return a, b + 2 * r * a, a * r * r + b * r + c


def reduce(f: QuadForm) -> QuadForm:
    """The unique reduced form properly equivalent to a primitive positive definite f."""
    a, b, c = f.a, f.b, f.c
    if a <= 0 or f.discriminant >= 0:
        raise ValueError(f"{f} is not positive definite")
    if not f.is_primitive():
        raise ValueError(f"{f} is not primitive")
    a, b, c = _normalize(a, b, c)
    while a > c:
        a, b, c = _normalize(c, -b, a)
    if a == c and b < 0:
        b = -b
    return QuadForm(a, b, c)


def inverse(f: QuadForm) -> QuadForm:
    return reduce(QuadForm(f.a, -f.b, f.c))


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    """Gauss composition (Cohen, Algorithm 5.4.7), reduced."""
    D = f.discriminant
    if g.discriminant != D:
        raise ValueError(f"discriminant mismatch: {D} vs {g.discriminant}")
    if f.a > g.a:
        f, g = g, f
    a1, b1 = f.a, f.b
    a2, b2, c2 = g.a, g.b, g.c
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    num = b3 * b3 - D
    if num % (4 * a3):
        raise ArithmeticError(f"composition failed for {f}, {g}")
    return reduce(QuadForm(a3, b3, num // (4 * a3)))


def power(f: QuadForm, n: int) -> QuadForm:
    result = principal_form(f.discriminant)
    if n < 0:
        f, n = inverse(f), -n
    base = reduce(f)
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def reduced_forms(D: int) -> list[QuadForm]:
    """All reduced primitive forms of discriminant D, sorted by (a, b)."""
    if not is_discriminant(D):
        raise InvalidDiscriminant(f"{D} is not a negative discriminant (need D < 0, D = 0,1 mod 4)")
    if -D > CLASS_GROUP_CAP:
        raise InvalidDiscriminant(f"|D| = {-D} exceeds the enumeration cap {CLASS_GROUP_CAP}")
    out = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append(QuadForm(a, b, c))
    return out


def class_number_bruteforce(D: int) -> int:
    """Independent count of reduced primitive forms, scanning b first and then divisors a of (b^2 - D)/4."""
    if not is_discriminant(D):
        raise InvalidDiscriminant(str(D))
    h = 0
    b = D % 2
    while 3 * b * b <= -D:
        m = (b * b - D) // 4
        a = max(b, 1)
        while a * a <= m:
            if m % a == 0:
                c = m // a
                if math.gcd(math.gcd(a, b), c) == 1:
                    # (a, +-b, c): one form when b = 0, b = a or a = c, else two
                    h += 1 if (b == 0 or b == a or a == c) else 2
            a += 1
        b += 2
    return h


def _smith_column_transform(R: list[list[int]]) -> tuple[list[int], list[list[int]]]:
    """Diagonal of the Smith form U R V = diag(d) and the unimodular column transform V."""
    n = len(R)
    A = [row[:] for row in R]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_col(src, dst, k):  # col dst += k * col src
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(n):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(t, n) if A[i][j]]
            if not entries:
                return [A[i][i] for i in range(n)], V
            _, pi, pj = min(entries)
            A[t], A[pi] = A[pi], A[t]
            swap_cols(t, pj)
            p = A[t][t]
            done = True
            for i in range(t + 1, n):
                q = A[i][t] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    add_col(t, j, -q)
                if A[t][j]:
                    done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
    return [A[i][i] for i in range(n)], V


class ClassGroup:
    """Cl(O_D) with an explicit isomorphism onto a product of cyclic groups."""

    def __init__(self, D: int):
        self.D = D
        self.forms = reduced_forms(D)
        self.h = len(self.forms)
        self.identity = principal_form(D)
        self._build_structure()

    def _build_structure(self):
        # Grow the subgroup generated by successive forms, recording relations
        coords: dict[QuadForm, tuple[int, ...]] = {self.identity: ()}
        gens: list[QuadForm] = []
        relations: list[list[int]] = []
        for f in self.forms:
            if f in coords:
                continue
            k = len(gens)
            powers = [self.identity]
            cur = f
            while cur not in coords:
                powers.append(cur)
                cur = compose(cur, f)
            m = len(powers)
            rel = [-v for v in coords[cur]] + [0] * (k - len(coords[cur])) + [m]
            relations = [row + [0] for row in relations] + [rel]
            gens.append(f)
            new = {}
            for elt, vec in coords.items():
                padded = vec + (0,) * (k - len(vec))
                for i, pw in enumerate(powers):
                    new[compose(elt, pw) if i else elt] = padded + (i,)
            coords = new
        if len(coords) != self.h:
            raise AssertionError(f"generated {len(coords)} classes, expected h = {self.h}")
        self.basis_forms = gens
        if gens:
            diag, V = _smith_column_transform(relations)
        else:
            diag, V = [], []
        keep = [t for t, d in enumerate(diag) if abs(d) > 1]
        self.group = AbelianGroup([abs(diag[t]) for t in keep])
        self._forward: dict[QuadForm, tuple[int, ...]] = {}
        Vk = np.array([[V[i][t] for t in keep] for i in range(len(gens))], dtype=object) if gens else None
        for f, vec in coords.items():
            if keep:
                y = np.array(vec, dtype=object) @ Vk
                self._forward[f] = tuple(int(v) % d for v, d in zip(y, self.group.moduli))
            else:
                self._forward[f] = ()
        self._backward = {self.group.index(v) if v else 0: f for f, v in self._forward.items()}
        if len(self._backward) != self.h:
            raise AssertionError("class group coordinates are not injective")

    @property
    def cyclic_factors(self) -> tuple[int, ...]:
        return self.group.moduli

    def forward(self, f: QuadForm) -> tuple[int, ...]:
        return self._forward[reduce(f)]

    def from_vector(self, v) -> QuadForm:
        return self._backward[self.group.index(v) if self.group.rank else 0]

    def is_cyclic(self) -> bool:
        return self.group.rank <= 1

    def order_of(self, f: QuadForm) -> int:
        return self.group.element_order(self.forward(f)) if self.group.rank else 1


@lru_cache(maxsize=256)
def class_group(D: int) -> ClassGroup:
    return ClassGroup(D)


def fundamental_decomposition(d: int) -> tuple[int, int]:
    """(D0, f) with d = f^2 * D0 and D0 a fundamental discriminant."""
    return fundamental_from_factorization(factorize(d))


def fundamental_from_factorization(fac: Factorization) -> tuple[int, int]:
    d = fac.value()
    if d % 4 not in (0, 1):
        raise ValueError(f"{d} is not a discriminant (must be 0 or 1 mod 4)")
    core = fac.sign
    square = 1
    for p, e in fac.factors:
        core *= p ** (e % 2)
        square *= p ** (e // 2)
    if core % 4 == 1:
        return core, square
    # core = 2, 3 mod 4: pull a factor 2 back out of the square part
    if square % 2:
        raise ValueError(f"{d} is not a discriminant")
    return 4 * core, square // 2


def is_fundamental(D: int) -> bool:
    return is_discriminant(D) and fundamental_decomposition(D)[1] == 1


def conductor(D: int) -> int:
    return fundamental_decomposition(D)[1]


def prime_form(D: int, ell: int) -> QuadForm | None:
    """Reduced class of the prime ideal of norm ell, or None when ell is inert."""
    if ell < 2:
        raise ValueError("ell must be prime")
    f = conductor(D)
    if f % ell == 0:
        raise ValueError(f"ell = {ell} divides the conductor {f} of D = {D}: ideal not invertible")
    if kronecker(D, ell) == -1:
        return None
    for b in range(0, 2 * ell + 1):
        if (b * b - D) % (4 * ell) == 0:
            return reduce(QuadForm(ell, b, (b * b - D) // (4 * ell)))
    raise ArithmeticError(f"no square root of {D} mod {4 * ell}")


@dataclass(frozen=True)
class ClassGenerator:
    ell: int
    form: QuadForm
    kind: str  # "split" or "ramified"
    principal: bool


def class_generators(D: int, M: float) -> list[ClassGenerator]:
    """Prime forms of norm ell < M with ell coprime to the conductor and not inert."""
    f = conductor(D)
    out = []
    for ell in primes_up_to(math.ceil(M)):
        if ell >= M or f % ell == 0:
            continue
        pf = prime_form(D, ell)
        if pf is None:
            continue
        kind = "ramified" if D % ell == 0 else "split"
        out.append(ClassGenerator(ell, pf, kind, pf == principal_form(D)))
    return out


def default_bound(D: int, B: float) -> float:
    return math.log(abs(D)) ** B


def smallest_admissible_bound(D: int) -> int:
    f = conductor(D)
    for ell in primes_up_to(10_000):
        if f % ell and kronecker(D, ell) != -1:
            return ell + 1
    raise ValueError(f"no non-inert prime below 10^4 for D = {D}")


def class_cayley_graph(D: int, M: float | None = None, B: float | None = None) -> CayleyGraph:
    """Cay(Cl(O_D), S) with S = {[l], [l]^-1 : l < M prime, not inert, coprime to the conductor}.

    Every prime contributes two generators (the class and its inverse), so a
    ramified prime contributes its self-inverse class twice.
    """
    if M is None:
        if B is None:
            raise ValueError("give M or B")
        M = default_bound(D, B)
    if M < 2:
        raise ValueError("M must be >= 2")
    cg = class_group(D)
    gens = []
    for g in class_generators(D, M):
        gens.append(cg.forward(g.form))
        gens.append(cg.forward(inverse(g.form)))
    if not gens:
        raise ValueError(f"no usable prime below M = {M} for D = {D}; smallest admissible M is {smallest_admissible_bound(D)}")
    return CayleyGraph(cg.group, np.array(gens, dtype=np.int64).reshape(len(gens), cg.group.rank),
                       allow_loops=True, label=f"class(D={D},M={M:g})")


def class_number_analytic(D: int) -> int:
    """Dirichlet's formula h = -(w / 2|D|) sum_{a=1}^{|D|} (D/a) a, for fundamental D < 0."""
    if not is_fundamental(D):
        raise ValueError("analytic formula implemented for fundamental discriminants only")
    w = {-3: 6, -4: 4}.get(D, 2)
    s = sum(kronecker(D, a) * a for a in range(1, -D))
    h, r = divmod(-w * s, 2 * -D)
    if r:
        raise ArithmeticError("non-integral class number")
    return h
