"""Classical modular polynomials Phi_l(X, Y).

The bundled tables (l = 2, 3, 5, 7) live in ``data/phi_<l>.txt``:

    ell <l>
    i j coeff        # coefficient of X^i Y^j, only i >= j listed

They were produced by :func:`compute_classical` from q-expansions of j and
are pinned by SHA-256 in :data:`CHECKSUMS`.
"""
from __future__ import annotations

import hashlib
from fractions import Fraction
from functools import lru_cache
from importlib import resources

SUPPORTED_ELLS = (2, 3, 5, 7)

CHECKSUMS = {
    2: "8a0b10d5f61bc669725f55a217e7a099b5e5bce93b205cb11fa7fc613311b507",
    3: "ca5267fde9a955bdf2b7529efccb054616d678c07bdb5c751ad7afe224e181dc",
    5: "ad684b77d43e3be48582c90b5dfd0380cc00f22f1075c6723a5543bfab17f051",
    7: "b0941f11741691f867a77d5f4bb2bd79fc43928465c6df0c89b6730fe4992636",
}


class UnsupportedModularLevel(ValueError):
    """Raised when a prime degree has no bundled modular polynomial."""


# ---------------------------------------------------------------- q-expansions
# Laurent series are (valuation, [coefficients]) truncated at a fixed precision.

def _sigma3(n: int) -> int:
    return sum(d**3 for d in range(1, n + 1) if n % d == 0)


def _mul(a, b, prec):
    va, ca = a
    vb, cb = b
    v = va + vb
    n = prec - v + 1
    out = [0] * max(n, 0)
    for i, x in enumerate(ca):
        if not x:
            continue
        for k, y in enumerate(cb[: n - i]):
            out[i + k] += x * y
    return v, out


def _inverse_unit(c, n):
    """1 / c for a power series c with c[0] = 1, to n terms."""
    out = [0] * n
    out[0] = 1
    for k in range(1, n):
        out[k] = -sum(c[i] * out[k - i] for i in range(1, min(k, len(c) - 1) + 1))
    return out


def j_coefficients(n: int) -> list[int]:
    """Coefficients c_{-1}, c_0, ..., c_{n} of j(q) = 1/q + 744 + 196884 q + ..."""
    m = n + 2
    e4 = [1] + [240 * _sigma3(k) for k in range(1, m)]
    e4sq = _mul((0, e4), (0, e4), m - 1)
    e4cube = _mul(e4sq, (0, e4), m - 1)[1]
    # Delta / q = prod (1 - q^k)^24
    eta = [0] * m
    eta[0] = 1
    for k in range(1, m):
        for _ in range(24):
            for i in range(m - 1, k - 1, -1):
                eta[i] -= eta[i - k]
    inv = _inverse_unit(eta, m)
    return _mul((0, e4cube), (0, inv), m - 1)[1]


def _coeff(s, n):
    v, c = s
    i = n - v
    return c[i] if 0 <= i < len(c) else 0


def compute_classical(ell: int) -> dict[tuple[int, int], int]:
    """Phi_ell as {(i, j): coeff} (all monomials), via power sums of the roots j(ell tau), j((tau+k)/ell)."""
    prec = ell * (ell + 1) + ell + 6
    big = ell * prec + ell + 2
    jc = j_coefficients(big + ell + 2)
    j_full = (-1, jc)
    # j^m to precision `big` in q, for m = 0..ell+1
    jpow = [(0, [1] + [0] * big)]
    for m in range(1, ell + 2):
        jpow.append(_mul(jpow[-1], j_full, big))
    # power sums P_m(q) = sum_n [j^m]_n q^{ell n} + ell * sum_n [j^m]_{ell n} q^n
    psums = []
    for m in range(1, ell + 2):
        lo = -ell * m
        coeffs = [0] * (prec - lo + 1)
        for n in range(-m, prec // ell + 1):
            coeffs[ell * n - lo] += _coeff(jpow[m], n)
        for n in range(-(m // ell), prec + 1):
            coeffs[n - lo] += ell * _coeff(jpow[m], ell * n)
        psums.append((lo, coeffs))
    # Newton: k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} P_i
    elem = [(0, [Fraction(1)] + [Fraction(0)] * prec)]
    for k in range(1, ell + 2):
        acc: dict[int, Fraction] = {}
        for i in range(1, k + 1):
            v, c = _mul(elem[k - i], psums[i - 1], prec)
            sign = 1 if i % 2 else -1
            for t, x in enumerate(c):
                acc[v + t] = acc.get(v + t, 0) + sign * x
        lo = min(acc)
        ek = [acc.get(t, 0) / k for t in range(lo, prec + 1)]
        elem.append((lo, ek))
    # write each e_k as a polynomial in j by peeling poles
    jpow_small = [(v, [Fraction(x) for x in c]) for v, c in jpow[: ell + 2]]
    poly = {}
    for k in range(1, ell + 2):
        v, c = elem[k]
        rem = {v + t: x for t, x in enumerate(c) if v + t <= 0}
        coeffs_j = {}
        for order in range(ell + 1, -1, -1):
            a = rem.get(-order, 0)
            if a:
                if a.denominator != 1:
                    raise ArithmeticError("non-integral modular polynomial coefficient")
                coeffs_j[order] = int(a)
                pv, pc = jpow_small[order]
                for t, x in enumerate(pc):
                    if pv + t <= 0:
                        rem[pv + t] = rem.get(pv + t, 0) - a * x
        if any(rem.get(t, 0) for t in range(-(ell + 1), 1)):
            raise ArithmeticError("q-expansion residue did not vanish")
        sign = -1 if k % 2 else 1
        for i, a in coeffs_j.items():
            poly[(i, ell + 1 - k)] = poly.get((i, ell + 1 - k), 0) + sign * a
    poly[(0, ell + 1)] = poly.get((0, ell + 1), 0) + 1
    return {key: val for key, val in poly.items() if val}


def format_table(ell: int, poly: dict[tuple[int, int], int]) -> str:
    lines = [f"ell {ell}"]
    for (i, j) in sorted(poly, reverse=True):
        if i >= j:
            lines.append(f"{i} {j} {poly[(i, j)]}")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> tuple[int, dict[tuple[int, int], int]]:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or rows[0][0] != "ell" or len(rows[0]) != 2:
        raise ValueError("modular polynomial file must start with 'ell <l>'")
    ell = int(rows[0][1])
    poly = {}
    for r in rows[1:]:
        if len(r) != 3:
            raise ValueError(f"bad monomial line: {' '.join(r)}")
        i, j, c = int(r[0]), int(r[1]), int(r[2])
        if i < j:
            raise ValueError("only monomials with i >= j are stored")
        poly[(i, j)] = c
        poly[(j, i)] = c
    return ell, poly


class ModularPolynomialDB:
    """Read-only map ell -> Phi_ell, loaded from the bundled tables."""

    def __init__(self, ells=SUPPORTED_ELLS, verify: bool = True):
        self.tables: dict[int, dict[tuple[int, int], int]] = {}
        for ell in ells:
            text = resources.files(__package__).joinpath(f"data/phi_{ell}.txt").read_text()
            if verify and CHECKSUMS.get(ell) and hashlib.sha256(text.encode()).hexdigest() != CHECKSUMS[ell]:
                raise ValueError(f"checksum mismatch for bundled Phi_{ell}")
            got, poly = parse_table(text)
            if got != ell:
                raise ValueError(f"file phi_{ell}.txt declares ell = {got}")
            self.tables[ell] = poly

    @property
    def ells(self) -> tuple[int, ...]:
        return tuple(sorted(self.tables))

    def __contains__(self, ell) -> bool:
        return ell in self.tables

    def poly(self, ell: int) -> dict[tuple[int, int], int]:
        if ell not in self.tables:
            raise UnsupportedModularLevel(f"no modular polynomial for ell = {ell} (available: {self.ells})")
        return self.tables[ell]

    def evaluate(self, ell: int, x: int, y: int, p: int | None = None) -> int:
        total = sum(c * x**i * y**j for (i, j), c in self.poly(ell).items())
        return total % p if p else total

    def univariate(self, ell: int, j1: int, p: int) -> list[int]:
        """Coefficients (low to high degree) of Phi_ell(j1, Y) mod p."""
        out = [0] * (ell + 2)
        for (i, j), c in self.poly(ell).items():
            out[j] = (out[j] + c * pow(j1, i, p)) % p
        return out


@lru_cache(maxsize=1)
def default_db() -> ModularPolynomialDB:
    return ModularPolynomialDB()


def sha256_of_bundled(ell: int) -> str:
    text = resources.files(__package__).joinpath(f"data/phi_{ell}.txt").read_text()
    return hashlib.sha256(text.encode()).hexdigest()
