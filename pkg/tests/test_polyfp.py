import random

import pytest
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor
from hypothesis import given, settings, strategies as st

from grh_expanders.curves import polyfp as P

primes = st.sampled_from([2, 3, 5, 7, 101, 65537, 1000003])


def poly_strategy(max_deg=12):
    return st.lists(st.integers(min_value=0, max_value=10**7), min_size=1, max_size=max_deg + 1)


@given(primes, poly_strategy(), poly_strategy())
@settings(max_examples=80)
def test_divmod_identity(p, f, g):
    f = P.trim([c % p for c in f])
    g = P.trim([c % p for c in g])
    if not g:
        return
    q, r = P.divmod_(f, g, p)
    assert P.add(P.mul(q, g, p), r, p) == f
    assert P.deg(r) < P.deg(g)


def test_large_degree_fast_paths():
    rng = random.Random(0)
    p = 1000003
    f = [rng.randrange(p) for _ in range(300)]
    g = [rng.randrange(p) for _ in range(120)] + [1]
    q, r = P.divmod_(f, g, p)
    assert P.add(P.mul(q, g, p), r, p) == P.trim(f)
    # powmod with the reduction table vs repeated squaring by hand
    m = [rng.randrange(p) for _ in range(20)] + [1]
    e = 12345
    ref, base = [1], P.mod([3, 1], m, p)
    while e:
        if e & 1:
            ref = P.mod(P.mul(ref, base, p), m, p)
        base = P.mod(P.mul(base, base, p), m, p)
        e >>= 1
    assert P.powmod([3, 1], 12345, m, p) == ref


@given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from([7, 101, 7919, 1000003]))
@settings(max_examples=40, deadline=None)
def test_roots_match_sympy(seed, p):
    rng = random.Random(seed)
    rts = [rng.randrange(p) for _ in range(rng.randrange(1, 5))]
    f = [1]
    for r in rts:
        f = P.mul(f, [(-r) % p, 1], p)
    f = P.mul(f, [rng.randrange(1, p), rng.randrange(p), 1], p)  # maybe-irreducible quadratic
    _, facs = gf_factor([int(c) for c in reversed(f)], p, ZZ)
    expected = {}
    for g, m in facs:
        if len(g) == 2:
            r = int(-g[1]) % p
            expected[r] = expected.get(r, 0) + m
    got = P.roots(f, p)
    assert expected == got
    assert P.roots_cantor_zassenhaus(f, p) == got


def test_factor_squarefree_degrees():
    p = 101
    f = P.mul(P.mul([1, 0, 1], [(-5) % p, 1], p), [2, 0, 0, 1], p)
    parts = P.factor_squarefree(f, p)
    prod = [1]
    for h in parts:
        prod = P.mul(prod, h, p)
    assert prod == P.monic(f, p)
    expected = sorted(len(g) - 1 for g, _ in gf_factor([int(c) for c in reversed(f)], p, ZZ)[1])
    assert sorted(P.deg(h) for h in parts) == expected


def test_invmod_and_trace():
    p = 13
    m = [2, 0, 1]  # x^2 + 2, irreducible mod 13
    inv = P.invmod([1, 1], m, p)
    assert P.mulmod(inv, [1, 1], m, p) == [1]
    # trace of x over the roots of x^2 + 2 is 0, of x^2 is -4
    assert P.trace_mod([0, 1], m, p) == 0
    assert P.trace_mod([0, 0, 1], m, p) == (-4) % p
    with pytest.raises(ZeroDivisionError):
        P.invmod([0, 1], [0, 1], p)


def test_root_multiplicity():
    p = 7
    f = P.mul(P.mul([6, 1], [6, 1], p), [1, 1], p)  # (x-1)^2 (x+1)
    assert P.roots(f, p) == {1: 2, 6: 1}
    assert P.root_multiplicity(f, 1, p) == 2
