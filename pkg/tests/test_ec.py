import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from grh_expanders.curves import polyfp as P
from grh_expanders.curves.ec import (Curve, SingularCurve, count_points, division_polynomials,
                                     isomorphism_scale, map_isomorphism, multiplication_x)


def test_small_counts():
    assert count_points(Curve(7, 0, 1)) == 12
    assert count_points(Curve(5, 1, 0)) == 4
    assert Curve(7, 0, 1).j == 0
    assert Curve(5, 1, 0).j == 1728 % 5


@given(st.sampled_from([5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]), st.integers(0, 10**6), st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_count_matches_enumeration_and_hasse(p, a, b):
    try:
        E = Curve(p, a, b)
    except SingularCurve:
        return
    pts = E.points()
    N = count_points(E)
    assert len(pts) == N
    assert all(E.is_on(Q) for Q in pts)
    assert abs(p + 1 - N) <= 2 * math.sqrt(p)
    # Lagrange: every point order divides N
    assert all(E.mul(N, Q) is None for Q in pts)


def test_group_law():
    E = Curve(101, 3, 7)
    rng = random.Random(5)
    for _ in range(50):
        A, B, C = (E.random_point(rng) for _ in range(3))
        assert E.add(E.add(A, B), C) == E.add(A, E.add(B, C))
        assert E.add(A, B) == E.add(B, A)
        assert E.add(A, E.neg(A)) is None
        assert E.mul(5, A) == E.add(E.mul(2, A), E.mul(3, A))
        assert E.mul(-3, A) == E.neg(E.mul(3, A))


def test_point_order():
    E = Curve(7, 0, 1)
    orders = sorted(E.point_order(Q, 12) for Q in E.points())
    # Z/6 x Z/2 has one element of order 1, three of order 2, two of order 3, six of order 6
    assert orders == [1, 2, 2, 2, 3, 3] + [6] * 6


def test_twist_flips_trace():
    E = Curve(103, 5, 9)
    t = 104 - count_points(E)
    c = next(c for c in range(2, 103) if pow(c, 51, 103) == 102)
    assert 104 - count_points(E.twist(c)) == -t
    assert E.twist(c).j == E.j


def test_isomorphism_scale():
    E = Curve(101, 3, 7)
    u = 17
    F = Curve(101, 3 * u**4, 7 * u**6)
    s = isomorphism_scale(E, F)
    assert s is not None
    Q = E.random_point(random.Random(1))
    assert F.is_on(map_isomorphism(s, Q, 101))
    assert isomorphism_scale(E, Curve(101, 4, 7)) is None or Curve(101, 4, 7).j == E.j


@pytest.mark.parametrize("p, a, b", [(101, 3, 7), (211, 5, 1), (97, 0, 5)])
def test_division_polynomials_vanish_on_torsion(p, a, b):
    E = Curve(p, a, b)
    fs = division_polynomials(E, 12)
    N = count_points(E)
    for Q in E.points()[1:]:
        n = E.point_order(Q, N)
        if 2 < n <= 12:
            assert P.evaluate(fs[n], Q[0], p) == 0
        if n > 12:
            for k in range(3, 13):
                assert P.evaluate(fs[k], Q[0], p) != 0 or E.mul(k, Q) is None
    assert P.deg(fs[5]) == 12 and P.deg(fs[7]) == 24
    assert P.deg(fs[4]) == 6  # x-only part of psi_4 / y


def test_multiplication_x():
    E = Curve(211, 5, 1)
    rng = random.Random(3)
    fs = division_polynomials(E, 8)
    for n in (2, 3, 4, 5, 6):
        num, den = multiplication_x(E, n, fs)
        for _ in range(10):
            Q = E.random_point(rng)
            R = E.mul(n, Q)
            d = P.evaluate(den, Q[0], 211)
            if R is None:
                assert d == 0
            else:
                assert P.evaluate(num, Q[0], 211) * pow(d, -1, 211) % 211 == R[0]


def test_singular():
    with pytest.raises(SingularCurve):
        Curve(7, 0, 0)
