import itertools
import random

import pytest

from grh_expanders.curves.ec import Curve, SingularCurve, count_points, isomorphism_scale, map_isomorphism
from grh_expanders.curves.velu import (NotRational, is_rational_kernel, rational_isogenies, rational_kernels,
                                       velu_from_kernel_polynomial, velu_isogeny)


def first_curve_with_isogeny(p, ell, max_points=100):
    for a, b in itertools.product(range(1, p), range(1, p)):
        try:
            E = Curve(p, a, b)
        except SingularCurve:
            continue
        if count_points(E) <= max_points and rational_kernels(E, ell):
            return E
    raise LookupError


def test_two_isogeny_from_origin():
    E = Curve(5, 1, 0)
    phi = velu_isogeny(E, 2, (0, 0))
    assert count_points(phi.codomain) == 4
    assert phi((0, 0)) is None
    assert phi.kernel_poly == (0, 1)


def test_identity():
    E = Curve(13, 2, 3)
    phi = velu_from_kernel_polynomial(E, 1, [1])
    Q = E.points()[3]
    assert phi.codomain == E and phi(Q) == Q


@pytest.mark.parametrize("p, ell", [(23, 2), (47, 3), (67, 5), (89, 7), (61, 3), (97, 5)])
def test_exhaustive_homomorphism(p, ell):
    E = first_curve_with_isogeny(p, ell)
    pts = E.points()
    for phi in rational_isogenies(E, ell):
        F = phi.codomain
        assert count_points(F) == len(pts)
        image = {Q: phi(Q) for Q in pts}
        assert all(F.is_on(R) for R in image.values())
        assert sum(R is None for R in image.values()) in (1, ell)  # kernel is rational only if it has ell points
        for A, B in itertools.product(pts, repeat=2):
            assert image[E.add(A, B)] == F.add(image[A], image[B])


@pytest.mark.parametrize("p, ell", [(101, 3), (211, 5), (419, 7), (103, 2)])
def test_dual_composes_to_multiplication(p, ell):
    E = first_curve_with_isogeny(p, ell, max_points=10**6)
    rng = random.Random(p)
    phi = rational_isogenies(E, ell)[0]
    pts = [E.random_point(rng) for _ in range(8)]
    found = False
    for psi in rational_isogenies(phi.codomain, ell):
        u = isomorphism_scale(psi.codomain, E)
        if u is None:
            continue
        for sign in (1, -1):
            if all(map_isomorphism(u, psi(phi(Q)), p) == E.mul(sign * ell, Q) for Q in pts):
                found = True
    assert found


def test_kernel_point_matches_kernel_polynomial():
    E = first_curve_with_isogeny(101, 5, max_points=10**6)
    N = count_points(E)
    K = next((Q for Q in E.points()[1:] if E.point_order(Q, N) == 5), None)
    if K is None:
        pytest.skip("kernel not pointwise rational on this curve")
    phi = velu_isogeny(E, 5, K)
    assert is_rational_kernel(E, 5, list(phi.kernel_poly))
    assert list(phi.kernel_poly) in rational_kernels(E, 5)


def test_not_rational():
    E = Curve(101, 3, 7)
    with pytest.raises(NotRational):
        velu_from_kernel_polynomial(E, 3, [5, 1])
    with pytest.raises(ValueError):
        velu_from_kernel_polynomial(E, 5, [5, 1])  # wrong degree
    with pytest.raises(ValueError):
        velu_isogeny(E, 3, E.points()[1] if E.point_order(E.points()[1]) != 3 else None)


def test_kernel_counts_are_volcanic():
    # number of rational ell-kernels is 0, 1, 2 or ell + 1
    for a, b in [(3, 7), (5, 1), (1, 1), (2, 9)]:
        E = Curve(211, a, b)
        for ell in (2, 3, 5):
            assert len(rational_kernels(E, ell)) in (0, 1, 2, ell + 1)
