import pytest

from grh_expanders.arith import kronecker, primes_up_to
from grh_expanders.classgroup import class_group, prime_form
from grh_expanders.curves.ec import count_points
from grh_expanders.curves.isogeny_class import (NotOrdinary, conductor_of, enumerate_isogeny_class,
                                                isogeny_graph, level_navigate, modular_edge_check, neighbours,
                                                ordinary_classes, partition_levels, verify_cayley_correspondence)
from grh_expanders.curves.modpoly import UnsupportedModularLevel


def test_class_7_12():
    cls = enumerate_isogeny_class(7, 12)
    assert (cls.t, cls.d, cls.D0, cls.f) == (-4, -12, -3, 2)
    assert cls.j_invariants == [0, 2]
    assert all(count_points(E) == 12 for E in cls.members.values())
    levels = partition_levels(cls)
    assert [(L.c, L.D, L.members) for L in levels] == [(1, -3, [0]), (2, -12, [2])]
    assert conductor_of(cls.members[2], cls) == 2


def test_rejections():
    with pytest.raises(NotOrdinary):
        enumerate_isogeny_class(7, 8)
    with pytest.raises(ValueError):
        enumerate_isogeny_class(7, 20)
    with pytest.raises(ValueError):
        enumerate_isogeny_class(3, 4)
    with pytest.raises(ValueError):
        enumerate_isogeny_class(2003, 2000)


def test_self_loop_level():
    cls = enumerate_isogeny_class(7, 12)
    for L in partition_levels(cls):
        g = isogeny_graph(L, cls, M=4)
        assert g.primes == [(3, "ramified")]
        assert g.adjacency.tolist() == [[2]]
        ok, rep = verify_cayley_correspondence(L, cls, M=4, graph=g)
        assert ok and rep["regularity"] == 2


def test_d23_triangle():
    cls = enumerate_isogeny_class(59, 48)
    assert (cls.t, cls.D0, cls.f) == (12, -23, 2)
    crater = partition_levels(cls)[0]
    assert crater.c == 1 and crater.h == 3
    g = isogeny_graph(crater, cls, M=3)
    assert g.adjacency.tolist() == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    assert sorted(g.spectrum().round(10)) == [-1, -1, 2]
    assert verify_cayley_correspondence(crater, cls, M=3, graph=g)[0]
    with pytest.raises(ValueError):
        isogeny_graph(partition_levels(cls)[1], cls, M=3)  # 2 divides the conductor


def test_injected_fault_detected():
    cls = enumerate_isogeny_class(59, 48)
    crater = partition_levels(cls)[0]
    g = isogeny_graph(crater, cls, M=3)
    g.adjacency = g.adjacency.copy()
    g.adjacency[0, 1] -= 1
    g.adjacency[0, 0] += 1
    ok, rep = verify_cayley_correspondence(crater, cls, M=3, graph=g)
    assert not ok and rep["match"] is False


def test_navigation():
    cls = enumerate_isogeny_class(7, 12)
    steps = level_navigate(2, cls, 1)
    assert [(s.ell, s.j_from, s.j_to, s.direction) for s in steps] == [(2, 2, 0, "up")]
    assert level_navigate(0, cls, 1) == []
    with pytest.raises(ValueError):
        level_navigate(0, cls, 3)


def test_prime_beyond_tables():
    cls = enumerate_isogeny_class(97, 93)
    assert (cls.D0, cls.f) == (-3, 11)
    with pytest.raises(UnsupportedModularLevel):
        conductor_of(0, cls)
    levels = partition_levels(cls, velu_fallback=True)
    assert [(L.c, L.h) for L in levels] == [(1, 1), (11, 4)]
    for j in levels[1].members:
        steps = level_navigate(j, cls, 1, velu_fallback=True)
        assert len(steps) == 1 and steps[0].j_to == 0 and steps[0].direction == "up"


def test_edges_satisfy_modular_equation():
    cls = enumerate_isogeny_class(101, 90)
    for j in cls.members:
        for ell in (2, 3, 5, 7):
            for j2 in neighbours(cls, j, ell):
                assert modular_edge_check(j, j2, ell, 101)


@pytest.mark.parametrize("p", [53, 61, 73, 83])
def test_root_counts_and_cycle_lengths(p):
    for N in ordinary_classes(p):
        cls = enumerate_isogeny_class(p, N)
        assert len(cls) == cls.expected_size()
        for j in cls.members:
            for ell in (2, 3, 5, 7):
                assert sum(neighbours(cls, j, ell).values()) in (0, 1, 2, ell + 1)
        try:
            levels = partition_levels(cls)
        except UnsupportedModularLevel:
            continue
        for L in levels:
            members = set(L.members)
            for ell in (2, 3, 5, 7):
                if L.c % ell == 0 or kronecker(L.D, ell) != 1:
                    continue
                order = class_group(L.D).order_of(prime_form(L.D, ell))
                # each orbit of the horizontal ell-isogeny graph is one coset of <[l]>
                seen = set()
                for j in L.members:
                    if j in seen:
                        continue
                    comp, stack = {j}, [j]
                    while stack:
                        v = stack.pop()
                        for w in neighbours(cls, v, ell):
                            if w in members and w not in comp:
                                comp.add(w)
                                stack.append(w)
                    seen |= comp
                    assert len(comp) == order


@pytest.mark.slow
def test_every_level_up_to_200_matches_cayley():
    failures = []
    for p in primes_up_to(200):
        if p < 5:
            continue
        for N in ordinary_classes(p):
            cls = enumerate_isogeny_class(p, N)
            for L in partition_levels(cls, velu_fallback=True):
                try:
                    ok, rep = verify_cayley_correspondence(L, cls, velu_fallback=True)
                except ValueError:
                    continue  # no admissible prime below the default bound
                if not ok:
                    failures.append((p, N, rep))
    assert failures == []
