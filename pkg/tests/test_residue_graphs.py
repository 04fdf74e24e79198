import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grh_expanders.abelian import dense_spectrum_oracle, spectra_match, spectrum
from grh_expanders.arith import primes_up_to
from grh_expanders.residue_graphs import (GrhGraphConfig, UnitGroup, build_grh_graph, character_prime_sum,
                                          generator_multiset, least_prime_nonresidue, primitive_root,
                                          quadratic_character, unit_graph_report)


@pytest.mark.parametrize("q, moduli", [(5, (4,)), (8, (2, 2)), (15, (2, 4)), (16, (2, 4)), (9, (6,)), (14, (6,))])
def test_unit_group_moduli(q, moduli):
    assert UnitGroup(q).moduli == moduli


@given(st.integers(min_value=3, max_value=5000))
@settings(max_examples=60, deadline=None)
def test_forward_is_an_isomorphism(q):
    ug = UnitGroup(q)
    units = [r for r in range(1, q) if math.gcd(r, q) == 1]
    vecs = ug.forward(np.array(units))
    assert len({tuple(v) for v in vecs.tolist()}) == len(units) == ug.phi
    rng = np.random.default_rng(q)
    for _ in range(10):
        a, b = rng.choice(units, 2)
        assert ug.inverse(ug.group.add(ug.forward(a), ug.forward(b))) == a * b % q
        assert ug.inverse(ug.forward(a)) == a


def test_primitive_root():
    assert primitive_root(7) == 3
    assert primitive_root(25) == 2
    assert primitive_root(1009) == 11


def test_q5_doubled_generators():
    g = build_grh_graph(GrhGraphConfig(5, x=3))
    assert sorted(spectrum(g).round(12)) == [-4, 0, 0, 4]
    assert sorted(generator_multiset(5, 3)) == [2, 2, 3, 3]


@given(st.integers(min_value=3, max_value=3000), st.integers(min_value=2, max_value=60))
@settings(max_examples=40, deadline=None)
def test_trivial_eigenvalue_is_exact_prime_count(q, x):
    coprime = [p for p in primes_up_to(x) if q % p]
    if not coprime:
        with pytest.raises(ValueError):
            build_grh_graph(GrhGraphConfig(q, x=x))
        return
    g = build_grh_graph(GrhGraphConfig(q, x=x))
    lam = spectrum(g)
    assert lam[0] == 2 * len(coprime) == g.degree
    if g.order <= 1024:
        assert spectra_match(lam, dense_spectrum_oracle(g))


def test_disconnected_example():
    # x = 2 over q = 7: 2 has order 3, so <2> has index 2
    rep = unit_graph_report(7, x=2)
    assert rep["components"] == 2


def test_character_sums_and_nonresidues():
    chi = quadratic_character(7)
    # chi(2) = 1, chi(3) = -1, chi(5) = -1 mod 7
    assert character_prime_sum(7, chi, 5) == pytest.approx(2 * (1 - 1 - 1))
    assert character_prime_sum(7, (0,), 5) == pytest.approx(6)
    assert [least_prime_nonresidue(q) for q in (3, 5, 7, 23)] == [2, 2, 3, 5]


def test_q1009_report():
    rep = unit_graph_report(1009, B=2.5)
    assert rep["x"] == 126 and rep["k"] == 2 * 30
    assert rep["components"] == 1
    assert 0 < rep["delta"] < 1
    assert rep["odd_girth"] == 3


def test_errors():
    with pytest.raises(ValueError):
        UnitGroup(2)
    with pytest.raises(ValueError):
        GrhGraphConfig(10).resolved_x()
    with pytest.raises(ValueError, match="smallest admissible x is 3"):
        build_grh_graph(GrhGraphConfig(2 * 7, x=2))
