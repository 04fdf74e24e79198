from pathlib import Path

import pytest

from grh_expanders.arith import Factorization, factorize
from grh_expanders.curves.gap import (FixtureError, conductor_gap, format_factorization,
                                      gap_from_factored_discriminant, gap_probability_heuristic,
                                      largest_prime_factor, parse_factorization)
from grh_expanders.curves.isogeny_class import enumerate_isogeny_class, partition_levels

FIXTURE = Path(__file__).parent / "fixtures" / "b571_discriminant.txt"


def test_gap_of_small_classes():
    cls = enumerate_isogeny_class(7, 12)
    assert conductor_gap(cls) == 2
    cls = enumerate_isogeny_class(97, 93)
    assert conductor_gap(cls) == 11
    # conductors really do differ at the gap prime
    cs = {L.c for L in partition_levels(cls, velu_fallback=True)}
    assert cs == {1, 11}


def test_gap_from_factorization():
    fac = Factorization(-1, ((2, 2), (3, 1), (5, 2), (7, 1)))
    # -2^2 * 3 * 5^2 * 7 = -2100 = 5^2 * (-84), and -84 is fundamental
    assert gap_from_factored_discriminant(fac) == (5, 5)
    assert gap_from_factored_discriminant(factorize(-12)) == (2, 2)
    assert gap_from_factored_discriminant(factorize(-23)) == (1, 1)
    with pytest.raises(ValueError):
        gap_from_factored_discriminant(factorize(12))


def test_fixture_round_trip_and_gap():
    fac = parse_factorization(FIXTURE.read_text())
    assert fac.sign == -1
    assert all(e == 1 for _, e in fac.factors)
    assert fac.value() % 4 == 1
    assert gap_from_factored_discriminant(fac) == (1, 1)
    assert parse_factorization(format_factorization(fac)) == fac


@pytest.mark.parametrize("text", ["", "2\n3 1\n", "-1\n4 1\n", "-1\n3\n", "-1\nx 1\n", "-1\n3 0\n"])
def test_bad_fixtures(text):
    with pytest.raises(FixtureError):
        parse_factorization(text)


def test_comments_and_repeats():
    fac = parse_factorization("# header\n-1\n3 1  # three\n3 1\n7 1\n")
    assert fac.factors == ((3, 2), (7, 1))


def test_heuristic():
    assert gap_probability_heuristic(2, 1e12) == pytest.approx(0.1894305, abs=1e-6)
    assert gap_probability_heuristic(100, 10) == 0.0
    assert gap_probability_heuristic(2, 1e6) < gap_probability_heuristic(2, 1e10)
    with pytest.raises(ValueError):
        gap_probability_heuristic(1, 100)


def test_largest_prime_factor():
    assert largest_prime_factor(1) == 1
    assert largest_prime_factor(-98) == 7
