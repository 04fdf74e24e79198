import mpmath
import pytest

from grh_expanders.curves.modpoly import (CHECKSUMS, ModularPolynomialDB, SUPPORTED_ELLS, UnsupportedModularLevel,
                                          compute_classical, default_db, format_table, j_coefficients,
                                          parse_table, sha256_of_bundled)


def test_j_expansion():
    assert j_coefficients(4)[:4] == [1, 744, 196884, 21493760]


@pytest.mark.parametrize("ell", SUPPORTED_ELLS)
def test_checksums_and_symmetry(ell):
    assert sha256_of_bundled(ell) == CHECKSUMS[ell]
    db = default_db()
    x, y = 12345, 678
    assert db.evaluate(ell, x, y) == db.evaluate(ell, y, x)
    assert db.poly(ell)[(ell + 1, 0)] == 1


def test_phi2_known_values():
    db = default_db()
    # 1728 = j(i) is 2-isogenous to j(2i) = 287496; 0 has no rational 2-isogeny to itself
    assert db.evaluate(2, 1728, 287496) == 0
    assert db.evaluate(2, 54000, 0) == 0
    assert db.poly(2)[(2, 0)] == -162000
    assert db.poly(2)[(1, 1)] == 40773375
    assert db.poly(2)[(2, 2)] == -1
    assert db.poly(2)[(2, 1)] == 1488


def test_regeneration_matches_bundled():
    for ell in (2, 3):
        poly = compute_classical(ell)
        assert parse_table(format_table(ell, poly)) == (ell, default_db().poly(ell))


@pytest.mark.parametrize("ell", SUPPORTED_ELLS)
def test_numeric_vanishing(ell):
    with mpmath.workdps(80 + 10 * ell):
        tau = mpmath.mpc("0.13", "1.07")
        j = lambda t: 1728 * mpmath.kleinj(t)
        x, y = j(tau), j(ell * tau)
        poly = default_db().poly(ell)
        total = sum(c * x**i * y**k for (i, k), c in poly.items())
        scale = sum(abs(c * x**i * y**k) for (i, k), c in poly.items())
        assert abs(total) / scale < mpmath.mpf(10) ** (-40)


def test_unsupported_level():
    with pytest.raises(UnsupportedModularLevel):
        default_db().poly(11)
    assert 11 not in default_db()
    assert ModularPolynomialDB(ells=(2,)).ells == (2,)


def test_univariate_mod_p():
    db = default_db()
    p = 101
    coeffs = db.univariate(3, 5, p)
    for y in range(p):
        assert sum(c * pow(y, k, p) for k, c in enumerate(coeffs)) % p == db.evaluate(3, 5, y, p)
