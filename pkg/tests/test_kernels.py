"""The compiled kernels and the numpy fallbacks must agree exactly (or to rounding)."""
import numpy as np
import pytest

from grh_expanders import _kernels

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not available")


def test_character_sums_agree():
    rng = np.random.default_rng(1)
    moduli = np.array([6, 10, 4], dtype=np.int64)
    chars = rng.integers(0, 100, size=(300, 3)) % moduli
    gens = rng.integers(0, 100, size=(7, 3)) % moduli
    w = rng.integers(1, 4, size=7).astype(float)
    a = _kernels.character_sums(chars, gens, w, moduli)
    b = _kernels.character_sums_numpy(chars, gens, w, moduli)
    assert np.allclose(a, b, atol=1e-12)


def test_traces_agree():
    p = 211
    leg = _kernels.legendre_table(p)
    rng = np.random.default_rng(2)
    a, b = rng.integers(0, p, 50), rng.integers(0, p, 50)
    assert np.array_equal(_kernels.traces(p, a, b, leg), _kernels.traces_numpy(p, a, b, leg))


def test_walks_and_evolution_agree():
    rng = np.random.default_rng(3)
    moduli = np.array([5, 8], dtype=np.int64)
    gens = np.array([[1, 0], [4, 0], [0, 3], [0, 5]], dtype=np.int64)
    steps = rng.integers(0, 4, size=(100, 9))
    start = np.array([2, 1], dtype=np.int64)
    assert np.array_equal(_kernels.walk_endpoints(start, gens, moduli, steps),
                          _kernels.walk_endpoints_numpy(start, gens, moduli, steps))
    nbr = rng.integers(0, 40, size=(40, 4))
    dist = rng.random(40)
    w = np.full(4, 0.25)
    assert np.allclose(_kernels.evolve(dist, nbr, w, 7), _kernels.evolve_numpy(dist, nbr, w, 7))


def test_legendre_table():
    leg = _kernels.legendre_table(7)
    assert leg.tolist() == [0, 1, 1, -1, 1, -1, -1]
