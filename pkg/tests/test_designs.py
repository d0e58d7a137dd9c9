import numpy as np
import pytest

from fibrature.lib.designs import (
    hadamard_matrix,
    hadamard_simplex_formula,
    normalize_hadamard,
    steiner,
)
from fibrature.lib.errors import HadamardUnavailableError
from fibrature.lib.verify import verify


@pytest.mark.parametrize("t, k, v, blocks", [(3, 4, 8, 14), (5, 6, 12, 132)])
def test_steiner_systems(t, k, v, blocks):
    system = steiner(t, k, v)
    assert len(system.blocks) == blocks
    assert system.is_valid()
    points = system.indicator_points()
    assert all(sum(p) == 1 for p in points)


def test_unsupported_steiner():
    with pytest.raises(ValueError):
        steiner(2, 3, 7)


@pytest.mark.parametrize("n", [1, 2, 4, 8, 12, 20])
def test_hadamard_matrices(n):
    h = hadamard_matrix(n)
    assert np.array_equal(h @ h.T, n * np.eye(n, dtype=np.int64))
    assert (normalize_hadamard(h)[0] == 1).all()


@pytest.mark.parametrize("n", [6, 10, 28])
def test_missing_hadamard_orders(n):
    # 28 = 27 + 1 and 27 is not prime
    with pytest.raises(HadamardUnavailableError):
        hadamard_matrix(n)


@pytest.mark.parametrize("n", [2, 4, 8, 12])
def test_hadamard_simplex_formula_is_a_three_cubature(n):
    f = hadamard_simplex_formula(n)
    assert len(f) == 3 * n - 1
    assert sum(f.weights) == 1
    assert verify(f, 3).passed


def test_hadamard_simplex_formula_is_not_four():
    assert not verify(hadamard_simplex_formula(2), 4).passed
    with pytest.raises(ValueError):
        hadamard_simplex_formula(1)
