# Third Party
import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss

# First Party
from qgem_well.exceptions import InvalidParameterError
from qgem_well.schema.sector import Sector
from qgem_well.simulation.sine_basis import (
    free_pair_energy,
    free_sector_levels,
    mode_functions,
    position_matrix,
    position_squared_matrix,
    sector_dimension,
    sector_pairs,
)


def _quadrature_matrix(n: int, power: int) -> np.ndarray:
    x, w = leggauss(400)
    u, weights = 0.5 * (x + 1.0), 0.5 * w
    modes = mode_functions(n, u)
    return (modes * weights * u**power) @ modes.T


def test_position_matrix_known_elements():
    u = position_matrix(4)
    assert u[0, 0] == 0.5
    assert u[0, 1] == pytest.approx(-16.0 / (9.0 * np.pi**2), rel=1e-14)
    assert u[0, 1] == pytest.approx(-0.18013, abs=1e-5)
    assert u[0, 2] == 0.0
    assert np.array_equal(u, u.T)


def test_position_matrix_matches_quadrature():
    assert np.allclose(position_matrix(8), _quadrature_matrix(8, 1), atol=1e-12)


def test_position_squared_matrix_matches_quadrature():
    assert np.allclose(position_squared_matrix(8), _quadrature_matrix(8, 2), atol=1e-12)


def test_position_squared_ground_element():
    assert position_squared_matrix(3)[0, 0] == pytest.approx(1.0 / 3.0 - 1.0 / (2.0 * np.pi**2), rel=1e-14)


def test_product_of_truncated_position_matrices_approaches_square():
    n = 200
    u = position_matrix(n)
    assert (u @ u)[0, 0] == pytest.approx(position_squared_matrix(n)[0, 0], abs=1e-6)


def test_position_matrix_rejects_empty_basis():
    with pytest.raises(InvalidParameterError):
        position_matrix(0)


def test_sector_pairs():
    assert sector_pairs(3, Sector.SYMMETRIC) == [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]
    assert sector_pairs(3, Sector.ANTISYMMETRIC) == [(1, 2), (1, 3), (2, 3)]


def test_sector_dimension_counts_pairs():
    assert sector_dimension(100, Sector.SYMMETRIC) == 5050
    assert sector_dimension(100, Sector.ANTISYMMETRIC) == 4950
    for n in (2, 5, 9):
        assert sector_dimension(n, Sector.SYMMETRIC) == len(sector_pairs(n, Sector.SYMMETRIC))
        assert sector_dimension(n, Sector.ANTISYMMETRIC) == len(sector_pairs(n, Sector.ANTISYMMETRIC))
        assert sector_dimension(n, Sector.SYMMETRIC) + sector_dimension(n, Sector.ANTISYMMETRIC) == n * n


def test_free_sector_levels_order():
    assert free_sector_levels(3, Sector.SYMMETRIC) == [(1, 1), (1, 2), (2, 2), (1, 3), (2, 3), (3, 3)]
    assert free_sector_levels(4, Sector.ANTISYMMETRIC)[:4] == [(1, 2), (1, 3), (2, 3), (1, 4)]


def test_free_pair_energy():
    assert free_pair_energy(1, 1) == 1.0
    assert free_pair_energy(1, 2) == 2.5


def test_mode_functions_vanish_at_walls():
    modes = mode_functions(5, np.array([0.0, 0.5, 1.0]))
    assert np.allclose(modes[:, 0], 0.0)
    assert np.allclose(modes[:, 2], 0.0, atol=1e-14)
    assert modes[0, 1] == pytest.approx(np.sqrt(2.0), rel=1e-15)
