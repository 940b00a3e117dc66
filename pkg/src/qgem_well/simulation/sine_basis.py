"""
Single-particle facts about the infinite square well on [0, 1]: modes sqrt(2) sin(n pi u), n = 1..nmax.
Array index k always stands for level k + 1.
"""

# Third Party
import numpy as np

# First Party
from qgem_well.exceptions import InvalidParameterError
from qgem_well.schema.sector import Sector


def level_numbers(n: int) -> np.ndarray:
    return np.arange(1, n + 1, dtype=np.int64)


def position_matrix(n: int) -> np.ndarray:
    """
        Matrix of u in the sine basis: 1/2 on the diagonal, -8ik/(pi^2 (i^2 - k^2)^2) when i + k
        is odd, zero otherwise
    """
    if n < 1:
        raise InvalidParameterError(f"basis size must be positive, got {n}")
    i = level_numbers(n)[:, None].astype(float)
    k = level_numbers(n)[None, :].astype(float)
    odd = ((i + k) % 2) == 1
    with np.errstate(divide="ignore", invalid="ignore"):
        off = -8.0 * i * k / (np.pi**2 * (i**2 - k**2) ** 2)
    u = np.where(odd, off, 0.0)
    np.fill_diagonal(u, 0.5)
    return u


def position_squared_matrix(n: int) -> np.ndarray:
    """
        Exact matrix elements of u^2: 1/3 - 1/(2 i^2 pi^2) on the diagonal and
        8ik(-1)^(i+k)/(pi^2 (i^2 - k^2)^2) off it
    """
    if n < 1:
        raise InvalidParameterError(f"basis size must be positive, got {n}")
    i = level_numbers(n)[:, None].astype(float)
    k = level_numbers(n)[None, :].astype(float)
    parity = np.where(((i + k) % 2) == 0, 1.0, -1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        off = 8.0 * i * k * parity / (np.pi**2 * (i**2 - k**2) ** 2)
    np.fill_diagonal(off, 0.0)
    levels = level_numbers(n).astype(float)
    return off + np.diag(1.0 / 3.0 - 1.0 / (2.0 * levels**2 * np.pi**2))


def sector_pairs(n: int, sector: Sector) -> list[tuple[int, int]]:
    """Ordered basis pairs (i, j): i <= j for the symmetric sector, i < j for the antisymmetric one."""
    offset = 0 if sector is Sector.SYMMETRIC else 1
    return [(i, j) for i in range(1, n + 1) for j in range(i + offset, n + 1)]


def sector_dimension(n: int, sector: Sector) -> int:
    return n * (n + 1) // 2 if sector is Sector.SYMMETRIC else n * (n - 1) // 2


def free_pair_energy(i: int, j: int) -> float:
    return 0.5 * (i * i + j * j)


def free_sector_levels(n: int, sector: Sector) -> list[tuple[int, int]]:
    """Non-interacting spectrum of a sector, ordered by (i^2 + j^2, i, j)."""
    return sorted(sector_pairs(n, sector), key=lambda pair: (pair[0] ** 2 + pair[1] ** 2, pair[0], pair[1]))


def mode_functions(n: int, u: np.ndarray) -> np.ndarray:
    """Rows are sqrt(2) sin(i pi u) for i = 1..n sampled on u."""
    return np.sqrt(2.0) * np.sin(np.pi * np.outer(level_numbers(n), u))
