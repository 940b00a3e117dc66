"""
Entanglement of a pure two-particle state psi = sum a_ij |i>|j> given by its coefficient matrix a.
"""

# Standard Library
import logging
from dataclasses import dataclass, field

# Third Party
import numpy as np
from scipy.linalg import svdvals

# First Party
from qgem_well.constants import MIN_GRID_RESOLUTION, NORMALIZATION_TOLERANCE, SCHMIDT_CUTOFF
from qgem_well.exceptions import InvalidParameterError, NormalizationError
from qgem_well.schema.entanglement_report import EntanglementReport, PositionObservables
from qgem_well.simulation.sine_basis import mode_functions, position_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WavefunctionGrid:
    u: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)

    @property
    def resolution(self) -> int:
        return int(self.u.size)


def _require_normalized(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameterError(f"coefficient matrix must be square, got shape {a.shape}")
    norm = np.linalg.norm(a)
    if abs(norm - 1.0) > NORMALIZATION_TOLERANCE:
        raise NormalizationError(f"coefficient matrix has Frobenius norm {norm!r}, expected 1")
    return a


def schmidt_coefficients(a: np.ndarray) -> np.ndarray:
    """Singular values of a, nonincreasing."""
    return svdvals(_require_normalized(a))


def entropy(a: np.ndarray) -> float:
    """
        Von Neumann entropy of either reduced density matrix in nats, S = -sum sigma^2 ln sigma^2
    :param a:
        Coefficient matrix with unit Frobenius norm
    :return: entropy in [0, ln nmax]
    """
    sigma = schmidt_coefficients(a)
    weights = sigma[sigma >= SCHMIDT_CUTOFF] ** 2
    return float(max(0.0, -np.sum(weights * np.log(weights))))


def witness(a: np.ndarray, n_w: int) -> float:
    """
        Fidelity witness <psi| I/n_w - |Phi+><Phi+| |psi> = 1/n_w - (sum_{i <= n_w} a_ii)^2 / n_w,
        negative values certify entanglement
    """
    a = _require_normalized(a)
    if n_w < 1:
        raise InvalidParameterError(f"witness dimension must be at least 1, got {n_w}")
    if n_w > a.shape[0]:
        raise InvalidParameterError(f"witness dimension {n_w} exceeds the basis size {a.shape[0]}")
    overlap = np.trace(a[:n_w, :n_w])
    return float(1.0 / n_w - overlap * overlap / n_w)


def mode_probabilities(a: np.ndarray) -> np.ndarray:
    """P_n = sum_j a_nj^2, the diagonal of the reduced density matrix of particle A."""
    a = _require_normalized(a)
    return np.sum(a * a, axis=1)


def position_observables(a: np.ndarray) -> PositionObservables:
    a = _require_normalized(a)
    u = position_matrix(a.shape[0])
    mean_u1 = float(np.sum(a * (u @ a)))
    mean_u2 = float(np.sum(a * (a @ u)))
    corr = float(np.sum(a * (u @ a @ u)))
    return PositionObservables(
        mean_u1=mean_u1,
        mean_u2=mean_u2,
        corr_u1u2=corr,
        covariance=corr - mean_u1 * mean_u2,
    )


def wavefunction_grid(a: np.ndarray, resolution: int) -> WavefunctionGrid:
    """
        psi(u1, u2) = sum a_ij 2 sin(i pi u1) sin(j pi u2) on a uniform grid over [0, 1]^2 including the walls
    :param a:
        Coefficient matrix
    :param resolution:
        Samples per axis, at least MIN_GRID_RESOLUTION
    :return: WavefunctionGrid with psi[r, c] = psi(u[r], u[c])
    """
    if resolution < MIN_GRID_RESOLUTION:
        raise InvalidParameterError(f"resolution must be at least {MIN_GRID_RESOLUTION}, got {resolution}")
    a = _require_normalized(a)
    u = np.linspace(0.0, 1.0, resolution)
    modes = mode_functions(a.shape[0], u)
    psi = modes.T @ a @ modes
    psi[0, :] = psi[-1, :] = 0.0
    psi[:, 0] = psi[:, -1] = 0.0
    return WavefunctionGrid(u=u, psi=psi)


def entanglement_report(a: np.ndarray, n_w: int | None = None) -> EntanglementReport:
    a = _require_normalized(a)
    n_w = a.shape[0] if n_w is None else n_w
    sigma = schmidt_coefficients(a)
    return EntanglementReport(
        entropy=entropy(a),
        witness=witness(a, n_w),
        witness_dimension=n_w,
        schmidt=sigma.tolist(),
        mode_probs=mode_probabilities(a).tolist(),
        position=position_observables(a),
    )
