"""
Caldeira-Leggett evolution of the two-particle density matrix in a truncated product sine basis.

In units of E0 and t0 the generator reads
    d rho/ds = -i[h, rho] + i kappa1 ([U1^2, rho] + [U2^2, rho]) - kappa2 ([U1, [U1, rho]] + [U2, [U2, rho]])
with U1 = u x I and U2 = I x u. It is integrated as printed, without a Lindblad completion, so
positivity is watched rather than enforced.
"""

# Standard Library
import logging
import math
from dataclasses import dataclass, field

# Third Party
import numpy as np
from scipy.stats import linregress

# First Party
from qgem_well.constants import (
    DEFAULT_TRANSIENT_FRACTION,
    MIN_FIT_SAMPLES,
    MIN_PURITY_DROP,
    POSITIVITY_FLOOR,
    PURITY_EXCESS_LIMIT,
    STABILITY_LIMIT,
    TRACE_DRIFT_LIMIT,
)
from qgem_well.exceptions import IntegrationFailureError, InvalidParameterError, NormalizationError
from qgem_well.schema.bath_params import BathParams
from qgem_well.schema.hamiltonian_mode import HamiltonianMode
from qgem_well.schema.physical_params import PhysicalParams
from qgem_well.schema.scaled_params import ScaledParams
from qgem_well.schema.sweep_rows import DecohereRow
from qgem_well.simulation.quadrature import JTable
from qgem_well.simulation.sine_basis import position_matrix, position_squared_matrix
from qgem_well.simulation.spectral import free_hamiltonian, product_hamiltonian

logger = logging.getLogger(__name__)

# Purity losses below this are round-off, not decoherence
_PURITY_NOISE = 1e-12


@dataclass(frozen=True)
class DensityMatrix:
    n_d: int
    rho: np.ndarray = field(repr=False)
    time: float = 0.0

    @property
    def purity(self) -> float:
        return float(np.real(np.vdot(self.rho, self.rho)))

    @property
    def trace_error(self) -> float:
        return float(abs(np.trace(self.rho) - 1.0))

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.rho)[0])


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray = field(repr=False)
    purities: np.ndarray = field(repr=False)
    trace_errors: np.ndarray = field(repr=False)
    min_eigenvalues: np.ndarray = field(repr=False)
    snapshots: tuple[DensityMatrix, ...] = ()
    max_hermiticity_drift: float = 0.0
    positivity_trips: int = 0

    @property
    def final(self) -> DensityMatrix | None:
        return self.snapshots[-1] if self.snapshots else None

    def rows(self) -> list[DecohereRow]:
        return [
            DecohereRow(time=float(t), purity=float(purity), trace_err=float(error), min_eig=float(eig))
            for t, purity, error, eig in zip(
                self.times, self.purities, self.trace_errors, self.min_eigenvalues, strict=True
            )
        ]


@dataclass(frozen=True)
class DecoherenceFit:
    tau_d: float
    slope: float
    r_squared: float
    window_start: float

    @property
    def decoherent(self) -> bool:
        return math.isfinite(self.tau_d)


@dataclass(frozen=True)
class CoherenceBudget:
    tau_d_s: float
    tau_c_s: float
    sufficient: bool


def scale_decoherence(p: PhysicalParams, s: ScaledParams) -> BathParams:
    """
        kappa1 = m gamma0 Lambda L^2 / E0 and kappa2 = 2 m gamma0 kB T L^2 / (hbar E0)
    """
    length_energy = p.mass * p.damping * p.well_width**2 / s.energy_unit
    return BathParams(
        kappa1=length_energy * p.cutoff,
        kappa2=2.0 * length_energy * p.boltzmann * p.temperature / p.hbar,
    )


def position_matrices(n_d: int) -> tuple[np.ndarray, np.ndarray]:
    if n_d < 2:
        raise InvalidParameterError(f"truncation n_d must be at least 2, got {n_d}")
    return position_matrix(n_d), position_squared_matrix(n_d)


def two_particle_operators(n_d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(U1, U2, U1^2, U2^2) on the n_d^2 product basis, row index (i - 1) n_d + (j - 1)."""
    u, u_squared = position_matrices(n_d)
    identity = np.eye(n_d)
    return np.kron(u, identity), np.kron(identity, u), np.kron(u_squared, identity), np.kron(identity, u_squared)


def pure_state(a: np.ndarray, n_d: int, time: float = 0.0) -> DensityMatrix:
    """
        |psi><psi| from the top-left n_d x n_d block of a coefficient matrix, renormalized
    """
    a = np.asarray(a, dtype=float)
    if n_d < 2 or n_d > a.shape[0]:
        raise InvalidParameterError(f"truncation n_d={n_d} must lie in [2, {a.shape[0]}]")
    block = a[:n_d, :n_d]
    norm = np.linalg.norm(block)
    if norm < 1e-12:
        raise NormalizationError(f"state has no weight in the lowest {n_d} modes")
    if 1.0 - norm > 1e-6:
        logger.debug(f"truncation to n_d={n_d} keeps {norm**2:.6f} of the state's weight")
    psi = (block / norm).ravel().astype(complex)
    return DensityMatrix(n_d=n_d, rho=np.outer(psi, psi.conj()), time=time)


def decoherence_hamiltonian(
    mode: HamiltonianMode, n_d: int, s: ScaledParams | None = None, t: JTable | None = None
) -> np.ndarray:
    if mode is HamiltonianMode.COUPLED:
        if s is None or t is None:
            raise InvalidParameterError("the coupled Hamiltonian needs scaled parameters and a J table")
        return product_hamiltonian(s, t, n_d)
    if mode is HamiltonianMode.FREE:
        return free_hamiltonian(n_d)
    return np.zeros((n_d * n_d, n_d * n_d))


def _stable_step_limit(h: np.ndarray, b: BathParams, n_d: int) -> float:
    rate = max(float(np.linalg.norm(h, 2)), b.kappa1, b.kappa2 * n_d * n_d)
    return math.inf if rate == 0.0 else STABILITY_LIMIT / rate


def evolve(
    rho0: DensityMatrix,
    h: np.ndarray,
    b: BathParams,
    dt: float,
    steps: int,
    snapshot_every: int = 0,
) -> Trajectory:
    """
        Classic fourth-order Runge-Kutta integration of the master equation
    :param rho0:
        Initial state
    :param h:
        Hamiltonian block on the same n_d^2 basis, E0 units
    :param b:
        Dimensionless bath rates
    :param dt:
        Step in t0 units, dt * max(||h||, kappa1, kappa2 n_d^2) <= 0.1
    :param steps:
        Number of steps
    :param snapshot_every:
        Keep rho every this many steps; the initial and final states are always kept
    :return: Trajectory with steps + 1 samples
    """
    n_d = rho0.n_d
    dimension = n_d * n_d
    if h.shape != (dimension, dimension):
        raise InvalidParameterError(f"Hamiltonian has shape {h.shape}, expected {(dimension, dimension)}")
    if dt <= 0 or steps < 1:
        raise InvalidParameterError(f"dt must be positive and steps at least 1, got dt={dt}, steps={steps}")
    limit = _stable_step_limit(h, b, n_d)
    if dt > limit:
        raise InvalidParameterError(f"dt={dt:g} breaks the stability guard, use dt <= {limit:.3g}")

    u1, u2, u1_squared, u2_squared = two_particle_operators(n_d)
    # -i h_eff - kappa2 (U1 U1 + U2 U2) with h_eff = h - kappa1 (U1^2 + U2^2)
    drift = -1j * (h - b.kappa1 * (u1_squared + u2_squared)) - b.kappa2 * (u1 @ u1 + u2 @ u2)
    drift_dagger = drift.conj().T

    def generator(rho: np.ndarray) -> np.ndarray:
        return drift @ rho + rho @ drift_dagger + 2.0 * b.kappa2 * (u1 @ rho @ u1 + u2 @ rho @ u2)

    rho = np.array(rho0.rho, dtype=complex)
    times = np.empty(steps + 1)
    purities = np.empty(steps + 1)
    trace_errors = np.empty(steps + 1)
    min_eigenvalues = np.empty(steps + 1)
    snapshots = [DensityMatrix(n_d=n_d, rho=rho.copy(), time=rho0.time)]
    max_drift = 0.0
    trips = 0

    def record(index: int, state: np.ndarray, time: float):
        nonlocal trips
        times[index] = time
        purities[index] = np.real(np.vdot(state, state))
        trace_errors[index] = abs(np.trace(state) - 1.0)
        min_eigenvalues[index] = np.linalg.eigvalsh(state)[0]
        if min_eigenvalues[index] < POSITIVITY_FLOOR:
            if trips == 0:
                logger.warning(f"positivity watchdog: eigenvalue {min_eigenvalues[index]:.3e} at s={time:.6g}")
            trips += 1

    record(0, rho, rho0.time)
    for step in range(1, steps + 1):
        k1 = generator(rho)
        k2 = generator(rho + 0.5 * dt * k1)
        k3 = generator(rho + 0.5 * dt * k2)
        k4 = generator(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        max_drift = max(max_drift, float(np.max(np.abs(rho - rho.conj().T))))
        rho = 0.5 * (rho + rho.conj().T)
        time = rho0.time + step * dt
        record(step, rho, time)

        if trace_errors[step] > TRACE_DRIFT_LIMIT:
            raise IntegrationFailureError(
                f"trace drifted by {trace_errors[step]:.3e} at s={time:.6g}, reduce dt", tolerance=TRACE_DRIFT_LIMIT
            )
        if purities[step] > 1.0 + PURITY_EXCESS_LIMIT:
            raise IntegrationFailureError(
                f"purity reached {purities[step]!r} at s={time:.6g}, reduce dt", tolerance=PURITY_EXCESS_LIMIT
            )
        if step == steps or (snapshot_every and step % snapshot_every == 0):
            snapshots.append(DensityMatrix(n_d=n_d, rho=rho.copy(), time=time))

    if trips:
        logger.warning(f"positivity watchdog tripped on {trips} of {steps + 1} samples")
    logger.debug(
        f"evolved {steps} steps of dt={dt:g}: purity {purities[0]:.6f} -> {purities[-1]:.6f}, "
        f"max trace error {np.max(trace_errors):.2e}, max hermiticity drift {max_drift:.2e}"
    )
    return Trajectory(
        times=times,
        purities=purities,
        trace_errors=trace_errors,
        min_eigenvalues=min_eigenvalues,
        snapshots=tuple(snapshots),
        max_hermiticity_drift=max_drift,
        positivity_trips=trips,
    )


def log_purity_slope(trajectory: Trajectory, window: tuple[int, int] | None = None) -> float:
    """Least-squares slope of ln tr(rho^2) against time over the sample window [start, stop)."""
    start, stop = window or (0, trajectory.times.size)
    if stop - start < 2:
        raise InvalidParameterError(f"the slope needs at least 2 samples, window is {(start, stop)}")
    return float(linregress(trajectory.times[start:stop], np.log(trajectory.purities[start:stop])).slope)


def decoherence_time(
    trajectory: Trajectory,
    transient_fraction: float = DEFAULT_TRANSIENT_FRACTION,
    kappa2: float | None = None,
) -> DecoherenceFit:
    """
        tau_d from d tr(rho^2)/ds ~ -tr(rho^2)/tau_d: a straight-line fit of ln purity after the
        first transient_fraction of the run. A run without purity loss gives tau_d = inf, and so does
        a bath without diffusion (kappa2 = 0), whose purity only moves by integrator drift.
    :param trajectory:
        Output of evolve, at least MIN_FIT_SAMPLES samples
    :param transient_fraction:
        Share of the samples skipped before fitting
    :param kappa2:
        Diffusion rate of the bath that produced the trajectory, if known
    :return: DecoherenceFit
    """
    samples = trajectory.times.size
    if samples < MIN_FIT_SAMPLES:
        raise InvalidParameterError(f"the fit needs at least {MIN_FIT_SAMPLES} samples, got {samples}")
    if not 0 <= transient_fraction < 1:
        raise InvalidParameterError(f"transient fraction must lie in [0, 1), got {transient_fraction}")
    purities = trajectory.purities
    drop = 1.0 - float(np.min(purities)) / float(purities[0])
    start = int(transient_fraction * samples)
    if kappa2 == 0.0:
        logger.info(f"no diffusion in the bath, purity drift of {drop:.2e} is not decoherence")
        return DecoherenceFit(tau_d=math.inf, slope=0.0, r_squared=0.0, window_start=float(trajectory.times[start]))
    if drop <= _PURITY_NOISE:
        logger.info("purity never decreased, no decoherence to fit")
        return DecoherenceFit(tau_d=math.inf, slope=0.0, r_squared=0.0, window_start=float(trajectory.times[start]))
    if drop < MIN_PURITY_DROP:
        raise InvalidParameterError(
            f"purity fell by only {drop:.2%}, integrate longer to reach {MIN_PURITY_DROP:.0%} before fitting"
        )
    fit = linregress(trajectory.times[start:], np.log(purities[start:]))
    tau_d = math.inf if fit.slope >= 0 else -1.0 / fit.slope
    return DecoherenceFit(
        tau_d=tau_d,
        slope=float(fit.slope),
        r_squared=float(fit.rvalue**2),
        window_start=float(trajectory.times[start]),
    )


def coherence_budget(tau_d_t0: float, s: ScaledParams, tau_c: float) -> CoherenceBudget:
    """Compare the decoherence time, converted to seconds, with the approach time tau_c."""
    tau_d_s = tau_d_t0 * s.time_unit
    return CoherenceBudget(tau_d_s=tau_d_s, tau_c_s=tau_c, sufficient=tau_d_s > tau_c)
