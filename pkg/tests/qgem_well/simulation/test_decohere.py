# Standard Library
import math
from unittest.mock import patch

# Third Party
import numpy as np
import pytest

# First Party
from qgem_well.exceptions import IntegrationFailureError, InvalidParameterError, NormalizationError
from qgem_well.schema.bath_params import BathParams
from qgem_well.schema.hamiltonian_mode import HamiltonianMode
from qgem_well.schema.physical_params import PhysicalParams
from qgem_well.simulation.decohere import (
    DensityMatrix,
    coherence_budget,
    decoherence_hamiltonian,
    decoherence_time,
    evolve,
    log_purity_slope,
    position_matrices,
    pure_state,
    scale_decoherence,
    two_particle_operators,
)
from qgem_well.simulation.quadrature import build_table
from qgem_well.simulation.units import scale_params

BATH_POINT = PhysicalParams(
    mass=1e-17, well_width=50e-6, separation=1e-6, temperature=1e-3, damping=7e-25, cutoff=1e8
)
GROUND_VARIANCE = 1.0 / 12.0 - 1.0 / (2.0 * math.pi**2)


def _ground(n: int) -> np.ndarray:
    a = np.zeros((n, n))
    a[0, 0] = 1.0
    return a


def _superposition(n: int) -> np.ndarray:
    a = np.zeros((n, n))
    a[0, 0], a[1, 1] = 0.8, 0.6
    return a


def test_scale_decoherence_default_bath():
    bath = scale_decoherence(BATH_POINT, scale_params(BATH_POINT, 20))
    assert bath.kappa2 == pytest.approx(1.0, rel=0.1)
    assert bath.kappa1 == pytest.approx(0.4, rel=0.1)


def test_scale_decoherence_vanishes_without_bath():
    cold = PhysicalParams(**{**BATH_POINT.model_dump(), "temperature": 0.0})
    assert scale_decoherence(cold, scale_params(cold, 20)).kappa2 == 0.0
    undamped = PhysicalParams(**{**BATH_POINT.model_dump(), "damping": 0.0})
    bath = scale_decoherence(undamped, scale_params(undamped, 20))
    assert bath.kappa1 == 0.0 and bath.kappa2 == 0.0


def test_scale_decoherence_grows_with_fourth_power_of_width():
    wide = BATH_POINT.with_well_width(100e-6)
    narrow_bath = scale_decoherence(BATH_POINT, scale_params(BATH_POINT, 20))
    wide_bath = scale_decoherence(wide, scale_params(wide, 20))
    assert wide_bath.kappa2 / narrow_bath.kappa2 == pytest.approx(16.0, rel=1e-12)
    assert wide_bath.kappa1 / narrow_bath.kappa1 == pytest.approx(16.0, rel=1e-12)


def test_position_matrices():
    u, u_squared = position_matrices(3)
    assert u[0, 0] == 0.5
    assert u_squared[0, 0] == pytest.approx(1.0 / 3.0 - 1.0 / (2.0 * math.pi**2), rel=1e-14)
    with pytest.raises(InvalidParameterError):
        position_matrices(1)


def test_two_particle_operators_act_on_each_particle():
    u1, u2, _, _ = two_particle_operators(3)
    assert u1.shape == (9, 9)
    assert np.allclose(u1 @ u2, u2 @ u1)
    psi = _ground(3).ravel()
    assert psi @ u1 @ psi == pytest.approx(0.5)
    assert psi @ u2 @ psi == pytest.approx(0.5)


def test_pure_state():
    rho = pure_state(_superposition(5), 3)
    assert rho.n_d == 3
    assert rho.purity == pytest.approx(1.0, abs=1e-14)
    assert rho.trace_error == pytest.approx(0.0, abs=1e-14)
    assert rho.min_eigenvalue == pytest.approx(0.0, abs=1e-14)


def test_pure_state_renormalizes_truncated_block():
    a = np.zeros((3, 3))
    a[0, 0], a[2, 2] = 0.6, 0.8
    rho = pure_state(a, 2)
    assert rho.rho[0, 0].real == pytest.approx(1.0, abs=1e-14)


def test_pure_state_rejects_bad_truncation():
    with pytest.raises(InvalidParameterError):
        pure_state(_ground(3), 4)
    a = np.zeros((3, 3))
    a[2, 2] = 1.0
    with pytest.raises(NormalizationError):
        pure_state(a, 2)


def test_decoherence_hamiltonian_modes():
    s = scale_params(BATH_POINT, 6)
    table = build_table(s.delta, 8)
    coupled = decoherence_hamiltonian(HamiltonianMode.COUPLED, 4, s, table)
    free = decoherence_hamiltonian(HamiltonianMode.FREE, 4)
    assert coupled.shape == free.shape == (16, 16)
    assert np.allclose(np.diag(free)[:2], [1.0, 2.5])
    assert coupled[0, 0] < free[0, 0]
    assert not np.any(decoherence_hamiltonian(HamiltonianMode.NONE, 4))
    with pytest.raises(InvalidParameterError):
        decoherence_hamiltonian(HamiltonianMode.COUPLED, 4)


def test_unitary_evolution_keeps_purity():
    h = decoherence_hamiltonian(HamiltonianMode.FREE, 4)
    trajectory = evolve(pure_state(_superposition(4), 4), h, BathParams(kappa1=0.0, kappa2=0.0), 1e-3, 500)
    assert np.allclose(trajectory.purities, 1.0, atol=1e-9)
    assert trajectory.times[-1] == pytest.approx(0.5)
    assert trajectory.final.time == pytest.approx(0.5)


def test_evolution_preserves_trace_and_loses_purity():
    h = decoherence_hamiltonian(HamiltonianMode.FREE, 8)
    trajectory = evolve(pure_state(_ground(8), 8), h, BathParams(kappa1=0.0, kappa2=1.0), 1e-3, 1000)
    assert np.max(trajectory.trace_errors) <= 1e-9
    assert np.all(np.diff(trajectory.purities) <= 1e-12)
    assert trajectory.purities[-1] < trajectory.purities[0]
    assert trajectory.max_hermiticity_drift <= 1e-12
    assert trajectory.positivity_trips == 0
    assert len(trajectory.rows()) == 1001


def test_initial_log_purity_slope_matches_position_variance():
    h = decoherence_hamiltonian(HamiltonianMode.FREE, 8)
    trajectory = evolve(pure_state(_ground(8), 8), h, BathParams(kappa1=0.0, kappa2=1.0), 1e-4, 200)
    expected = -4.0 * 1.0 * 2.0 * GROUND_VARIANCE
    assert expected == pytest.approx(-0.2614, abs=1e-4)
    assert log_purity_slope(trajectory, (0, 21)) == pytest.approx(expected, rel=0.02)


def test_decoherence_time_halves_when_dissipation_doubles():
    h = decoherence_hamiltonian(HamiltonianMode.NONE, 8)
    rho0 = pure_state(_ground(8), 8)
    slow = decoherence_time(evolve(rho0, h, BathParams(kappa1=0.0, kappa2=1.0), 1e-3, 200))
    fast = decoherence_time(evolve(rho0, h, BathParams(kappa1=0.0, kappa2=2.0), 5e-4, 200))
    assert slow.tau_d / fast.tau_d == pytest.approx(2.0, rel=0.15)


def test_dissipation_dominated_decay_is_exponential():
    h = decoherence_hamiltonian(HamiltonianMode.NONE, 8)
    trajectory = evolve(pure_state(_ground(8), 8), h, BathParams(kappa1=0.0, kappa2=1.0), 1e-3, 500)
    fit = decoherence_time(trajectory)
    assert fit.decoherent
    assert fit.r_squared >= 0.99
    assert fit.window_start == pytest.approx(0.05)


def test_runge_kutta_is_fourth_order():
    h = decoherence_hamiltonian(HamiltonianMode.FREE, 4)
    rho0 = pure_state(_superposition(4), 4)
    bath = BathParams(kappa1=0.0, kappa2=0.5)
    duration = 0.2

    def final_state(dt):
        return evolve(rho0, h, bath, dt, round(duration / dt)).final.rho

    reference = final_state(2.5e-4)
    errors = [np.linalg.norm(final_state(dt) - reference) for dt in (4e-3, 2e-3, 1e-3)]
    assert errors[0] / errors[1] > 8.0
    assert errors[1] / errors[2] > 8.0


def test_dissipation_shift_keeps_trace():
    h = decoherence_hamiltonian(HamiltonianMode.FREE, 4)
    trajectory = evolve(pure_state(_superposition(4), 4), h, BathParams(kappa1=5.0, kappa2=0.0), 1e-3, 200)
    assert np.max(trajectory.trace_errors) <= 1e-9
    assert np.allclose(trajectory.purities, 1.0, atol=1e-9)


def test_snapshots():
    h = decoherence_hamiltonian(HamiltonianMode.FREE, 3)
    trajectory = evolve(pure_state(_ground(3), 3), h, BathParams(kappa1=0.0, kappa2=0.1), 1e-3, 10, snapshot_every=5)
    assert [snapshot.time for snapshot in trajectory.snapshots] == pytest.approx([0.0, 5e-3, 1e-2])


def test_stability_guard():
    h = decoherence_hamiltonian(HamiltonianMode.FREE, 8)
    with pytest.raises(InvalidParameterError):
        evolve(pure_state(_ground(8), 8), h, BathParams(kappa1=0.0, kappa2=1.0), 1e-2, 10)


def test_evolve_rejects_mismatched_hamiltonian():
    with pytest.raises(InvalidParameterError):
        evolve(pure_state(_ground(3), 3), np.zeros((4, 4)), BathParams(kappa1=0.0, kappa2=1.0), 1e-3, 10)


def test_trace_drift_aborts_integration():
    h = decoherence_hamiltonian(HamiltonianMode.FREE, 3)
    with patch("qgem_well.simulation.decohere.TRACE_DRIFT_LIMIT", -1.0):
        with pytest.raises(IntegrationFailureError):
            evolve(pure_state(_ground(3), 3), h, BathParams(kappa1=0.0, kappa2=1.0), 1e-3, 10)


@patch("logging.Logger.warning")
def test_positivity_watchdog_counts_negative_eigenvalues(warning_logger):
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0], rho[1, 1], rho[2, 2] = 0.6, 0.4 + 1e-6, -1e-6
    h = decoherence_hamiltonian(HamiltonianMode.NONE, 2)
    trajectory = evolve(DensityMatrix(n_d=2, rho=rho), h, BathParams(kappa1=0.0, kappa2=0.0), 1e-3, 5)
    assert trajectory.positivity_trips == 6
    assert warning_logger.call_count == 2


def test_decoherence_time_without_purity_loss_is_infinite():
    h = decoherence_hamiltonian(HamiltonianMode.FREE, 3)
    trajectory = evolve(pure_state(_ground(3), 3), h, BathParams(kappa1=0.0, kappa2=0.0), 1e-3, 60)
    fit = decoherence_time(trajectory)
    assert math.isinf(fit.tau_d)
    assert not fit.decoherent


def test_decoherence_time_without_diffusion_ignores_integrator_drift():
    s = scale_params(BATH_POINT, 8)
    h = decoherence_hamiltonian(HamiltonianMode.COUPLED, 8, s, build_table(s.delta, 16))
    dt = 0.05 / float(np.linalg.norm(h, 2))
    trajectory = evolve(pure_state(_superposition(8), 8), h, BathParams(kappa1=0.4, kappa2=0.0), dt, 2000)
    fit = decoherence_time(trajectory, kappa2=0.0)
    assert math.isinf(fit.tau_d)
    assert fit.slope == 0.0
    assert not fit.decoherent


def test_decoherence_time_needs_enough_samples_and_loss():
    h = decoherence_hamiltonian(HamiltonianMode.NONE, 3)
    rho0 = pure_state(_ground(3), 3)
    with pytest.raises(InvalidParameterError):
        decoherence_time(evolve(rho0, h, BathParams(kappa1=0.0, kappa2=1.0), 1e-3, 20))
    with pytest.raises(InvalidParameterError):
        decoherence_time(evolve(rho0, h, BathParams(kappa1=0.0, kappa2=1e-3), 1e-3, 60))


def test_coherence_budget():
    s = scale_params(BATH_POINT, 6)
    budget = coherence_budget(10.0, s, tau_c=1.0)
    assert budget.tau_d_s == pytest.approx(10.0 * s.time_unit, rel=1e-14)
    assert budget.sufficient is (budget.tau_d_s > 1.0)


@pytest.mark.slow
def test_long_run_stays_physical():
    h = decoherence_hamiltonian(HamiltonianMode.FREE, 8)
    trajectory = evolve(pure_state(_ground(8), 8), h, BathParams(kappa1=0.0, kappa2=1.0), 1e-3, 10_000)
    assert np.max(trajectory.trace_errors) <= 1e-9
    assert np.all(np.diff(trajectory.purities) <= 1e-12)
