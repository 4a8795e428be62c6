import numpy as np
import pytest

from fluxlab.common.math_util import loglog_slope
from fluxlab.common.schedules import SineSchedule
from fluxlab.errors import ComputeError, ConfigError, DimMismatch, InvalidGrid, NotPauliDiagonal, PositivityLost
from fluxlab.lindblad import (
    Channel, MasterEquation, apply_map, compose, evolve, evolve_grid, identity_map, liouvillian, propagator, rhs,
    trace_preservation_error, unvec, vec,
)
from fluxlab.models.cnot import (
    CnotParams, cnot_analytic_state, cnot_initial_state, cnot_kossakowski, cnot_master_equation,
)
from fluxlab.models.thermal import thermal_qubit_master_equation
from fluxlab.qcore import SM, SX, SZ, BlochVector, basis_state, maximally_mixed, state_from_bloch


def test_vec_convention():
    rs = np.random.RandomState(0)
    a, x, b = (rs.randn(3, 3) + 1j * rs.randn(3, 3) for _ in range(3))
    assert np.allclose(vec(a @ x @ b), np.kron(b.T, a) @ vec(x))
    assert np.allclose(unvec(vec(x)), x)


def test_liouvillian_matches_rhs():
    me = thermal_qubit_master_equation(SineSchedule(1.0, 0.3, 2.0), gamma=0.2, beta=1.0)
    rho = state_from_bloch(BlochVector(0.8, 0.9, 2.1))
    for t in (0.0, 0.4, 1.7):
        assert np.allclose(unvec(liouvillian(me, t) @ vec(rho.matrix)), rhs(me, t, rho))


def test_trace_preservation():
    me = cnot_master_equation(CnotParams(a=0.3, gamma=0.1))
    maps = propagator(me, [0.0, 0.5, 1.0])
    for pm in maps:
        assert trace_preservation_error(pm) < 1e-10
    assert trace_preservation_error(identity_map(3)) == 0.0


def test_amplitude_damping():
    gamma = 0.5
    me = MasterEquation(dim=2, channels=(Channel(label='decay', a_i=SM, rate=gamma),))
    grid = np.linspace(0.0, 2.0, 5)
    traj = evolve_grid(me, basis_state(2, 0), grid)
    for t, rho in zip(traj.times, traj.states):
        assert np.isclose(rho.matrix[0, 0].real, np.exp(-gamma * t), atol=1e-9)
    assert len(traj) == len(grid)

    final = evolve(me, basis_state(2, 0), 0.0, 2.0)
    assert np.isclose(final.states[-1].matrix[0, 0].real, np.exp(-1.0), atol=1e-9)


def test_compose_static_generator():
    me = thermal_qubit_master_equation(1.0, gamma=0.3, beta=0.7)
    maps = propagator(me, [0.0, 0.3, 0.4, 0.7])
    # E_{0.7} = E_{0.4} E_{0.3} for a time independent generator
    assert np.allclose(maps[3].matrix, compose(maps[2], maps[1]).matrix, atol=1e-9)

    rho0 = state_from_bloch(BlochVector(0.9, 0.4, 1.0))
    direct = evolve_grid(me, rho0, [0.0, 0.7]).states[-1]
    assert np.allclose(apply_map(maps[3], rho0).matrix, direct.matrix, atol=1e-9)
    with pytest.raises(DimMismatch):
        apply_map(maps[3], maximally_mixed(3))


def test_negative_rate_loses_positivity():
    me = MasterEquation(dim=2, channels=(Channel(label='pump', a_i=SM, rate=-1.0),))
    with pytest.raises(PositivityLost) as e:
        evolve_grid(me, maximally_mixed(2), np.linspace(0.0, 2.0, 21))
    assert np.isclose(e.value.t, 0.7)


def test_bad_grids():
    me = thermal_qubit_master_equation(1.0, gamma=0.3, beta=0.7)
    rho0 = maximally_mixed(2)
    with pytest.raises(InvalidGrid):
        evolve_grid(me, rho0, [0.0, 1.0, 0.5])
    with pytest.raises(InvalidGrid):
        evolve_grid(me, rho0, [0.0, 1.0], step=0.0)
    with pytest.raises(InvalidGrid):
        evolve(me, rho0, 1.0, 1.0)
    with pytest.raises(InvalidGrid):
        propagator(me, [0.5, 1.0])
    with pytest.raises(ComputeError) as e:
        evolve_grid(me, rho0, [])
    assert e.value.exit_code == 3
    with pytest.raises(DimMismatch):
        evolve_grid(me, maximally_mixed(3), [0.0, 1.0])


def test_rk4_is_fourth_order():
    p = CnotParams(a=0.3, gamma=0.1)
    me = cnot_master_equation(p)
    exact = cnot_analytic_state(p, 2.0).matrix
    steps = np.array([0.2, 0.1, 0.05, 0.025])
    errors = [np.max(np.abs(evolve_grid(me, cnot_initial_state(p), [0.0, 2.0], h).states[-1].matrix - exact))
              for h in steps]
    slope, _ = loglog_slope(steps, errors)
    assert 3.5 < slope < 4.6


def test_kossakowski_diagonal():
    p = CnotParams(a=0.3, gamma=0.2)
    me = cnot_master_equation(p)
    for t in (0.3, 1.9, 4.4):
        assert np.allclose(me.kossakowski(t), np.diag(cnot_kossakowski(p, t)))

    ch = Channel(label='x', a_i=2 * SX, rate=0.5)
    assert ch.pauli_axis() == (0, 4.0)

    thermal = thermal_qubit_master_equation(1.0, gamma=0.3, beta=0.7)
    with pytest.raises(NotPauliDiagonal):
        thermal.kossakowski(0.0)
    with pytest.raises(NotPauliDiagonal):
        Channel(label='mixed', a_i=SX, a_j=SM, rate=1.0).pauli_axis()


def test_channel_validation():
    with pytest.raises(DimMismatch):
        Channel(label='bad', a_i=SX, a_j=np.eye(3), rate=1.0)
    with pytest.raises(ConfigError):
        Channel(label='bad', a_i=SX, rate=1.0, beta=-1.0)
    with pytest.raises(DimMismatch):
        MasterEquation(dim=3, channels=(Channel(label='x', a_i=SX, rate=1.0),))
    with pytest.raises(DimMismatch):
        MasterEquation(dim=3, hamiltonian=SX)


def test_unitary_propagator_preserves_norm():
    me = MasterEquation(dim=2, hamiltonian=lambda t: np.cos(t) * SX + 0.5 * SZ)
    for pm in propagator(me, np.linspace(0.0, 3.0, 7)):
        assert np.allclose(np.linalg.svd(pm.matrix, compute_uv=False), 1.0, atol=1e-8)


@pytest.mark.parametrize('gamma', [0.1, 0.5])
def test_pure_dephasing(gamma):
    me = MasterEquation(dim=2, channels=(Channel(label='dephasing', a_i=SZ, rate=gamma),))
    rho0 = state_from_bloch(BlochVector(0.8, 0.5 * np.pi, 0.0))
    grid = np.linspace(0.0, 4.0, 9)
    traj = evolve_grid(me, rho0, grid)
    c0 = rho0.matrix[0, 1]
    assert np.isclose(c0, 0.4)
    for t, rho in zip(traj.times, traj.states):
        assert np.isclose(rho.matrix[0, 1], c0 * np.exp(-2 * gamma * t), atol=1e-9)
        assert np.allclose(np.diag(rho.matrix), np.diag(rho0.matrix), atol=1e-12)
