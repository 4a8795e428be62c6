"""Target qubit T driven through a CNOT coupling by a static control qubit C.

C sits in a|1><1| + (1-a)|0><0| and couples to T through
H_CT = (J/2)(|1><1| x sx + |0><0| x I); T also depolarizes at rate gamma/2 per
Pauli channel. Tracing out C leaves the time-local master equation

    d rho/dt = -i[J_x(t) sx, rho] + (gamma + gamma_Cx(t))/2 R_x + gamma/2 (R_y + R_z)

with R_k{rho} = s_k rho s_k - rho, all channels at infinite temperature.
"""
from dataclasses import dataclass

import numpy as np

from fluxlab.errors import ConfigError, SingularAtPureState, SingularRadius
from fluxlab.lindblad import DEFAULT_STEP, Channel, MasterEquation, evolve_grid
from fluxlab.qcore import ID2, SX, SY, SZ, BlochVector, QState, partial_trace, state_from_bloch, tensor
from fluxlab.thermoflux import FluxSample

R2_EPS = 1e-14
PURE_EPS = 1e-12

CHANNEL_LABELS = ('Cx', 'dep_x', 'dep_y', 'dep_z')


@dataclass(frozen=True)
class CnotParams:
    a: float
    gamma: float
    j_coupling: float = 1.0
    theta0: float = 0.0
    phi0: float = 0.0
    r0: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise ConfigError('a out of [0,1]: %r' % (self.a,), field='a')
        if not 0.0 <= self.r0 <= 1.0:
            raise ConfigError('r0 out of [0,1]: %r' % (self.r0,), field='r0')
        if self.gamma < 0:
            raise ConfigError('gamma must be >= 0: %r' % (self.gamma,), field='gamma')
        if self.j_coupling <= 0:
            raise ConfigError('j_coupling must be > 0: %r' % (self.j_coupling,), field='j_coupling')

    @property
    def initial_bloch(self):
        return BlochVector(self.r0, self.theta0, self.phi0)


def cnot_radius2(t, a, j=1.0):
    """r^2(t) = (1-a)^2 + 2a(1-a) cos(Jt) + a^2"""
    return (1 - a) ** 2 + 2 * a * (1 - a) * np.cos(j * t) + a ** 2


def cnot_rate_cx(t, a, j=1.0):
    """gamma_Cx(t) = a(1-a) J sin(Jt) / r^2(t); works elementwise on arrays."""
    r2 = cnot_radius2(t, a, j)
    if np.any(r2 < R2_EPS):
        bad = np.atleast_1d(t)[np.argmin(np.atleast_1d(r2))] if np.ndim(t) else t
        raise SingularRadius(float(bad), float(np.min(r2)))
    return a * (1 - a) * j * np.sin(j * t) / r2


def cnot_amplitude_cx(a, j=1.0):
    """max_t |gamma_Cx(t)| = c / sqrt(1 - 4c) with c = a(1-a), infinite at a = 1/2."""
    c = a * (1 - a)
    disc = 1 - 4 * c
    if disc <= 0:
        return np.inf
    return j * c / np.sqrt(disc)


def cnot_drive(t, a, j=1.0):
    """J_x(t) = (J / 2r^2)(a^2 + a(1-a) cos(Jt))"""
    r2 = cnot_radius2(t, a, j)
    return 0.5 * j * (a ** 2 + a * (1 - a) * np.cos(j * t)) / r2


def cnot_drive_derivative(t, a, j=1.0):
    c = a * (1 - a)
    r2 = cnot_radius2(t, a, j)
    return -0.5 * j * j * c * (1 - 2 * a) * np.sin(j * t) / r2 ** 2


def cnot_master_equation(p):
    a, j, g = p.a, p.j_coupling, p.gamma
    channels = (
        Channel(label='Cx', a_i=SX, rate=lambda t: 0.5 * cnot_rate_cx(t, a, j)),
        Channel(label='dep_x', a_i=SX, rate=0.5 * g),
        Channel(label='dep_y', a_i=SY, rate=0.5 * g),
        Channel(label='dep_z', a_i=SZ, rate=0.5 * g),
    )
    return MasterEquation(dim=2,
                          hamiltonian=lambda t: cnot_drive(t, a, j) * SX,
                          channels=channels,
                          hamiltonian_derivative=lambda t: cnot_drive_derivative(t, a, j) * SX)


def cnot_kossakowski(p, t):
    """Diagonal Kossakowski matrix in the Pauli basis (x, y, z)."""
    g_cx = cnot_rate_cx(t, p.a, p.j_coupling)
    return np.diag([0.5 * (p.gamma + g_cx), 0.5 * p.gamma, 0.5 * p.gamma])


def cnot_bloch_matrix(p, t):
    """
    Bloch transfer block: n(t) = M(t) n(0), with
    M = e^{-2 gamma t} [[1, 0, 0], [0, A, -a s], [0, a s, A]],
    A = 1 - a + a cos(Jt), s = sin(Jt).
    """
    a = p.a
    jt = p.j_coupling * t
    big_a = 1 - a + a * np.cos(jt)
    s = np.sin(jt)
    return np.exp(-2 * p.gamma * t) * np.array([[1.0, 0.0, 0.0],
                                                [0.0, big_a, -a * s],
                                                [0.0, a * s, big_a]])


def _from_components(xyz, trace=1.0):
    return 0.5 * (trace * ID2 + xyz[0] * SX + xyz[1] * SY + xyz[2] * SZ)


def cnot_basis_solutions(p, t):
    """
    Images of the four basis operators under the reduced dynamics:
    rho11 = E(|1><1|), rho00 = E(|0><0|), rho01 = E(|0><1|), rho10 = E(|1><0|).
    """
    m = cnot_bloch_matrix(p, t)
    return {
        'rho11': _from_components(m[:, 2]),
        'rho00': _from_components(-m[:, 2]),
        'rho01': _from_components(m[:, 0] - 1j * m[:, 1], trace=0.0),
        'rho10': _from_components(m[:, 0] + 1j * m[:, 1], trace=0.0),
    }


def cnot_initial_state(p):
    return state_from_bloch(p.initial_bloch)


def cnot_analytic_state(p, t):
    rho0 = cnot_initial_state(p).matrix
    alpha, beta, delta = rho0[0, 0], rho0[1, 1], rho0[1, 0]
    sol = cnot_basis_solutions(p, t)
    m = alpha * sol['rho11'] + beta * sol['rho00'] + delta * sol['rho01'] + np.conj(delta) * sol['rho10']
    return QState(0.5 * (m + m.conj().T))


def cnot_analytic_bloch(p, t):
    return cnot_bloch_matrix(p, t) @ p.initial_bloch.cartesian()


def cnot_pair_master_equation(p):
    """Two-qubit (C x T) master equation with depolarizing noise on T only."""
    p1 = np.diag([1.0, 0.0]).astype(complex)
    p0 = np.diag([0.0, 1.0]).astype(complex)
    h_ct = 0.5 * p.j_coupling * (np.kron(p1, SX) + np.kron(p0, ID2))
    channels = tuple(Channel(label='dep_%s' % k, a_i=np.kron(ID2, s), rate=0.5 * p.gamma)
                     for k, s in zip('xyz', (SX, SY, SZ)))
    return MasterEquation(dim=4, hamiltonian=h_ct, channels=channels)


def cnot_full_pair_trajectory(p, rho_c, rho_t, grid, step=DEFAULT_STEP):
    """Joint C x T states on grid (grid[0] is the preparation time)."""
    return evolve_grid(cnot_pair_master_equation(p), tensor(rho_c, rho_t), grid, step)


def cnot_full_pair_oracle(p, rho_c, rho_t, t, step=DEFAULT_STEP):
    if t == 0:
        return QState(np.array(rho_t.matrix, dtype=complex))
    traj = cnot_full_pair_trajectory(p, rho_c, rho_t, [0.0, t], step)
    return partial_trace(traj.states[-1], (2, 2), 'B')


def control_state(a):
    return QState(np.diag([a, 1 - a]).astype(complex))


def cnot_analytic_fluxes(p, t):
    """
    Closed-form heat rates, entropy rates and fluxes per channel at time t
    (all channels at infinite temperature, so flux = -entropy rate).
    """
    a, j, g = p.a, p.j_coupling, p.gamma
    n0 = p.initial_bloch.cartesian()
    xyz = cnot_bloch_matrix(p, t) @ n0
    radius = float(np.linalg.norm(xyz))
    if radius >= 1 - PURE_EPS:
        raise SingularAtPureState(t, radius)
    g_cx = cnot_rate_cx(t, a, j)
    rates = {'Cx': 0.5 * g_cx, 'dep_x': 0.5 * g, 'dep_y': 0.5 * g, 'dep_z': 0.5 * g}
    axis = {'Cx': 0, 'dep_x': 0, 'dep_y': 1, 'dep_z': 2}
    drive = cnot_drive(t, a, j)
    weight = np.arctanh(radius) / radius if radius > 0 else 1.0

    per_channel = []
    for label in CHANNEL_LABELS:
        k = axis[label]
        rate = rates[label]
        heat = 0.0 if k == 0 else -2.0 * rate * drive * xyz[0]
        flux = -2.0 * rate * weight * (radius ** 2 - xyz[k] ** 2)
        per_channel.append((label, float(heat), float(-flux), float(flux)))

    # F = artanh(R) dR/dt with R^2 = e^{-4 gamma t}(x0^2 + r^2(t)(y0^2 + z0^2))
    decay = np.exp(-4 * g * t)
    dr2 = -2 * a * (1 - a) * j * np.sin(j * t)
    r_dr = 0.5 * (-4 * g * radius ** 2 + decay * dr2 * (n0[1] ** 2 + n0[2] ** 2))
    total = weight * r_dr
    return FluxSample(t=float(t), per_channel=per_channel, total_flux=float(total))
