"""Two-level system in thermal contact with a virtual qubit of its environment.

The environment is a qutrit: the virtual qubit levels |1>, |0> (populations
q1_frac, q0_frac, splitting e_a - e_b) plus one redundant level holding the
remaining population, with its energy chosen so the whole qutrit is thermal.
Contact is the resonant exchange

    H_int = g (|a,0><b,1| + |b,1><a,0|).

For a single step dt the coupling is g = sqrt(gamma / dt), the collision
scaling under which the transferred population is gamma dt (p_a q0 - p_b q1)
to first order.
"""
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from fluxlab.common.math_util import loglog_slope
from fluxlab.errors import ConfigError, DegeneratePopulation, InvalidPopulations, NoSignal
from fluxlab.qcore import QState, make_op, mutual_information, partial_trace, tensor, von_neumann_entropy

RATIO_TOL = 1e-10
NOISE_FLOOR = 1e-12
EMPTY_LEVEL_GAP = 50.0


@dataclass(frozen=True)
class ProtocolParams:
    e_a: float
    e_b: float
    p_a: float
    beta: float
    q1_frac: float
    q0_frac: float
    gamma: float = 1.0
    dt: float = 0.01

    def __post_init__(self):
        if not self.e_a > self.e_b:
            raise InvalidPopulations('need e_a > e_b, got e_a=%g e_b=%g' % (self.e_a, self.e_b))
        if not self.beta > 0:
            raise InvalidPopulations('virtual qubit needs a finite positive beta, got %g' % self.beta)
        for name in ('p_a', 'q1_frac', 'q0_frac'):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidPopulations('%s = %g outside [0, 1]' % (name, v))
        if self.q0_frac <= 0:
            raise InvalidPopulations('q0_frac must be positive, got %g' % self.q0_frac)
        if self.q1_frac + self.q0_frac > 1 + RATIO_TOL:
            raise InvalidPopulations('q1_frac + q0_frac = %.12g exceeds 1' % (self.q1_frac + self.q0_frac))
        expected = np.exp(-self.beta * (self.e_a - self.e_b))
        ratio = self.q1_frac / self.q0_frac
        if abs(ratio - expected) > RATIO_TOL:
            raise InvalidPopulations('q1_frac/q0_frac = %.12g differs from exp(-beta(e_a-e_b)) = %.12g'
                                     % (ratio, expected))
        if self.gamma <= 0 or self.dt <= 0:
            raise InvalidPopulations('gamma and dt must be positive, got gamma=%g dt=%g' % (self.gamma, self.dt))

    @classmethod
    def thermal(cls, e_a, e_b, p_a, beta, q0_frac, gamma=1.0, dt=0.01):
        """Fix q1_frac from the Boltzmann ratio."""
        q1 = q0_frac * np.exp(-beta * (e_a - e_b))
        return cls(e_a=e_a, e_b=e_b, p_a=p_a, beta=beta, q1_frac=q1, q0_frac=q0_frac, gamma=gamma, dt=dt)

    @property
    def p_b(self):
        return 1.0 - self.p_a

    @property
    def redundant_frac(self):
        return max(0.0, 1.0 - self.q1_frac - self.q0_frac)


@dataclass(frozen=True)
class ProtocolReport:
    dQ: float
    dS_sys: float
    dS_env: float
    dI_mut: float
    dS_irr: float
    p_z: float


def default_params():
    return ProtocolParams.thermal(e_a=1.0, e_b=0.0, p_a=0.8, beta=1.0, q0_frac=0.3, gamma=1.0, dt=0.01)


def protocol_environment(p):
    """
    (H_env, rho_env) on the qutrit |1>, |0>, redundant. An empty redundant
    level sits EMPTY_LEVEL_GAP / beta above |1>, where its Boltzmann weight
    is below double precision.
    """
    gap = p.e_a - p.e_b
    r = p.redundant_frac
    if r > RATIO_TOL:
        e_r = -np.log(r / p.q0_frac) / p.beta
    else:
        r, e_r = 0.0, gap + EMPTY_LEVEL_GAP / p.beta
    energies = [gap, 0.0, e_r]
    pops = [p.q1_frac, p.q0_frac, r]
    pops = np.array(pops) / np.sum(pops)
    h_env = make_op(np.diag(energies).astype(complex))
    return h_env, QState(np.diag(pops).astype(complex))


def protocol_system(p):
    h_sys = make_op(np.diag([p.e_a, p.e_b]).astype(complex))
    return h_sys, QState(np.diag([p.p_a, p.p_b]).astype(complex))


def protocol_hamiltonian(p, coupling):
    h_sys, _ = protocol_system(p)
    h_env, _ = protocol_environment(p)
    d_env = h_env.dim
    h = np.kron(h_sys.matrix, np.eye(d_env)) + np.kron(np.eye(2), h_env.matrix)
    # joint index = sys * d_env + env; |a,0> -> 1, |b,1> -> d_env
    h[1, d_env] += coupling
    h[d_env, 1] += coupling
    return h


def protocol_initial_state(p):
    _, rho_sys = protocol_system(p)
    _, rho_env = protocol_environment(p)
    return tensor(rho_sys, rho_env)


def protocol_joint_state(p, t, coupling=None):
    """Exact joint state at time t; coupling defaults to gamma."""
    g = p.gamma if coupling is None else coupling
    u = scipy.linalg.expm(-1j * protocol_hamiltonian(p, g) * t)
    rho0 = protocol_initial_state(p).matrix
    m = u @ rho0 @ u.conj().T
    return QState(0.5 * (m + m.conj().T))


def protocol_exact_step(p):
    h_env, rho_env0 = protocol_environment(p)
    _, rho_sys0 = protocol_system(p)
    dims = (2, h_env.dim)
    rho1 = protocol_joint_state(p, p.dt, coupling=np.sqrt(p.gamma / p.dt))
    sys1 = partial_trace(rho1, dims, 'A')
    env1 = partial_trace(rho1, dims, 'B')
    transferred = p.p_a - sys1.matrix[0, 0].real
    d_q = -np.real(np.trace(h_env.matrix @ (env1.matrix - rho_env0.matrix)))
    d_s_sys = von_neumann_entropy(sys1) - von_neumann_entropy(rho_sys0)
    d_s_env = von_neumann_entropy(env1) - von_neumann_entropy(rho_env0)
    d_i = mutual_information(rho1, dims)
    return ProtocolReport(dQ=float(d_q), dS_sys=float(d_s_sys), dS_env=float(d_s_env), dI_mut=float(d_i),
                          dS_irr=float(d_s_sys - p.beta * d_q), p_z=float(transferred / p.dt))


def protocol_first_order(p):
    if p.p_a in (0.0, 1.0):
        raise DegeneratePopulation(p.p_a)
    p_z = (p.p_a * p.q0_frac - p.p_b * p.q1_frac) * p.gamma
    moved = p_z * p.dt
    d_q = -(p.e_a - p.e_b) * moved
    d_s_sys = np.log(p.p_a / p.p_b) * moved
    d_s_env = -np.log(p.q1_frac / p.q0_frac) * moved
    d_s_irr = d_s_sys - p.beta * d_q
    # to first order the built-up mutual information equals dS_irr
    return ProtocolReport(dQ=float(d_q), dS_sys=float(d_s_sys), dS_env=float(d_s_env), dI_mut=float(d_s_irr),
                          dS_irr=float(d_s_irr), p_z=float(p_z))


def protocol_differences(p, dts):
    """|dI_mut - dS_irr| of the exact step for each dt."""
    return np.array([abs(r.dI_mut - r.dS_irr) for r in
                     (protocol_exact_step(replace(p, dt=float(dt))) for dt in dts)])


def protocol_scaling_study(p, dts):
    """Slope of log|dI_mut - dS_irr| against log dt."""
    dts = np.asarray(sorted(dts), dtype=float)
    if len(dts) < 4 or dts[-1] / dts[0] < 100 * (1 - 1e-9):
        raise ConfigError('scaling study needs >= 4 steps spanning >= 2 decades, got %s' % (dts.tolist(),), field='dts')
    diffs = protocol_differences(p, dts)
    if np.max(diffs) < NOISE_FLOOR:
        raise NoSignal(float(np.max(diffs)))
    slope, _ = loglog_slope(dts, diffs)
    return slope
