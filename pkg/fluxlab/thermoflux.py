"""Thermodynamic functionals of open-system dynamics.

Sign conventions: heat rates are heat absorbed by the system, the flux of a
channel is the negative of its entropy production rate,

    F_k = gamma_k Tr(R_k{rho} (ln rho + beta_k H)) = -(dS_k/dt - beta_k dQ_k/dt),

so a positive flux means information flowing back into the system.
"""
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from fluxlab import logger
from fluxlab.errors import DimMismatch, IdentityViolation, InfiniteTemperature, MixedTemperatures, NotProductInitial
from fluxlab.lindblad import DEFAULT_STEP, dissipator, evolve_grid
from fluxlab.qcore import (
    gibbs_state, make_op, matrix_log_clamped, mutual_information, partial_trace, relative_entropy,
    von_neumann_entropy,
)

T_MIN = 0.01
PRODUCT_TOL = 1e-8
DERIVATIVE_STEP = 1e-5
CHECK_REFINE = 100
CHECK_REFINE_POINTS = 200


@dataclass(frozen=True)
class FluxSample:
    t: float
    per_channel: List[Tuple[str, float, float, float]]  # (label, heat_rate, entropy_rate, flux)
    total_flux: float
    cumulative_heat: float = 0.0
    cumulative_entropy_production: float = 0.0
    entropy_change: float = 0.0

    def channel(self, label):
        for entry in self.per_channel:
            if entry[0] == label:
                return entry
        raise KeyError(label)

    def fluxes(self):
        return {label: flux for label, _, _, flux in self.per_channel}


@dataclass(frozen=True)
class EnergeticsReport:
    delta_I_neq: float
    delta_S_irr: float
    irr_work_over_kT: float
    residual: float
    extra: dict = field(default_factory=dict)


def _m(x):
    return x.matrix if hasattr(x, 'matrix') else np.asarray(x, dtype=complex)


def _check(ch, rho):
    if _m(rho).shape != (ch.dim, ch.dim):
        raise DimMismatch(ch.dim, _m(rho).shape[0])


def neq_information(rho, h, beta):
    """I^neq = S(rho || rho_eq), the information a state holds relative to its Gibbs state."""
    return relative_entropy(rho, gibbs_state(h, beta).state)


def extractable_work(rho, h, beta):
    if beta == 0:
        raise InfiniteTemperature()
    return neq_information(rho, h, beta) / beta


def free_energy_gap(rho, h, beta):
    """F(rho) - F(rho_eq) evaluated directly, the second route to extractable work."""
    if beta == 0:
        raise InfiniteTemperature('free energy')
    eq = gibbs_state(h, beta)
    energy = np.real(np.trace(_m(rho) @ _m(h)))
    f_rho = energy - von_neumann_entropy(rho) / beta
    f_eq = -eq.log_partition / beta
    return float(f_rho - f_eq)


def heat_rate_channel(ch, rho, h, t=0.0):
    _check(ch, rho)
    return float(ch.rate(t) * np.real(np.trace(dissipator(ch, rho) @ _m(h))))


def entropy_rate_channel(ch, rho, t=0.0, log_rho=None):
    _check(ch, rho)
    if log_rho is None:
        log_rho = matrix_log_clamped(rho).matrix
    return float(-ch.rate(t) * np.real(np.trace(dissipator(ch, rho) @ log_rho)))


def _channel_terms(ch, rho, h, t, log_rho):
    d = dissipator(ch, rho)
    rate = ch.rate(t)
    heat = rate * np.real(np.trace(d @ h))
    entropy = -rate * np.real(np.trace(d @ log_rho))
    if ch.beta == 0:
        flux = -entropy
    else:
        flux = -(entropy - ch.beta * heat)
    return float(heat), float(entropy), float(flux)


def flux_channel(ch, rho, h, t=0.0, log_rho=None):
    _check(ch, rho)
    if log_rho is None:
        log_rho = matrix_log_clamped(rho).matrix
    return _channel_terms(ch, rho, _m(h), t, log_rho)[2]


def channel_terms(me, rho, t):
    """(label, heat_rate, entropy_rate, flux) for every channel, in channel order."""
    m = _m(rho)
    h = me.h(t)
    log_rho = matrix_log_clamped(m).matrix
    return [(ch.label,) + _channel_terms(ch, m, h, t, log_rho) for ch in me.channels]


def entropy_production_rate(me, rho, t):
    total = 0.0
    for _, _, _, flux in channel_terms(me, rho, t):
        total += flux
    return -total


def total_flux(me, rho, t):
    return -entropy_production_rate(me, rho, t)


def heat_rate(me, rho, t):
    return float(sum(heat for _, heat, _, _ in channel_terms(me, rho, t)))


def hamiltonian_derivative(me, t):
    if me.hamiltonian_derivative is not None:
        return _m(me.hamiltonian_derivative(t))
    if me.static_hamiltonian:
        return np.zeros((me.dim, me.dim), dtype=complex)
    eps = DERIVATIVE_STEP
    return (me.h(t + eps) - me.h(t - eps)) / (2 * eps)


def work_rate(me, rho, t):
    return float(np.real(np.trace(_m(rho) @ hamiltonian_derivative(me, t))))


def _check_grid(t_start, t_end, step):
    """Step-spaced points on [t_start, t_end], refined geometrically when t_start is close to 0."""
    fine = np.linspace(t_start, t_end, int(np.ceil((t_end - t_start) / step)) + 1)
    if 0 < t_start < CHECK_REFINE * step:
        fine = np.union1d(fine, np.geomspace(t_start, min(t_end, CHECK_REFINE * step), CHECK_REFINE_POINTS))
    return fine


def decomposition_residual(me, rho_start, t_start, t_end, step=DEFAULT_STEP):
    """
    |dS_sys - dS_rev - dS_irr| over [t_start, t_end], with the rates integrated
    on the integration step rather than on a reporting grid.
    """
    grid = _check_grid(t_start, t_end, step)
    traj = evolve_grid(me, rho_start, grid, step)
    betas = np.array(me.betas(), dtype=float)
    terms = [channel_terms(me, s, t) for t, s in zip(grid, traj.states)]
    heats = np.array([[e[1] for e in row] for row in terms]).reshape(len(grid), len(betas))
    fluxes = np.array([[e[3] for e in row] for row in terms]).reshape(len(grid), len(betas))
    ds = von_neumann_entropy(traj.states[-1]) - von_neumann_entropy(traj.states[0])
    s_rev = trapezoid(heats @ betas, grid)
    s_irr = trapezoid(-fluxes.sum(axis=1), grid)
    return float(ds), float(abs(ds - s_rev - s_irr))


def flux_trajectory(me, rho0, grid, t_min=T_MIN, step=DEFAULT_STEP, decomposition_tol=1e-3, traj=None):
    """
    Evolve rho0 on grid and evaluate per-channel heat, entropy and flux rates.

    Samples before t_min are integrated through but not reported. Cumulative
    heat and entropy production start at the first reported sample. traj, if
    given, is the already evolved trajectory of rho0 on grid.
    """
    grid = np.asarray(grid, dtype=float)
    if traj is None:
        traj = evolve_grid(me, rho0, grid, step)
    elif len(traj.states) != len(grid):
        raise DimMismatch(len(grid), len(traj.states), what='trajectory length')
    keep = np.nonzero(grid >= t_min)[0]
    if len(keep) < len(grid):
        logger.info('flux evaluation skips %d samples before t_min=%g' % (len(grid) - len(keep), t_min))
    if len(keep) == 0:
        return []
    times = grid[keep]
    terms = [channel_terms(me, traj.states[i], grid[i]) for i in keep]
    betas = np.array(me.betas(), dtype=float)
    heats = np.array([[e[1] for e in row] for row in terms]).reshape(len(keep), len(betas))
    fluxes = np.array([[e[3] for e in row] for row in terms]).reshape(len(keep), len(betas))
    total = fluxes.sum(axis=1)
    cum_heat = cumulative_trapezoid(heats.sum(axis=1), times, initial=0.0)
    cum_sirr = cumulative_trapezoid(-total, times, initial=0.0)
    entropies = np.array([von_neumann_entropy(traj.states[i]) for i in keep])
    ds = entropies - entropies[0]

    if len(keep) > 1:
        delta, residual = decomposition_residual(me, traj.states[keep[0]], times[0], times[-1], step)
        if residual > decomposition_tol * max(1.0, abs(delta)):
            raise IdentityViolation('entropy decomposition dS_sys = dS_rev + dS_irr', residual, decomposition_tol)

    return [FluxSample(t=float(times[k]), per_channel=terms[k], total_flux=float(total[k]),
                       cumulative_heat=float(cum_heat[k]),
                       cumulative_entropy_production=float(cum_sirr[k]),
                       entropy_change=float(ds[k]))
            for k in range(len(keep))]


def common_beta(me):
    betas = me.betas()
    if len(set(betas)) > 1:
        raise MixedTemperatures(betas)
    return betas[0] if betas else 0.0


def energetics_report(me, rho0, t0, t1, step=DEFAULT_STEP, n_samples=None, beta=None):
    """
    Information balance dI_neq = beta W_irr - dS_irr over [t0, t1].

    Heat and work are integrated by the trapezoid rule on a grid of n_samples
    points (default: one per integration step). beta is taken from the channels;
    it must be given explicitly for a master equation without channels.
    """
    if me.channels:
        beta = common_beta(me)
    elif beta is None:
        beta = 0.0
    if n_samples is None:
        n_samples = int(np.ceil((t1 - t0) / step)) + 1
    grid = np.linspace(t0, t1, n_samples)
    traj = evolve_grid(me, rho0, grid, step)
    heat = np.array([heat_rate(me, s, t) for t, s in zip(grid, traj.states)])
    work = np.array([work_rate(me, s, t) for t, s in zip(grid, traj.states)])
    q = float(trapezoid(heat, grid))
    w = float(trapezoid(work, grid))

    h0 = make_op(me.h(t0))
    h1 = make_op(me.h(t1))
    rho_start, rho_end = traj.states[0], traj.states[-1]
    eq0 = gibbs_state(h0, beta)
    eq1 = gibbs_state(h1, beta)
    d_ineq = relative_entropy(rho_end, eq1.state) - relative_entropy(rho_start, eq0.state)
    d_s = von_neumann_entropy(rho_end) - von_neumann_entropy(rho_start)
    d_sirr = d_s - beta * q
    irr_work = beta * w + (eq1.log_partition - eq0.log_partition)
    residual = d_ineq + d_sirr - irr_work
    return EnergeticsReport(delta_I_neq=float(d_ineq), delta_S_irr=float(d_sirr),
                            irr_work_over_kT=float(irr_work), residual=float(residual),
                            extra={'heat': q, 'work': w, 'delta_S_sys': float(d_s), 'beta': beta})


def bipartite_entropy_production(rho_tot_t, rho_tot_0, dims, h_env, beta, tol=1e-9):
    """
    Entropy production of a system coupled to an environment, both ways:
    dS_sys - beta Q  and  I_mut(t) + I_neq_env(t) - I_neq_env(0).

    Q is the heat absorbed by the system, -Tr[H_env (rho_env(t) - rho_env(0))].
    """
    mi0 = mutual_information(rho_tot_0, dims)
    if mi0 > PRODUCT_TOL:
        raise NotProductInitial(mi0)
    sys_t = partial_trace(rho_tot_t, dims, 'A')
    sys_0 = partial_trace(rho_tot_0, dims, 'A')
    env_t = partial_trace(rho_tot_t, dims, 'B')
    env_0 = partial_trace(rho_tot_0, dims, 'B')
    h = _m(h_env)
    heat = -np.real(np.trace(h @ (env_t.matrix - env_0.matrix)))
    d_sirr = von_neumann_entropy(sys_t) - von_neumann_entropy(sys_0) - beta * heat
    eq = gibbs_state(h, beta).state
    mi = mutual_information(rho_tot_t, dims)
    env_neq_t = relative_entropy(env_t, eq)
    env_neq_0 = relative_entropy(env_0, eq)
    residual = abs(d_sirr - (mi + env_neq_t - env_neq_0))
    if residual > tol:
        raise IdentityViolation('bipartite entropy production identity', residual, tol)
    return {'delta_S_irr': float(d_sirr), 'mutual_info': float(mi),
            'env_neq_t': float(env_neq_t), 'env_neq_0': float(env_neq_0),
            'heat': float(heat), 'residual': float(residual)}
