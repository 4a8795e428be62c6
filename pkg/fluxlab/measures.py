"""Trace-distance based non-Markovianity.

The BLP value of a pair is the total increase of their trace distance over
the evolution. For the target qubit of the CNOT model the total information
flux and the rate of change of the distance of the +-z pair carry the same
sign, since F = artanh(D) dD/dt with D the Bloch radius.
"""
from dataclasses import dataclass, field, replace
from typing import List

import numpy as np
from joblib import Parallel, delayed

from fluxlab import logger
from fluxlab.common.math_util import central_difference, positive_increments
from fluxlab.divisibility import pauli_transfer
from fluxlab.errors import ComputeError, DimMismatch
from fluxlab.lindblad import DEFAULT_STEP, evolve_grid, propagator
from fluxlab.models.cnot import CnotParams, cnot_master_equation
from fluxlab.qcore import BlochVector, basis_state, state_from_bloch, trace_distance
from fluxlab.thermoflux import T_MIN, flux_trajectory

FLUX_EPS = 1e-8
D_EPS = 1e-6
DECAY_FRACTION = 0.01
HORIZON = 12.0
BLP_STEP = 5e-3


@dataclass(frozen=True)
class DistanceSeries:
    t: np.ndarray
    D: np.ndarray
    dD_dt: np.ndarray


@dataclass(frozen=True, eq=False)
class BlpResult:
    value: float
    pair: tuple
    sigma_series: np.ndarray
    times: np.ndarray = None
    distances: np.ndarray = None


@dataclass(frozen=True)
class SignCheckReport:
    n_samples: int
    n_eligible: int
    n_agree: int
    violations: List[float] = field(default_factory=list)

    @property
    def agreement(self):
        return self.n_agree / self.n_eligible if self.n_eligible else 1.0


def distance_series(grid, states1, states2):
    """Trace distance and its rate for two trajectories sampled on the same grid."""
    grid = np.asarray(grid, dtype=float)
    d = np.array([trace_distance(a, b) for a, b in zip(states1, states2)])
    return DistanceSeries(grid, d, central_difference(d, grid))


def distance_trajectory(me, rho1, rho2, grid, step=DEFAULT_STEP):
    grid = np.asarray(grid, dtype=float)
    return distance_series(grid, evolve_grid(me, rho1, grid, step).states, evolve_grid(me, rho2, grid, step).states)


def blp_measure(me, rho1, rho2, grid, step=DEFAULT_STEP):
    """Sum of the increments of D(t) on the grid where D grows."""
    series = distance_trajectory(me, rho1, rho2, grid, step)
    if series.D[0] > 0 and series.D[-1] > DECAY_FRACTION * series.D[0]:
        logger.warn('distance has not decayed by the end of the grid: D(end)/D(0) = %.3g'
                    % (series.D[-1] / series.D[0]))
    return BlpResult(value=positive_increments(series.D), pair=(rho1, rho2), sigma_series=series.dD_dt,
                     times=series.t, distances=series.D)


def pair_directions(resolution=(12, 24)):
    """Hemisphere of Bloch directions: n_theta polar rows from the pole to the equator times n_phi azimuths."""
    n_theta, n_phi = resolution
    thetas = np.linspace(0.0, 0.5 * np.pi, n_theta)
    phis = 2 * np.pi * np.arange(n_phi) / n_phi
    dirs = [(0.0, 0.0)] + [(th, ph) for th in thetas[1:] for ph in phis]
    return dirs


def blp_optimize(me, resolution=(12, 24), grid=None, step=DEFAULT_STEP, gamma=None):
    """
    Best antipodal pure pair on a fixed Bloch grid. For a trace preserving
    qubit map the pair (n, -n) sits at distance |T(t) n|, with T the traceless
    block of the Pauli transfer matrix, so one propagator serves every pair.

    Without a grid the time axis is blp_grid(gamma), which needs gamma.
    """
    if me.dim != 2:
        raise DimMismatch(2, me.dim)
    if grid is None:
        if gamma is None:
            raise ComputeError('blp_optimize needs a time grid or the dephasing rate gamma')
        grid = blp_grid(gamma)
    grid = np.asarray(grid, dtype=float)
    maps = propagator(me, grid, step)
    blocks = np.stack([pauli_transfer(m)[1:, 1:] for m in maps])
    dirs = pair_directions(resolution)
    n = np.array([BlochVector(1.0, th, ph).cartesian() for th, ph in dirs])
    d = np.linalg.norm(np.einsum('tij,kj->tki', blocks, n), axis=2)
    inc = np.diff(d, axis=0)
    values = np.where(inc > 0, inc, 0.0).sum(axis=0)
    best = int(np.argmax(values))
    th, ph = dirs[best]
    rho1 = state_from_bloch(BlochVector(1.0, th, ph))
    rho2 = state_from_bloch(BlochVector(1.0, np.pi - th, ph + np.pi))
    return BlpResult(value=float(values[best]), pair=(rho1, rho2), sigma_series=central_difference(d[:, best], grid),
                     times=grid, distances=d[:, best])


def blp_grid(gamma, j=1.0, horizon=HORIZON, samples_per_period=64):
    t_end = horizon / gamma
    n = int(np.ceil(t_end * j / (2 * np.pi) * samples_per_period)) + 1
    return np.linspace(0.0, t_end, max(n, 2))


def blp_point(a, gamma, j=1.0, horizon=HORIZON, step=BLP_STEP, optimize=False, resolution=(12, 24),
              samples_per_period=64):
    me = cnot_master_equation(CnotParams(a=a, gamma=gamma, j_coupling=j))
    grid = blp_grid(gamma, j, horizon, samples_per_period)
    row = {'gamma_over_j': gamma / j,
           'blp_pm_z': blp_measure(me, basis_state(2, 0), basis_state(2, 1), grid, step).value}
    if optimize:
        row['blp_opt'] = blp_optimize(me, resolution, grid, step).value
    return row


def blp_scan(gammas, a, j=1.0, horizon=HORIZON, step=BLP_STEP, optimize=True, resolution=(12, 24),
             n_jobs=1, samples_per_period=64):
    """BLP value of the +-z pair (and the optimized pair) along a line of gamma."""
    return Parallel(n_jobs=n_jobs)(
        delayed(blp_point)(a, g, j, horizon, step, optimize, resolution, samples_per_period) for g in gammas)


def _eligible(flux, dist, t, t_min):
    ok = (t >= t_min) & (np.abs(flux) > FLUX_EPS) & (dist > D_EPS) & (dist < 1 - D_EPS)
    ok[0] = ok[-1] = False
    s = np.sign(flux)
    steady = np.ones_like(ok)
    steady[1:] &= s[1:] == s[:-1]
    steady[:-1] &= s[:-1] == s[1:]
    return ok & steady


def flux_distance_sign_check(p, grid, step=DEFAULT_STEP, t_min=T_MIN):
    """
    Compare sign(F_total) from |1><1| with sign(dD/dt) of the +-z pair.

    Endpoints and samples next to a sign change of F are not eligible, since
    the central difference cannot resolve a zero crossing inside one cell.
    """
    p = replace(p, theta0=0.0, phi0=0.0, r0=1.0)
    me = cnot_master_equation(p)
    grid = np.asarray(grid, dtype=float)
    up, down = basis_state(2, 0), basis_state(2, 1)
    samples = flux_trajectory(me, up, grid, t_min=t_min, step=step)
    series = distance_trajectory(me, up, down, grid, step)
    offset = len(grid) - len(samples)
    flux = np.array([s.total_flux for s in samples])
    return sign_report(grid[offset:], flux, series.D[offset:], series.dD_dt[offset:], t_min)


def sign_report(t, flux, dist, rate, t_min=T_MIN):
    """
    Agreement of sign(flux) and sign(rate) over the eligible samples: t >= t_min,
    |flux| > FLUX_EPS and D_EPS < dist < 1 - D_EPS. On top of that window the
    two endpoints and every sample next to a sign change of flux are left out,
    because a central difference straddling a zero crossing has no reliable sign.
    """
    t = np.asarray(t, dtype=float)
    flux = np.asarray(flux, dtype=float)
    eligible = _eligible(flux, np.asarray(dist, dtype=float), t, t_min)
    agree = np.sign(flux) == np.sign(rate)
    bad = eligible & ~agree
    return SignCheckReport(n_samples=len(t), n_eligible=int(eligible.sum()), n_agree=int((eligible & agree).sum()),
                           violations=t[bad].tolist())
