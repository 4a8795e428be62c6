"""Divisibility of qubit dynamics.

A process is PD2 when every intermediate map Lambda_{t+tau,t} is completely
positive (CP-divisible, Markovian), PD1 when some intermediate map fails
complete positivity but all stay positive, and PD0 when positivity itself
fails somewhere.
"""
from dataclasses import dataclass, field
from typing import List

import numpy as np
import scipy.linalg
from joblib import Parallel, delayed
from tqdm import tqdm

from fluxlab import logger
from fluxlab.common.math_util import fibonacci_sphere
from fluxlab.errors import ConfigError, DimMismatch, NotPauliDiagonal, SingularMap, SingularRadius
from fluxlab.lindblad import DEFAULT_STEP, PAULI_DIAG_TOL, ProcessMap, propagator, unvec, vec
from fluxlab.models.cnot import CnotParams, cnot_amplitude_cx, cnot_master_equation
from fluxlab.qcore import ID2, PAULIS

EIG_TOL = 1e-7
COND_MAX = 1e8
N_SAMPLES = 2048

LABELS = ('PD0', 'PD1', 'PD2')


@dataclass(frozen=True)
class DivisibilityClass:
    label: str
    evidence: dict = field(default_factory=dict)

    @property
    def index(self):
        return LABELS.index(self.label)


@dataclass(frozen=True)
class PositivityCheck:
    passed: bool
    value: float


def choi(pm):
    """
    C = sum_ij |i><j| kron E(|i><j|), the image of the unnormalized maximally
    entangled operator. With column stacking, vec(|i><j|) = e_{j d + i}.
    """
    d = pm.dim
    m4 = pm.matrix.reshape(d, d, d, d)
    return m4.transpose(3, 1, 2, 0).reshape(d * d, d * d)


def transpose_map(dim):
    m = np.zeros((dim * dim, dim * dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            m[i * dim + j, j * dim + i] = 1.0
    return ProcessMap(m)


def pauli_transfer(pm):
    """R_ab = 1/2 Tr(s_a E(s_b)) with s_0 = I."""
    if pm.dim != 2:
        raise DimMismatch(2, pm.dim)
    basis = (ID2,) + PAULIS
    images = [unvec(pm.matrix @ vec(s), 2) for s in basis]
    return np.array([[0.5 * np.real(np.trace(sa @ img)) for img in images] for sa in basis])


def intermediate_map(p_late, p_early, cond_max=COND_MAX):
    """Lambda = E_late o E_early^-1"""
    cond = np.linalg.cond(p_early.matrix)
    if not np.isfinite(cond) or cond > cond_max:
        raise SingularMap(cond)
    lam = scipy.linalg.solve(p_early.matrix.T, p_late.matrix.T).T
    return ProcessMap(lam)


def cp_test(pm, tol=EIG_TOL):
    c = choi(pm)
    w = np.linalg.eigvalsh(0.5 * (c + c.conj().T))
    return PositivityCheck(bool(w[0] >= -tol), float(w[0]))


def _probe_directions(n_samples):
    axes = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], dtype=float)
    return np.concatenate([fibonacci_sphere(n_samples), axes])


def p_test_qubit(pm, tol=EIG_TOL, n_samples=N_SAMPLES):
    """
    Positivity of a qubit map on pure inputs.

    Pauli-diagonal maps are decided exactly from the diagonal of the transfer
    matrix; other maps from the worst output over a fixed set of Bloch
    directions. Returns the smallest output eigenvalue found.
    """
    r = pauli_transfer(pm)
    off = r - np.diag(np.diag(r))
    if np.max(np.abs(off)) <= PAULI_DIAG_TOL:
        lam = np.max(np.abs(np.diag(r)[1:]))
        worst = 0.5 * (r[0, 0] - lam)
        return PositivityCheck(bool(lam <= r[0, 0] + tol), float(worst))
    n = _probe_directions(n_samples)
    trace = r[0, 0] + n @ r[0, 1:]
    bloch = r[1:, 0][None, :] + n @ r[1:, 1:].T
    w = 0.5 * (trace - np.linalg.norm(bloch, axis=1))
    worst = float(np.min(w))
    return PositivityCheck(bool(worst >= -tol), worst)


def _rate_values(rate, grid):
    return np.array([rate(t) for t in grid], dtype=float)


def rate_classify_pauli(rates, grid, tol=EIG_TOL):
    """
    Kossakowski criteria for a Pauli-diagonal generator with rates (g_x, g_y, g_z):
    PD2 if every rate stays >= 0, PD0 if some pairwise sum turns negative, PD1 otherwise.
    """
    rates = list(rates)
    if len(rates) != 3:
        raise NotPauliDiagonal('expected three Pauli rates, got %d' % len(rates))
    grid = np.asarray(grid, dtype=float)
    g = np.stack([_rate_values(r, grid) for r in rates])
    pair = np.stack([g[0] + g[1], g[0] + g[2], g[1] + g[2]])
    i_pair = np.unravel_index(np.argmin(pair), pair.shape)
    i_rate = np.unravel_index(np.argmin(g), g.shape)
    if pair[i_pair] < -tol:
        return DivisibilityClass('PD0', {'criterion': 'pairwise rate sum', 'value': float(pair[i_pair]),
                                         't': float(grid[i_pair[1]]), 'tau': None})
    if g[i_rate] < -tol:
        return DivisibilityClass('PD1', {'criterion': 'rate', 'value': float(g[i_rate]),
                                         't': float(grid[i_rate[1]]), 'tau': None})
    return DivisibilityClass('PD2', {'criterion': 'rate', 'value': float(g[i_rate]),
                                     't': float(grid[i_rate[1]]), 'tau': None})


def pauli_rates(me):
    """Per-axis rates of a qubit master equation whose channels are all single Pauli operators."""
    if me.dim != 2:
        raise NotPauliDiagonal('Pauli rates need a qubit, got dim %d' % me.dim)
    per_axis = [[], [], []]
    for ch in me.channels:
        k, w = ch.pauli_axis()
        per_axis[k].append((ch.rate, w))

    def total(terms):
        return lambda t: sum(w * r(t) for r, w in terms)
    return [total(terms) for terms in per_axis]


def _time_index(times):
    keys = np.unique(np.round(np.asarray(times, dtype=float), 12))
    if keys[0] != 0.0:
        keys = np.concatenate([[0.0], keys])
    return keys


def classify_process(me, t_grid, tau_grid, step=DEFAULT_STEP, tol=EIG_TOL, cond_max=COND_MAX,
                     n_samples=N_SAMPLES):
    """
    Map-level classification from the intermediate maps over all (t, tau) pairs.
    Pairs with a non-invertible E_t are skipped and counted.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    tau_grid = np.asarray(tau_grid, dtype=float)
    wanted = np.concatenate([t_grid] + [t_grid + tau for tau in tau_grid])
    keys = _time_index(wanted)
    maps = propagator(me, keys, step)

    def lookup(t):
        i = int(np.clip(np.searchsorted(keys, t), 1, len(keys) - 1))
        return maps[i if abs(keys[i] - t) < abs(keys[i - 1] - t) else i - 1]

    worst_cp = (np.inf, None, None)
    worst_p = (np.inf, None, None)
    skipped = 0
    for t in t_grid:
        early = lookup(t)
        for tau in tau_grid:
            try:
                lam = intermediate_map(lookup(t + tau), early, cond_max)
            except SingularMap as e:
                skipped += 1
                logger.debug('skipping singular map at t=%.6g tau=%.6g (cond %.3e)' % (t, tau, e.cond))
                continue
            cp = cp_test(lam, tol)
            if cp.value < worst_cp[0]:
                worst_cp = (cp.value, float(t), float(tau))
            if me.dim == 2:
                pt = p_test_qubit(lam, tol, n_samples)
                if pt.value < worst_p[0]:
                    worst_p = (pt.value, float(t), float(tau))
    if skipped:
        logger.info('classification skipped %d singular (t, tau) pairs' % skipped)

    def evidence(criterion, worst):
        return {'criterion': criterion, 'value': worst[0], 't': worst[1], 'tau': worst[2], 'skipped': skipped}

    if worst_p[0] < -tol:
        return DivisibilityClass('PD0', evidence('positivity', worst_p))
    if worst_cp[0] < -tol:
        return DivisibilityClass('PD1', evidence('choi', worst_cp))
    return DivisibilityClass('PD2', evidence('choi', worst_cp))


@dataclass(frozen=True)
class PhaseDiagram:
    a_grid: np.ndarray
    gamma_grid: np.ndarray
    cells: List[List[DivisibilityClass]]
    spot_checks: List[dict] = field(default_factory=list)
    j_coupling: float = 1.0

    def labels(self):
        return np.array([[c.label for c in row] for row in self.cells])

    def indices(self):
        return np.array([[c.index for c in row] for row in self.cells])

    def boundaries(self):
        """Analytic gamma at the PD0/PD1 and PD1/PD2 transitions for each a."""
        out = []
        for a in self.a_grid:
            amp = cnot_amplitude_cx(a, self.j_coupling)
            out.append({'a': float(a), 'gamma_pd0_pd1': 0.5 * amp, 'gamma_pd1_pd2': amp})
        return out


def classify_cnot_cell(a, gamma, j=1.0, resolution=2001, tol=EIG_TOL):
    """Rate classification of the CNOT target qubit over one drive period."""
    if not np.isfinite(cnot_amplitude_cx(a, j)):
        return DivisibilityClass('PD0', {'criterion': 'diverging rate', 'value': -np.inf, 't': np.pi / j,
                                         'tau': None})
    me = cnot_master_equation(CnotParams(a=a, gamma=gamma, j_coupling=j))
    grid = np.linspace(0.0, 2 * np.pi / j, resolution)
    try:
        return rate_classify_pauli(pauli_rates(me), grid, tol)
    except SingularRadius as e:
        return DivisibilityClass('PD0', {'criterion': 'diverging rate', 'value': -np.inf, 't': e.t, 'tau': None})


def map_check_cnot_cell(a, gamma, j, t_grid, tau_grid, step=DEFAULT_STEP, tol=EIG_TOL):
    me = cnot_master_equation(CnotParams(a=a, gamma=gamma, j_coupling=j))
    return classify_process(me, t_grid, tau_grid, step, tol)


def default_t_grid(j=1.0):
    return np.arange(0, 201) * np.pi / (100 * j)


def default_tau_grid(j=1.0):
    return np.array([np.pi / 200, np.pi / 20, np.pi / 4]) / j


def _spot_cells(n_a, n_g, spot_checks):
    if spot_checks <= 0:
        return []
    cells = [(i, k) for i in range(n_a) for k in range(n_g)]
    stride = max(1, len(cells) // spot_checks)
    return cells[::stride][:spot_checks]


def phase_diagram(a_grid, gamma_grid, resolution=2001, j=1.0, spot_checks=0, n_jobs=1, t_grid=None,
                  tau_grid=None, step=DEFAULT_STEP, progress=False, tol=EIG_TOL):
    """
    Classify every (a, gamma) cell of the CNOT model from its rates and
    corroborate a deterministic subsample with map-level tests.
    """
    a_grid = np.asarray(a_grid, dtype=float)
    gamma_grid = np.asarray(gamma_grid, dtype=float)
    if np.any(a_grid < 0) or np.any(a_grid > 1):
        raise ConfigError('a grid must lie in [0, 1]', field='a_grid')
    if np.any(gamma_grid <= 0):
        raise ConfigError('gamma grid must be positive', field='gamma_grid')
    cells = [(a, g) for a in a_grid for g in gamma_grid]
    if progress:
        cells = tqdm(cells, desc='phase diagram', leave=False)
    flat = Parallel(n_jobs=n_jobs)(delayed(classify_cnot_cell)(a, g, j, resolution, tol) for a, g in cells)
    n_g = len(gamma_grid)
    grid_cells = [flat[i * n_g:(i + 1) * n_g] for i in range(len(a_grid))]

    t_grid = default_t_grid(j) if t_grid is None else t_grid
    tau_grid = default_tau_grid(j) if tau_grid is None else tau_grid
    spots = [(i, k) for i, k in _spot_cells(len(a_grid), n_g, spot_checks)
             if np.isfinite(cnot_amplitude_cx(a_grid[i], j))]
    checked = Parallel(n_jobs=n_jobs)(
        delayed(map_check_cnot_cell)(a_grid[i], gamma_grid[k], j, t_grid, tau_grid, step, tol) for i, k in spots)
    spot_records = []
    for (i, k), mapped in zip(spots, checked):
        rate_label = grid_cells[i][k].label
        if mapped.label != rate_label:
            logger.warn('rate and map classifications disagree at a=%g gamma=%g: %s vs %s'
                        % (a_grid[i], gamma_grid[k], rate_label, mapped.label))
        spot_records.append({'a': float(a_grid[i]), 'gamma': float(gamma_grid[k]), 'rate_label': rate_label,
                             'map_label': mapped.label, 'map_value': mapped.evidence['value']})
    return PhaseDiagram(a_grid, gamma_grid, grid_cells, spot_records, j)