"""Time-dependent Lindblad master equations.

    d rho / dt = -i [H(t), rho] + sum_k gamma_k(t) R_k{rho}
    R_k{rho}   = A_i rho A_j^dag - 1/2 {A_j^dag A_i, rho}

Operators are vectorized by stacking columns, vec(A X B) = (B^T kron A) vec(X),
and the same convention is used by the Choi construction in divisibility.
Integration is fixed-step RK4 with rates and Hamiltonians evaluated exactly
at the stage times.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from fluxlab import logger
from fluxlab.common.schedules import as_schedule
from fluxlab.errors import ConfigError, DimMismatch, InvalidGrid, NotPauliDiagonal, PositivityLost
from fluxlab.qcore import PAULIS, HermitianOp, QState

DEFAULT_STEP = 1e-3
POSITIVITY_TOL = 1e-6
TRACE_DRIFT_LOG = 1e-12
PAULI_DIAG_TOL = 1e-12


def vec(m):
    return np.asarray(m).reshape(-1, order='F')


def unvec(v, dim=None):
    dim = dim or int(round(np.sqrt(v.shape[0])))
    return np.asarray(v).reshape(dim, dim, order='F')


def _as_matrix(x):
    if isinstance(x, (QState, HermitianOp)):
        return x.matrix
    return np.asarray(x, dtype=complex)


def dissipator_superop(a_i, a_j):
    a_i = np.asarray(a_i, dtype=complex)
    a_j = np.asarray(a_j, dtype=complex)
    eye = np.eye(a_i.shape[0])
    jdag_i = a_j.conj().T @ a_i
    return np.kron(a_j.conj(), a_i) - 0.5 * np.kron(eye, jdag_i) - 0.5 * np.kron(jdag_i.T, eye)


def hamiltonian_superop(h):
    h = _as_matrix(h)
    eye = np.eye(h.shape[0])
    return -1j * (np.kron(eye, h) - np.kron(h.T, eye))


@dataclass(frozen=True, eq=False)
class Channel:
    """One dissipation channel: jump pair (A_i, A_j), rate gamma(t) and inverse temperature beta."""
    label: str
    a_i: np.ndarray
    rate: Callable
    a_j: Optional[np.ndarray] = None
    beta: float = 0.0
    superop: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        a_i = np.asarray(self.a_i, dtype=complex)
        a_j = a_i if self.a_j is None else np.asarray(self.a_j, dtype=complex)
        if a_i.shape != a_j.shape or a_i.ndim != 2 or a_i.shape[0] != a_i.shape[1]:
            raise DimMismatch(a_i.shape, a_j.shape, what='jump operator shape')
        if self.beta < 0 or not np.isfinite(self.beta):
            raise ConfigError('channel %s: beta must be finite and >= 0, got %r' % (self.label, self.beta), field='beta')
        object.__setattr__(self, 'a_i', a_i)
        object.__setattr__(self, 'a_j', a_j)
        object.__setattr__(self, 'rate', as_schedule(self.rate))
        object.__setattr__(self, 'superop', dissipator_superop(a_i, a_j))

    @property
    def dim(self):
        return self.a_i.shape[0]

    def kossakowski_entry(self, t):
        return float(self.rate(t))

    def pauli_axis(self):
        """(axis, weight) with A_i = A_j = c sigma_axis and weight |c|^2."""
        if self.dim != 2 or not np.allclose(self.a_i, self.a_j, atol=PAULI_DIAG_TOL):
            raise NotPauliDiagonal('channel %s has distinct jump operators' % self.label)
        for k, s in enumerate(PAULIS):
            c = 0.5 * np.trace(s @ self.a_i)
            if abs(c) > PAULI_DIAG_TOL and np.allclose(self.a_i, c * s, atol=PAULI_DIAG_TOL):
                return k, float(abs(c) ** 2)
        raise NotPauliDiagonal('channel %s is not a single Pauli operator' % self.label)


def _zero_hamiltonian(dim):
    h = np.zeros((dim, dim), dtype=complex)
    return lambda t: h


@dataclass(frozen=True, eq=False)
class MasterEquation:
    """
    Generator -i[H(t), .] + sum of channels.

    hamiltonian is a callable t -> matrix (or HermitianOp), a constant matrix,
    or None for H = 0. hamiltonian_derivative, when given, is used for work
    rates instead of a numerical derivative.
    """
    dim: int
    hamiltonian: Optional[Callable] = None
    channels: Tuple[Channel, ...] = ()
    hamiltonian_derivative: Optional[Callable] = None
    static_hamiltonian: bool = field(init=False, repr=False, default=False)
    _h_superop: Optional[np.ndarray] = field(init=False, repr=False, default=None)

    def __post_init__(self):
        channels = tuple(self.channels)
        for ch in channels:
            if ch.dim != self.dim:
                raise DimMismatch(self.dim, ch.dim, what='channel %s dimension' % ch.label)
        object.__setattr__(self, 'channels', channels)
        h = self.hamiltonian
        if h is None:
            h = _zero_hamiltonian(self.dim)
            object.__setattr__(self, 'static_hamiltonian', True)
        elif not callable(h):
            m = _as_matrix(h)
            if m.shape != (self.dim, self.dim):
                raise DimMismatch(self.dim, m.shape[0], what='Hamiltonian dimension')
            h = (lambda m: (lambda t: m))(m)
            object.__setattr__(self, 'static_hamiltonian', True)
        object.__setattr__(self, 'hamiltonian', h)
        if self.static_hamiltonian:
            object.__setattr__(self, '_h_superop', hamiltonian_superop(h(0.0)))

    def h(self, t):
        return _as_matrix(self.hamiltonian(t))

    def rates(self, t):
        return np.array([ch.rate(t) for ch in self.channels], dtype=float)

    def betas(self):
        return [ch.beta for ch in self.channels]

    def kossakowski(self, t):
        """Diagonal (x, y, z) of the rate matrix of a Pauli-diagonal qubit equation."""
        if self.dim != 2:
            raise NotPauliDiagonal('Kossakowski diagonal needs a qubit, got dim %d' % self.dim)
        out = np.zeros(3)
        for ch in self.channels:
            k, w = ch.pauli_axis()
            out[k] += w * ch.kossakowski_entry(t)
        return out


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: list

    def matrices(self):
        return np.stack([s.matrix for s in self.states])

    def __len__(self):
        return len(self.times)


@dataclass(frozen=True, eq=False)
class ProcessMap:
    """Linear map on column-stacked operators."""
    matrix: np.ndarray

    @property
    def dim(self):
        return int(round(np.sqrt(self.matrix.shape[0])))


def identity_map(dim):
    return ProcessMap(np.eye(dim * dim, dtype=complex))


def compose(later, earlier):
    return ProcessMap(later.matrix @ earlier.matrix)


def apply_map(pm, rho):
    m = _as_matrix(rho)
    if m.shape[0] != pm.dim:
        raise DimMismatch(pm.dim, m.shape[0])
    return QState(unvec(pm.matrix @ vec(m), pm.dim))


def trace_preservation_error(pm):
    """max |vec(I)^dag E - vec(I)^dag|, zero for trace preserving maps."""
    vi = vec(np.eye(pm.dim))
    return float(np.max(np.abs(vi @ pm.matrix - vi)))


def _check_dim(me, m):
    if m.shape != (me.dim, me.dim):
        raise DimMismatch(me.dim, m.shape[0])


def dissipator(ch, rho):
    m = _as_matrix(rho)
    if m.shape != (ch.dim, ch.dim):
        raise DimMismatch(ch.dim, m.shape[0])
    jdag_i = ch.a_j.conj().T @ ch.a_i
    return ch.a_i @ m @ ch.a_j.conj().T - 0.5 * (jdag_i @ m + m @ jdag_i)


def rhs(me, t, rho):
    m = _as_matrix(rho)
    _check_dim(me, m)
    h = me.h(t)
    out = -1j * (h @ m - m @ h)
    for ch in me.channels:
        out = out + ch.rate(t) * dissipator(ch, m)
    return out


def liouvillian(me, t):
    if me.static_hamiltonian:
        L = me._h_superop.copy()
    else:
        L = hamiltonian_superop(me.h(t))
    for ch in me.channels:
        L += ch.rate(t) * ch.superop
    return L


def _rk4(me, x, t, h):
    l0 = liouvillian(me, t)
    lm = liouvillian(me, t + 0.5 * h)
    l1 = liouvillian(me, t + h)
    k1 = l0 @ x
    k2 = lm @ (x + 0.5 * h * k1)
    k3 = lm @ (x + 0.5 * h * k2)
    k4 = l1 @ (x + h * k3)
    return x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def _substeps(t0, t1, step):
    return max(1, int(np.ceil((t1 - t0) / step - 1e-9)))


def _renormalize(m, t):
    m = 0.5 * (m + m.conj().T)
    trace = np.trace(m).real
    drift = abs(trace - 1.0)
    if drift > TRACE_DRIFT_LOG:
        logger.debug('trace drift %.3e renormalized at t=%.6g' % (drift, t))
    m = m / trace
    w_min = np.linalg.eigvalsh(m)[0]
    if w_min < -POSITIVITY_TOL:
        raise PositivityLost(t, w_min)
    return m


def evolve_grid(me, rho0, grid, step=DEFAULT_STEP):
    """
    Integrate from grid[0] and return the states on the grid.

    Each grid interval is split into equal substeps no longer than step.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 1:
        raise InvalidGrid('must be a non-empty 1d array')
    if np.any(np.diff(grid) <= 0):
        raise InvalidGrid('must be strictly increasing')
    if step <= 0:
        raise InvalidGrid('step must be positive, got %r' % (step,))
    m = _as_matrix(rho0)
    _check_dim(me, m)
    x = vec(m)
    states = [QState(m.copy())]
    for t0, t1 in zip(grid[:-1], grid[1:]):
        n = _substeps(t0, t1, step)
        h = (t1 - t0) / n
        for k in range(n):
            x = _rk4(me, x, t0 + k * h, h)
        m = _renormalize(unvec(x, me.dim), t1)
        x = vec(m)
        states.append(QState(m))
    return Trajectory(grid, states)


def evolve(me, rho0, t0, t1, step=DEFAULT_STEP):
    if t1 <= t0:
        raise InvalidGrid('need t1 > t0, got [%r, %r]' % (t0, t1))
    if step <= 0:
        raise InvalidGrid('step must be positive, got %r' % (step,))
    n = _substeps(t0, t1, step)
    return evolve_grid(me, rho0, np.linspace(t0, t1, n + 1), step)


def propagator(me, times, step=DEFAULT_STEP):
    """Dynamical maps E_{t,0} on the grid, obtained by evolving the operator basis."""
    times = np.asarray(times, dtype=float)
    if times[0] != 0:
        raise InvalidGrid('propagator grid must start at 0, got %r' % (times[0],))
    if np.any(np.diff(times) <= 0):
        raise InvalidGrid('must be strictly increasing')
    d2 = me.dim * me.dim
    e = np.eye(d2, dtype=complex)
    maps = [ProcessMap(e.copy())]
    for t0, t1 in zip(times[:-1], times[1:]):
        n = _substeps(t0, t1, step)
        h = (t1 - t0) / n
        for k in range(n):
            e = _rk4(me, e, t0 + k * h, h)
        maps.append(ProcessMap(e.copy()))
    return maps
