"""Quantum linear algebra on small dense matrices.

Conventions: hbar = k_B = 1, entropies in nats, inverse temperature beta with
beta = 0 meaning infinite temperature. For qubits the basis index 0 is the
excited state |1> and sits on the +z pole of the Bloch sphere, so sigma_z =
diag(1, -1) and a state reads rho = (I + x sx + y sy + z sz) / 2.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import entr, logsumexp

from fluxlab.errors import ConfigError, DimMismatch, InfiniteTemperature, NotHermitian, NotPositive, NotUnitTrace

TOL = 1e-10
LOG_EPS = 1e-12
SUPPORT_EPS = 1e-12

ID2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
SP = np.array([[0, 1], [0, 0]], dtype=complex)  # |1><0|
SM = np.array([[0, 0], [1, 0]], dtype=complex)  # |0><1|
PAULIS = (SX, SY, SZ)


@dataclass(frozen=True, eq=False)
class QState:
    matrix: np.ndarray

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class HermitianOp:
    matrix: np.ndarray

    @property
    def dim(self):
        return self.matrix.shape[0]


@dataclass(frozen=True)
class BlochVector:
    r: float
    theta: float
    phi: float

    def cartesian(self):
        return self.r * np.array([np.sin(self.theta) * np.cos(self.phi),
                                  np.sin(self.theta) * np.sin(self.phi),
                                  np.cos(self.theta)])


@dataclass(frozen=True, eq=False)
class GibbsState:
    state: QState
    log_partition: float


def _square(matrix):
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimMismatch('square matrix', m.shape, what='shape')
    return m


def _matrix(x):
    return x.matrix if isinstance(x, (QState, HermitianOp)) else np.asarray(x, dtype=complex)


def make_state(matrix, tol=TOL):
    """
    Validate a density matrix.

    Eigenvalues in [-tol, 0) are clamped to zero and the trace renormalized;
    anything further out raises NotHermitian, NotUnitTrace or NotPositive.
    """
    m = _square(matrix)
    deviation = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if deviation > tol:
        raise NotHermitian(deviation)
    m = 0.5 * (m + m.conj().T)
    trace = np.trace(m).real
    if abs(trace - 1.0) > tol:
        raise NotUnitTrace(trace)
    w, v = np.linalg.eigh(m)
    if w[0] < -tol:
        raise NotPositive(w[0])
    if w[0] < 0:
        w = np.clip(w, 0.0, None)
        w = w / w.sum()
        m = (v * w) @ v.conj().T
    return QState(m)


def make_op(matrix, tol=TOL):
    m = _square(matrix)
    deviation = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if deviation > tol:
        raise NotHermitian(deviation)
    return HermitianOp(0.5 * (m + m.conj().T))


def basis_state(dim, index):
    m = np.zeros((dim, dim), dtype=complex)
    m[index, index] = 1.0
    return QState(m)


def maximally_mixed(dim):
    return QState(np.eye(dim, dtype=complex) / dim)


def tensor(*states):
    m = np.ones((1, 1), dtype=complex)
    for s in states:
        m = np.kron(m, _matrix(s))
    return QState(m)


def _check_same_dim(rho, sigma):
    if rho.dim != sigma.dim:
        raise DimMismatch(rho.dim, sigma.dim)


def von_neumann_entropy(rho):
    w = np.linalg.eigvalsh(_matrix(rho))
    return float(np.sum(entr(np.clip(w, 0.0, None))))


def purity(rho):
    m = _matrix(rho)
    return float(np.real(np.trace(m @ m)))


def relative_entropy(rho, sigma):
    """S(rho || sigma) in nats, +inf when rho has weight outside the support of sigma."""
    _check_same_dim(rho, sigma)
    ws, vs = np.linalg.eigh(sigma.matrix)
    inside = ws > SUPPORT_EPS
    if not np.all(inside):
        null = vs[:, ~inside]
        leak = np.real(np.einsum('ik,ij,jk->k', null.conj(), rho.matrix, null))
        if np.any(leak > SUPPORT_EPS):
            return np.inf
    log_sigma = (vs[:, inside] * np.log(ws[inside])) @ vs[:, inside].conj().T
    cross = np.real(np.trace(rho.matrix @ log_sigma))
    value = -von_neumann_entropy(rho) - cross
    return max(float(value), 0.0)


def trace_distance(rho, sigma):
    _check_same_dim(rho, sigma)
    w = np.linalg.eigvalsh(rho.matrix - sigma.matrix)
    return float(0.5 * np.sum(np.abs(w)))


def _parse_keep(keep):
    if keep in ('A', 'a', 0):
        return 0
    if keep in ('B', 'b', 1):
        return 1
    raise ConfigError('keep must be A or B, got %r' % (keep,), field='keep')


def partial_trace(rho_ab, dims, keep):
    da, db = dims
    if rho_ab.dim != da * db:
        raise DimMismatch(da * db, rho_ab.dim)
    t = rho_ab.matrix.reshape(da, db, da, db)
    if _parse_keep(keep) == 0:
        return QState(np.einsum('ijkj->ik', t))
    return QState(np.einsum('ijil->jl', t))


def mutual_information(rho_ab, dims):
    s_a = von_neumann_entropy(partial_trace(rho_ab, dims, 'A'))
    s_b = von_neumann_entropy(partial_trace(rho_ab, dims, 'B'))
    s_ab = von_neumann_entropy(rho_ab)
    return max(s_a + s_b - s_ab, 0.0)


def gibbs_state(h, beta):
    if not np.isfinite(beta) or beta < 0:
        raise ConfigError('beta must be finite and >= 0, got %r' % (beta,), field='beta')
    w, v = np.linalg.eigh(_matrix(h))
    x = -beta * w
    log_z = logsumexp(x)
    p = np.exp(x - log_z)
    return GibbsState(QState((v * p) @ v.conj().T), float(log_z))


def free_energy(rho, h, beta):
    if beta == 0:
        raise InfiniteTemperature('free energy')
    energy = np.real(np.trace(_matrix(rho) @ _matrix(h)))
    return float(energy - von_neumann_entropy(rho) / beta)


def bloch_components(rho):
    m = _matrix(rho)
    if m.shape != (2, 2):
        raise DimMismatch(2, m.shape[0])
    return np.array([2 * m[1, 0].real, 2 * m[1, 0].imag, (m[0, 0] - m[1, 1]).real])


def state_from_components(xyz):
    x, y, z = xyz
    return QState(0.5 * (ID2 + x * SX + y * SY + z * SZ))


def bloch_from_state(rho):
    xyz = bloch_components(rho)
    r = float(np.linalg.norm(xyz))
    if r == 0.0:
        return BlochVector(0.0, 0.0, 0.0)
    theta = float(np.arccos(np.clip(xyz[2] / r, -1.0, 1.0)))
    phi = float(np.arctan2(xyz[1], xyz[0]))
    return BlochVector(r, theta, phi)


def state_from_bloch(b):
    if b.r < 0 or b.r > 1 + TOL:
        raise NotPositive(0.5 * (1 - b.r))
    return state_from_components(b.cartesian())


def matrix_log_clamped(rho, eps=LOG_EPS):
    w, v = np.linalg.eigh(_matrix(rho))
    w = np.maximum(w, eps)
    return HermitianOp((v * np.log(w)) @ v.conj().T)


def quadratic_information(rho_eq, delta):
    """
    Second order approximant 1/2 Tr[rho_eq^-1 delta^2] of S(rho_eq + delta || rho_eq)
    for perturbations commuting with rho_eq.
    """
    d = _matrix(delta)
    inv = scipy.linalg.inv(_matrix(rho_eq))
    return float(0.5 * np.real(np.trace(inv @ d @ d)))
