"""Qubit H = (omega/2) sz exchanging quanta with a bath at inverse temperature beta.

Emission (sigma_-) at rate gamma (n + 1) and absorption (sigma_+) at rate
gamma n with n = 1/(exp(beta omega) - 1) keep the Gibbs state fixed. omega
may be a schedule, in which case the rates follow the instantaneous splitting.
"""
import numpy as np

from fluxlab.common.schedules import ConstantSchedule, as_schedule
from fluxlab.errors import InfiniteTemperature
from fluxlab.lindblad import Channel, MasterEquation
from fluxlab.qcore import SM, SP, SZ


def bose_occupation(omega, beta):
    return 1.0 / np.expm1(beta * omega)


def thermal_qubit_master_equation(omega, gamma, beta):
    if beta <= 0:
        raise InfiniteTemperature('thermal qubit bath')
    omega = as_schedule(omega)
    static = isinstance(omega, ConstantSchedule)

    def emission(t):
        return gamma * (bose_occupation(omega(t), beta) + 1.0)

    def absorption(t):
        return gamma * bose_occupation(omega(t), beta)

    channels = (
        Channel(label='emission', a_i=SM, rate=ConstantSchedule(emission(0.0)) if static else emission, beta=beta),
        Channel(label='absorption', a_i=SP, rate=ConstantSchedule(absorption(0.0)) if static else absorption,
                beta=beta),
    )
    if static:
        hamiltonian = 0.5 * omega(0.0) * SZ
    else:
        def hamiltonian(t):
            return 0.5 * omega(t) * SZ
    return MasterEquation(dim=2, hamiltonian=hamiltonian, channels=channels)