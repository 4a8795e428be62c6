"""Default parameters of every command (hbar = k_B = 1, times in units of 1/J or 1/gamma).

Config files override these key by key; a key missing here is rejected.
"""
import numpy as np


def protocol():
    return dict(
        e_a=1.0,
        e_b=0.0,
        p_a=0.8,
        beta=1.0,
        q0_frac=0.3,
        q1_frac=None,  # None: from the Boltzmann ratio
        gamma=1.0,
        dts=[1e-2, 3e-3, 1e-3, 3e-4, 1e-4],
        identity_times=[0.1, 0.5, 1.0],
    )


def cnot_flux():
    return dict(
        a=0.3,
        gamma=0.1,
        j_coupling=1.0,
        theta0=0.0,
        phi0=0.0,
        r0=1.0,
        t_min=0.01,
        window=4 * np.pi,
        samples=4000,
        step=1e-3,
    )


def phase_diagram():
    return dict(
        j_coupling=1.0,
        a_grid=dict(start=0.0, stop=1.0, num=41),
        gamma_grid=dict(start=0.0125, stop=1.0, num=80),
        resolution=2001,
        spot_checks=8,
        step=1e-3,
        tol=1e-7,
    )


def blp():
    return dict(
        a=0.3,
        j_coupling=1.0,
        gammas=[0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.6],
        horizon=12.0,
        step=5e-3,
        samples_per_period=64,
        optimize=True,
        resolution=[12, 24],
    )


def simulate():
    return dict(
        dim=2,
        hamiltonian=None,
        channels=[],
        initial=None,  # None: basis state 0; else {"bloch": [r, theta, phi]}, {"basis": k} or {"matrix": ...}
        t0=0.0,
        t1=10.0,
        samples=1001,
        step=1e-3,
        t_min=0.01,
        energetics=True,
    )


# per-item defaults of list entries
def simulate_channel():
    return dict(label=None, op=None, op_j=None, rate=0.0, beta=0.0)


def simulate_hamiltonian_term():
    return dict(op=None, coefficient=1.0)
