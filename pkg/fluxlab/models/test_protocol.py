from dataclasses import replace

import numpy as np
import pytest

from fluxlab.errors import ConfigError, DegeneratePopulation, InvalidPopulations, NoSignal, NotProductInitial
from fluxlab.models.protocol import (
    ProtocolParams, default_params, protocol_environment, protocol_exact_step, protocol_first_order,
    protocol_initial_state, protocol_joint_state, protocol_scaling_study,
)
from fluxlab.qcore import gibbs_state, mutual_information
from fluxlab.thermoflux import bipartite_entropy_production

DTS = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4]


def test_default_params():
    p = default_params()
    assert np.isclose(p.q1_frac, 0.3 * np.exp(-1))
    assert np.isclose(p.q1_frac, 0.110364, atol=1e-6)
    assert np.isclose(p.p_b, 0.2)
    assert np.isclose(p.redundant_frac, 1 - 0.3 - p.q1_frac)


def test_environment_is_thermal():
    p = default_params()
    h_env, rho_env = protocol_environment(p)
    assert h_env.dim == 3
    assert np.allclose(rho_env.matrix, gibbs_state(h_env, p.beta).state.matrix)


def test_full_virtual_qubit_keeps_an_empty_redundant_level():
    p = ProtocolParams.thermal(e_a=1.0, e_b=0.0, p_a=0.8, beta=1.0, q0_frac=1.0 / (1.0 + np.exp(-1.0)))
    assert p.redundant_frac < 1e-12
    h_env, rho_env = protocol_environment(p)
    assert h_env.dim == 3
    assert np.allclose(np.diag(rho_env.matrix).real, [p.q1_frac, p.q0_frac, 0.0], atol=1e-12)
    assert np.allclose(rho_env.matrix, gibbs_state(h_env, p.beta).state.matrix, atol=1e-12)
    exact = protocol_exact_step(p)
    assert np.isclose(exact.p_z, protocol_first_order(p).p_z, rtol=1e-2)
    assert exact.dS_irr > 0


def test_first_order_step():
    r = protocol_first_order(default_params())
    assert np.isclose(r.p_z * 0.01, 2.179272e-3, rtol=1e-6)
    assert np.isclose(r.dQ, -2.179272e-3, rtol=1e-6)
    assert np.isclose(r.dS_sys, 3.02112e-3, rtol=1e-5)
    assert np.isclose(r.dS_irr, 5.2004e-3, rtol=1e-4)
    assert np.isclose(r.dS_env, r.dQ * -1.0)
    assert r.dI_mut == r.dS_irr


def test_exact_step_approaches_first_order():
    p = default_params()
    exact, first = protocol_exact_step(p), protocol_first_order(p)
    for name in ('p_z', 'dQ', 'dS_sys', 'dS_irr'):
        assert np.isclose(getattr(exact, name), getattr(first, name), rtol=2e-2), name
    assert exact.dI_mut > 0
    assert abs(exact.dI_mut - exact.dS_irr) < 0.05 * exact.dS_irr


@pytest.mark.parametrize('gamma', [1.0, 2.0])
def test_difference_scales_with_dt_squared(gamma):
    p = replace(default_params(), gamma=gamma)
    slope = protocol_scaling_study(p, DTS)
    assert abs(slope - 2.0) < 0.1


def test_detailed_balance_has_no_signal():
    q0 = 0.3
    q1 = q0 * np.exp(-1)
    p = ProtocolParams.thermal(e_a=1.0, e_b=0.0, p_a=q1 / (q0 + q1), beta=1.0, q0_frac=q0)
    with pytest.raises(NoSignal):
        protocol_scaling_study(p, DTS)


def test_scaling_needs_two_decades():
    with pytest.raises(ConfigError):
        protocol_scaling_study(default_params(), [1e-2, 5e-3, 2e-3, 1e-3])


def test_invalid_params():
    with pytest.raises(InvalidPopulations):
        ProtocolParams.thermal(e_a=0.0, e_b=1.0, p_a=0.8, beta=1.0, q0_frac=0.3)
    with pytest.raises(InvalidPopulations):
        ProtocolParams(e_a=1.0, e_b=0.0, p_a=0.8, beta=1.0, q1_frac=0.2, q0_frac=0.3)
    with pytest.raises(InvalidPopulations):
        ProtocolParams.thermal(e_a=1.0, e_b=0.0, p_a=1.3, beta=1.0, q0_frac=0.3)
    with pytest.raises(DegeneratePopulation):
        protocol_first_order(ProtocolParams.thermal(e_a=1.0, e_b=0.0, p_a=1.0, beta=1.0, q0_frac=0.3))


@pytest.mark.parametrize('t', [0.1, 0.5, 1.0])
def test_entropy_production_identity(t):
    p = default_params()
    h_env, _ = protocol_environment(p)
    rho0 = protocol_initial_state(p)
    rho_t = protocol_joint_state(p, t)
    out = bipartite_entropy_production(rho_t, rho0, (2, h_env.dim), h_env, p.beta)
    assert out['residual'] <= 1e-9
    assert out['delta_S_irr'] > 0
    assert np.isclose(out['env_neq_0'], 0.0, atol=1e-12)
    assert mutual_information(rho_t, (2, h_env.dim)) > 0

    with pytest.raises(NotProductInitial):
        bipartite_entropy_production(rho_t, rho_t, (2, h_env.dim), h_env, p.beta)
