"""protocol: one thermalization step of a qubit with a virtual qubit, and its dt scaling."""
from dataclasses import replace

import numpy as np

from fluxlab import logger
from fluxlab.common import config
from fluxlab.common.math_util import loglog_slope
from fluxlab.common.plot_util import line_plot
from fluxlab.errors import FluxlabError
from fluxlab.models.protocol import (
    ProtocolParams, protocol_environment, protocol_exact_step, protocol_first_order, protocol_initial_state,
    protocol_joint_state, protocol_scaling_study,
)
from fluxlab.thermoflux import bipartite_entropy_production

STEP_FIELDS = ('dt', 'order', 'dQ', 'dS_sys', 'dS_env', 'dI_mut', 'dS_irr', 'p_z')
SCALING_FIELDS = ('dt', 'dI_mut', 'dS_irr', 'abs_diff', 'fit')
IDENTITY_FIELDS = ('t', 'delta_S_irr', 'mutual_info', 'env_neq_t', 'env_neq_0', 'heat', 'residual')


def build(params):
    kw = dict(e_a=config.real(params, 'e_a'), e_b=config.real(params, 'e_b'),
              p_a=config.real(params, 'p_a', lo=0.0, hi=1.0), beta=config.real(params, 'beta', lo=0.0, lo_open=True),
              q0_frac=config.real(params, 'q0_frac', lo=0.0, hi=1.0, lo_open=True),
              gamma=config.real(params, 'gamma', lo=0.0, lo_open=True))
    q1 = config.real(params, 'q1_frac', lo=0.0, hi=1.0, optional=True)
    dts = config.real_list(params, 'dts', lo=0.0, lo_open=True, min_len=4)
    times = config.real_list(params, 'identity_times', lo=0.0, lo_open=True)
    try:
        if q1 is None:
            p = ProtocolParams.thermal(dt=float(dts[0]), **kw)
        else:
            p = ProtocolParams(q1_frac=q1, dt=float(dts[0]), **kw)
    except FluxlabError as e:
        raise config.as_config_error(e)
    if dts.max() / dts.min() < 100 * (1 - 1e-9):
        raise config.ConfigError('dts must span at least two decades', field='parameters.dts')
    return dict(params=p, dts=np.sort(dts)[::-1], identity_times=times)


def _step_row(dt, order, r):
    return dict(dt=dt, order=order, dQ=r.dQ, dS_sys=r.dS_sys, dS_env=r.dS_env, dI_mut=r.dI_mut, dS_irr=r.dS_irr,
                p_z=r.p_z)


def run(setup, writer, n_jobs=1, progress=False):
    p, dts = setup['params'], setup['dts']
    step_rows, scaling_rows, diffs = [], [], []
    for dt in dts:
        q = replace(p, dt=float(dt))
        exact = protocol_exact_step(q)
        step_rows.append(_step_row(dt, 'exact', exact))
        step_rows.append(_step_row(dt, 'first', protocol_first_order(q)))
        diffs.append(abs(exact.dI_mut - exact.dS_irr))
        scaling_rows.append(dict(dt=dt, dI_mut=exact.dI_mut, dS_irr=exact.dS_irr, abs_diff=diffs[-1]))

    slope = protocol_scaling_study(p, dts)
    _, intercept = loglog_slope(dts, diffs)
    for row in scaling_rows:
        row['fit'] = float(np.exp(intercept) * row['dt'] ** slope)

    h_env, _ = protocol_environment(p)
    dims = (2, h_env.dim)
    rho0 = protocol_initial_state(p)
    identity_rows = []
    for t in setup['identity_times']:
        rho_t = protocol_joint_state(p, t / p.gamma)
        identity_rows.append(dict(t=t / p.gamma, **bipartite_entropy_production(rho_t, rho0, dims, h_env, p.beta)))

    writer.write_csv('protocol_step.csv', STEP_FIELDS, step_rows)
    writer.write_csv('scaling.csv', SCALING_FIELDS, scaling_rows)
    writer.write_csv('entropy_identity.csv', IDENTITY_FIELDS, identity_rows)

    logger.logkv('q1_frac', p.q1_frac)
    logger.logkv('scaling_slope', slope)
    logger.logkv('max_identity_residual', max(r['residual'] for r in identity_rows))
    logger.dumpkvs()
    return {'slope': slope}


def plot(writer):
    line_plot(writer.path('scaling.csv'), writer.path('scaling.svg'), x='dt', ys=['abs_diff', 'fit'],
              xlabel='dt', ylabel='|dI_mut - dS_irr|', logx=True, logy=True, markers=True)
    writer.register('scaling.svg')
