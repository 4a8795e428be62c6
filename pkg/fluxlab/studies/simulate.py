"""simulate: fluxes and energetics of a master equation given entirely in the config.

    "hamiltonian": "Z" | [[...]] | {"re": ..., "im": ...}
                   | [{"op": "Z", "coefficient": {"kind": "sine", ...}}, ...]
    "channels":    [{"label": "decay", "op": "SM", "rate": 0.1, "beta": 1.0}, ...]
"""
import numpy as np
import pandas as pd

from fluxlab import logger
from fluxlab.common import config
from fluxlab.common.plot_util import line_plot
from fluxlab.common.schedules import ConstantSchedule
from fluxlab.errors import ConfigError, FluxlabError, MixedTemperatures
from fluxlab.lindblad import Channel, MasterEquation, evolve_grid
from fluxlab.qcore import (
    BlochVector, basis_state, bloch_components, make_state, purity, state_from_bloch, von_neumann_entropy,
)
from fluxlab.thermoflux import energetics_report, flux_trajectory

ENERGETICS_FIELDS = ('delta_I_neq', 'delta_S_irr', 'irr_work_over_kT', 'residual', 'heat', 'work', 'beta')


def _hamiltonian(value, dim):
    path = 'parameters.hamiltonian'
    if value is None:
        return None
    if isinstance(value, list) and value and all(isinstance(e, dict) for e in value):
        terms = []
        for i, term in enumerate(value):
            where = '%s[%d]' % (path, i)
            terms.append((config.matrix(term['op'], where + '.op', dim),
                          config.schedule(term['coefficient'], where + '.coefficient')))
        if all(isinstance(c, ConstantSchedule) for _, c in terms):
            return sum(c.value(0.0) * op for op, c in terms)

        def hamiltonian(t):
            return sum(c(t) * op for op, c in terms)
        return hamiltonian
    return config.matrix(value, path, dim)


def _channels(value, dim):
    if not isinstance(value, list):
        raise ConfigError('channels must be a list', field='parameters.channels')
    out = []
    for i, ch in enumerate(value):
        where = 'parameters.channels[%d]' % i
        if not isinstance(ch, dict):
            raise ConfigError('channel must be an object', field=where)
        label = ch['label'] if ch['label'] is not None else 'ch%d' % i
        if any(c.label == label for c in out):
            raise ConfigError('duplicate channel label %r' % label, field=where + '.label')
        if ch['op'] is None:
            raise ConfigError('channel needs an operator', field=where + '.op')
        a_j = None if ch['op_j'] is None else config.matrix(ch['op_j'], where + '.op_j', dim)
        out.append(Channel(label=str(label), a_i=config.matrix(ch['op'], where + '.op', dim), a_j=a_j,
                           rate=config.schedule(ch['rate'], where + '.rate'),
                           beta=config.real(ch, 'beta', where, lo=0.0)))
    return tuple(out)


def _initial(value, dim):
    path = 'parameters.initial'
    if value is None:
        return basis_state(dim, 0)
    if not isinstance(value, dict) or len(value) != 1:
        raise ConfigError('initial must be null or one of {"bloch"}, {"basis"}, {"matrix"}', field=path)
    kind, v = next(iter(value.items()))
    if kind == 'bloch':
        if dim != 2 or not isinstance(v, list) or len(v) != 3:
            raise ConfigError('bloch initial state needs dim 2 and [r, theta, phi]', field=path + '.bloch')
        r, theta, phi = (config.real({'v': e}, 'v', path + '.bloch') for e in v)
        if not 0.0 <= r <= 1.0:
            raise ConfigError('r out of [0,1]: %r' % r, field=path + '.bloch')
        return state_from_bloch(BlochVector(r, theta, phi))
    if kind == 'basis':
        k = config.integer(value, 'basis', path, lo=0)
        if k >= dim:
            raise ConfigError('basis index %d out of range for dim %d' % (k, dim), field=path + '.basis')
        return basis_state(dim, k)
    if kind == 'matrix':
        return make_state(config.matrix(v, path + '.matrix', dim))
    raise ConfigError('unknown initial state kind %r' % kind, field=path)


def build(params):
    dim = config.integer(params, 'dim', lo=1)
    try:
        me = MasterEquation(dim=dim, hamiltonian=_hamiltonian(params['hamiltonian'], dim),
                            channels=_channels(params['channels'], dim))
        rho0 = _initial(params['initial'], dim)
    except (FluxlabError, ValueError) as e:
        raise config.as_config_error(e)
    t0 = config.real(params, 't0')
    t1 = config.real(params, 't1')
    if t1 <= t0:
        raise ConfigError('t1 must exceed t0', field='parameters.t1')
    return dict(me=me, rho0=rho0, t0=t0, t1=t1, samples=config.integer(params, 'samples', lo=2),
                step=config.real(params, 'step', lo=0.0, lo_open=True),
                t_min=config.real(params, 't_min', lo=0.0), energetics=config.flag(params, 'energetics'))


def flux_fields(labels):
    out = ['t']
    for label in labels:
        out += ['Q_%s' % label, 'F_%s' % label]
    return out + ['F_total', 'Q_cum', 'S_irr_cum', 'dS_sys']


def state_fields(dim):
    return ['t', 'purity', 'entropy'] + (['x', 'y', 'z'] if dim == 2 else [])


def run(setup, writer, n_jobs=1, progress=False):
    me, rho0, step = setup['me'], setup['rho0'], setup['step']
    grid = np.linspace(setup['t0'], setup['t1'], setup['samples'])
    samples = flux_trajectory(me, rho0, grid, t_min=setup['t_min'], step=step)
    rows = []
    for s in samples:
        row = dict(t=s.t, F_total=s.total_flux, Q_cum=s.cumulative_heat, S_irr_cum=s.cumulative_entropy_production,
                   dS_sys=s.entropy_change)
        for label, heat, _, flux in s.per_channel:
            row['Q_%s' % label] = heat
            row['F_%s' % label] = flux
        rows.append(row)
    labels = [ch.label for ch in me.channels]
    writer.write_csv('flux.csv', flux_fields(labels), rows)

    traj = evolve_grid(me, rho0, grid, step)
    state_rows = []
    for t, rho in zip(traj.times, traj.states):
        row = dict(t=t, purity=purity(rho), entropy=von_neumann_entropy(rho))
        if me.dim == 2:
            row.update(zip('xyz', bloch_components(rho)))
        state_rows.append(row)
    writer.write_csv('state.csv', state_fields(me.dim), state_rows)

    if setup['energetics']:
        try:
            rep = energetics_report(me, rho0, setup['t0'], setup['t1'], step)
        except MixedTemperatures as e:
            logger.warn('energetics skipped: %s' % e)
        else:
            writer.write_csv('energetics.csv', ENERGETICS_FIELDS,
                             [dict(delta_I_neq=rep.delta_I_neq, delta_S_irr=rep.delta_S_irr,
                                   irr_work_over_kT=rep.irr_work_over_kT, residual=rep.residual,
                                   heat=rep.extra['heat'], work=rep.extra['work'], beta=rep.extra['beta'])])
            logger.logkv('energetics_residual', rep.residual)
    if rows:
        logger.logkv('final_S_irr', rows[-1]['S_irr_cum'])
    logger.dumpkvs()
    return {'samples': len(rows)}


def plot(writer):
    cols = [c for c in pd.read_csv(writer.path('flux.csv'), nrows=0).columns if c.startswith('F_')]
    line_plot(writer.path('flux.csv'), writer.path('flux.svg'), x='t', ys=cols, xlabel='t',
              ylabel='information flux', hline=0.0)
    writer.register('flux.svg')
