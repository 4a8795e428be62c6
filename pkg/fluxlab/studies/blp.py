"""blp: trace-distance non-Markovianity of the CNOT target along a gamma/J line."""
import pandas as pd

from fluxlab import logger
from fluxlab.common import config
from fluxlab.common.plot_util import line_plot
from fluxlab.divisibility import classify_cnot_cell
from fluxlab.measures import blp_scan
from fluxlab.models.cnot import CnotParams


def build(params):
    try:
        p = CnotParams(a=config.real(params, 'a'), gamma=0.0, j_coupling=config.real(params, 'j_coupling'))
    except config.ConfigError as e:
        raise config.as_config_error(e)
    resolution = params['resolution']
    if (not isinstance(resolution, list) or len(resolution) != 2
            or not all(isinstance(n, int) and not isinstance(n, bool) and n >= 2 for n in resolution)):
        raise config.ConfigError('resolution must be two integers >= 2 (theta, phi)', field='parameters.resolution')
    return dict(a=p.a, j=p.j_coupling,
                gammas=config.real_list(params, 'gammas', lo=0.0, lo_open=True),
                horizon=config.real(params, 'horizon', lo=0.0, lo_open=True),
                step=config.real(params, 'step', lo=0.0, lo_open=True),
                samples_per_period=config.integer(params, 'samples_per_period', lo=4),
                optimize=config.flag(params, 'optimize'),
                resolution=tuple(resolution))


def fields(optimize):
    return ('gamma_over_j', 'blp_pm_z') + (('blp_opt',) if optimize else ()) + ('pd_class',)


def run(setup, writer, n_jobs=1, progress=False):
    a, j = setup['a'], setup['j']
    gammas = setup['gammas'] * j
    rows = blp_scan(gammas, a, j, horizon=setup['horizon'], step=setup['step'], optimize=setup['optimize'],
                    resolution=setup['resolution'], n_jobs=n_jobs, samples_per_period=setup['samples_per_period'])
    for row, g in zip(rows, gammas):
        row['pd_class'] = classify_cnot_cell(a, g, j).label
        logger.logkv('blp_pm_z@%g' % row['gamma_over_j'], row['blp_pm_z'])
    writer.write_csv('blp.csv', fields(setup['optimize']), rows)
    logger.dumpkvs()
    return {'rows': rows}


def plot(writer):
    cols = [c for c in pd.read_csv(writer.path('blp.csv'), nrows=0).columns if c.startswith('blp_')]
    line_plot(writer.path('blp.csv'), writer.path('blp.svg'), x='gamma_over_j', ys=cols, xlabel='gamma / J',
              ylabel='BLP', markers=True)
    writer.register('blp.svg')
