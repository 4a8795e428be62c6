"""phase-diagram: PD0/PD1/PD2 labels of the CNOT target over (a, gamma/J)."""
import numpy as np

from fluxlab import logger
from fluxlab.common import config
from fluxlab.common.plot_util import label_grid_plot
from fluxlab.divisibility import phase_diagram

CELL_FIELDS = ('a', 'gamma_over_j', 'label', 'criterion', 'value', 't')
BOUNDARY_FIELDS = ('a', 'gamma_pd0_pd1', 'gamma_pd1_pd2')
SPOT_FIELDS = ('a', 'gamma_over_j', 'rate_label', 'map_label', 'map_value', 'agree')


def build(params):
    j = config.real(params, 'j_coupling', lo=0.0, lo_open=True)
    a_grid = config.grid(params, 'a_grid')
    gamma_grid = config.grid(params, 'gamma_grid')
    if np.any(a_grid < 0) or np.any(a_grid > 1):
        raise config.ConfigError('a_grid out of [0,1]', field='parameters.a_grid')
    if np.any(gamma_grid <= 0):
        raise config.ConfigError('gamma_grid entries must be > 0', field='parameters.gamma_grid')
    return dict(j=j, a_grid=a_grid, gamma_grid=gamma_grid,
                resolution=config.integer(params, 'resolution', lo=3),
                spot_checks=config.integer(params, 'spot_checks', lo=0),
                step=config.real(params, 'step', lo=0.0, lo_open=True),
                tol=config.real(params, 'tol', lo=0.0, lo_open=True))


def run(setup, writer, n_jobs=1, progress=False):
    j = setup['j']
    pd = phase_diagram(setup['a_grid'], setup['gamma_grid'] * j, resolution=setup['resolution'], j=j,
                       spot_checks=setup['spot_checks'], n_jobs=n_jobs, step=setup['step'], progress=progress,
                       tol=setup['tol'])
    rows = []
    for a, row in zip(pd.a_grid, pd.cells):
        for g, cell in zip(pd.gamma_grid, row):
            ev = cell.evidence
            rows.append(dict(a=a, gamma_over_j=g / j, label=cell.label, criterion=ev.get('criterion'),
                             value=ev.get('value'), t=ev.get('t')))
    writer.write_csv('phase_diagram.csv', CELL_FIELDS, rows)
    writer.write_csv('boundaries.csv', BOUNDARY_FIELDS,
                     [dict(a=b['a'], gamma_pd0_pd1=b['gamma_pd0_pd1'] / j, gamma_pd1_pd2=b['gamma_pd1_pd2'] / j)
                      for b in pd.boundaries()])
    spots = [dict(s, gamma_over_j=s['gamma'] / j, agree=s['rate_label'] == s['map_label']) for s in pd.spot_checks]
    writer.write_csv('spot_checks.csv', SPOT_FIELDS, spots)

    labels = pd.labels()
    for name in ('PD0', 'PD1', 'PD2'):
        logger.logkv('cells_%s' % name, int(np.sum(labels == name)))
    logger.logkv('spot_disagreements', sum(not s['agree'] for s in spots))
    logger.dumpkvs()
    return {'labels': labels}


def plot(writer):
    label_grid_plot(writer.path('phase_diagram.csv'), writer.path('phase_diagram.svg'),
                    boundaries_csv=writer.path('boundaries.csv'))
    writer.register('phase_diagram.svg')
