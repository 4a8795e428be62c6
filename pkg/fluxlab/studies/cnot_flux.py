"""cnot-flux: per-channel information fluxes of the CNOT target qubit."""
import numpy as np

from fluxlab import logger
from fluxlab.common import config
from fluxlab.common.math_util import sign_runs
from fluxlab.common.plot_util import line_plot
from fluxlab.lindblad import evolve_grid
from fluxlab.measures import distance_series, sign_report
from fluxlab.models.cnot import CHANNEL_LABELS, CnotParams, cnot_initial_state, cnot_master_equation
from fluxlab.qcore import basis_state, bloch_components
from fluxlab.thermoflux import flux_trajectory

FLUX_FIELDS = (('t',) + tuple('F_%s' % k for k in CHANNEL_LABELS)
               + ('F_x', 'F_dep', 'F_total', 'D', 'dD_dt', 'Q_cum', 'S_irr_cum', 'dS_sys'))
BLOCH_FIELDS = ('t', 'x', 'y', 'z', 'r')
POSITIVE_FLUX = 1e-6


def build(params):
    try:
        p = CnotParams(a=config.real(params, 'a'), gamma=config.real(params, 'gamma'),
                       j_coupling=config.real(params, 'j_coupling'), theta0=config.real(params, 'theta0'),
                       phi0=config.real(params, 'phi0'), r0=config.real(params, 'r0'))
    except config.ConfigError as e:
        raise config.as_config_error(e)
    t_min = config.real(params, 't_min', lo=0.0)
    window = config.real(params, 'window', lo=0.0, lo_open=True)
    if window / p.j_coupling <= t_min:
        raise config.ConfigError('window / j_coupling must exceed t_min', field='parameters.window')
    return dict(params=p, t_min=t_min, t_max=window / p.j_coupling,
                samples=config.integer(params, 'samples', lo=2),
                step=config.real(params, 'step', lo=0.0, lo_open=True))


def time_grid(t_min, t_max, samples):
    """Reported samples on [t_min, t_max], integration from t = 0."""
    grid = np.linspace(t_min, t_max, samples)
    if t_min > 0:
        grid = np.concatenate([[0.0], grid])
    return grid


def run(setup, writer, n_jobs=1, progress=False):
    p, t_min, step = setup['params'], setup['t_min'], setup['step']
    me = cnot_master_equation(p)
    rho0 = cnot_initial_state(p)
    grid = time_grid(t_min, setup['t_max'], setup['samples'])

    traj = evolve_grid(me, rho0, grid, step)
    states = traj.states
    samples = flux_trajectory(me, rho0, grid, t_min=t_min, step=step, traj=traj)
    from_up = p.r0 == 1.0 and p.theta0 == 0.0
    up = states if from_up else evolve_grid(me, basis_state(2, 0), grid, step).states
    series = distance_series(grid, up, evolve_grid(me, basis_state(2, 1), grid, step).states)
    offset = len(grid) - len(samples)

    flux_rows, bloch_rows = [], []
    for k, s in enumerate(samples):
        f = s.fluxes()
        row = dict(t=s.t, F_total=s.total_flux, D=series.D[offset + k], dD_dt=series.dD_dt[offset + k],
                   Q_cum=s.cumulative_heat, S_irr_cum=s.cumulative_entropy_production, dS_sys=s.entropy_change,
                   F_x=f['Cx'] + f['dep_x'], F_dep=f['dep_x'] + f['dep_y'] + f['dep_z'])
        row.update(('F_%s' % label, v) for label, v in f.items())
        flux_rows.append(row)
        x, y, z = bloch_components(states[offset + k])
        bloch_rows.append(dict(t=s.t, x=x, y=y, z=z, r=float(np.sqrt(x * x + y * y + z * z))))
    writer.write_csv('flux.csv', FLUX_FIELDS, flux_rows)
    writer.write_csv('bloch.csv', BLOCH_FIELDS, bloch_rows)

    total = np.array([r['F_total'] for r in flux_rows])
    logger.logkv('max_F_total', float(total.max()))
    logger.logkv('positive_flux_intervals', len(sign_runs(total, POSITIVE_FLUX)))
    if from_up:
        check = sign_report(grid[offset:], total, series.D[offset:], series.dD_dt[offset:], t_min)
        logger.logkv('sign_agreement', check.agreement)
        if check.violations:
            logger.warn('flux and distance rate disagree in sign at %d samples' % len(check.violations))
    logger.dumpkvs()
    return {'max_F_total': float(total.max())}


def plot(writer):
    line_plot(writer.path('flux.csv'), writer.path('flux.svg'), x='t', ys=['F_Cx', 'F_x', 'F_dep', 'F_total'],
              xlabel='t', ylabel='information flux', hline=0.0)
    line_plot(writer.path('bloch.csv'), writer.path('bloch.svg'), x='t', ys=['x', 'y', 'z', 'r'], xlabel='t')
    writer.register('flux.svg')
    writer.register('bloch.svg')
