import json
import os

import numpy as np
import pandas as pd

from fluxlab import run as fluxrun
from fluxlab.common.artifacts import sha256_file
from fluxlab.common.math_util import loglog_slope
from fluxlab.errors import SingularMap
from fluxlab.studies.cnot_flux import FLUX_FIELDS


def _write_config(tmp_path, data, name='config.json'):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def _manifest(out):
    with open(os.path.join(out, 'manifest.json')) as f:
        return json.load(f)


SMALL_CNOT = {'parameters': {'window': 2 * np.pi, 'samples': 200, 't_min': 0.1}}


def test_cnot_flux_is_reproducible(tmp_path):
    config = _write_config(tmp_path, SMALL_CNOT)
    outs = [str(tmp_path / 'a'), str(tmp_path / 'b')]
    for out in outs:
        assert fluxrun.main(['--log-level', 'error', 'cnot-flux', '--config', config, '--out', out,
                             '--jobs', '1']) == 0

    with open(os.path.join(outs[0], 'flux.csv')) as f:
        assert f.readline().strip() == ','.join(FLUX_FIELDS)
    manifests = [_manifest(out) for out in outs]
    assert [e['name'] for e in manifests[0]['artifacts']] == ['bloch.csv', 'flux.csv']
    assert manifests[0]['config_sha256'] == manifests[1]['config_sha256']
    for name in ('flux.csv', 'bloch.csv'):
        assert sha256_file(os.path.join(outs[0], name)) == sha256_file(os.path.join(outs[1], name))

    df = pd.read_csv(os.path.join(outs[0], 'flux.csv'))
    assert len(df) == 200
    assert np.allclose(df['F_x'], df['F_Cx'] + df['F_dep_x'])
    assert np.allclose(df['F_total'], df['F_x'] + df['F_dep_y'] + df['F_dep_z'])


def test_cnot_flux_svg(tmp_path):
    config = _write_config(tmp_path, dict(SMALL_CNOT, emit_svg=True))
    out = str(tmp_path / 'svg')
    assert fluxrun.main(['--log-level', 'error', 'cnot-flux', '--config', config, '--out', out]) == 0
    names = [e['name'] for e in _manifest(out)['artifacts']]
    assert 'flux.svg' in names and 'bloch.svg' in names


def test_cnot_flux_strong_damping_on_a_coarse_grid(tmp_path, monkeypatch):
    from fluxlab.studies import cnot_flux
    calls = []
    evolve = cnot_flux.evolve_grid

    def counting_evolve(*args, **kwargs):
        calls.append(args[1])
        return evolve(*args, **kwargs)
    monkeypatch.setattr(cnot_flux, 'evolve_grid', counting_evolve)

    config = _write_config(tmp_path, {'parameters': {'gamma': 0.6, 'samples': 400}})
    out = str(tmp_path / 'coarse')
    assert fluxrun.main(['--log-level', 'error', 'cnot-flux', '--config', config, '--out', out]) == 0
    # the reported trajectory doubles as the +z half of the distance pair
    assert len(calls) == 2

    flux = pd.read_csv(os.path.join(out, 'flux.csv'))
    bloch = pd.read_csv(os.path.join(out, 'bloch.csv'))
    assert len(flux) == 400
    assert np.all(flux['F_total'] < 0)
    # unital dynamics: the +-z distance is the Bloch radius of the +z trajectory
    assert np.allclose(flux['D'], bloch['r'], atol=1e-9)


def test_invalid_parameter_exits_with_config_error(tmp_path, capsys):
    config = _write_config(tmp_path, {'parameters': {'a': 1.2}})
    assert fluxrun.main(['cnot-flux', '--config', config, '--out', str(tmp_path / 'out')]) == 2
    err = capsys.readouterr().err
    assert 'a out of [0,1]' in err
    assert 'field parameters.a' in err

    config = _write_config(tmp_path, {'parameters': {'bogus': 1}}, name='bogus.json')
    assert fluxrun.main(['cnot-flux', '--config', config, '--out', str(tmp_path / 'out')]) == 2
    assert 'parameters.bogus' in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert fluxrun.main(['protocol', '--config', str(tmp_path / 'nope.json')]) == 2


def test_protocol(tmp_path):
    out = str(tmp_path / 'protocol')
    assert fluxrun.main(['--log-level', 'error', 'protocol', '--out', out]) == 0
    scaling = pd.read_csv(os.path.join(out, 'scaling.csv'))
    slope, _ = loglog_slope(scaling['dt'].values, scaling['abs_diff'].values)
    assert abs(slope - 2.0) < 0.1
    identity = pd.read_csv(os.path.join(out, 'entropy_identity.csv'))
    assert np.all(identity['residual'] <= 1e-9)
    step = pd.read_csv(os.path.join(out, 'protocol_step.csv'))
    assert set(step['order']) == {'exact', 'first'}
    assert len(step) == 10


def test_phase_diagram(tmp_path):
    config = _write_config(tmp_path, {'parameters': {'a_grid': [0.3], 'gamma_grid': [0.1, 0.4, 0.6],
                                                     'resolution': 401, 'spot_checks': 0}})
    out = str(tmp_path / 'pd')
    assert fluxrun.main(['--log-level', 'error', 'phase-diagram', '--config', config, '--out', out]) == 0
    cells = pd.read_csv(os.path.join(out, 'phase_diagram.csv'))
    assert cells['label'].tolist() == ['PD0', 'PD1', 'PD2']
    bounds = pd.read_csv(os.path.join(out, 'boundaries.csv'))
    assert np.isclose(bounds['gamma_pd0_pd1'][0], 0.2625)
    assert np.isclose(bounds['gamma_pd1_pd2'][0], 0.525)


def test_simulate_thermal_qubit(tmp_path):
    config = _write_config(tmp_path, {'parameters': {
        'hamiltonian': 'Z',
        'channels': [{'label': 'emission', 'op': 'SM', 'rate': 0.3, 'beta': 1.0},
                     {'label': 'absorption', 'op': 'SP', 'rate': 0.1, 'beta': 1.0}],
        'initial': {'bloch': [0.8, 1.0, 0.0]},
        't1': 2.0,
        'samples': 201,
    }})
    out = str(tmp_path / 'sim')
    assert fluxrun.main(['--log-level', 'error', 'simulate', '--config', config, '--out', out]) == 0
    with open(os.path.join(out, 'state.csv')) as f:
        assert f.readline().strip() == 't,purity,entropy,x,y,z'
    energetics = pd.read_csv(os.path.join(out, 'energetics.csv'))
    assert abs(energetics['residual'][0]) < 1e-5
    flux = pd.read_csv(os.path.join(out, 'flux.csv'))
    assert {'F_emission', 'F_absorption', 'Q_emission'} <= set(flux.columns)


def test_singular_point_exit_code(tmp_path, monkeypatch):
    def singular(config, progress=False):
        raise SingularMap(1e12)
    monkeypatch.setattr(fluxrun, 'run', singular)
    assert fluxrun.main(['cnot-flux', '--out', str(tmp_path / 'out')]) == 4


def test_resolve_jobs(monkeypatch):
    monkeypatch.setenv('FLUXLAB_JOBS', '3')
    assert fluxrun.resolve_jobs() == 3
    assert fluxrun.resolve_jobs(2) == 2
    monkeypatch.delenv('FLUXLAB_JOBS')
    assert fluxrun.resolve_jobs() >= 1
