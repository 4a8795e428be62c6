import numpy as np
import pytest

from fluxlab.divisibility import (
    choi, classify_cnot_cell, classify_process, cp_test, intermediate_map, p_test_qubit, pauli_rates,
    pauli_transfer, phase_diagram, rate_classify_pauli, transpose_map,
)
from fluxlab.errors import ConfigError, NotPauliDiagonal, SingularMap
from fluxlab.lindblad import ProcessMap, identity_map, propagator, vec
from fluxlab.models.cnot import CnotParams, cnot_amplitude_cx, cnot_master_equation
from fluxlab.models.thermal import thermal_qubit_master_equation
from fluxlab.tests import mark_slow


def test_choi_of_identity():
    e = vec(np.eye(2))
    assert np.allclose(choi(identity_map(2)), np.outer(e, e))
    assert cp_test(identity_map(2)).passed
    assert np.allclose(pauli_transfer(identity_map(2)), np.eye(4))


def test_transpose_is_positive_not_completely_positive():
    t = transpose_map(2)
    assert np.allclose(pauli_transfer(t), np.diag([1, 1, -1, 1]))
    p = p_test_qubit(t)
    assert p.passed
    assert np.isclose(p.value, 0.0)
    cp = cp_test(t)
    assert not cp.passed
    assert np.isclose(cp.value, -1.0)


def test_intermediate_map_recovers_semigroup_step():
    me = thermal_qubit_master_equation(1.0, gamma=0.3, beta=0.7)
    maps = propagator(me, [0.0, 0.3, 0.8])
    lam = intermediate_map(maps[2], maps[1])
    direct = propagator(me, [0.0, 0.5])[1]
    assert np.allclose(lam.matrix, direct.matrix, atol=1e-9)
    assert cp_test(lam).passed


def test_singular_map():
    with pytest.raises(SingularMap):
        intermediate_map(identity_map(2), ProcessMap(np.diag([1.0, 0.0, 0.0, 1.0]).astype(complex)))


def _constant(*values):
    return [(lambda v: (lambda t: v))(v) for v in values]


@pytest.mark.parametrize('rates, label', [
    ((1.0, 1.0, 1.0), 'PD2'),
    ((-0.2, 1.0, 1.0), 'PD1'),
    ((-1.0, 0.5, 1.0), 'PD0'),
])
def test_rate_classification(rates, label):
    grid = np.linspace(0.0, 1.0, 5)
    assert rate_classify_pauli(_constant(*rates), grid).label == label


def test_rate_classification_needs_three_rates():
    with pytest.raises(NotPauliDiagonal):
        rate_classify_pauli(_constant(1.0, 1.0), [0.0])
    with pytest.raises(NotPauliDiagonal):
        pauli_rates(thermal_qubit_master_equation(1.0, gamma=0.3, beta=0.7))


@pytest.mark.parametrize('gamma, label', [(0.1, 'PD0'), (0.4, 'PD1'), (0.6, 'PD2')])
def test_cnot_cells(gamma, label):
    cell = classify_cnot_cell(0.3, gamma)
    assert cell.label == label
    assert cell.evidence['criterion'] in ('rate', 'pairwise rate sum')


@pytest.mark.parametrize('a, label', [(0.0, 'PD2'), (1.0, 'PD2'), (0.5, 'PD0')])
def test_cnot_cell_edges(a, label):
    cell = classify_cnot_cell(a, 0.1)
    assert cell.label == label
    if a == 0.5:
        assert cell.evidence['value'] == -np.inf


@pytest.mark.parametrize('gamma, label', [(0.1, 'PD0'), (0.4, 'PD1'), (0.6, 'PD2')])
def test_map_level_classification_agrees(gamma, label):
    me = cnot_master_equation(CnotParams(a=0.3, gamma=gamma))
    t_grid = np.linspace(0.0, 2 * np.pi, 81)
    tau_grid = [np.pi / 200, np.pi / 20]
    cls = classify_process(me, t_grid, tau_grid, n_samples=512)
    assert cls.label == label
    assert cls.evidence['skipped'] == 0


def test_small_phase_diagram():
    pd = phase_diagram([0.3], [0.1, 0.4, 0.6], resolution=1001)
    assert pd.labels().tolist() == [['PD0', 'PD1', 'PD2']]
    assert pd.indices().tolist() == [[0, 1, 2]]
    assert pd.spot_checks == []
    b, = pd.boundaries()
    assert np.isclose(b['gamma_pd0_pd1'], 0.2625)
    assert np.isclose(b['gamma_pd1_pd2'], 0.525)

    with pytest.raises(ConfigError):
        phase_diagram([1.2], [0.1])
    with pytest.raises(ConfigError) as e:
        phase_diagram([0.3], [0.0])
    assert e.value.exit_code == 2


def test_phase_diagram_spot_check():
    pd = phase_diagram([0.3], [0.4], resolution=1001, spot_checks=1,
                       t_grid=np.linspace(0.0, 2 * np.pi, 41), tau_grid=[np.pi / 200])
    spot, = pd.spot_checks
    assert spot['rate_label'] == spot['map_label'] == 'PD1'


@mark_slow
@pytest.mark.parametrize('a', [0.2, 0.3, 0.4])
def test_transitions_follow_rate_amplitude(a):
    gammas = np.linspace(0.01, 1.5, 150)
    labels = np.array([classify_cnot_cell(a, g, resolution=4001).label for g in gammas])
    spacing = gammas[1] - gammas[0]
    amp = cnot_amplitude_cx(a)
    first_pd1 = gammas[np.argmax(labels != 'PD0')]
    first_pd2 = gammas[np.argmax(labels == 'PD2')]
    assert abs(first_pd1 - 0.5 * amp) <= spacing
    assert abs(first_pd2 - amp) <= spacing


def _random_channel(rs, n_kraus):
    """Superoperator of a random qubit channel from a random isometry C^2 -> C^(2 n_kraus)."""
    g = rs.randn(2 * n_kraus, 2) + 1j * rs.randn(2 * n_kraus, 2)
    v, _ = np.linalg.qr(g)
    kraus = [v[2 * k:2 * k + 2, :] for k in range(n_kraus)]
    return ProcessMap(sum(np.kron(k.conj(), k) for k in kraus))


def test_completely_positive_maps_are_positive():
    rs = np.random.RandomState(7)
    for n_kraus in (1, 2, 3, 4):
        for _ in range(10):
            pm = _random_channel(rs, n_kraus)
            assert np.isclose(pauli_transfer(pm)[0, 0], 1.0)
            cp = cp_test(pm)
            assert cp.passed
            p = p_test_qubit(pm)
            assert p.passed
            assert p.value >= -1e-12
