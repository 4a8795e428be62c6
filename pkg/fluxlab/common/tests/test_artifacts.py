import json
import os

import numpy as np

from fluxlab.common.artifacts import ArtifactWriter, canonical_json, format_value, sha256_file


def test_format_value():
    assert format_value(None) == ''
    assert format_value(True) == 'true'
    assert format_value(np.bool_(False)) == 'false'
    assert format_value(np.int64(3)) == '3'
    assert format_value(0.1 + 0.2) == '0.3'
    assert format_value(np.float64(1e-20)) == '1e-20'
    assert format_value('PD1') == 'PD1'


def test_canonical_json_is_key_order_independent():
    assert canonical_json({'b': 1, 'a': [1, 2]}) == canonical_json({'a': [1, 2], 'b': 1})


def test_writer_and_manifest(tmp_path):
    out = str(tmp_path / 'run')
    with ArtifactWriter(out, 'blp', {'command': 'blp', 'parameters': {'a': 0.3}}) as w:
        w.write_csv('b.csv', ('x', 'y'), [dict(x=1, y=0.5), dict(x=2)])
        w.write_csv('a.csv', ('label',), [('PD0',), ('PD2',)])
        w.register('a.csv')

    with open(os.path.join(out, 'b.csv')) as f:
        assert f.read() == 'x,y\n1,0.5\n2,\n'
    with open(os.path.join(out, 'manifest.json')) as f:
        manifest = json.load(f)
    assert manifest['command'] == 'blp'
    assert [e['name'] for e in manifest['artifacts']] == ['a.csv', 'b.csv']
    for e in manifest['artifacts']:
        assert e['sha256'] == sha256_file(os.path.join(out, e['name']))
    assert manifest['config_sha256'] == w.config_hash()

    other = ArtifactWriter(str(tmp_path / 'other'), 'blp', {'parameters': {'a': 0.3}, 'command': 'blp'})
    assert other.config_hash() == w.config_hash()
