import os

import pytest

from fluxlab import logger


def test_file_formats(tmp_path):
    d = str(tmp_path)
    with logger.scoped_configure(dir=d, format_strs=['csv', 'json', 'log']):
        logger.logkv('a', 3)
        logger.logkv('b', 2.5)
        logger.dumpkvs()
        logger.logkv('b', -1.0)
        logger.logkv('c', 'x')
        logger.dumpkvs()
        logger.info('hello')

    df = logger.read_csv(os.path.join(d, 'progress.csv'))
    assert list(df.columns) == ['a', 'b', 'c']
    assert df['b'].tolist() == [2.5, -1.0]
    js = logger.read_json(os.path.join(d, 'progress.json'))
    assert js['a'].tolist()[0] == 3
    with open(os.path.join(d, 'log.txt')) as f:
        text = f.read()
    assert 'hello' in text
    assert '| a' in text


def test_levels(capsys):
    with logger.scoped_configure(format_strs=['stdout'], level='warn'):
        logger.info('quiet')
        logger.warn('loud')
        assert logger.get_level() == logger.WARN
        logger.set_level('disabled')
        logger.logkv('k', 1)
        assert logger.dumpkvs() == {'k': 1}
    out = capsys.readouterr().out
    assert 'loud' in out
    assert 'quiet' not in out
    assert '| k' not in out

    assert logger.parse_level('20') == logger.INFO
    with pytest.raises(ValueError):
        logger.parse_level('chatty')
    with pytest.raises(ValueError):
        logger.make_output_format('csv', None)


def test_logkv_mean():
    with logger.scoped_configure(format_strs=[]):
        logger.logkv_mean('x', 1.0)
        logger.logkv_mean('x', 3.0)
        assert logger.getkvs()['x'] == 2.0
        logger.dumpkvs()
