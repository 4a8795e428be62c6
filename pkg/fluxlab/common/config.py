"""Strict JSON run configuration.

    {"command": "cnot-flux",
     "parameters": {"a": 0.3, "gamma": 0.1},
     "output_dir": "out", "emit_svg": true, "jobs": 4}

Parameters are merged key by key over fluxlab.studies.defaults; unknown keys
and duplicate keys are errors, as are NaN and Infinity literals. Every
command module in fluxlab.studies validates its parameters through build()
before anything is computed.
"""
import importlib
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from fluxlab.common.schedules import schedule_from_spec
from fluxlab.errors import ConfigError, FluxlabError
from fluxlab.qcore import ID2, SM, SP, SX, SY, SZ
from fluxlab.studies import defaults

COMMANDS = ('protocol', 'cnot-flux', 'phase-diagram', 'blp', 'simulate')
TOP_LEVEL = ('command', 'parameters', 'output_dir', 'emit_svg', 'jobs')
DEFAULT_OUTPUT_DIR = 'fluxlab_out'

NAMED_OPERATORS = {'I': ID2, 'X': SX, 'Y': SY, 'Z': SZ, 'SP': SP, 'SM': SM}

# list entries merged over their own defaults
LIST_ITEM_DEFAULTS = {
    ('simulate', 'channels'): defaults.simulate_channel,
    ('simulate', 'hamiltonian'): defaults.simulate_hamiltonian_term,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    output_dir: str = DEFAULT_OUTPUT_DIR
    emit_svg: bool = False
    jobs: Optional[int] = None

    def canonical(self):
        """The part of the config that determines the artifacts (not where they go or how many workers)."""
        return {'command': self.command, 'parameters': self.parameters, 'emit_svg': self.emit_svg}


def command_key(command):
    return command.replace('-', '_')


def get_study_module(command):
    return importlib.import_module('.'.join(['fluxlab', 'studies', command_key(command)]))


def get_defaults(command):
    return getattr(defaults, command_key(command))()


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ConfigError('duplicate key %r' % k, field=k)
        out[k] = v
    return out


def _reject_constant(name):
    raise ConfigError('non-finite literal %s is not allowed' % name)


def loads(text):
    if isinstance(text, bytes):
        try:
            text = text.decode('utf8')
        except UnicodeDecodeError as e:
            raise ConfigError('config is not UTF-8: %s' % e)
    try:
        return json.loads(text, object_pairs_hook=_no_duplicates, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise ConfigError('invalid JSON: %s (column %d)' % (e.msg, e.colno), line=e.lineno)


def merge(base, user, path, command=None):
    """Copy of base with user values laid over it; keys outside base are rejected."""
    if not isinstance(user, dict):
        raise ConfigError('expected an object, got %s' % type(user).__name__, field=path)
    out = dict(base)
    for k, v in user.items():
        where = '%s.%s' % (path, k)
        if k not in base:
            raise ConfigError('unknown key %r' % k, field=where)
        item_defaults = LIST_ITEM_DEFAULTS.get((command, k))
        if item_defaults is not None and isinstance(v, list):
            v = [merge(item_defaults(), e, '%s[%d]' % (where, i)) if isinstance(e, dict) else e
                 for i, e in enumerate(v)]
        elif isinstance(base[k], dict) and isinstance(v, dict):
            v = merge(base[k], v, where)
        out[k] = v
    return out


def parse_config(text, overrides=None, command=None):
    """
    Parse config text into a validated RunConfig.

    overrides is a dict of top-level values (output_dir, emit_svg, jobs) from
    the command line; entries that are None keep the config file value.
    command, when given, fills a missing "command" key and must match a present one.
    """
    data = loads(text)
    if not isinstance(data, dict):
        raise ConfigError('config must be a JSON object')
    for k in data:
        if k not in TOP_LEVEL:
            raise ConfigError('unknown key %r' % k, field=k)
    for k, v in (overrides or {}).items():
        if v is not None:
            data[k] = v
    if command is not None:
        if data.setdefault('command', command) != command:
            raise ConfigError('config is for %r, not %r' % (data['command'], command), field='command')
    command = data.get('command')
    if command not in COMMANDS:
        raise ConfigError('command must be one of %s, got %r' % (', '.join(COMMANDS), command), field='command')
    parameters = merge(get_defaults(command), data.get('parameters', {}), 'parameters', command_key(command))

    output_dir = data.get('output_dir', DEFAULT_OUTPUT_DIR)
    if not isinstance(output_dir, str) or not output_dir:
        raise ConfigError('output_dir must be a non-empty string', field='output_dir')
    emit_svg = data.get('emit_svg', False)
    if not isinstance(emit_svg, bool):
        raise ConfigError('emit_svg must be true or false', field='emit_svg')
    jobs = data.get('jobs')
    if jobs is not None and (isinstance(jobs, bool) or not isinstance(jobs, int) or jobs < 1):
        raise ConfigError('jobs must be a positive integer, got %r' % (jobs,), field='jobs')

    config = RunConfig(command=command, parameters=parameters, output_dir=output_dir, emit_svg=emit_svg, jobs=jobs)
    get_study_module(command).build(parameters)
    return config


def load_config(path, overrides=None, command=None):
    """path None stands for an empty config: every parameter at its default."""
    if path is None:
        return parse_config('{}', overrides, command)
    try:
        with open(path, 'rb') as f:
            text = f.read()
    except OSError as e:
        raise ConfigError('cannot read config %s: %s' % (path, e.strerror))
    return parse_config(text, overrides, command)


# typed accessors used by the study builders

def _is_number(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def real(params, key, path='parameters', lo=None, hi=None, lo_open=False, optional=False):
    v = params[key]
    where = '%s.%s' % (path, key)
    if v is None and optional:
        return None
    if not _is_number(v):
        raise ConfigError('%s must be a number, got %r' % (key, v), field=where)
    v = float(v)
    if lo is not None and (v < lo or (lo_open and v == lo)) or hi is not None and v > hi:
        lo_b = '(' if lo_open else '['
        raise ConfigError('%s out of %s%s,%s]: %r' % (key, lo_b, '-inf' if lo is None else '%g' % lo,
                                                     'inf' if hi is None else '%g' % hi, v), field=where)
    return v


def integer(params, key, path='parameters', lo=None):
    v = params[key]
    where = '%s.%s' % (path, key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError('%s must be an integer, got %r' % (key, v), field=where)
    if lo is not None and v < lo:
        raise ConfigError('%s must be >= %d, got %d' % (key, lo, v), field=where)
    return v


def flag(params, key, path='parameters'):
    v = params[key]
    if not isinstance(v, bool):
        raise ConfigError('%s must be true or false, got %r' % (key, v), field='%s.%s' % (path, key))
    return v


def real_list(params, key, path='parameters', lo=None, lo_open=False, min_len=1):
    v = params[key]
    where = '%s.%s' % (path, key)
    if not isinstance(v, list) or len(v) < min_len or not all(_is_number(e) for e in v):
        raise ConfigError('%s must be a list of at least %d numbers' % (key, min_len), field=where)
    out = np.array(v, dtype=float)
    if lo is not None and (np.any(out < lo) or (lo_open and np.any(out == lo))):
        raise ConfigError('%s entries must be %s %g' % (key, '>' if lo_open else '>=', lo), field=where)
    return out


def grid(params, key, path='parameters'):
    """A list of numbers or {"start", "stop", "num"} for an evenly spaced grid."""
    v = params[key]
    where = '%s.%s' % (path, key)
    if isinstance(v, dict):
        start = real(v, 'start', where)
        stop = real(v, 'stop', where)
        num = integer(v, 'num', where, lo=1)
        return np.linspace(start, stop, num)
    return real_list(params, key, path)


def matrix(value, path, dim):
    """Named Pauli operator, nested list of reals, or {"re": ..., "im": ...}."""
    if isinstance(value, str):
        m = NAMED_OPERATORS.get(value.upper())
        if m is None:
            raise ConfigError('unknown operator name %r (known: %s)' % (value, ', '.join(NAMED_OPERATORS)),
                              field=path)
        m = m.copy()
    elif isinstance(value, dict):
        extra = set(value) - {'re', 'im'}
        if extra or 're' not in value:
            raise ConfigError('complex matrix needs keys "re" and optionally "im"', field=path)
        m = _real_matrix(value['re'], path + '.re').astype(complex)
        if value.get('im') is not None:
            im = _real_matrix(value['im'], path + '.im')
            if im.shape != m.shape:
                raise ConfigError('re and im parts differ in shape', field=path)
            m = m + 1j * im
    else:
        m = _real_matrix(value, path).astype(complex)
    if m.shape != (dim, dim):
        raise ConfigError('expected a %dx%d matrix, got shape %s' % (dim, dim, m.shape), field=path)
    return m


def _real_matrix(value, path):
    try:
        m = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError('matrix entries must be numbers', field=path)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ConfigError('matrix must be square', field=path)
    return m


def schedule(value, path):
    if _is_number(value):
        return schedule_from_spec(float(value))
    if not isinstance(value, dict):
        raise ConfigError('expected a number or a schedule object', field=path)
    try:
        return schedule_from_spec(value)
    except KeyError as e:
        raise ConfigError('schedule is missing key %s' % e, field=path)
    except (TypeError, ValueError) as e:
        raise ConfigError('bad schedule: %s' % e, field=path)


def as_config_error(e, field='parameters'):
    """Re-raise a model precondition failure found while validating a config, with the field under `field`."""
    if isinstance(e, ConfigError):
        if e.field is None:
            return ConfigError(e.msg, field=field, line=e.line)
        if e.field == field or e.field.startswith(field + '.'):
            return e
        return ConfigError(e.msg, field='%s.%s' % (field, e.field), line=e.line)
    if isinstance(e, FluxlabError):
        return ConfigError(str(e), field=field)
    return ConfigError('%s: %s' % (type(e).__name__, e), field=field)
