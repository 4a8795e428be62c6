"""
Diagnostics for fluxlab runs.

Two kinds of records go through here: free-text lines with a level, and
key/value summaries that a study accumulates with logkv() and flushes with
dumpkvs(). Each configured output decides what it does with either kind:

    stdout   text lines and summaries as a boxed table
    log      the same, into <dir>/log.txt
    json     one summary object per line in <dir>/progress.json
    csv      one summary row per dump in <dir>/progress.csv

Run artifacts never go through the logger; see fluxlab.common.artifacts.
"""
import csv
import json
import os
import os.path as osp
import sys
from contextlib import contextmanager

DEBUG = 10
INFO = 20
WARN = 30
ERROR = 40

DISABLED = 50

_LEVEL_NAMES = {'debug': DEBUG, 'info': INFO, 'warn': WARN, 'warning': WARN,
                'error': ERROR, 'disabled': DISABLED}
_LEVEL_TAGS = {DEBUG: 'debug', WARN: 'warn', ERROR: 'error'}

FILE_NAMES = {'log': 'log.txt', 'json': 'progress.json', 'csv': 'progress.csv'}


def _plain(v):
    """numpy scalars to python scalars, so json and str behave."""
    return v.item() if hasattr(v, 'item') and hasattr(v, 'dtype') else v


class OutputFormat(object):
    def write_line(self, level, text):
        pass

    def write_summary(self, kvs):
        pass

    def close(self):
        pass


class TableFormat(OutputFormat):
    """Human readable output; stream=None follows whatever sys.stdout is at write time."""

    max_width = 40

    def __init__(self, path=None):
        self.path = path
        self.file = open(path, 'wt') if path is not None else None

    @property
    def stream(self):
        return self.file if self.file is not None else sys.stdout

    def _cell(self, v):
        v = _plain(v)
        s = '%-10.6g' % v if isinstance(v, (int, float)) and not isinstance(v, bool) else str(v)
        return s if len(s) <= self.max_width else s[:self.max_width - 3] + '...'

    def write_line(self, level, text):
        tag = _LEVEL_TAGS.get(level)
        self.stream.write(('[%s] %s' % (tag, text) if tag else text) + '\n')
        self.stream.flush()

    def write_summary(self, kvs):
        if not kvs:
            return
        cells = [(self._cell(k), self._cell(v)) for k, v in sorted(kvs.items(), key=lambda kv: kv[0].lower())]
        kw = max(len(k) for k, _ in cells)
        vw = max(len(v) for _, v in cells)
        rule = '-' * (kw + vw + 7)
        body = ['| %s | %s |' % (k.ljust(kw), v.ljust(vw)) for k, v in cells]
        self.stream.write('\n'.join([rule] + body + [rule]) + '\n')
        self.stream.flush()

    def close(self):
        if self.file is not None:
            self.file.close()


class JSONFormat(OutputFormat):
    def __init__(self, path):
        self.file = open(path, 'wt')

    def write_summary(self, kvs):
        self.file.write(json.dumps({k: _plain(v) for k, v in kvs.items()}, sort_keys=True) + '\n')
        self.file.flush()

    def close(self):
        self.file.close()


class CSVFormat(OutputFormat):
    """Columns are the union of all keys seen so far; the file is rewritten when a new key shows up."""

    def __init__(self, path):
        self.path = path
        self.columns = []
        self.rows = []
        open(path, 'wt').close()

    def write_summary(self, kvs):
        row = {k: _plain(v) for k, v in kvs.items()}
        self.rows.append(row)
        new = sorted(set(row) - set(self.columns))
        self.columns.extend(new)
        mode = 'wt' if new else 'at'
        with open(self.path, mode, newline='') as f:
            w = csv.DictWriter(f, fieldnames=self.columns, lineterminator='\n')
            if new:
                w.writeheader()
                w.writerows(self.rows)
            else:
                w.writerow(row)


def make_output_format(name, log_dir):
    if name == 'stdout':
        return TableFormat()
    if name not in FILE_NAMES:
        raise ValueError('unknown log format %r' % (name,))
    if log_dir is None:
        raise ValueError('log format %r needs a log directory' % (name,))
    os.makedirs(log_dir, exist_ok=True)
    path = osp.join(log_dir, FILE_NAMES[name])
    if name == 'log':
        return TableFormat(path)
    if name == 'json':
        return JSONFormat(path)
    return CSVFormat(path)


def parse_level(level):
    """A level number, its decimal string, or one of debug/info/warn/error/disabled."""
    if isinstance(level, int):
        return level
    level = str(level).strip().lower()
    if level.isdigit():
        return int(level)
    if level not in _LEVEL_NAMES:
        raise ValueError('unknown log level %r' % (level,))
    return _LEVEL_NAMES[level]


class Logger(object):
    CURRENT = None
    DEFAULT = None

    def __init__(self, dir, output_formats, level=INFO):
        self.dir = dir
        self.output_formats = output_formats
        self.level = level
        self.values = {}
        self._sums = {}
        self._counts = {}

    def logkv(self, key, val):
        self.values[key] = val
        self._sums.pop(key, None)
        self._counts.pop(key, None)

    def logkv_mean(self, key, val):
        self._sums[key] = self._sums.get(key, 0.0) + val
        self._counts[key] = self._counts.get(key, 0) + 1
        self.values[key] = self._sums[key] / self._counts[key]

    def dumpkvs(self):
        out = dict(self.values)
        if self.level < DISABLED and out:
            for fmt in self.output_formats:
                fmt.write_summary(out)
        self.values.clear()
        self._sums.clear()
        self._counts.clear()
        return out

    def log(self, *args, level=INFO):
        if level < self.level:
            return
        text = ' '.join(map(str, args))
        for fmt in self.output_formats:
            fmt.write_line(level, text)

    def close(self):
        for fmt in self.output_formats:
            fmt.close()


def get_current():
    if Logger.CURRENT is None:
        configure()
        Logger.DEFAULT = Logger.CURRENT
    return Logger.CURRENT


def logkv(key, val):
    """Record a summary value; the last value before dumpkvs() wins."""
    get_current().logkv(key, val)


def logkv_mean(key, val):
    get_current().logkv_mean(key, val)


def logkvs(d):
    for k, v in d.items():
        logkv(k, v)


def dumpkvs():
    return get_current().dumpkvs()


def getkvs():
    return get_current().values


def log(*args, level=INFO):
    get_current().log(*args, level=level)


def debug(*args):
    log(*args, level=DEBUG)


def info(*args):
    log(*args, level=INFO)


def warn(*args):
    log(*args, level=WARN)


def error(*args):
    log(*args, level=ERROR)


def set_level(level):
    get_current().level = parse_level(level)


def get_level():
    return get_current().level


def get_dir():
    return get_current().dir


def configure(dir=None, format_strs=None, level=None):
    """
    dir falls back to $FLUXLAB_LOGDIR. format_strs falls back to
    $FLUXLAB_LOG_FORMAT, then to 'stdout,log' with a directory and 'stdout'
    without one. level falls back to $FLUXLAB_LOG_LEVEL, then info.
    """
    dir = dir if dir is not None else os.getenv('FLUXLAB_LOGDIR')
    if dir is not None:
        dir = osp.expanduser(dir)
    if format_strs is None:
        format_strs = os.getenv('FLUXLAB_LOG_FORMAT', 'stdout,log' if dir is not None else 'stdout').split(',')
    formats = [make_output_format(name, dir) for name in format_strs if name]
    if level is None:
        level = os.getenv('FLUXLAB_LOG_LEVEL', INFO)
    if Logger.CURRENT is not None and Logger.CURRENT is not Logger.DEFAULT:
        Logger.CURRENT.close()
    Logger.CURRENT = Logger(dir, formats, parse_level(level))
    if dir is not None and formats:
        debug('logging to %s' % dir)


def reset():
    if Logger.CURRENT is not Logger.DEFAULT:
        Logger.CURRENT.close()
        Logger.CURRENT = Logger.DEFAULT


@contextmanager
def scoped_configure(dir=None, format_strs=None, level=None):
    previous = Logger.CURRENT
    Logger.CURRENT = None
    configure(dir=dir, format_strs=format_strs, level=level)
    try:
        yield Logger.CURRENT
    finally:
        Logger.CURRENT.close()
        Logger.CURRENT = previous


def read_json(fname):
    import pandas
    with open(fname, 'rt') as fh:
        return pandas.DataFrame([json.loads(line) for line in fh if line.strip()])


def read_csv(fname):
    import pandas
    return pandas.read_csv(fname, index_col=None)
