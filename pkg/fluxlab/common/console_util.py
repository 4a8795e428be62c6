import sys
import time
from contextlib import contextmanager

import click


def use_color(stream=None):
    stream = stream or sys.stderr
    return hasattr(stream, 'isatty') and stream.isatty()


def colorize(string, color='green', bold=False, highlight=False):
    if highlight:
        return click.style(string, bg=color, bold=bold)
    return click.style(string, fg=color, bold=bold)


def echo_error(kind, msg):
    """'Kind: message' on stderr, the kind in red on a terminal."""
    head = '%s:' % kind
    if use_color():
        head = colorize(head, color='red', bold=True)
    click.echo('%s %s' % (head, msg), err=True)


_depth = 0


@contextmanager
def timed(msg, enabled=True):
    """Bracket a block with its label and wall time on stderr; nested blocks are indented."""
    global _depth
    if not enabled:
        yield
        return

    def say(line):
        line = '  ' * _depth + line
        click.echo(colorize(line, color='magenta') if use_color() else line, err=True)

    say('=: ' + msg)
    start = time.time()
    _depth += 1
    try:
        yield
    finally:
        _depth -= 1
    say('done in %.3f s' % (time.time() - start))
