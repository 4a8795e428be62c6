"""Time-dependent scalars: decay rates, drive amplitudes, level splittings.

A schedule is called with model time t (a float or an array of times) and
returns the parameter there, so it can be handed to a Channel as its rate.
"""
import numpy as np


class Schedule(object):
    def value(self, t):
        raise NotImplementedError()

    def __call__(self, t):
        return self.value(t)


class ConstantSchedule(Schedule):
    def __init__(self, value):
        self._v = float(value)

    def value(self, t):
        if np.ndim(t):
            return np.full(np.shape(t), self._v)
        return self._v

    def __repr__(self):
        return 'ConstantSchedule(%r)' % self._v


class PiecewiseSchedule(Schedule):
    """
    Linear interpolation through (time, value) endpoints with increasing times.
    Before the first and after the last endpoint the schedule returns
    outside_value, or holds the nearest endpoint value when that is None.
    """

    def __init__(self, endpoints, outside_value=None):
        if not endpoints:
            raise ValueError('PiecewiseSchedule needs at least one endpoint')
        times = np.array([float(e[0]) for e in endpoints])
        if np.any(np.diff(times) < 0):
            raise ValueError('PiecewiseSchedule endpoint times must be increasing, got %s' % (times.tolist(),))
        self._times = times
        self._values = np.array([float(e[1]) for e in endpoints])
        self._outside_value = None if outside_value is None else float(outside_value)

    def value(self, t):
        v = np.interp(t, self._times, self._values, left=self._outside_value, right=self._outside_value)
        return float(v) if np.ndim(v) == 0 else v

    def __repr__(self):
        return 'PiecewiseSchedule(%r)' % list(zip(self._times.tolist(), self._values.tolist()))


class SineSchedule(Schedule):
    """offset + amplitude * sin(frequency * t + phase)"""

    def __init__(self, offset, amplitude, frequency, phase=0.0):
        self.offset = float(offset)
        self.amplitude = float(amplitude)
        self.frequency = float(frequency)
        self.phase = float(phase)

    def value(self, t):
        return self.offset + self.amplitude * np.sin(self.frequency * np.asarray(t) + self.phase)


def as_schedule(x):
    """Numbers become constant schedules; schedules and plain callables pass through."""
    if isinstance(x, Schedule) or callable(x):
        return x
    return ConstantSchedule(x)


def schedule_from_spec(spec):
    """
    Build a schedule from its config form: a number, or a dict with a `kind` key
    ('constant', 'piecewise', 'sine').
    """
    if isinstance(spec, (int, float)):
        return ConstantSchedule(spec)
    kind = spec['kind']
    if kind == 'constant':
        return ConstantSchedule(spec['value'])
    elif kind == 'piecewise':
        return PiecewiseSchedule([tuple(e) for e in spec['endpoints']], outside_value=spec.get('outside_value'))
    elif kind == 'sine':
        return SineSchedule(spec['offset'], spec['amplitude'], spec['frequency'], spec.get('phase', 0.0))
    raise ValueError('unknown schedule kind %r' % (kind,))
