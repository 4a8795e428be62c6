"""Exception hierarchy shared by every fluxlab module.

Each class carries the process exit code the command line front end uses
when the error escapes a study: 2 for configuration problems, 3 for
computation failures and 4 for singular points of the dynamics.
"""


class FluxlabError(Exception):
    exit_code = 1


class ConfigError(FluxlabError):
    exit_code = 2

    def __init__(self, msg, field=None, line=None):
        self.msg = msg
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append('line %d' % line)
        if field is not None:
            where.append('field %s' % field)
        prefix = ('%s: ' % ', '.join(where)) if where else ''
        Exception.__init__(self, prefix + msg)


class ComputeError(FluxlabError):
    exit_code = 3


class SingularityError(ComputeError):
    exit_code = 4


# qcore

class NotHermitian(ComputeError):
    def __init__(self, deviation):
        self.deviation = deviation
        msg = 'matrix is not Hermitian: max |M - M^dag| = %.3e' % deviation
        Exception.__init__(self, msg)


class NotUnitTrace(ComputeError):
    def __init__(self, trace):
        self.trace = trace
        msg = 'state does not have unit trace: Tr M = %.12g' % trace
        Exception.__init__(self, msg)


class NotPositive(ComputeError):
    def __init__(self, min_eigenvalue):
        self.min_eigenvalue = min_eigenvalue
        msg = 'state is not positive semidefinite: min eigenvalue = %.3e' % min_eigenvalue
        Exception.__init__(self, msg)


class DimMismatch(ComputeError):
    def __init__(self, expected, got, what='dimension'):
        self.expected = expected
        self.got = got
        msg = '%s mismatch: expected %s, got %s' % (what, expected, got)
        Exception.__init__(self, msg)


# lindblad

class InvalidGrid(ComputeError):
    def __init__(self, reason):
        self.reason = reason
        Exception.__init__(self, 'invalid time grid: %s' % reason)


class PositivityLost(ComputeError):
    def __init__(self, t, min_eigenvalue):
        self.t = t
        self.min_eigenvalue = min_eigenvalue
        msg = ('evolved state lost positivity at t = %.6g: min eigenvalue = %.3e '
               '(step too coarse or generator not positivity preserving)' % (t, min_eigenvalue))
        Exception.__init__(self, msg)


# thermoflux

class InfiniteTemperature(ComputeError):
    def __init__(self, what='extractable work'):
        msg = '%s needs a finite temperature, got beta = 0' % what
        Exception.__init__(self, msg)


class MixedTemperatures(ComputeError):
    def __init__(self, betas):
        self.betas = betas
        msg = 'channels carry different inverse temperatures %s; a single bath temperature is required' % (sorted(set(betas)),)
        Exception.__init__(self, msg)


class NotProductInitial(ComputeError):
    def __init__(self, mutual_info):
        self.mutual_info = mutual_info
        msg = 'initial joint state is correlated: mutual information = %.3e' % mutual_info
        Exception.__init__(self, msg)


class IdentityViolation(ComputeError):
    def __init__(self, what, residual, tol):
        self.residual = residual
        msg = '%s violated: residual %.3e exceeds %.1e' % (what, residual, tol)
        Exception.__init__(self, msg)


# models

class InvalidPopulations(ComputeError):
    pass


class DegeneratePopulation(ComputeError):
    def __init__(self, p_a):
        self.p_a = p_a
        msg = 'ln(p_a/p_b) is singular for p_a = %g' % p_a
        Exception.__init__(self, msg)


class NoSignal(ComputeError):
    def __init__(self, level):
        self.level = level
        msg = 'differences sit at the floating point noise floor (max %.3e); nothing to fit' % level
        Exception.__init__(self, msg)


class SingularRadius(SingularityError):
    def __init__(self, t, r2):
        self.t = t
        self.r2 = r2
        msg = 'squared Bloch radius factor vanishes at t = %.12g (r^2 = %.3e)' % (t, r2)
        Exception.__init__(self, msg)


class SingularAtPureState(SingularityError):
    def __init__(self, t, radius):
        self.t = t
        self.radius = radius
        msg = 'entropy rate diverges at t = %.6g: Bloch radius %.15f is pure' % (t, radius)
        Exception.__init__(self, msg)


# divisibility

class SingularMap(SingularityError):
    def __init__(self, cond):
        self.cond = cond
        msg = 'dynamical map is not invertible: condition number %.3e' % cond
        Exception.__init__(self, msg)


class NotPauliDiagonal(ComputeError):
    pass
