# flake8: noqa F403
from fluxlab.common.console_util import *
from fluxlab.common.math_util import *
from fluxlab.common.schedules import *
