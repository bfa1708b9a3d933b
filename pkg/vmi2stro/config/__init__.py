#
# Copyright (c) 2022 Samuel J. McKelvie
#
# MIT License - See LICENSE file accompanying this package.
#

from .base import Config
from .context import ConfigContext
from .params import Strategy, SamplingParams, SolverConfig
from .baselines import NelderMeadConfig, SpsaConfig
