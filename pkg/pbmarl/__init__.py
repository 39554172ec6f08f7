#! /usr/bin/env python
# -*- coding: utf-8 -*-

__version__ = "0.1"

from .errors import *
from .election import (
    CumulativeBallot,
    ElectionInstance,
    Project,
    VoterProfile,
    WinningSet,
    action_space_size,
    decode_action,
    derive_preferences,
)
from . import io
from . import aggregation
from . import rewards
from . import nets
from . import agents
from . import metrics
from . import utils
from .training import ExperimentConfig, Simulation, run_experiment
