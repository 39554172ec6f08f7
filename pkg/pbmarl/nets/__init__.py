from .mlp import MLP

from .branching import QPolicy, init_policy, forward, save_policy, load_policy
