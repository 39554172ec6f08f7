from .replay import ReplayBuffer, Transition, sample_indices, sample_minibatch

from .agent import (
    EpsilonSchedule,
    VotingAgent,
    compute_loss,
    encode_state,
    select_action,
)
