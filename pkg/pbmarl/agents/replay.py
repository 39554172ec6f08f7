import math
from collections import deque
from dataclasses import dataclass

import numpy as np
import torch

from ..errors import EmptyBuffer


@dataclass(frozen=True)
class Transition:
    """
    One experience of an agent

    There is no next state: an episode is a single election, so the regression
    target is the immediate reward.
    """

    state: torch.Tensor
    action: tuple
    reward: float


class ReplayBuffer:
    """
    Bounded agent-specific experience store, oldest transitions evicted first
    """

    def __init__(self, capacity=2000):
        if capacity <= 0:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.transitions = deque(maxlen=capacity)

    def __len__(self):
        return len(self.transitions)

    def __getitem__(self, index):
        return self.transitions[index]

    def append(self, transition):
        self.transitions.append(transition)


def sample_indices(size, batch_size, rng, recent_window=32):
    """Buffer positions of a recency-prioritised mini-batch

    Half of the batch (rounded up) comes from the newest `recent_window`
    transitions, the rest from older ones. Buffers smaller than the batch are
    sampled uniformly with replacement.

    Args:
      size: Number of transitions in the buffer
      batch_size: Number of samples
      rng: numpy Generator
      recent_window: Number of newest transitions counted as recent

    Returns:
      Integer array of positions, 0 is the oldest transition
    """
    if size == 0:
        raise EmptyBuffer("cannot sample from an empty buffer")
    if size < batch_size:
        return rng.integers(size, size=batch_size)
    n_recent = math.ceil(batch_size / 2)
    n_rest = batch_size - n_recent
    window = min(recent_window, size)
    old = size - window
    recent = old + rng.choice(window, size=n_recent, replace=window < n_recent)
    if old > 0:
        rest = rng.choice(old, size=n_rest, replace=old < n_rest)
    else:
        rest = rng.choice(window, size=n_rest, replace=window < n_rest)
    return np.concatenate([recent, rest])


def sample_minibatch(buffer, batch_size, rng, recent_window=32):
    """Samples a recency-prioritised mini-batch of transitions

    Returns:
      List of Transition
    """
    idx = sample_indices(len(buffer), batch_size, rng, recent_window)
    return [buffer[int(i)] for i in idx]
