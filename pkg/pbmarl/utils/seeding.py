import numpy as np


def subsample_rng(seed):
    """Random generator reserved for drawing the voter subsample of a run"""
    return np.random.default_rng(np.random.SeedSequence(seed).spawn(2)[0])


def agent_seeds(seed, n_agents):
    """Independent random streams for every agent of a run

    Streams only depend on the run seed and the agent's position, so results do
    not depend on the order in which agents are scheduled.

    Args:
      seed: Run seed
      n_agents: Number of agents

    Returns:
      List of (init_seed, rng) pairs, an integer seed for the network
      initialisation and a numpy Generator for exploration and replay sampling
    """
    streams = []
    for child in np.random.SeedSequence(seed).spawn(2)[1].spawn(n_agents):
        init, explore = child.spawn(2)
        streams.append((int(init.generate_state(1)[0]), np.random.default_rng(explore)))
    return streams
