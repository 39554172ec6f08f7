import copy
import math

import numpy as np
import torch

from ..election import decode_action
from ..errors import EmptyBatch
from ..nets import init_policy, save_policy
from ..utils import make_optimizer, optimizer_step, set_requires_grad
from .replay import ReplayBuffer, Transition, sample_minibatch


def encode_state(election, dtype=torch.float32):
    """Observation shared by all agents of an election

    Every project contributes a block of its log cost, normalised by the
    largest log cost, followed by a 0/1 indicator per impact area.

    Args:
      election: ElectionInstance
      dtype: Floating point type of the result

    Returns:
      Tensor of width P * (1 + K), projects in file order
    """
    areas = election.impact_areas
    log_costs = np.array(
        [math.log(p.cost / election.cost_scale) for p in election.projects], dtype=np.float64
    )
    top = log_costs.max()
    scaled = log_costs / top if top > 0 else np.ones_like(log_costs)
    blocks = [
        np.concatenate([[c], [1.0 if a in p.impact_areas else 0.0 for a in areas]])
        for c, p in zip(scaled, election.projects)
    ]
    return torch.as_tensor(np.concatenate(blocks), dtype=dtype)


def select_action(policy, state, epsilon, rng):
    """Epsilon-greedy choice of a project for every branch

    Every branch explores independently with probability epsilon, otherwise it
    takes the argmax of its head (lowest index on ties).

    Args:
      policy: QPolicy
      state: State vector
      epsilon: Exploration probability in [0, 1]
      rng: numpy Generator

    Returns:
      List of T project indices
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    with torch.no_grad():
        q = policy(state).cpu().numpy()
    greedy_choice = q.argmax(axis=-1)
    if epsilon == 0.0:
        return [int(c) for c in greedy_choice]
    n_tokens, n_projects = q.shape
    explore = rng.random(n_tokens) < epsilon
    random_choice = rng.integers(n_projects, size=n_tokens)
    return [int(c) for c in np.where(explore, random_choice, greedy_choice)]


def compute_loss(policy, batch):
    """Mean squared error between rewards and the Q-values of the chosen actions

    For each transition the squared errors of all branches are averaged, then
    the result is averaged over the batch.

    Args:
      policy: QPolicy
      batch: Non-empty list of Transition

    Returns:
      Loss value, list of gradients aligned with policy.parameters()
    """
    if not batch:
        raise EmptyBatch("cannot compute a loss on an empty batch")
    states = torch.stack([t.state for t in batch])
    actions = torch.tensor([t.action for t in batch], dtype=torch.long)
    rewards = torch.tensor([t.reward for t in batch], dtype=states.dtype)
    q = policy(states)
    chosen = q.gather(-1, actions.unsqueeze(-1)).squeeze(-1)
    loss = torch.mean(torch.mean((rewards.unsqueeze(-1) - chosen) ** 2, dim=-1))
    gradients = torch.autograd.grad(loss, list(policy.parameters()))
    return loss.item(), list(gradients)


class EpsilonSchedule:
    """
    Linear decay of the exploration rate, constant after the decay phase
    """

    def __init__(self, start=1.0, end=0.05, decay_episodes=320):
        """Constructor

        Args:
          start: Epsilon of the first training episode
          end: Epsilon once the decay is over
          decay_episodes: Number of training episodes over which epsilon decays
        """
        self.start = start
        self.end = end
        self.decay_episodes = decay_episodes

    def __call__(self, episode):
        if self.decay_episodes <= 0 or episode >= self.decay_episodes:
            return self.end
        return self.start + (self.end - self.start) * episode / self.decay_episodes


class VotingAgent:
    """
    Independent branching deep Q-learner casting the ballot of one voter
    """

    def __init__(
        self,
        voter,
        election,
        init_seed,
        rng,
        trunk_sizes=(128, 128),
        head_sizes=(64,),
        optimizer="adam",
        learning_rate=1e-3,
        buffer_capacity=2000,
        batch_size=32,
        recent_window=32,
        target_update=100,
        dtype=torch.float32,
    ):
        """Constructor

        Args:
          voter: VoterProfile the agent acts for
          election: ElectionInstance the agent votes in
          init_seed: Seed of the Xavier initialisation
          rng: numpy Generator owned by this agent
          target_update: Number of learning steps between target network refreshes
        """
        self.voter = voter
        self.projects = election.projects
        self.rng = rng
        self.batch_size = batch_size
        self.recent_window = recent_window
        self.target_update = target_update
        state_width = election.n_projects * (1 + len(election.impact_areas))
        self.policy = init_policy(
            state_width,
            election.n_projects,
            election.tokens,
            init_seed,
            trunk_sizes=trunk_sizes,
            head_sizes=head_sizes,
            dtype=dtype,
        )
        # kept in sync for checkpoints only, the loss has no bootstrapped target
        self.target_policy = copy.deepcopy(self.policy)
        set_requires_grad(self.target_policy, False)
        self.optimizer = make_optimizer(self.policy, optimizer, learning_rate)
        self.buffer = ReplayBuffer(buffer_capacity)
        self.learn_step = 0

    def act(self, state, epsilon):
        """
        Returns:
          Branch choices and the decoded CumulativeBallot
        """
        choices = select_action(self.policy, state, epsilon, self.rng)
        return choices, decode_action(choices, self.projects)

    def remember(self, state, choices, reward):
        self.buffer.append(Transition(state, tuple(choices), float(reward)))

    def learn(self):
        """One gradient step on a mini-batch from the agent's buffer

        Returns:
          Loss of the mini-batch before the update
        """
        batch = sample_minibatch(self.buffer, self.batch_size, self.rng, self.recent_window)
        loss, gradients = compute_loss(self.policy, batch)
        optimizer_step(self.policy, gradients, self.optimizer)
        self.learn_step += 1
        if self.learn_step % self.target_update == 0:
            self.target_policy.load_state_dict(self.policy.state_dict())
        return loss

    def save(self, path):
        save_policy(self.policy, path)
