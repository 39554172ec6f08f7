import logging
from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from tqdm import tqdm

from .agents import EpsilonSchedule, VotingAgent, encode_state
from .aggregation import VoteProfile, get_rule
from .errors import ConfigError, ExperimentError, PbMarlError
from .io.pabulib import load_election
from .rewards import profile_rewards
from .utils import agent_seeds
from .utils.optim import OPTIMIZERS
from .utils.seeding import subsample_rng

logger = logging.getLogger(__name__)

TRAINING = "training"
VALIDATION = "validation"


@dataclass
class ExperimentConfig:
    """
    Parameters of one simulation run
    """

    election_path: str = ""
    rule: str = "equalshares"
    training_episodes: int = 400
    validation_interval: int = 5
    batch_size: int = 32
    learning_rate: float = 1e-3
    optimizer: str = "adam"
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay_fraction: float = 0.8
    gamma: float = 0.0
    target_update: int = 100
    buffer_capacity: int = 2000
    recent_window: int = 32
    trunk_sizes: tuple = (128, 128)
    head_sizes: tuple = (64,)
    seed: int = 0
    voter_subsample: Optional[int] = None
    threads: Optional[int] = None
    repetitions: int = 1
    output_dir: str = "runs"

    def validate(self):
        """Raises ConfigError if the configuration cannot be run"""
        if self.training_episodes < 1:
            raise ConfigError("training_episodes must be >= 1")
        if self.validation_interval < 1:
            raise ConfigError("validation_interval must be >= 1")
        if self.batch_size < 1 or self.buffer_capacity < 1 or self.recent_window < 1:
            raise ConfigError("batch_size, buffer_capacity and recent_window must be >= 1")
        if self.target_update < 1:
            raise ConfigError("target_update must be >= 1")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if self.gamma != 0:
            raise ConfigError("only gamma = 0 is supported: an episode is a single election")
        if self.optimizer not in OPTIMIZERS:
            raise ConfigError(f"optimizer must be one of {OPTIMIZERS}")
        for name in ("epsilon_start", "epsilon_end", "epsilon_decay_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if self.voter_subsample is not None and self.voter_subsample < 1:
            raise ConfigError("voter_subsample must be >= 1")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if any(w < 1 for w in (*self.trunk_sizes, *self.head_sizes)):
            raise ConfigError("layer widths must be >= 1")
        get_rule(self.rule)
        return self

    def to_dict(self):
        d = asdict(self)
        d["trunk_sizes"] = list(self.trunk_sizes)
        d["head_sizes"] = list(self.head_sizes)
        return d


@dataclass
class EpisodeRecord:
    """
    Outcome of one episode

    `episode` counts the training episodes completed when the record was made.
    Validation records carry no losses.
    """

    index: int
    episode: int
    kind: str
    winners: object
    ballots: dict = field(default_factory=dict)
    rewards: dict = field(default_factory=dict)
    losses: Optional[dict] = None
    epsilon: float = 0.0


class Simulation:
    """
    Independent voting agents learning in repeated runs of one election
    """

    def __init__(self, config, election=None):
        """Constructor

        Args:
          config: ExperimentConfig
          election: ElectionInstance, loaded from config.election_path if None
        """
        self.config = config.validate()
        if election is None:
            election = load_election(config.election_path)
        if config.voter_subsample is not None:
            election = election.subsample(config.voter_subsample, subsample_rng(config.seed))
        self.election = election
        self.rule = get_rule(config.rule)
        self.state = encode_state(election)
        self.schedule = EpsilonSchedule(
            config.epsilon_start,
            config.epsilon_end,
            round(config.epsilon_decay_fraction * config.training_episodes),
        )
        self.agents = [
            VotingAgent(
                voter,
                election,
                init_seed,
                rng,
                trunk_sizes=config.trunk_sizes,
                head_sizes=config.head_sizes,
                optimizer=config.optimizer,
                learning_rate=config.learning_rate,
                buffer_capacity=config.buffer_capacity,
                batch_size=config.batch_size,
                recent_window=config.recent_window,
                target_update=config.target_update,
            )
            for voter, (init_seed, rng) in zip(
                election.voters, agent_seeds(config.seed, election.n_voters)
            )
        ]
        self.records = []
        self.training_done = 0

    def _map(self, fn, pool):
        # results stay in agent order whatever the scheduling
        if pool is None:
            return [fn(agent) for agent in self.agents]
        return list(pool.map(fn, self.agents))

    def play(self, epsilon, learn, pool=None):
        """Runs one episode

        Args:
          epsilon: Exploration rate of every agent
          learn: Whether agents store the transition and take a gradient step
          pool: Optional executor for the per-agent phases

        Returns:
          EpisodeRecord
        """
        actions = self._map(lambda agent: agent.act(self.state, epsilon), pool)
        ballots = {agent.voter.id: ballot for agent, (_, ballot) in zip(self.agents, actions)}
        profile = VoteProfile(ballots)
        winners = self.rule(profile, self.election)
        rewards = profile_rewards(
            self.election, [a.voter for a in self.agents], profile, winners
        )
        losses = None
        if learn:
            for agent, (choices, _), r in zip(self.agents, actions, rewards):
                agent.remember(self.state, choices, r)
            losses = self._map(lambda agent: agent.learn(), pool)
            losses = {a.voter.id: loss for a, loss in zip(self.agents, losses)}
            self.training_done += 1
        record = EpisodeRecord(
            index=len(self.records),
            episode=self.training_done,
            kind=TRAINING if learn else VALIDATION,
            winners=winners,
            ballots=ballots,
            rewards={a.voter.id: r for a, r in zip(self.agents, rewards)},
            losses=losses,
            epsilon=epsilon,
        )
        logger.debug("episode %d (%s): %d winners", record.index, record.kind, len(winners))
        return record

    def evaluate(self, pool=None):
        """Greedy episode without learning, policies are left untouched"""
        return self.play(0.0, learn=False, pool=pool)

    def run(self, callback=None, progress=False):
        """Runs all training episodes with periodic validation episodes

        Args:
          callback: Called with every EpisodeRecord as soon as it is complete
          progress: Show a progress bar on standard error

        Returns:
          List of EpisodeRecord in the order they were played
        """
        config = self.config
        threads = config.threads or 1
        with ThreadPoolExecutor(threads) if threads > 1 else nullcontext() as pool:
            episodes = tqdm(
                range(config.training_episodes), disable=not progress, desc="episodes"
            )
            recent_losses = []
            for t in episodes:
                try:
                    record = self.play(self.schedule(t), learn=True, pool=pool)
                    self._keep(record, callback)
                    recent_losses.extend(record.losses.values())
                    if (t + 1) % config.validation_interval == 0:
                        record = self.play(0.0, learn=False, pool=pool)
                        self._keep(record, callback)
                        logger.info(
                            "validation after %d episodes: mean reward %.4f, mean loss %.4g",
                            record.episode,
                            np.mean(list(record.rewards.values())),
                            np.mean(recent_losses),
                        )
                        recent_losses = []
                except PbMarlError as e:
                    raise ExperimentError(len(self.records), e) from e
        return self.records

    def _keep(self, record, callback):
        self.records.append(record)
        if callback is not None:
            callback(record)


def run_experiment(config, election=None, callback=None):
    """Trains one agent per voter and records every episode

    Args:
      config: ExperimentConfig
      election: Optional ElectionInstance overriding config.election_path

    Returns:
      List of EpisodeRecord
    """
    return Simulation(config, election).run(callback)


def snapshot_untrained(config, election=None):
    """Greedy episode of freshly initialised agents, the before-training baseline"""
    return Simulation(config, election).evaluate()


def _quartiles(values):
    if not values:
        return float("nan"), float("nan"), float("nan")
    x = np.asarray(values, dtype=np.float64)
    return float(x.mean()), float(np.percentile(x, 25)), float(np.percentile(x, 75))


def training_log_rows(records):
    """Summary rows of the training log, one per episode

    Validation rows report the loss of the training episodes since the previous
    validation episode.

    Returns:
      List of dicts with keys episode, kind, mean_reward, reward_q1, reward_q3,
      mean_loss, loss_q1, loss_q3
    """
    rows = []
    pending = []
    for record in records:
        mean_r, q1_r, q3_r = _quartiles(list(record.rewards.values()))
        if record.losses is not None:
            losses = list(record.losses.values())
            pending.extend(losses)
        else:
            losses, pending = pending, []
        mean_l, q1_l, q3_l = _quartiles(losses)
        rows.append(
            {
                "episode": record.episode,
                "kind": record.kind,
                "mean_reward": mean_r,
                "reward_q1": q1_r,
                "reward_q3": q3_r,
                "mean_loss": mean_l,
                "loss_q1": q1_l,
                "loss_q3": q3_l,
            }
        )
    return rows
