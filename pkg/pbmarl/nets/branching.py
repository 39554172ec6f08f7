import torch
from torch import nn

from ..errors import DimensionMismatch, ZeroDimension
from .mlp import MLP

CHECKPOINT_VERSION = 1


class QPolicy(nn.Module):
    """
    Branching Q-network of a voting agent

    A shared fully connected trunk feeds T parallel heads, one per token. Each
    head outputs one Q-value per project for the assignment of its token.
    """

    def __init__(
        self,
        state_width,
        n_projects,
        n_tokens,
        trunk_sizes=(128, 128),
        head_sizes=(64,),
        init="xavier",
        generator=None,
    ):
        """Constructor

        Args:
          state_width: Width of the state vector
          n_projects: Number of projects P, output width of every head
          n_tokens: Number of tokens T, number of heads
          trunk_sizes: Widths of the hidden layers of the shared trunk, may be empty
          head_sizes: Widths of the hidden layers of each head, may be empty
          init: Initialisation passed to the MLPs, "xavier" or "zeros"
          generator: torch.Generator used for the initialisation
        """
        super().__init__()
        dims = [state_width, n_projects, n_tokens, *trunk_sizes, *head_sizes]
        if any(d <= 0 for d in dims):
            raise ZeroDimension(f"all dimensions must be positive, got {dims}")
        self.state_width = state_width
        self.n_projects = n_projects
        self.n_tokens = n_tokens
        self.trunk_sizes = tuple(trunk_sizes)
        self.head_sizes = tuple(head_sizes)

        if trunk_sizes:
            self.trunk = MLP(
                [state_width, *trunk_sizes], output_relu=True, init=init, generator=generator
            )
            width = trunk_sizes[-1]
        else:
            self.trunk = nn.Identity()
            width = state_width
        self.heads = nn.ModuleList(
            [
                MLP([width, *head_sizes, n_projects], init=init, generator=generator)
                for _ in range(n_tokens)
            ]
        )

    def forward(self, state):
        """
        Args:
          state: State vector, optionally with leading batch dimensions

        Returns:
          Q-values of shape (..., T, P)
        """
        if state.shape[-1] != self.state_width:
            raise DimensionMismatch(
                f"state width {state.shape[-1]} does not match network input {self.state_width}"
            )
        h = self.trunk(state)
        return torch.stack([head(h) for head in self.heads], dim=-2)


def init_policy(
    state_width,
    n_projects,
    n_tokens,
    seed,
    trunk_sizes=(128, 128),
    head_sizes=(64,),
    dtype=torch.float32,
):
    """Creates a Xavier-initialised QPolicy, deterministic for a fixed seed

    Returns:
      QPolicy with zero biases
    """
    generator = torch.Generator().manual_seed(seed)
    policy = QPolicy(
        state_width,
        n_projects,
        n_tokens,
        trunk_sizes=trunk_sizes,
        head_sizes=head_sizes,
        generator=generator,
    )
    return policy.to(dtype)


def forward(policy, state):
    """Q-values of all heads for a state, without tracking gradients

    Returns:
      Tensor of shape (T, P)
    """
    with torch.no_grad():
        return policy(state)


def save_policy(policy, path):
    """Writes a policy checkpoint with its layer shapes and parameters"""
    torch.save(
        {
            "format_version": CHECKPOINT_VERSION,
            "state_width": policy.state_width,
            "n_projects": policy.n_projects,
            "n_tokens": policy.n_tokens,
            "trunk_sizes": list(policy.trunk_sizes),
            "head_sizes": list(policy.head_sizes),
            "state_dict": policy.state_dict(),
        },
        path,
    )


def load_policy(path):
    """Reads a checkpoint written by save_policy

    Returns:
      QPolicy with bit-identical parameters
    """
    checkpoint = torch.load(path, map_location="cpu", weights_only=True)
    if checkpoint.get("format_version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {checkpoint.get('format_version')}")
    policy = QPolicy(
        checkpoint["state_width"],
        checkpoint["n_projects"],
        checkpoint["n_tokens"],
        trunk_sizes=tuple(checkpoint["trunk_sizes"]),
        head_sizes=tuple(checkpoint["head_sizes"]),
        init="zeros",
    )
    state_dict = checkpoint["state_dict"]
    policy.to(next(iter(state_dict.values())).dtype)
    policy.load_state_dict(state_dict)
    return policy
