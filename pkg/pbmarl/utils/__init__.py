from .optim import clear_grad, set_requires_grad, make_optimizer, optimizer_step

from .seeding import agent_seeds
