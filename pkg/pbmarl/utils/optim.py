import torch

from ..errors import ConfigError, ShapeMismatch

OPTIMIZERS = ("adam", "sgd")


def set_requires_grad(module, flag):
    """Sets requires_grad flag of all parameters of a torch.nn.module

    Args:
      module: torch.nn.module
      flag: Flag to set requires_grad to
    """

    for param in module.parameters():
        param.requires_grad = flag


def clear_grad(model):
    """Set gradients of model parameter to None as this speeds up training,

    See [youtube](https://www.youtube.com/watch?v=9mS1fIYj1So)

    Args:
      model: Model to clear gradients of
    """
    for param in model.parameters():
        param.grad = None


def make_optimizer(model, name="adam", lr=1e-3):
    """Creates the optimizer of a Q-network

    Args:
      model: torch.nn.Module to optimise
      name: "adam" (moments 0.9/0.999, eps 1e-8) or "sgd" (plain gradient descent)
      lr: Learning rate

    Returns:
      torch.optim.Optimizer
    """
    if name == "adam":
        return torch.optim.Adam(model.parameters(), lr=lr, betas=(0.9, 0.999), eps=1e-8)
    if name == "sgd":
        return torch.optim.SGD(model.parameters(), lr=lr)
    raise ConfigError(f"unknown optimizer {name!r}, choose from {OPTIMIZERS}")


def optimizer_step(model, gradients, optimizer):
    """Applies externally computed gradients to the parameters of a model

    Args:
      model: torch.nn.Module whose parameters the optimizer updates
      gradients: List of tensors aligned with model.parameters()
      optimizer: Optimizer created by make_optimizer for this model

    Returns:
      The updated model
    """
    params = list(model.parameters())
    if len(params) != len(gradients):
        raise ShapeMismatch(f"{len(gradients)} gradients for {len(params)} parameters")
    for param, grad in zip(params, gradients):
        if param.shape != grad.shape:
            raise ShapeMismatch(f"gradient shape {tuple(grad.shape)} != {tuple(param.shape)}")
        param.grad = grad.detach().clone()
    optimizer.step()
    clear_grad(model)
    return model
