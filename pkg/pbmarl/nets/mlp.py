from torch import nn


class MLP(nn.Module):
    """
    A fully connected network with ReLU between its linear layers
    """

    def __init__(self, layers, output_relu=False, init="xavier", generator=None):
        """
        layers: list of layer sizes from start to end
        output_relu: Flag, if true the output is passed through a ReLU as well
        init: "xavier" for Xavier uniform weights and zero biases, "zeros" for all parameters zero
        generator: torch.Generator used for the initialisation, global RNG if None
        """
        super().__init__()
        net = []
        for fan_in, fan_out in zip(layers[:-1], layers[1:]):
            net += [nn.Linear(fan_in, fan_out), nn.ReLU()]
        if not output_relu:
            net.pop()
        self.net = nn.Sequential(*net)
        self.reset_parameters(init, generator)

    def linear_layers(self):
        return [m for m in self.net if isinstance(m, nn.Linear)]

    def reset_parameters(self, init="xavier", generator=None):
        for layer in self.linear_layers():
            if init == "xavier":
                nn.init.xavier_uniform_(layer.weight, generator=generator)
            elif init == "zeros":
                nn.init.zeros_(layer.weight)
            else:
                raise NotImplementedError(f"Initialisation {init} is not implemented.")
            nn.init.zeros_(layer.bias)

    def forward(self, x):
        return self.net(x)
