import math
import tempfile
import unittest
from pathlib import Path

import torch
from torch.testing import assert_close

from pbmarl.errors import DimensionMismatch, ZeroDimension
from pbmarl.nets import QPolicy, forward, init_policy, load_policy, save_policy


class QPolicyTest(unittest.TestCase):
    def test_output_shape(self):
        # 33 projects over 9 impact areas, 10 tokens
        policy = init_policy(330, 33, 10, seed=0)
        assert forward(policy, torch.randn(330)).shape == (10, 33)
        assert policy(torch.randn(5, 330)).shape == (5, 10, 33)

    def test_seeded_init(self):
        a = init_policy(12, 4, 3, seed=11)
        b = init_policy(12, 4, 3, seed=11)
        for p, q in zip(a.parameters(), b.parameters()):
            assert_close(p, q, rtol=0, atol=0)

    def test_xavier_init(self):
        policy = init_policy(12, 4, 3, seed=1, trunk_sizes=(8,), head_sizes=(5,))
        layers = policy.trunk.linear_layers()
        for head in policy.heads:
            layers += head.linear_layers()
        for layer in layers:
            fan_out, fan_in = layer.weight.shape
            assert torch.all(layer.weight.abs() <= math.sqrt(6 / (fan_in + fan_out)))
            assert torch.all(layer.bias == 0)

    def test_zero_weights(self):
        policy = QPolicy(6, 3, 2, init="zeros")
        assert_close(forward(policy, torch.randn(6)), torch.zeros(2, 3))

    def test_linear_heads(self):
        policy = QPolicy(3, 3, 2, trunk_sizes=(), head_sizes=(), init="zeros")
        with torch.no_grad():
            first, second = (head.linear_layers()[0] for head in policy.heads)
            first.weight.copy_(torch.eye(3))
            first.bias.copy_(torch.tensor([0.5, 0.0, -0.5]))
            second.weight.copy_(torch.tensor([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]))
        state = torch.tensor([1.0, 2.0, 3.0])
        expected = torch.tensor([[1.5, 2.0, 2.5], [3.0, 2.0, 1.0]])
        assert_close(forward(policy, state), expected)

    def test_branch_independence(self):
        policy = init_policy(8, 4, 3, seed=2)
        state = torch.randn(8)
        before = forward(policy, state)
        with torch.no_grad():
            for param in policy.heads[1].parameters():
                param.add_(0.5)
        after = forward(policy, state)
        assert_close(after[0], before[0], rtol=0, atol=0)
        assert_close(after[2], before[2], rtol=0, atol=0)
        assert not torch.equal(after[1], before[1])

    def test_invalid_dimensions(self):
        with self.assertRaises(ZeroDimension):
            QPolicy(0, 3, 2)
        with self.assertRaises(ZeroDimension):
            QPolicy(4, 3, 0)
        with self.assertRaises(ValueError):
            QPolicy(4, 3, 2, trunk_sizes=(0,))
        policy = QPolicy(4, 3, 2)
        with self.assertRaises(DimensionMismatch):
            policy(torch.randn(5))

    def test_checkpoint(self):
        for dtype in [torch.float32, torch.float64]:
            with self.subTest(dtype=dtype):
                policy = init_policy(12, 4, 3, seed=5, trunk_sizes=(6,), head_sizes=(), dtype=dtype)
                with tempfile.TemporaryDirectory() as tmp:
                    path = Path(tmp) / "agent.pt"
                    save_policy(policy, path)
                    loaded = load_policy(path)
                assert loaded.trunk_sizes == (6,)
                assert loaded.head_sizes == ()
                for p, q in zip(policy.parameters(), loaded.parameters()):
                    assert p.dtype == q.dtype
                    assert_close(p, q, rtol=0, atol=0)
                state = torch.randn(12, dtype=dtype)
                assert_close(forward(loaded, state), forward(policy, state), rtol=0, atol=0)


if __name__ == "__main__":
    unittest.main()
