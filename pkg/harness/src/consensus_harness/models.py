"""The five model families compared by the harness.

Sequence models consume (batch, steps, nodes) trajectories and read their
summary at the last *valid* step, so padded tails never leak into the
prediction. The tree family works on the flattened layout with the true
prefix length as an extra feature.
"""

from __future__ import annotations

import numpy as np
import torch
import torch.nn as nn
from sklearn.ensemble import HistGradientBoostingRegressor

FAMILIES = (
    "gradient_boosted_trees",
    "recurrent",
    "extended_recurrent",
    "attention",
    "convolutional_recurrent",
)

ALIASES = {
    "gbt": "gradient_boosted_trees",
    "xgb": "gradient_boosted_trees",
    "trees": "gradient_boosted_trees",
    "rnn": "recurrent",
    "lstm": "recurrent",
    "xlstm": "extended_recurrent",
    "transformer": "attention",
    "convlstm": "convolutional_recurrent",
}


def canonical_family(name: str) -> str:
    family = ALIASES.get(name.lower(), name.lower())
    if family not in FAMILIES:
        raise ValueError(f"unknown model family {name!r}; choose from {FAMILIES}")
    return family


def _gather_last_valid(outputs: torch.Tensor, valid_steps: torch.Tensor) -> torch.Tensor:
    """Pick timestep valid_steps-1 from (batch, steps, features)."""
    idx = (valid_steps - 1).clamp(min=0).view(-1, 1, 1)
    idx = idx.expand(-1, 1, outputs.size(-1))
    return outputs.gather(1, idx).squeeze(1)


def _with_sorted_view(x: torch.Tensor) -> torch.Tensor:
    """Concatenate each frame with its sorted copy.

    Node indices carry no meaning across samples (every sample is a fresh
    random graph), so the raw layout hides most of the signal behind an
    arbitrary permutation. The sorted view is permutation-invariant and at
    desk-scale sample counts makes the difference between learning the
    target and matching a constant predictor.
    """
    return torch.cat([x, torch.sort(x, dim=2).values], dim=2)


class RecurrentRegressor(nn.Module):
    """Plain LSTM over the trajectory, linear head on the last valid state."""

    def __init__(self, nodes: int, hidden: int = 32, layers: int = 1):
        super().__init__()
        self.lstm = nn.LSTM(2 * nodes, hidden, num_layers=layers, batch_first=True)
        self.head = nn.Linear(hidden, 1)

    def forward(self, x: torch.Tensor, valid_steps: torch.Tensor) -> torch.Tensor:
        outputs, _ = self.lstm(_with_sorted_view(x))
        return self.head(_gather_last_valid(outputs, valid_steps)).squeeze(-1)


class ExtendedRecurrentRegressor(nn.Module):
    """Recurrent cell with exponential gating and a log-domain stabilizer.

    Input, forget and output pre-activations are produced jointly; the input
    and forget gates are exponentials normalized by a running stabilizer
    state m_t = max(f_t + m_{t-1}, i_t), and the cell keeps a normalizer n_t
    alongside the content c_t so the readout c_t / n_t stays bounded.
    """

    def __init__(self, nodes: int, hidden: int = 32):
        super().__init__()
        self.hidden = hidden
        self.gates = nn.Linear(2 * nodes + hidden, 4 * hidden)
        self.head = nn.Linear(hidden, 1)

    def forward(self, x: torch.Tensor, valid_steps: torch.Tensor) -> torch.Tensor:
        x = _with_sorted_view(x)
        batch, steps, _ = x.shape
        h = x.new_zeros(batch, self.hidden)
        c = x.new_zeros(batch, self.hidden)
        norm = x.new_ones(batch, self.hidden)
        stab = x.new_zeros(batch, self.hidden)
        collected = []
        for t in range(steps):
            z_in, i_pre, f_pre, o_pre = self.gates(
                torch.cat([x[:, t], h], dim=-1)
            ).chunk(4, dim=-1)
            new_stab = torch.maximum(f_pre + stab, i_pre)
            i_gate = torch.exp(i_pre - new_stab)
            f_gate = torch.exp(f_pre + stab - new_stab)
            c = f_gate * c + i_gate * torch.tanh(z_in)
            norm = f_gate * norm + i_gate
            stab = new_stab
            h = torch.sigmoid(o_pre) * (c / norm.clamp(min=1e-6))
            collected.append(h)
        outputs = torch.stack(collected, dim=1)
        return self.head(_gather_last_valid(outputs, valid_steps)).squeeze(-1)


class AttentionRegressor(nn.Module):
    """Transformer encoder over timesteps with padding masked out."""

    def __init__(self, nodes: int, steps: int, d_model: int = 32, heads: int = 2, layers: int = 1):
        super().__init__()
        self.proj = nn.Linear(2 * nodes, d_model)
        self.positions = nn.Parameter(torch.zeros(1, steps, d_model))
        layer = nn.TransformerEncoderLayer(
            d_model=d_model,
            nhead=heads,
            dim_feedforward=4 * d_model,
            batch_first=True,
            dropout=0.0,
        )
        self.encoder = nn.TransformerEncoder(layer, num_layers=layers, enable_nested_tensor=False)
        self.head = nn.Linear(d_model, 1)

    def forward(self, x: torch.Tensor, valid_steps: torch.Tensor) -> torch.Tensor:
        steps = x.size(1)
        tokens = self.proj(_with_sorted_view(x)) + self.positions[:, :steps]
        step_index = torch.arange(steps, device=x.device).unsqueeze(0)
        padding = step_index >= valid_steps.unsqueeze(1)
        encoded = self.encoder(tokens, src_key_padding_mask=padding)
        keep = (~padding).unsqueeze(-1).to(encoded.dtype)
        pooled = (encoded * keep).sum(dim=1) / keep.sum(dim=1).clamp(min=1.0)
        return self.head(pooled).squeeze(-1)


class ConvRecurrentRegressor(nn.Module):
    """ConvLSTM: gates are 1-d convolutions along the node axis.

    The hidden state keeps the node dimension, so spatial structure survives
    the recurrence; the readout pools over nodes at the last valid step.
    """

    def __init__(self, nodes: int, channels: int = 8, kernel: int = 3):
        super().__init__()
        self.channels = channels
        self.gates = nn.Conv1d(2 + channels, 4 * channels, kernel, padding=kernel // 2)
        self.head = nn.Linear(2 * channels, 1)

    def forward(self, x: torch.Tensor, valid_steps: torch.Tensor) -> torch.Tensor:
        batch, steps, nodes = x.shape
        h = x.new_zeros(batch, self.channels, nodes)
        c = x.new_zeros(batch, self.channels, nodes)
        collected = []
        for t in range(steps):
            # raw frame plus its sorted copy as a second input channel
            frame = torch.stack([x[:, t], torch.sort(x[:, t], dim=1).values], dim=1)
            i_pre, f_pre, o_pre, z_in = self.gates(
                torch.cat([frame, h], dim=1)
            ).chunk(4, dim=1)
            c = torch.sigmoid(f_pre) * c + torch.sigmoid(i_pre) * torch.tanh(z_in)
            h = torch.sigmoid(o_pre) * torch.tanh(c)
            pooled = torch.cat([h.mean(dim=2), h.amax(dim=2)], dim=1)
            collected.append(pooled)
        outputs = torch.stack(collected, dim=1)
        return self.head(_gather_last_valid(outputs, valid_steps)).squeeze(-1)


def build_sequence_model(family: str, nodes: int, steps: int, params: dict) -> nn.Module:
    family = canonical_family(family)
    if family == "recurrent":
        return RecurrentRegressor(
            nodes, hidden=params.get("hidden", 32), layers=params.get("layers", 1)
        )
    if family == "extended_recurrent":
        return ExtendedRecurrentRegressor(nodes, hidden=params.get("hidden", 32))
    if family == "attention":
        return AttentionRegressor(
            nodes,
            steps,
            d_model=params.get("d_model", 32),
            heads=params.get("heads", 2),
            layers=params.get("layers", 1),
        )
    if family == "convolutional_recurrent":
        return ConvRecurrentRegressor(
            nodes, channels=params.get("channels", 8), kernel=params.get("kernel", 3)
        )
    raise ValueError(f"{family} is not a sequence family")


def build_tree_model(params: dict, seed: int = 0) -> HistGradientBoostingRegressor:
    """Gradient-boosted trees with round-based early stopping built in."""
    return HistGradientBoostingRegressor(
        max_depth=params.get("max_depth", 6),
        learning_rate=params.get("learning_rate", 0.1),
        max_iter=params.get("max_iter", 300),
        min_samples_leaf=params.get("min_samples_leaf", 20),
        early_stopping=params.get("early_stopping", True),
        validation_fraction=0.2,
        n_iter_no_change=30,
        random_state=seed,
    )


def predict_numpy(model: nn.Module, sequences: np.ndarray, valid_steps: np.ndarray) -> np.ndarray:
    model.eval()
    with torch.no_grad():
        out = model(
            torch.from_numpy(np.ascontiguousarray(sequences)),
            torch.from_numpy(valid_steps),
        )
    return out.numpy().astype(np.float64)
