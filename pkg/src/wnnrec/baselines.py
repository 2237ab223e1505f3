"""Comparison models: a per-user gradient-trained dense network and a
global biased matrix-factorization collaborative filter.

Both are built from scratch on numpy and share the rating codec and the
accuracy predicate with the WNN, so the benchmark compares models on an
identical metric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bitops import as_bits
from .encoding import RATING_BITS, MOVIE_BITS, decode_rating, encode_rating


def logistic(z: np.ndarray) -> np.ndarray:
    # Stable piecewise form: never overflows in exp.
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass
class NetHyperparams:
    hidden_size: int = 32
    learning_rate: float = 0.05
    epochs: int = 200


@dataclass
class DenseNet:
    """26 -> H -> 10 network, logistic on both layers."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    @property
    def hidden_size(self) -> int:
        return self.b1.size


@dataclass
class NetGradients:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray


def init_net(hidden_size: int, seed: int, input_size: int = MOVIE_BITS, output_size: int = RATING_BITS) -> DenseNet:
    """Weights and biases drawn uniformly from [-0.5, 0.5]."""
    rng = np.random.default_rng(seed)
    return DenseNet(
        w1=rng.uniform(-0.5, 0.5, size=(hidden_size, input_size)),
        b1=rng.uniform(-0.5, 0.5, size=hidden_size),
        w2=rng.uniform(-0.5, 0.5, size=(output_size, hidden_size)),
        b2=rng.uniform(-0.5, 0.5, size=output_size),
    )


def net_forward(net: DenseNet, input_bits: Sequence[int] | np.ndarray) -> np.ndarray:
    """Output activations, strictly inside (0, 1) for bounded weights."""
    x = as_bits(input_bits, net.w1.shape[1]).astype(np.float64)
    a1 = logistic(net.w1 @ x + net.b1)
    return logistic(net.w2 @ a1 + net.b2)


def _target_vec(target_bits, width: int) -> np.ndarray:
    """Targets are usually bit vectors but soft values in [0,1] are legal."""
    t = np.asarray(target_bits, dtype=np.float64)
    if t.shape != (width,) or np.any(t < 0.0) or np.any(t > 1.0):
        raise ValueError(f"target must be {width} values in [0, 1]")
    return t


def net_loss(net: DenseNet, input_bits, target_bits) -> float:
    """Summed per-bit cross-entropy for one example."""
    y = net_forward(net, input_bits)
    t = _target_vec(target_bits, net.w2.shape[0])
    y = np.clip(y, 1e-12, 1.0 - 1e-12)
    return float(-np.sum(t * np.log(y) + (1.0 - t) * np.log(1.0 - y)))


def net_gradient(net: DenseNet, input_bits, target_bits) -> NetGradients:
    """Exact analytic gradient of :func:`net_loss` for one example."""
    x = as_bits(input_bits, net.w1.shape[1]).astype(np.float64)
    t = _target_vec(target_bits, net.w2.shape[0])
    a1 = logistic(net.w1 @ x + net.b1)
    y = logistic(net.w2 @ a1 + net.b2)
    dz2 = y - t
    da1 = net.w2.T @ dz2
    dz1 = da1 * a1 * (1.0 - a1)
    return NetGradients(
        w1=np.outer(dz1, x),
        b1=dz1,
        w2=np.outer(dz2, a1),
        b2=dz2,
    )


def net_train_user(
    pairs: Sequence[tuple[Sequence[int], float]],
    hyper: NetHyperparams | None = None,
    seed: int = 0,
) -> DenseNet:
    """Fit one user's network by full-batch gradient descent.

    `pairs` are (26-bit input, rating) training events; ratings are
    encoded with the shared cumulative codec. The batch loss is the mean
    over examples of the per-example summed cross-entropy.
    """
    hyper = hyper or NetHyperparams()
    if not pairs:
        raise ValueError("cannot train a network on an empty history")
    X = np.stack([as_bits(x, MOVIE_BITS) for x, _ in pairs]).astype(np.float64)
    T = np.stack([encode_rating(r) for _, r in pairs]).astype(np.float64)
    net = init_net(hyper.hidden_size, seed)
    n = X.shape[0]
    lr = hyper.learning_rate
    for _ in range(hyper.epochs):
        a1 = logistic(X @ net.w1.T + net.b1)
        y = logistic(a1 @ net.w2.T + net.b2)
        dz2 = (y - T) / n
        dw2 = dz2.T @ a1
        db2 = dz2.sum(axis=0)
        da1 = dz2 @ net.w2
        dz1 = da1 * a1 * (1.0 - a1)
        dw1 = dz1.T @ X
        db1 = dz1.sum(axis=0)
        net.w1 -= lr * dw1
        net.b1 -= lr * db1
        net.w2 -= lr * dw2
        net.b2 -= lr * db2
    return net


def net_predict(net: DenseNet, input_bits) -> float:
    """Threshold each output at 0.5 and decode the resulting bit vector."""
    bits = (net_forward(net, input_bits) >= 0.5).astype(np.uint8)
    return decode_rating(bits)


# -- collaborative filter -------------------------------------------------


@dataclass
class MFHyperparams:
    factors: int = 32
    learning_rate: float = 0.01
    reg: float = 0.05
    epochs: int = 30


@dataclass
class MFModel:
    """Biased matrix factorization: r = mu + b_u + b_i + p_u . q_i."""

    mu: float
    user_index: dict
    item_index: dict
    user_bias: np.ndarray
    item_bias: np.ndarray
    user_factors: np.ndarray
    item_factors: np.ndarray
    rmse_history: tuple[float, ...] = field(default_factory=tuple)


def _mf_rmse(mu, bu, bi, P, Q, u_idx, i_idx, r) -> float:
    pred = mu + bu[u_idx] + bi[i_idx] + np.einsum("ij,ij->i", P[u_idx], Q[i_idx])
    return float(np.sqrt(np.mean((r - pred) ** 2)))


def mf_fit(
    ratings: Iterable[tuple[object, object, float]],
    hyper: MFHyperparams | None = None,
    seed: int = 0,
) -> MFModel:
    """Fit the filter on (user, item, rating) triples by SGD.

    Factors start uniform in [-0.05, 0.05], biases at zero; samples are
    reshuffled every epoch from the seed. rmse_history[0] is the
    pre-training RMSE, rmse_history[-1] the final one.
    """
    triples = list(ratings)
    if not triples:
        raise ValueError("cannot fit the collaborative filter on an empty set")
    hyper = hyper or MFHyperparams()
    users = sorted({u for u, _, _ in triples}, key=repr)
    items = sorted({i for _, i, _ in triples}, key=repr)
    user_index = {u: k for k, u in enumerate(users)}
    item_index = {i: k for k, i in enumerate(items)}
    u_idx = np.array([user_index[u] for u, _, _ in triples])
    i_idx = np.array([item_index[i] for _, i, _ in triples])
    r = np.array([float(x) for _, _, x in triples])
    mu = float(r.mean())

    rng = np.random.default_rng(seed)
    f = hyper.factors
    P = rng.uniform(-0.05, 0.05, size=(len(users), f))
    Q = rng.uniform(-0.05, 0.05, size=(len(items), f))
    bu = np.zeros(len(users))
    bi = np.zeros(len(items))

    lr = hyper.learning_rate
    reg = hyper.reg
    history = [_mf_rmse(mu, bu, bi, P, Q, u_idx, i_idx, r)]
    for _ in range(hyper.epochs):
        for s in rng.permutation(len(triples)):
            u, i, rv = u_idx[s], i_idx[s], r[s]
            p, q = P[u], Q[i]
            err = rv - (mu + bu[u] + bi[i] + p @ q)
            bu[u] += lr * (err - reg * bu[u])
            bi[i] += lr * (err - reg * bi[i])
            p_old = p.copy()
            p += lr * (err * q - reg * p)
            q += lr * (err * p_old - reg * q)
        history.append(_mf_rmse(mu, bu, bi, P, Q, u_idx, i_idx, r))
    return MFModel(
        mu=mu,
        user_index=user_index,
        item_index=item_index,
        user_bias=bu,
        item_bias=bi,
        user_factors=P,
        item_factors=Q,
        rmse_history=tuple(history),
    )


def mf_predict(model: MFModel, user, item) -> float:
    """Predict a rating; unknown users/items fall back toward the mean.

    The raw score is clamped to [0.5, 5.0] and rounded to the half-star
    grid so the accuracy metric is comparable across models.
    """
    score = model.mu
    u = model.user_index.get(user)
    i = model.item_index.get(item)
    if u is not None:
        score += model.user_bias[u]
    if i is not None:
        score += model.item_bias[i]
    if u is not None and i is not None:
        score += float(model.user_factors[u] @ model.item_factors[i])
    score = min(max(score, 0.5), 5.0)
    return round(score * 2) / 2
