"""The two comparison models, from scratch on numpy.

A per-user dense network (26 -> 32 -> 10, logistic, full-batch gradient
descent on per-bit cross-entropy) and a global biased matrix
factorization trained by SGD.
"""

import numpy as np

from wnnrec import (
    MFHyperparams,
    NetHyperparams,
    encode_rating,
    mf_fit,
    mf_predict,
    net_predict,
    net_train_user,
)
from wnnrec.baselines import net_gradient, net_loss, init_net

print("== gradient sanity: analytic vs central differences ==")
net = init_net(hidden_size=6, seed=0)
x = np.random.default_rng(0).integers(0, 2, size=26)
t = encode_rating(3.5)
g = net_gradient(net, x, t)
h = 1e-5
worst = 0.0
for i in range(net.b2.size):
    orig = net.b2[i]
    net.b2[i] = orig + h
    lp = net_loss(net, x, t)
    net.b2[i] = orig - h
    lm = net_loss(net, x, t)
    net.b2[i] = orig
    fd = (lp - lm) / (2 * h)
    worst = max(worst, abs(g.b2[i] - fd) / max(abs(fd), 1e-8))
print(f"  max relative error on output biases: {worst:.2e}")

print("\n== per-user net memorizes a tiny history ==")
rng = np.random.default_rng(1)
history = [(rng.integers(0, 2, size=26), r) for r in (4.0, 2.5, 1.0, 5.0, 3.0)]
net = net_train_user(history, NetHyperparams(), seed=1)
for code, rating in history:
    print(f"  trained {rating} -> predicts {net_predict(net, code)}")

print("\n== collaborative filter on a toy rating matrix ==")
triples = []
for u in range(30):
    taste = rng.uniform(-1, 1)
    for i in range(12):
        item_axis = (i % 4 - 1.5) / 1.5
        r = float(np.clip(round((3.0 + 1.8 * taste * item_axis + rng.normal(0, 0.3)) * 2) / 2, 0.5, 5.0))
        triples.append((u, i, r))
model = mf_fit(triples, MFHyperparams(factors=8, epochs=40), seed=2)
print(f"  mean rating mu = {model.mu:.3f}")
print(f"  training RMSE {model.rmse_history[0]:.3f} -> {model.rmse_history[-1]:.3f}")
print(f"  known pair (0, 0):   {mf_predict(model, 0, 0)}")
print(f"  cold user (999, 0):  {mf_predict(model, 999, 0)} (falls back toward the mean)")
