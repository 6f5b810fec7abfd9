"""Priors that look harmless can induce extreme priors on derived quantities.

In the Ricker model N[t+1] = N[t] exp(a - b N[t]) the carrying capacity is
K = a / b. Independent positive-truncated N(0, 10^2) priors on a and b give
K a heavy right tail.
"""

import numpy as np

from logitprior.induced import pushforward_sample, ricker_model_a_spec

res = pushforward_sample(ricker_model_a_spec(), seed=7, bins=200)
k = res.draws
print("quantiles of K (5%, 50%, 95%, 99%):", np.round(np.quantile(k, [0.05, 0.5, 0.95, 0.99]), 2))
print(f"skewness {res.skewness():.1f}")
