"""Coefficient priors that induce a chosen distribution on theta.

With p standardized covariates, giving every coefficient N(0, pi^2 / (3(p+1)))
makes the linear predictor roughly standard logistic, so theta is roughly
uniform. Matching a Beta target instead uses the mean and variance of
logit(theta) under that Beta.
"""

import numpy as np

from logitprior.eta_moments import eta_mean_var, eta_mean_var_analytic
from logitprior.priors import beta_matched_priors, beta_shapes_from_mean_cv, logistic_matched_priors, weighted_priors

for p in (0, 1, 3):
    prior = logistic_matched_priors(p)
    print(f"p={p}: sd per coefficient {prior.sds[0]:.4f}")

# a prior guess: theta is about 0.7 with a coefficient of variation of 0.3
target = beta_shapes_from_mean_cv(0.7, 0.3)
print(f"Beta target: alpha={target.alpha:.4f} beta={target.beta:.4f}")

quad = eta_mean_var(target)
exact = eta_mean_var_analytic(target)
print(f"logit(theta) moments: quadrature ({quad.mu_eta:.6f}, {quad.var_eta:.6f})"
      f" closed form ({exact.mu_eta:.6f}, {exact.var_eta:.6f})")

prior = beta_matched_priors(3, target)
print("matched means", np.round(prior.means, 4), "variances", np.round(prior.variances, 4))

# put 40% of the variance on the intercept
prior = weighted_priors(3, target, k=0.4)
print("weighted variances", np.round(prior.variances, 4))
