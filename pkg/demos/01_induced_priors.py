"""How a prior on a logit-scale coefficient looks on the probability scale.

A wide Normal on beta piles its mass near theta = 0 and theta = 1, while the
standard logistic induces exactly a Uniform(0, 1) on theta.
"""

import numpy as np

from logitprior import DomainError
from logitprior.distributions import LogisticParams, NormalParams
from logitprior.induced import induce_theta_density, logistic_density, normal_density

theta = np.array([0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99])

print("theta     " + "  ".join(f"{t:8.2f}" for t in theta))
for label, dens in (
    ("N(0, 1)", normal_density(NormalParams(0.0, 1.0))),
    ("N(0, 10)", normal_density(NormalParams(0.0, 10.0))),
    ("Logis(0,1)", logistic_density(LogisticParams())),
):
    print(f"{label:10s}" + "  ".join(f"{v:8.3f}" for v in induce_theta_density(dens, theta)))

# the boundary is outside the domain
try:
    induce_theta_density(logistic_density(), 1.0)
except DomainError as err:
    print("rejected:", err)
