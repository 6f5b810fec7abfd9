"""Occupancy model: presence is only seen through imperfect detection.

The fit alternates a draw of the latent presence at sites without detections
with Metropolis updates of both coefficient blocks. Wide priors on the
coefficients put most of the induced prior mass on occupancy near 0 or 1.
"""

import numpy as np

from logitprior.occupancy import fit_occupancy, induced_occupancy_priors, simulate_occupancy
from logitprior.priors import WIDE_SD, logistic_matched_priors, vague_priors

data = simulate_occupancy([0.3, 0.5, -0.4], [0.2, 0.8], sites=150, visits=3, seed=6)
print(f"{int(data.detected.sum())} of {data.sites} sites with a detection,"
      f" {int(data.z_true.sum())} truly occupied")

fit = fit_occupancy(data, logistic_matched_priors(2), logistic_matched_priors(1),
                    iterations=4000, burnin=1000, seed=6)
print("occupancy coefficients", np.round(fit.psi_summary.mean, 3))
print("detection coefficients", np.round(fit.det_summary.mean, 3))

rows = data.V.reshape(data.sites * data.visits, data.r)
for label, ppsi, pdet in (
    ("logistic", logistic_matched_priors(2), logistic_matched_priors(1)),
    ("wide", vague_priors(2, WIDE_SD), vague_priors(1, WIDE_SD)),
):
    ipsi, _ = induced_occupancy_priors(ppsi, pdet, data.W, rows, 50_000, seed=6)
    edge = ipsi.mass_in(0, 0.05) + ipsi.mass_in(0.95, 1)
    print(f"{label:8s} prior mass of occupancy within 0.05 of 0 or 1: {edge:.3f}")
