"""Single-season occupancy model on synthetic data.

Site ``i`` is occupied with probability ``psi_i = expit(W_i . b_psi)``;
on visit ``j`` an occupied site is detected with probability
``p_ij = expit(V_ij . b_det)`` and an empty site never is. Fitting is
Gibbs-within-Metropolis with the latent occupancy states kept explicitly:

1. ``z_i`` is 1 at sites with a detection and otherwise drawn from its
   conditional (:func:`conditional_presence_prob`);
2. ``b_psi`` takes one random-walk step against ``z``;
3. ``b_det`` takes one random-walk step against the detections at occupied sites.

Both coefficient blocks reuse :class:`~logitprior.inference.RandomWalk`. The
occupancy block draws its randomness exactly as
:func:`~logitprior.inference.mh_sample` does for the same seed, so with
detection fixed at 1 its chains coincide with a plain logistic fit of ``z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import expit

from ._random import as_generator, chain_streams, substream
from .exceptions import DomainError, PreconditionError
from .induced import PushforwardResult, PushforwardSpec, pushforward_sample
from .inference import Chains, PosteriorSummary, RandomWalk, _initial_diag, summarize
from .io import write_csv
from .priors import PriorSpec

__all__ = [
    "OccupancyData",
    "simulate_occupancy",
    "conditional_presence_prob",
    "OccupancyFit",
    "fit_occupancy",
    "induced_occupancy_priors",
]


@dataclass(frozen=True)
class OccupancyData:
    """``W``: sites x q, ``V``: sites x visits x r, ``y``: sites x visits."""

    W: np.ndarray
    V: np.ndarray
    y: np.ndarray
    z_true: np.ndarray | None = None

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        W = np.asarray(self.W, dtype=float)
        if W.ndim == 1:
            W = W[:, None]
        V = np.asarray(self.V, dtype=float)
        if V.ndim == 2:
            V = V[:, :, None]
        if y.ndim != 2 or W.shape[0] != y.shape[0] or V.shape[:2] != y.shape:
            raise DomainError("W, V and y disagree on the numbers of sites and visits")
        if not np.all((y == 0) | (y == 1)):
            raise DomainError("detections must be 0 or 1")
        if self.z_true is not None:
            z = np.asarray(self.z_true, dtype=float)
            if np.any((z == 0) & (y.max(axis=1, initial=0) == 1)):
                raise DomainError("a site with a detection cannot be unoccupied")
            object.__setattr__(self, "z_true", z)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "y", y)

    @property
    def sites(self) -> int:
        return self.y.shape[0]

    @property
    def visits(self) -> int:
        return self.y.shape[1]

    @property
    def q(self) -> int:
        return self.W.shape[1]

    @property
    def r(self) -> int:
        return self.V.shape[2]

    @property
    def detected(self) -> np.ndarray:
        return self.y.max(axis=1, initial=0) == 1

    def to_csv(self, directory, provenance: str | None = None) -> tuple[Path, Path]:
        """Write ``sites.csv`` (site covariates, z) and ``detections.csv`` (long format)."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        z = self.z_true if self.z_true is not None else np.full(self.sites, np.nan)
        site_rows = [[i, *self.W[i], z[i]] for i in range(self.sites)]
        sites_path = directory / "sites.csv"
        write_csv(sites_path, ["site", *[f"w{k + 1}" for k in range(self.q)], "z"], site_rows, provenance)
        det_rows = [
            [i, j, *self.V[i, j], self.y[i, j]] for i in range(self.sites) for j in range(self.visits)
        ]
        det_path = directory / "detections.csv"
        write_csv(det_path, ["site", "visit", *[f"v{k + 1}" for k in range(self.r)], "y"], det_rows, provenance)
        return sites_path, det_path


def _standardized_normal(rng, shape) -> np.ndarray:
    x = rng.standard_normal(shape)
    if shape[-1] == 0:
        return x
    flat = x.reshape(-1, shape[-1])
    if flat.shape[0] < 2:
        return x
    return ((flat - flat.mean(axis=0)) / flat.std(axis=0, ddof=1)).reshape(shape)


def simulate_occupancy(psi_betas, det_betas, sites: int, visits: int, seed=None) -> OccupancyData:
    """Synthetic data with standardized Normal covariates.

    The number of occupancy (detection) covariates is one less than the
    length of ``psi_betas`` (``det_betas``); detection covariates vary by visit.
    """
    if sites < 1 or visits < 1:
        raise DomainError("need at least one site and one visit")
    bpsi = np.asarray(psi_betas, dtype=float)
    bdet = np.asarray(det_betas, dtype=float)
    rng = as_generator(seed)
    W = _standardized_normal(rng, (sites, bpsi.size - 1))
    V = _standardized_normal(rng, (sites, visits, bdet.size - 1))
    psi = expit(bpsi[0] + W @ bpsi[1:])
    z = (rng.random(sites) < psi).astype(float)
    p = expit(bdet[0] + V @ bdet[1:])
    y = ((rng.random((sites, visits)) < p) * z[:, None]).astype(float)
    return OccupancyData(W, V, y, z)


def conditional_presence_prob(psi, det_probs, detections=None) -> float:
    """P(z = 1 | no detections) = psi prod(1 - p) / (psi prod(1 - p) + 1 - psi).

    Vectorized over leading axes; ``det_probs`` carries visits on its last
    axis. If ``detections`` is given and contains a detection the site is
    occupied with certainty and the conditional is not defined here.
    """
    if detections is not None and np.any(np.asarray(detections) == 1):
        raise PreconditionError("site has a detection; it is occupied with certainty")
    psi = np.asarray(psi, dtype=float)
    miss = np.prod(1.0 - np.asarray(det_probs, dtype=float), axis=-1)
    num = psi * miss
    out = num / (num + 1.0 - psi)
    return float(out) if np.ndim(out) == 0 else out


@dataclass
class OccupancyFit:
    psi_chains: Chains
    det_chains: Chains | None
    psi_summary: PosteriorSummary
    det_summary: PosteriorSummary | None
    z_mean: np.ndarray

    def weakly_identified(self) -> bool:
        """True when either block's R-hat exceeds 1.1."""
        rh = [self.psi_summary.rhat]
        if self.det_summary is not None:
            rh.append(self.det_summary.rhat)
        return bool(np.any(np.concatenate(rh) > 1.1))


def fit_occupancy(
    data: OccupancyData,
    psi_prior: PriorSpec,
    det_prior: PriorSpec | None,
    chains: int = 4,
    iterations: int = 5000,
    burnin: int = 2000,
    seed=0,
    fixed_detection: float | None = None,
) -> OccupancyFit:
    """Posterior draws for both coefficient blocks.

    With ``fixed_detection`` set, detection probabilities are held at that
    value and the detection block is not sampled.
    """
    if psi_prior.dim != data.q + 1:
        raise DomainError(f"occupancy prior has {psi_prior.dim} terms, model has {data.q + 1}")
    sample_det = fixed_detection is None
    if sample_det:
        if det_prior is None:
            raise DomainError("a detection prior is required unless detection is fixed")
        if det_prior.dim != data.r + 1:
            raise DomainError(f"detection prior has {det_prior.dim} terms, model has {data.r + 1}")
    elif not 0 < fixed_detection <= 1:
        raise DomainError("fixed detection probability must lie in (0, 1]")
    if not iterations > burnin >= 0:
        raise DomainError("need iterations > burnin >= 0")

    Zpsi = np.column_stack([np.ones(data.sites), data.W])
    Zdet = np.concatenate([np.ones(data.y.shape + (1,)), data.V], axis=2)
    detected = data.detected
    y = data.y

    psi_streams = chain_streams(seed, chains, block=0)
    psi_rw = RandomWalk(
        np.stack([psi_prior.sample(g) for g in psi_streams]),
        _initial_diag(psi_prior), psi_streams, iterations, burnin,
    )
    if sample_det:
        det_streams = chain_streams(seed, chains, block=1)
        det_rw = RandomWalk(
            np.stack([det_prior.sample(g) for g in det_streams]),
            _initial_diag(det_prior), det_streams, iterations, burnin,
        )
    z_streams = chain_streams(seed, chains, block=2)
    z_u = np.stack([g.random((iterations, data.sites)) for g in z_streams])

    z = np.where(detected, 1.0, 0.0)[None, :].repeat(chains, axis=0)
    z_sum = np.zeros((chains, data.sites))

    def log_miss(bdet):
        # sum over visits of log(1 - p)
        if not sample_det:
            lm = data.visits * math.log1p(-fixed_detection) if fixed_detection < 1 else -np.inf
            return np.full((chains, data.sites), lm)
        eta = np.einsum("ijk,ck->cij", Zdet, bdet)
        return -np.logaddexp(0.0, eta).sum(axis=-1)

    for it in range(iterations):
        # latent occupancy
        # log odds of presence given no detections; stays finite when psi rounds to 1
        pz = expit(psi_rw.x @ Zpsi.T + log_miss(det_rw.x if sample_det else None))
        z = np.where(detected, 1.0, (z_u[:, it, :] < pz).astype(float))
        if it >= burnin:
            z_sum += z

        def psi_target(b, z=z):
            eta = b @ Zpsi.T
            return np.sum(z * eta - np.logaddexp(0.0, eta), axis=-1) + psi_prior.log_density(b)

        psi_rw.step(it, psi_target, recompute=True)

        if sample_det:

            def det_target(b, z=z):
                eta = np.einsum("ijk,ck->cij", Zdet, b)
                ll = (y * eta - np.logaddexp(0.0, eta)) * z[:, :, None]
                return ll.sum(axis=(1, 2)) + det_prior.log_density(b)

            det_rw.step(it, det_target, recompute=True)

    seed_val = seed if isinstance(seed, int) else None
    psi_chains = Chains(psi_rw.history, burnin, seed_val, psi_rw.acceptance_rate,
                        [f"psi_beta{j}" for j in range(data.q + 1)])
    det_chains = det_summary = None
    if sample_det:
        det_chains = Chains(det_rw.history, burnin, seed_val, det_rw.acceptance_rate,
                            [f"det_beta{j}" for j in range(data.r + 1)])
        det_summary = summarize(det_chains)
    kept = iterations - burnin
    return OccupancyFit(psi_chains, det_chains, summarize(psi_chains), det_summary,
                        z_sum.sum(axis=0) / (kept * chains))


def _coef_sampler(prior: PriorSpec, j: int):
    m, s = prior.means[j], prior.sds[j]
    return lambda rng, n: m + s * rng.standard_normal(n)


def _linear_pushforward(prior: PriorSpec, rows: np.ndarray, n_draws: int, seed, bins: int) -> PushforwardResult:
    rows = np.asarray(rows, dtype=float)
    if rows.ndim == 1:
        rows = rows[:, None]
    if rows.shape[1] != prior.p or rows.shape[0] < 1:
        raise DomainError(f"need at least one covariate row with {prior.p} columns, got shape {rows.shape}")
    samplers = {f"b{j}": _coef_sampler(prior, j) for j in range(prior.dim)}
    samplers["row"] = lambda rng, n: rng.integers(0, rows.shape[0], n).astype(float)

    def transform(d):
        r = rows[d["row"].astype(int)]
        eta = d["b0"] + sum(d[f"b{j}"] * r[:, j - 1] for j in range(1, prior.dim))
        return expit(eta)

    spec = PushforwardSpec(samplers, transform, n=n_draws)
    return pushforward_sample(spec, seed, bins=bins, range=(0.0, 1.0))


def induced_occupancy_priors(
    psi_prior: PriorSpec,
    det_prior: PriorSpec,
    psi_covariates,
    det_covariates,
    n_draws: int = 100_000,
    seed=0,
    bins: int = 100,
) -> tuple[PushforwardResult, PushforwardResult]:
    """Induced priors on occupancy and detection probabilities.

    Each draw pairs fresh coefficients with a covariate row picked uniformly
    from the given rows (``sites x q`` and ``(sites * visits) x r``).
    """
    if n_draws < 1:
        raise DomainError("n_draws must be at least 1")
    psi = _linear_pushforward(psi_prior, psi_covariates, n_draws, substream(seed, 0), bins)
    det = _linear_pushforward(det_prior, det_covariates, n_draws, substream(seed, 1), bins)
    return psi, det

