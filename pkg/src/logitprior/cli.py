"""Command-line front end.

Every subcommand writes CSV (or JSON) whose first line is a ``#`` provenance
comment carrying the subcommand, seed and a hash of the options. Exit codes:
0 on success, 1 on a numerical failure, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import distributions as D
from .eta_moments import eta_mean_var, eta_mean_var_analytic
from .exceptions import DomainError, InversionError, PreconditionError
from .genfunc import genfunc_curves, half_logistic_laplace, mgf_derivative_numeric, root_logistic_table
from .induced import (
    DensityFn,
    beta_density,
    induce_beta_density,
    induce_theta_density,
    logistic_density,
    normal_density,
    pushforward_sample,
    ricker_model_a_spec,
    uniform_density,
)
from .inference import Dataset, mh_sample, standardize, summarize
from .io import csv_text, provenance_line, read_csv
from .occupancy import fit_occupancy, induced_occupancy_priors, simulate_occupancy
from .priors import (
    PRIOR_KINDS,
    SPOCC_SD,
    WIDE_SD,
    PriorSpec,
    beta_matched_priors,
    logistic_matched_priors,
    vague_priors,
    weighted_priors,
)
from .simulation import CONFIG_KEYS, load_scenario_config, run_study

FAMILIES = {
    "normal": "normal:mean,variance (prior on beta)",
    "logistic": "logistic:mu,s (prior on beta)",
    "uniform": "uniform (prior on theta)",
    "beta": "beta:alpha,beta (prior on theta)",
}
BETA_SIDE = ("normal", "logistic")
THETA_SIDE = ("uniform", "beta")


class UsageError(Exception):
    pass


# -- argument helpers -------------------------------------------------------------------


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {v}")
    return v


def _pos_int(text: str) -> int:
    v = _nonneg_int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _int_list(text: str) -> list[int]:
    return [_nonneg_int(s.strip()) for s in text.split(",") if s.strip()]


def _float_list(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def parse_prior(text: str) -> tuple[str, DensityFn]:
    """``family[:a,b]`` to ``(family, DensityFn)``."""
    family, _, rest = text.partition(":")
    family = family.strip().lower()
    if family not in FAMILIES:
        listing = "; ".join(FAMILIES.values())
        raise UsageError(f"unknown prior family {family!r}; known families: {listing}")
    args = [float(v) for v in rest.split(",")] if rest.strip() else []
    need = 0 if family == "uniform" else 2
    if len(args) != need:
        raise UsageError(f"{family} takes {need} parameters: {FAMILIES[family]}")
    if family == "normal":
        return family, normal_density(D.NormalParams(*args))
    if family == "logistic":
        return family, logistic_density(D.LogisticParams(*args))
    if family == "beta":
        return family, beta_density(D.BetaShape(*args))
    return family, uniform_density()


def _emit(out, text: str) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _config(args, drop=("out", "func", "command", "verbose")) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in drop}


def _prov(args, seed=None) -> str:
    return provenance_line(args.command, seed, _config(args))


# -- subcommands ------------------------------------------------------------------------------


def cmd_induce(args) -> None:
    family, dens = parse_prior(args.prior)
    if args.direction == "theta":
        if family not in BETA_SIDE:
            raise UsageError(f"--direction theta needs a prior on beta ({', '.join(BETA_SIDE)})")
        grid = np.linspace(0.0, 1.0, args.grid + 2)[1:-1]
        values = induce_theta_density(dens, grid)
    else:
        if family not in THETA_SIDE:
            raise UsageError(f"--direction beta needs a prior on theta ({', '.join(THETA_SIDE)})")
        lo, hi = args.range
        grid = np.linspace(lo, hi, args.grid)
        values = induce_beta_density(dens, grid)
    _emit(args.out, csv_text(["grid", "density"], np.column_stack([grid, values]), _prov(args)))


def _prior_from_args(args) -> PriorSpec:
    kind = args.kind
    target = None
    if args.alpha is not None or args.beta is not None:
        if args.alpha is None or args.beta is None:
            raise UsageError("give both --alpha and --beta")
        target = D.BetaShape(args.alpha, args.beta)
    if kind == "logistic":
        return logistic_matched_priors(args.p)
    if kind == "vague":
        return vague_priors(args.p, args.sd)
    if target is None and (args.mean is None or args.cv is None):
        raise UsageError(f"--kind {kind} needs --mean and --cv, or --alpha and --beta")
    if kind == "beta_matched":
        return beta_matched_priors(args.p, target, mean=args.mean, cv=args.cv)
    return weighted_priors(args.p, target, k=args.k, mean=args.mean, cv=args.cv)


def cmd_build_prior(args) -> None:
    if args.k is not None and not 0 < args.k < 1:
        raise UsageError(f"--k must lie in the open interval (0, 1), got {args.k}")
    if args.k is None:
        args.k = 0.4
    spec = _prior_from_args(args)
    for j, c in enumerate(spec.coeff_priors):
        print(f"beta{j}: Normal({c.mean:.6g}, {c.variance:.6g}) sd={c.sd:.6g}", file=sys.stderr)
    doc = {"provenance": _prov(args), **spec.to_dict()}
    _emit(args.out, json.dumps(doc, indent=2) + "\n")


def cmd_eta_moments(args) -> None:
    if args.alpha is not None and args.beta is not None:
        shape = D.BetaShape(args.alpha, args.beta)
    elif args.mean is not None and args.cv is not None:
        from .priors import beta_shapes_from_mean_cv

        shape = beta_shapes_from_mean_cv(args.mean, args.cv)
    else:
        raise UsageError("give --alpha and --beta, or --mean and --cv")
    quad = eta_mean_var(shape)
    exact = eta_mean_var_analytic(shape)
    diff = max(abs(quad.mu_eta - exact.mu_eta), abs(quad.var_eta - exact.var_eta))
    cols = ["alpha", "beta", "mu_eta", "var_eta", "mu_eta_analytic", "var_eta_analytic", "max_abs_diff"]
    row = [shape.alpha, shape.beta, quad.mu_eta, quad.var_eta, exact.mu_eta, exact.var_eta, diff]
    _emit(args.out, csv_text(cols, [row], _prov(args)))


def cmd_sample_root(args) -> None:
    table = root_logistic_table(args.p)
    x = table.sample(args.n, args.seed)
    if args.table:
        table.to_csv(args.table, _prov(args, args.seed))
    print(f"sample variance {x.var(ddof=1):.6g}, target {math.pi**2 / (3 * (args.p + 1)):.6g}",
          file=sys.stderr)
    _emit(args.out, csv_text(["x"], x[:, None], _prov(args, args.seed)))


def cmd_genfunc_curves(args) -> None:
    tmin = -args.tmax if args.tmin is None else args.tmin
    t = np.linspace(tmin, args.tmax, args.points)
    cols, data, dropped = genfunc_curves(args.p, t)
    if dropped:
        print(f"warning: {dropped} rows with |t| >= 1 omitted: the MGF does not exist there", file=sys.stderr)
    _emit(args.out, csv_text(cols, data, _prov(args)))


def cmd_laplace_half(args) -> None:
    params = D.LogisticParams(args.mu, args.s)
    full = half_logistic_laplace(args.t, params, doubled=True)
    half = half_logistic_laplace(args.t, params, doubled=False)
    deriv = mgf_derivative_numeric(params, args.delta)
    cols = ["t", "mu", "s", "laplace_doubled", "laplace_undoubled", "delta", "mgf_derivative"]
    _emit(args.out, csv_text(cols, [[args.t, args.mu, args.s, full, half, args.delta, deriv]], _prov(args)))


def _load_dataset(args) -> Dataset:
    if args.appendix:
        ref = resources.files("logitprior") / "data" / "scenario1_appendix.csv"
        with resources.as_file(ref) as path:
            cols, data, _ = read_csv(path)
    else:
        if args.data is None:
            raise UsageError("give --data PATH or --appendix")
        if not Path(args.data).is_file():
            raise UsageError(f"data file not found: {args.data}")
        cols, data, _ = read_csv(args.data)
    if "y" not in cols:
        raise UsageError("data file needs a 'y' column")
    iy = cols.index("y")
    X = np.delete(data, iy, axis=1)
    if args.standardize:
        X, _ = standardize(X)
    return Dataset(X, data[:, iy], standardized=args.standardize or args.appendix)


def cmd_fit(args) -> None:
    data = _load_dataset(args)
    if args.prior:
        path = Path(args.prior)
        if not path.is_file():
            raise UsageError(f"prior file not found: {args.prior}")
        doc = json.loads(path.read_text())
        doc.pop("provenance", None)
        prior = PriorSpec.from_dict(doc)
    else:
        ns = argparse.Namespace(kind=args.kind, p=data.p, sd=args.sd, k=args.k, mean=args.mean,
                                cv=args.cv, alpha=None, beta=None)
        prior = _prior_from_args(ns)
    if prior.p != data.p:
        raise UsageError(f"prior has p = {prior.p} but the data have {data.p} covariates")
    chains = mh_sample(data, prior, args.chains, args.iterations, args.burnin, seed=args.seed)
    summary = summarize(chains)
    print(summary.table(), file=sys.stderr)
    prov = _prov(args, args.seed)
    if args.chains_out:
        chains.to_csv(args.chains_out, prov)
    cols = ["parameter", "mean", "ci_low", "ci_high", "map", "rhat"]
    _emit(args.out, csv_text(cols, summary.rows(), prov))


SIMULATE_EPILOG = "config file: one key=value per line, '#' starts a comment. Keys:\n" + "\n".join(
    f"  {k:<12} {v}" for k, v in CONFIG_KEYS.items()
)


def cmd_simulate(args) -> None:
    path = Path(args.config)
    if not path.is_file():
        raise UsageError(f"config file not found: {args.config}")
    from dataclasses import replace

    spec = load_scenario_config(path)
    if args.seed is not None:
        spec = replace(spec, master_seed=args.seed)
    if args.replicates is not None:
        spec = replace(spec, replicates=args.replicates)
    report = run_study(spec, workers=args.threads)
    print(report.table(), file=sys.stderr)
    print(f"replicates {report.replicates}, MLE not converged in {report.mle_excluded}", file=sys.stderr)
    prov = provenance_line("simulate", spec.master_seed, {"spec": str(spec)})
    text = report.to_csv(None, prov)
    if args.json:
        Path(args.json).write_text(json.dumps({"provenance": prov, **report.to_dict()}, indent=2) + "\n")
    _emit(args.out, text)


def _occupancy_prior(name: str, p: int) -> PriorSpec:
    if name == "logistic":
        return logistic_matched_priors(p)
    if name == "wide":
        return vague_priors(p, WIDE_SD)
    if name == "spocc":
        return vague_priors(p, SPOCC_SD)
    raise UsageError(f"unknown occupancy prior {name!r}; use logistic, wide or spocc")


def cmd_occupancy(args) -> None:
    outdir = Path(args.outdir)
    bpsi, bdet = args.psi_betas, args.det_betas
    psi_prior = _occupancy_prior(args.prior, len(bpsi) - 1)
    det_prior = _occupancy_prior(args.prior, len(bdet) - 1)
    prov = _prov(args, args.seed)
    data = simulate_occupancy(bpsi, bdet, args.sites, args.visits, seed=args.seed)
    ipsi, idet = induced_occupancy_priors(
        psi_prior, det_prior, data.W, data.V.reshape(data.sites * data.visits, data.r), args.draws, seed=args.seed
    )
    fit = None
    if not args.induced_only:
        fit = fit_occupancy(data, psi_prior, det_prior, args.chains, args.iterations, args.burnin,
                            seed=args.seed, fixed_detection=args.fixed_detection)
    # everything computed; now write
    outdir.mkdir(parents=True, exist_ok=True)
    data.to_csv(outdir, prov)
    ipsi.to_csv(outdir / "induced_psi.csv", prov)
    idet.to_csv(outdir / "induced_det.csv", prov)
    print(f"induced psi mass near 0 or 1: {ipsi.mass_in(0, 0.05) + ipsi.mass_in(0.95, 1):.4f}",
          file=sys.stderr)
    if fit is not None:
        rows = list(fit.psi_summary.rows())
        if fit.det_summary is not None:
            rows += list(fit.det_summary.rows())
        text = csv_text(["parameter", "mean", "ci_low", "ci_high", "map", "rhat"], rows, prov)
        (outdir / "summary.csv").write_text(text)
        print(fit.psi_summary.table(), file=sys.stderr)
        if fit.det_summary is not None:
            print(fit.det_summary.table(), file=sys.stderr)
        if fit.weakly_identified():
            print("warning: R-hat above 1.1: the model is weakly identified by these data", file=sys.stderr)


def cmd_ricker_demo(args) -> None:
    spec = ricker_model_a_spec(args.a_mean, args.a_sd, args.b_mean, args.b_sd, n=args.n)
    res = pushforward_sample(spec, args.seed, bins=args.bins, workers=args.threads)
    print(f"K = a/b: skewness {res.skewness():.4g}", file=sys.stderr)
    cols = ["grid", "density"]
    _emit(args.out, csv_text(cols, np.column_stack([res.grid, res.density]), _prov(args, args.seed)))


# -- parser ---------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logitprior", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, **kw):
        p = sub.add_parser(name, help=help_, description=help_, **kw)
        p.set_defaults(func=func)
        p.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
        return p

    p = add("induce", cmd_induce, "density induced on theta (or beta) by a prior on the other scale")
    p.add_argument("--direction", choices=("theta", "beta"), default="theta")
    p.add_argument("--prior", required=True, help="; ".join(FAMILIES.values()))
    p.add_argument("--grid", type=_pos_int, default=513, help="grid points (default 513)")
    p.add_argument("--range", type=_float_list, default=[-10.0, 10.0],
                   help="lo,hi of the beta grid for --direction beta")

    p = add("build-prior", cmd_build_prior, "Normal coefficient priors as JSON")
    p.add_argument("--kind", choices=PRIOR_KINDS, required=True)
    p.add_argument("--p", type=_nonneg_int, required=True, help="number of covariates")
    p.add_argument("--mean", type=float, help="mean of the Beta target")
    p.add_argument("--cv", type=float, help="coefficient of variation of the Beta target")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--k", type=float, help="intercept weight for --kind weighted, in (0, 1)")
    p.add_argument("--sd", type=float, default=1000.0, help="sd for --kind vague")

    p = add("eta-moments", cmd_eta_moments, "mean and variance of logit(theta) for a Beta target")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--mean", type=float)
    p.add_argument("--cv", type=float)

    p = add("sample-root", cmd_sample_root, "draws whose (p+1)-fold sums are Logistic(0,1)")
    p.add_argument("--p", type=_nonneg_int, required=True)
    p.add_argument("--n", type=_pos_int, required=True)
    p.add_argument("--seed", type=_nonneg_int, required=True)
    p.add_argument("--table", help="also write the tabulated grid, pdf, cdf here")

    p = add("genfunc-curves", cmd_genfunc_curves, "root MGF and CF curves")
    p.add_argument("--p", type=_int_list, required=True, help="comma list, e.g. 0,1,3")
    p.add_argument("--tmax", type=float, default=0.95)
    p.add_argument("--tmin", type=float, help="default -tmax")
    p.add_argument("--points", type=_pos_int, default=191)

    p = add("laplace-half", cmd_laplace_half, "half-logistic Laplace transform and MGF-derivative check")
    p.add_argument("--t", type=float, default=0.1)
    p.add_argument("--mu", type=float, default=3.0)
    p.add_argument("--s", type=float, default=5.0)
    p.add_argument("--delta", type=float, default=1e-4)

    p = add("fit", cmd_fit, "posterior summary by random-walk Metropolis")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--data", help="CSV with a y column and covariate columns")
    src.add_argument("--appendix", action="store_true", help="use the built-in n = 15 sample")
    p.add_argument("--standardize", action="store_true", help="standardize the covariates first")
    p.add_argument("--prior", help="PriorSpec JSON from build-prior")
    p.add_argument("--kind", choices=PRIOR_KINDS, default="logistic", help="used without --prior")
    p.add_argument("--sd", type=float, default=1000.0)
    p.add_argument("--k", type=float, default=0.4)
    p.add_argument("--mean", type=float, default=0.7)
    p.add_argument("--cv", type=float, default=0.3)
    p.add_argument("--chains", type=_pos_int, default=4)
    p.add_argument("--iterations", type=_pos_int, default=5000)
    p.add_argument("--burnin", type=_nonneg_int, default=2000)
    p.add_argument("--seed", type=_nonneg_int, required=True)
    p.add_argument("--chains-out", help="write post-burn-in draws here")

    p = add("simulate", cmd_simulate, "replicated simulation study",
            epilog=SIMULATE_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--config", required=True, help="key=value scenario file (keys below)")
    p.add_argument("--seed", type=_nonneg_int, help="overrides master_seed")
    p.add_argument("--replicates", type=_pos_int)
    p.add_argument("--threads", type=_pos_int, default=1, help="worker processes")
    p.add_argument("--json", help="also write the full report as JSON")

    p = add("occupancy", cmd_occupancy, "simulate, fit and induce priors for an occupancy model")
    p.add_argument("--outdir", required=True)
    p.add_argument("--sites", type=_pos_int, default=200)
    p.add_argument("--visits", type=_pos_int, default=3)
    p.add_argument("--psi-betas", type=_float_list, default=[0.3, 0.5, -0.4, 0.2])
    p.add_argument("--det-betas", type=_float_list, default=[0.0, -0.6, 0.4, 0.3])
    p.add_argument("--prior", default="logistic", help="logistic | wide (sd 40) | spocc (sd 1.65)")
    p.add_argument("--fixed-detection", type=float, help="hold detection at this probability")
    p.add_argument("--induced-only", action="store_true")
    p.add_argument("--draws", type=_pos_int, default=100_000)
    p.add_argument("--chains", type=_pos_int, default=4)
    p.add_argument("--iterations", type=_pos_int, default=5000)
    p.add_argument("--burnin", type=_nonneg_int, default=2000)
    p.add_argument("--seed", type=_nonneg_int, required=True)

    p = add("ricker-demo", cmd_ricker_demo, "induced prior on K = a/b in Ricker model A")
    p.add_argument("--a-mean", type=float, default=0.0)
    p.add_argument("--a-sd", type=float, default=10.0)
    p.add_argument("--b-mean", type=float, default=0.0)
    p.add_argument("--b-sd", type=float, default=10.0)
    p.add_argument("--n", type=_pos_int, default=100_000)
    p.add_argument("--bins", type=_pos_int, default=512)
    p.add_argument("--seed", type=_nonneg_int, required=True)
    p.add_argument("--threads", type=_pos_int, default=1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except (UsageError, DomainError, PreconditionError, ValueError) as exc:
        print(f"logitprior {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (InversionError, ArithmeticError) as exc:
        print(f"logitprior {args.command}: numerical failure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
