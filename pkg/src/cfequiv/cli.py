"""Command line interface.

Subcommands: ``test`` (single-shot testing on CSV data), ``threshold``
(margin computation for a named benchmark), ``closed-form`` (printed
closed-form distances), ``simulate`` (the Monte Carlo harness).

Exit codes: 0 success, 2 usage/config error, 3 data error, 4 numerical error.
Human-readable messages go to stderr; machine-readable JSON to stdout or the
--out path.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .decision import EquivalenceConfig, Hypothesis, ThresholdProvenance, run_test
from .exceptions import (
    ConfigError,
    DataError,
    InputDomainError,
    InsufficientSampleError,
    NumericalError,
    ShapeError,
    UnsupportedKernelError,
)
from .kernels import KernelFamily, KernelSpec
from .samplers import BenchmarkSpec, Scenario
from .sim import ExperimentConfig, read_sample_csv, run_experiment, write_results_csv
from .thresholds import (
    ThresholdResult,
    closed_form_homogeneity_mixture,
    closed_form_independence_gauss,
    closed_form_symmetry_mixture,
    threshold_gaussian_shift_quadrature,
    threshold_random_approx,
)

_USAGE_ERRORS = (ConfigError, InputDomainError, UnsupportedKernelError)
_DATA_ERRORS = (DataError, ShapeError, InsufficientSampleError)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfequiv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="run one equivalence test on CSV data")
    t.add_argument("hypothesis", choices=["symmetry", "homogeneity", "independence"])
    t.add_argument("--data", required=True, help="CSV file, one observation per row")
    t.add_argument("--data2", help="second sample CSV (homogeneity)")
    t.add_argument("--split", type=int, help="independence: first SPLIT columns are x")
    t.add_argument("--family", choices=[f.value for f in KernelFamily], default="stable")
    t.add_argument("--gamma", type=float, default=1.0)
    t.add_argument("--gamma2", type=float, help="independence: kernel exponent for y")
    t.add_argument("--scale", type=float, default=1.0)
    t.add_argument("--delta", type=float, help="equivalence margin")
    t.add_argument("--delta-config", help="JSON file describing how to compute the margin")
    t.add_argument("--alpha", type=float, default=0.05)
    t.add_argument("--out", help="write the report JSON here (default: stdout)")

    th = sub.add_parser("threshold", help="compute an equivalence margin")
    th.add_argument("--benchmark", required=True, choices=[s.value for s in Scenario])
    th.add_argument("--p", type=int, required=True)
    th.add_argument("--q", type=int)
    th.add_argument("--theta", type=float)
    th.add_argument("--mu0", type=float)
    th.add_argument("--rho", type=float)
    th.add_argument("--nu", type=float, default=5.0)
    th.add_argument("--shape", type=float, default=5.0)
    th.add_argument("--delta-shift", type=float, help="gauss-mixture-shift: ||delta||")
    th.add_argument("--family", choices=[f.value for f in KernelFamily], default="stable")
    th.add_argument("--gamma", type=float, default=1.0)
    th.add_argument("--gamma2", type=float)
    th.add_argument("--scale", type=float, default=1.0)
    th.add_argument("--method", choices=["ra", "quad"], default="ra")
    th.add_argument("-B", "--b", dest="b", type=int, default=5000)
    th.add_argument("--seed", type=int, default=0)
    th.add_argument("--out", help="write the result JSON here (default: stdout)")

    cf = sub.add_parser("closed-form", help="print a closed-form distance")
    cf.add_argument(
        "which", choices=["indep-gauss", "sym-mixture", "homog-mixture", "gauss-shift"]
    )
    cf.add_argument("--rho", type=float)
    cf.add_argument("--p", type=int, default=1)
    cf.add_argument("--delta-norm", type=float)
    cf.add_argument("--mu0", type=float)
    cf.add_argument("--family", choices=["stable", "laplace"], default="stable")
    cf.add_argument("--gamma", type=float, default=1.0)

    sim = sub.add_parser("simulate", help="run a Monte Carlo experiment")
    sim.add_argument("--config", required=True, help="experiment config JSON")
    sim.add_argument("--out", required=True, help="rejection-rate CSV output path")
    sim.add_argument("--jobs", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None)
    return parser


def _emit(payload: dict, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _kernel_of(args, gamma: Optional[float] = None) -> KernelSpec:
    return KernelSpec(
        KernelFamily(args.family), args.gamma if gamma is None else gamma, args.scale
    )


def _margin_from_config(path: str, kernel: KernelSpec, kernel2: KernelSpec) -> tuple[float, ThresholdProvenance]:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        bench = BenchmarkSpec(
            Scenario(payload["benchmark"]["scenario"]),
            **{k: v for k, v in payload["benchmark"].items() if k != "scenario"},
        )
        method = payload.get("method", "ra")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid delta config: {exc}") from exc
    if method == "quad":
        if bench.scenario is not Scenario.GAUSS_SHIFT:
            raise ConfigError("quadrature margins are available for gauss-shift only")
        result = threshold_gaussian_shift_quadrature(kernel, bench.p, bench.mu)
        return result.delta, ThresholdProvenance.QUADRATURE
    kernels = kernel if kernel == kernel2 else (kernel, kernel2)
    result = threshold_random_approx(
        bench, kernels, int(payload.get("B", 5000)), int(payload.get("seed", 0))
    )
    return result.delta, ThresholdProvenance.RANDOM_APPROX


def _cmd_test(args) -> int:
    kernel = _kernel_of(args)
    kernel2 = _kernel_of(args, args.gamma2) if args.gamma2 is not None else kernel
    if args.hypothesis == "symmetry":
        data = read_sample_csv(args.data)
        kernels: tuple[KernelSpec, ...] = (kernel,)
    elif args.hypothesis == "homogeneity":
        if not args.data2:
            raise ConfigError("homogeneity requires --data2")
        data = (read_sample_csv(args.data), read_sample_csv(args.data2))
        kernels = (kernel,)
    else:
        if args.split is None:
            raise ConfigError("independence requires --split")
        table = read_sample_csv(args.data)
        if not (1 <= args.split < table.shape[1]):
            raise ConfigError(
                f"--split must lie in [1, {table.shape[1] - 1}] for {table.shape[1]} columns"
            )
        data = (table[:, : args.split], table[:, args.split :])
        kernels = (kernel, kernel2)
    if (args.delta is None) == (args.delta_config is None):
        raise ConfigError("exactly one of --delta and --delta-config is required")
    if args.delta is not None:
        delta, provenance = args.delta, ThresholdProvenance.USER_SUPPLIED
    else:
        delta, provenance = _margin_from_config(args.delta_config, kernel, kernel2)
    report = run_test(
        Hypothesis(args.hypothesis),
        kernels,
        data,
        EquivalenceConfig(delta=delta, alpha=args.alpha),
        threshold_provenance=provenance,
    )
    _emit(report.to_dict(), args.out)
    verdict = "equivalence declared" if report.reject_null else "equivalence not established"
    print(
        f"{args.hypothesis}: statistic {report.statistic:.6g} vs critical value "
        f"{report.critical_value:.6g} -> {verdict}",
        file=sys.stderr,
    )
    return 0


def _cmd_threshold(args) -> int:
    scenario = Scenario(args.benchmark)
    kernel = _kernel_of(args)
    if args.method == "quad":
        if scenario is not Scenario.GAUSS_SHIFT:
            raise ConfigError("quadrature margins are available for gauss-shift only")
        if args.mu0 is None:
            raise ConfigError("gauss-shift requires --mu0")
        result = threshold_gaussian_shift_quadrature(kernel, args.p, args.mu0)
    else:
        delta_vec = None
        if scenario is Scenario.GAUSS_MIXTURE_SHIFT:
            if args.delta_shift is None:
                raise ConfigError("gauss-mixture-shift requires --delta-shift")
            delta_vec = (args.delta_shift,) + (0.0,) * (args.p - 1)
        bench = BenchmarkSpec(
            scenario,
            p=args.p,
            q=args.q,
            theta=args.theta,
            mu=args.mu0,
            rho=args.rho,
            nu=args.nu,
            shape=args.shape,
            delta=delta_vec,
        )
        kernel2 = _kernel_of(args, args.gamma2) if args.gamma2 is not None else kernel
        kernels = kernel if kernel == kernel2 else (kernel, kernel2)
        result = threshold_random_approx(bench, kernels, args.b, args.seed)
    _emit(result.to_dict(), args.out)
    return 0


def _cmd_closed_form(args) -> int:
    if args.which == "indep-gauss":
        if args.rho is None:
            raise ConfigError("indep-gauss requires --rho")
        value = closed_form_independence_gauss(args.rho)
    elif args.which == "sym-mixture":
        if args.delta_norm is None:
            raise ConfigError("sym-mixture requires --delta-norm")
        value = closed_form_symmetry_mixture(args.p, args.delta_norm)
    elif args.which == "homog-mixture":
        if args.delta_norm is None:
            raise ConfigError("homog-mixture requires --delta-norm")
        value = closed_form_homogeneity_mixture(args.p, args.delta_norm)
    else:
        if args.mu0 is None:
            raise ConfigError("gauss-shift requires --mu0")
        spec = KernelSpec(KernelFamily(args.family), args.gamma)
        value = threshold_gaussian_shift_quadrature(spec, args.p, args.mu0).delta
    print(f"{value:.10g}")
    return 0


def _cmd_simulate(args) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    if args.seed is not None:
        cfg = ExperimentConfig.from_dict({**_cfg_dict(cfg), "seed": args.seed})
    jobs = args.jobs
    if jobs is None:
        jobs = int(os.environ.get("CFEQUIV_JOBS", "1"))
    result = run_experiment(cfg, jobs=max(1, jobs))
    write_results_csv(result, args.out)
    for failure in result.failures:
        print(f"warning: {failure}", file=sys.stderr)
    print(f"wrote {len(result.cells)} cells to {args.out}", file=sys.stderr)
    return 0


def _cfg_dict(cfg: ExperimentConfig) -> dict:
    return {
        "example": cfg.example,
        "kernels": [
            {"family": k.family.value, "gamma": k.gamma, "scale": k.scale} for k in cfg.kernels
        ],
        "n": list(cfg.n),
        "p": list(cfg.p),
        "trials": cfg.trials,
        "alpha": cfg.alpha,
        "benchmark_param": cfg.benchmark_param,
        "grid": list(cfg.grid),
        "B": cfg.b,
        "seed": cfg.seed,
        "threshold_method": cfg.threshold_method,
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    handlers = {
        "test": _cmd_test,
        "threshold": _cmd_threshold,
        "closed-form": _cmd_closed_form,
        "simulate": _cmd_simulate,
    }
    try:
        return handlers[args.command](args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except (NumericalError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
