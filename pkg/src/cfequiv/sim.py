"""Monte Carlo experiment harness for the six named examples.

An experiment sweeps kernels x sample sizes x dimensions x an
alternative-parameter grid for one scenario family (E1a/E1b symmetry,
E2a/E2b homogeneity, E3a/E3b independence), computes the equivalence margin
once per (kernel, dimension) configuration, and tallies rejection rates over
seeded trials.  Every trial draws from its own spawned RNG stream, so results
are identical for any worker count.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .decision import EquivalenceConfig, Hypothesis, run_test
from .exceptions import CfequivError, ConfigError, DataError
from .kernels import KernelFamily, KernelSpec
from .samplers import BenchmarkSpec, RngStream, Scenario
from .thresholds import threshold_gaussian_shift_quadrature, threshold_random_approx

EXAMPLES = ("E1a", "E1b", "E2a", "E2b", "E3a", "E3b")

_SCENARIO_OF = {
    "E1a": Scenario.SKEW_NORMAL,
    "E1b": Scenario.SKEW_CAUCHY,
    "E2a": Scenario.GAUSS_SHIFT,
    "E2b": Scenario.GAMMA_SCALE,
    "E3a": Scenario.MVN_CROSS,
    "E3b": Scenario.MVT_CROSS,
}

_DEFAULT_BENCH_PARAM = {"E1a": 3.0, "E1b": 3.0, "E2a": 2.0, "E2b": 2.0, "E3a": 0.8, "E3b": 0.8}

_DEFAULT_GRID = {
    "E1a": (5.0, 4.0, 3.0, 2.0, 1.0, 0.0),
    "E1b": (5.0, 4.0, 3.0, 2.0, 1.0, 0.0),
    "E2a": (2.2, 2.1, 2.0, 1.9, 1.8, 1.7),
    "E2b": (2.2, 2.1, 2.0, 1.9, 1.8, 1.7),
    "E3a": (0.84, 0.82, 0.8, 0.75, 0.7, 0.65),
    "E3b": (0.84, 0.82, 0.8, 0.75, 0.7, 0.65),
}

DEFAULT_STABLE_GAMMAS = (0.5, 1.0, 1.5, 2.0)
DEFAULT_LAPLACE_GAMMAS = (0.1, 0.25, 1.0, 4.0)

# spawn-key namespaces: thresholds vs trials
_NS_THRESHOLD = 0
_NS_TRIAL = 1


def _key_of(value: float) -> int:
    # reals enter spawn keys as scaled nonnegative integers
    scaled = int(round(abs(value) * 1_000_000))
    return (scaled << 1) | (1 if value < 0 else 0)


@dataclass(frozen=True)
class ExperimentConfig:
    example: str
    kernels: tuple[KernelSpec, ...]
    n: tuple[int, ...] = (100, 200, 300)
    p: tuple[int, ...] = (2, 4, 6)
    trials: int = 2000
    alpha: float = 0.05
    benchmark_param: Optional[float] = None
    grid: Optional[tuple[float, ...]] = None
    b: int = 5000
    seed: int = 0
    threshold_method: str = "ra"

    def __post_init__(self) -> None:
        if self.example not in EXAMPLES:
            raise ConfigError(f"example must be one of {EXAMPLES}, got {self.example!r}")
        if not self.kernels:
            raise ConfigError("at least one kernel spec is required")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.n or not self.p:
            raise ConfigError("n and p grids must be nonempty")
        if not (0.0 < self.alpha < 1.0):
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.threshold_method not in ("ra", "quad"):
            raise ConfigError("threshold_method must be 'ra' or 'quad'")
        if self.threshold_method == "quad" and self.example != "E2a":
            raise ConfigError("quadrature thresholds are available for E2a only")
        if self.b < 1000:
            raise ConfigError(f"B must be >= 1000, got {self.b}")
        if self.benchmark_param is None:
            object.__setattr__(self, "benchmark_param", _DEFAULT_BENCH_PARAM[self.example])
        if self.grid is None:
            object.__setattr__(self, "grid", _DEFAULT_GRID[self.example])
        if not self.grid:
            raise ConfigError("alternative-parameter grid must be nonempty")

    @property
    def hypothesis(self) -> Hypothesis:
        return BenchmarkSpec(
            _SCENARIO_OF[self.example], p=2, **self._bench_kwargs(self.benchmark_param)
        ).hypothesis

    def _bench_kwargs(self, value: float) -> dict:
        scenario = _SCENARIO_OF[self.example]
        if scenario in (Scenario.SKEW_NORMAL, Scenario.SKEW_CAUCHY):
            return {"theta": value}
        if scenario in (Scenario.GAUSS_SHIFT, Scenario.GAMMA_SCALE):
            return {"mu": value}
        return {"rho": value}

    def benchmark(self, p: int, value: float) -> BenchmarkSpec:
        return BenchmarkSpec(_SCENARIO_OF[self.example], p=p, **self._bench_kwargs(value))

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentConfig":
        try:
            if "kernels" in payload:
                kernels = tuple(
                    KernelSpec(
                        KernelFamily(k["family"]), float(k["gamma"]), float(k.get("scale", 1.0))
                    )
                    for k in payload["kernels"]
                )
            else:
                kernels = tuple(
                    KernelSpec(KernelFamily.STABLE, g) for g in DEFAULT_STABLE_GAMMAS
                ) + tuple(KernelSpec(KernelFamily.LAPLACE, g) for g in DEFAULT_LAPLACE_GAMMAS)
            return cls(
                example=payload["example"],
                kernels=kernels,
                n=tuple(int(v) for v in payload.get("n", (100, 200, 300))),
                p=tuple(int(v) for v in payload.get("p", (2, 4, 6))),
                trials=int(payload.get("trials", 2000)),
                alpha=float(payload.get("alpha", 0.05)),
                benchmark_param=payload.get("benchmark_param"),
                grid=tuple(float(v) for v in payload["grid"]) if "grid" in payload else None,
                b=int(payload.get("B", payload.get("b", 5000))),
                seed=int(payload.get("seed", 0)),
                threshold_method=payload.get("threshold_method", "ra"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid experiment config: {exc}") from exc

    @classmethod
    def from_json(cls, path: str) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class CellResult:
    example: str
    family: str
    gamma: float
    n: int
    p: int
    q: Optional[int]
    param: float
    delta: float
    rejection_rate: float
    trials: int
    seed: int
    mean_statistic: float
    mean_sigma: float
    wall_time: float


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    cells: tuple[CellResult, ...] = field(default_factory=tuple)
    failures: tuple[str, ...] = field(default_factory=tuple)


def _threshold_for(cfg: ExperimentConfig, spec: KernelSpec, p: int) -> float:
    if cfg.threshold_method == "quad":
        return threshold_gaussian_shift_quadrature(spec, p, cfg.benchmark_param).delta
    stream = RngStream(
        cfg.seed, (_NS_THRESHOLD, spec._code(), _key_of(spec.gamma), _key_of(spec.scale), p)
    )
    bench = cfg.benchmark(p, cfg.benchmark_param)
    return threshold_random_approx(bench, spec, cfg.b, stream).delta


def _trial_stream(cfg: ExperimentConfig, spec: KernelSpec, n: int, p: int, param: float, trial: int) -> RngStream:
    return RngStream(
        cfg.seed,
        (
            _NS_TRIAL,
            EXAMPLES.index(cfg.example),
            spec._code(),
            _key_of(spec.gamma),
            n,
            p,
            _key_of(param),
            trial,
        ),
    )


def _run_trial_range(
    cfg: ExperimentConfig,
    spec: KernelSpec,
    n: int,
    p: int,
    param: float,
    delta: float,
    lo: int,
    hi: int,
) -> tuple[int, np.ndarray, np.ndarray]:
    bench = cfg.benchmark(p, param)
    hyp = bench.hypothesis
    eq = EquivalenceConfig(delta=delta, alpha=cfg.alpha)
    rejected = 0
    stats = np.empty(hi - lo)
    sigmas = np.empty(hi - lo)
    for t in range(lo, hi):
        data = bench.draw(n, _trial_stream(cfg, spec, n, p, param, t))
        report = run_test(hyp, spec, data, eq)
        rejected += int(report.reject_null)
        stats[t - lo] = report.statistic
        sigmas[t - lo] = report.sigma_n
    return rejected, stats, sigmas


def _cell_jobs(cfg: ExperimentConfig) -> list[tuple[KernelSpec, int, int, float]]:
    return [
        (spec, n, p, param)
        for spec in cfg.kernels
        for p in cfg.p
        for n in cfg.n
        for param in cfg.grid
    ]


_CELL_ERRORS = (CfequivError, np.linalg.LinAlgError, FloatingPointError)


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentResult:
    """Run every grid cell; deterministic for a fixed seed whatever ``jobs`` is.

    Sampler or numerical failures abort the affected cell (or the cells of
    the affected threshold) with a diagnostic collected in ``failures``; the
    remaining grid still runs.
    """
    thresholds: dict[tuple[KernelSpec, int], float] = {}
    failures: list[str] = []
    for spec in cfg.kernels:
        for p in cfg.p:
            try:
                thresholds[(spec, p)] = _threshold_for(cfg, spec, p)
            except _CELL_ERRORS as exc:
                failures.append(
                    f"threshold {spec.family.value} gamma={spec.gamma} p={p}: {exc}"
                )
    cells = []
    cell_list = [
        (spec, n, p, param)
        for spec, n, p, param in _cell_jobs(cfg)
        if (spec, p) in thresholds
    ]

    def run_cell(pool, chunk, spec, n, p, param):
        delta = thresholds[(spec, p)]
        t0 = time.perf_counter()
        if pool is None:
            rejected, stats, sigmas = _run_trial_range(
                cfg, spec, n, p, param, delta, 0, cfg.trials
            )
        else:
            futures = [
                pool.submit(
                    _run_trial_range, cfg, spec, n, p, param, delta, lo, min(lo + chunk, cfg.trials)
                )
                for lo in range(0, cfg.trials, chunk)
            ]
            parts = [f.result() for f in futures]
            rejected = sum(part[0] for part in parts)
            stats = np.concatenate([part[1] for part in parts])
            sigmas = np.concatenate([part[2] for part in parts])
        return _make_cell(
            cfg, spec, n, p, param, delta, rejected, stats, sigmas, time.perf_counter() - t0
        )

    if jobs > 1:
        chunk = max(1, math.ceil(cfg.trials / max(1, jobs)))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for spec, n, p, param in cell_list:
                try:
                    cells.append(run_cell(pool, chunk, spec, n, p, param))
                except _CELL_ERRORS as exc:
                    failures.append(_cell_diagnostic(spec, n, p, param, exc))
    else:
        for spec, n, p, param in cell_list:
            try:
                cells.append(run_cell(None, 0, spec, n, p, param))
            except _CELL_ERRORS as exc:
                failures.append(_cell_diagnostic(spec, n, p, param, exc))
    return ExperimentResult(config=cfg, cells=tuple(cells), failures=tuple(failures))


def _cell_diagnostic(spec: KernelSpec, n: int, p: int, param: float, exc: Exception) -> str:
    return f"cell {spec.family.value} gamma={spec.gamma} n={n} p={p} param={param}: {exc}"


def _make_cell(cfg, spec, n, p, param, delta, rejected, stats, sigmas, wall) -> CellResult:
    hyp = cfg.hypothesis
    return CellResult(
        example=cfg.example,
        family=spec.family.value,
        gamma=spec.gamma,
        n=n,
        p=p,
        q=p if hyp is Hypothesis.INDEPENDENCE else None,
        param=param,
        delta=delta,
        rejection_rate=rejected / cfg.trials,
        trials=cfg.trials,
        seed=cfg.seed,
        mean_statistic=float(np.sum(stats)) / cfg.trials,
        mean_sigma=float(np.sum(sigmas)) / cfg.trials,
        wall_time=wall,
    )


_CSV_COLUMNS = (
    "example",
    "family",
    "gamma",
    "n",
    "p",
    "q",
    "param",
    "delta",
    "rejection_rate",
    "trials",
    "seed",
)


def write_results_csv(result: ExperimentResult, path: str) -> None:
    """One row per grid cell; reals with 6 decimals; stable column order."""
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(_CSV_COLUMNS)
            for c in result.cells:
                writer.writerow(
                    [
                        c.example,
                        c.family,
                        f"{c.gamma:.6f}",
                        c.n,
                        c.p,
                        "" if c.q is None else c.q,
                        f"{c.param:.6f}",
                        f"{c.delta:.6f}",
                        f"{c.rejection_rate:.6f}",
                        c.trials,
                        c.seed,
                    ]
                )
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def read_sample_csv(path: str, expected_columns: Optional[int] = None) -> np.ndarray:
    """Load observations from CSV: one row per observation, optional header.

    The first row is treated as a header when any of its cells is not a
    finite decimal number.  Non-finite cells and ragged rows are data errors
    naming the offending row and column.
    """
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            raw = [row for row in reader if row]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not raw:
        raise DataError(f"{path}: empty file")

    def is_header(row: list[str]) -> bool:
        for cell in row:
            try:
                float(cell)
            except ValueError:
                return True
        return False

    def parse_cell(cell: str, r: int, c: int) -> float:
        try:
            value = float(cell)
        except ValueError:
            raise DataError(f"{path}: non-numeric cell at row {r + 1}, column {c + 1}") from None
        if not math.isfinite(value):
            raise DataError(f"{path}: non-finite value at row {r + 1}, column {c + 1}")
        return value

    start = 1 if is_header(raw[0]) else 0
    if start == len(raw):
        raise DataError(f"{path}: header only, no data rows")
    width = len(raw[start])
    rows = []
    for r in range(start, len(raw)):
        if len(raw[r]) != width:
            raise DataError(
                f"{path}: ragged row {r + 1} has {len(raw[r])} cells, expected {width}"
            )
        rows.append([parse_cell(cell, r, c) for c, cell in enumerate(raw[r])])
    if expected_columns is not None and width != expected_columns:
        raise DataError(f"{path}: expected {expected_columns} columns, found {width}")
    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 observations, found {len(rows)}")
    return np.asarray(rows, dtype=np.float64)
