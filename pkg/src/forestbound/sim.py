"""Scenario generation and timing harness for the curve algorithms.

Scenarios test one-sided Gaussian means on a dyadic forest: hypotheses in
designated signal atoms get a positive shift, the rest are null, and
p-values come from the standard normal survival function.  The harness times
the naive (repeated single-evaluation) and incremental curve computations on
the same inputs, pruned and unpruned, and reports summary statistics per
variant.  Pruning runs once, before the replications, mirroring how a user
would amortize it across many curves.

Timing uses the monotonic performance counter with two untimed warm-up runs
per variant; the warm-ups also populate the per-family lookup caches and
feed the cross-check that all variants return identical curves.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import ndtr, ndtri

from .bounds import naive_curve
from .curve import BoundCurve, fast_curve
from .errors import InvalidProbabilityError
from .forest import ForestFamily, build_dyadic
from .pruning import compact, prune
from .zeta import zeta_dkwm, zeta_trivial

VARIANTS = (
    "naive.not.pruned",
    "naive.pruned",
    "fast.not.pruned",
    "fast.pruned",
)

WARMUP_RUNS = 2


@dataclass(frozen=True)
class ScenarioConfig:
    """Parameters of one benchmark scenario."""

    m: int
    tree_height: int
    signal_leaves: frozenset[int] = frozenset({1, 5, 9, 10})
    mu: float = 4.0
    zeta_method: str = "trivial"
    alpha: float = 0.05
    n_repl: int = 10
    seed: int = 0
    order_by_pvalue: bool = False

    def __post_init__(self) -> None:
        if self.tree_height < 1:
            raise ValueError("tree height must be >= 1")
        n_atoms = 2 ** (self.tree_height - 1)
        if self.m % n_atoms != 0 or self.m < n_atoms:
            raise ValueError(
                f"m={self.m} must be a positive multiple of 2**(H-1)={n_atoms}"
            )
        if not self.signal_leaves <= set(range(1, n_atoms + 1)):
            raise ValueError(f"signal leaves must lie in 1..{n_atoms}")
        if self.n_repl < 1:
            raise ValueError("n_repl must be >= 1")
        if self.zeta_method not in ("trivial", "dkwm"):
            raise ValueError(f"unknown zeta method {self.zeta_method!r}")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidProbabilityError("alpha must be in (0, 1)")

    @property
    def atom_size(self) -> int:
        return self.m // 2 ** (self.tree_height - 1)


@dataclass(frozen=True)
class TimingSummary:
    """Per-variant run-time statistics in seconds."""

    min: float
    lq: float
    mean: float
    median: float
    uq: float
    max: float
    neval: int

    @classmethod
    def from_times(cls, times: Sequence[float]) -> "TimingSummary":
        arr = np.asarray(times, dtype=float)
        lq, median, uq = np.percentile(arr, [25.0, 50.0, 75.0])
        return cls(
            min=float(arr.min()),
            lq=float(lq),
            mean=float(arr.mean()),
            median=float(median),
            uq=float(uq),
            max=float(arr.max()),
            neval=len(times),
        )


@dataclass(frozen=True)
class BenchReport:
    """Summaries per timed variant plus the instance's structural facts."""

    config: ScenarioConfig
    summaries: dict[str, TimingSummary]
    region_count: int
    pruned_region_count: int

    def median(self, variant: str) -> float:
        return self.summaries[variant].median


@dataclass(frozen=True)
class ScalingReport:
    """Median-time ratios between a scenario and its 10x-larger twin."""

    small: BenchReport
    large: BenchReport
    ratios: dict[str, float] = field(default_factory=dict)


def pvalue_from_stat(x) -> np.ndarray | float:
    """One-sided p-value of a Gaussian statistic: survival function at x."""
    return ndtr(-np.asarray(x, dtype=float))


def gen_pvalues(cfg: ScenarioConfig, rng=None) -> np.ndarray:
    """Draw the scenario's m p-values.

    Statistics are independent normals with unit variance; the mean is
    ``cfg.mu`` inside signal atoms and 0 elsewhere.  Sampling goes through
    the inverse normal CDF applied to the generator's uniforms, so a given
    seed yields the same stream on every platform.
    """
    if rng is None or isinstance(rng, int):
        rng = np.random.default_rng(cfg.seed if rng is None else rng)
    mu = np.zeros(cfg.m)
    size = cfg.atom_size
    for leaf in cfg.signal_leaves:
        mu[(leaf - 1) * size : leaf * size] = cfg.mu
    stats = mu + ndtri(rng.random(cfg.m))
    return pvalue_from_stat(stats)


def _scenario_family(cfg: ScenarioConfig, pvalues: np.ndarray) -> ForestFamily:
    family = build_dyadic(cfg.tree_height, cfg.atom_size)
    if cfg.zeta_method == "trivial":
        return zeta_trivial(family)
    return zeta_dkwm(family, pvalues, cfg.alpha)


class _PreparedScenario:
    """A scenario's family, pruned twin, and path, ready to be timed."""

    def __init__(self, cfg: ScenarioConfig, variants: Sequence[str] | None):
        chosen = VARIANTS if variants is None else tuple(variants)
        unknown = set(chosen) - set(VARIANTS)
        if unknown:
            raise ValueError(f"unknown variants: {sorted(unknown)}")
        self.cfg = cfg
        self.chosen = chosen
        pvalues = gen_pvalues(cfg)
        family = _scenario_family(cfg, pvalues)
        pruned = compact(prune(family))
        if cfg.order_by_pvalue:
            path = (np.argsort(pvalues, kind="stable") + 1).tolist()
        else:
            path = list(range(1, cfg.m + 1))
        self.region_count = len(family)
        self.pruned_region_count = len(pruned)
        self.runners: dict[str, Callable[[], BoundCurve]] = {
            "naive.not.pruned": lambda: naive_curve(family, path),
            "naive.pruned": lambda: naive_curve(pruned, path),
            "fast.not.pruned": lambda: fast_curve(family, path),
            "fast.pruned": lambda: fast_curve(pruned, path),
        }
        self.warmed = False

    def collect(self, n_repl: int, times: dict[str, list[float]]) -> None:
        curves: dict[str, BoundCurve] = {}
        for name in self.chosen:
            fn = self.runners[name]
            if not self.warmed:
                for _ in range(WARMUP_RUNS):
                    curves[name] = fn()
            bucket = times.setdefault(name, [])
            for _ in range(n_repl):
                t0 = time.perf_counter()
                fn()
                t1 = time.perf_counter()
                bucket.append(t1 - t0)
        if not self.warmed:
            self.warmed = True
            reference = next(iter(curves.values()))
            for name, curve in curves.items():
                if curve != reference:
                    raise RuntimeError(
                        f"variant {name} disagrees with the others"
                    )

    def report(self, times: dict[str, list[float]]) -> BenchReport:
        return BenchReport(
            config=self.cfg,
            summaries={
                name: TimingSummary.from_times(ts) for name, ts in times.items()
            },
            region_count=self.region_count,
            pruned_region_count=self.pruned_region_count,
        )


def run_scenario(
    cfg: ScenarioConfig, variants: Sequence[str] | None = None
) -> BenchReport:
    """Time the curve computations of one scenario.

    Builds the dyadic family, estimates budgets, prunes once, then times
    ``cfg.n_repl`` executions of each variant on the same path (hypothesis
    order by default, p-value order with ``cfg.order_by_pvalue``).  All
    variants must return the same curve; a mismatch raises RuntimeError.
    ``variants`` restricts which of the four are timed.
    """
    prepared = _PreparedScenario(cfg, variants)
    times: dict[str, list[float]] = {}
    prepared.collect(cfg.n_repl, times)
    return prepared.report(times)


def scaling_check(
    cfg_small: ScenarioConfig,
    cfg_large: ScenarioConfig,
    variants: Sequence[str] | None = None,
    rounds: int = 3,
) -> ScalingReport:
    """Median-time ratios between two scenarios with a 10x hypothesis gap.

    The incremental algorithm should scale roughly linearly in m (ratio near
    10) and the naive baseline roughly quadratically (ratio near 100).  The
    two scenarios are measured in alternating rounds so that slow spells of
    the host machine hit both sides alike; each scenario's replications are
    spread evenly over the rounds and pooled before taking medians.
    """
    if cfg_large.m != 10 * cfg_small.m:
        raise ValueError("cfg_large.m must be exactly 10 * cfg_small.m")
    if cfg_large.tree_height != cfg_small.tree_height:
        raise ValueError("scenarios must share the tree height")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    small = _PreparedScenario(cfg_small, variants)
    large = _PreparedScenario(cfg_large, variants)
    times_small: dict[str, list[float]] = {}
    times_large: dict[str, list[float]] = {}
    per_round_small = -(-cfg_small.n_repl // rounds)
    per_round_large = -(-cfg_large.n_repl // rounds)
    for _ in range(rounds):
        small.collect(per_round_small, times_small)
        large.collect(per_round_large, times_large)
    report_small = small.report(times_small)
    report_large = large.report(times_large)
    ratios = {
        name: report_large.median(name) / report_small.median(name)
        for name in report_small.summaries
        if name in report_large.summaries
    }
    return ScalingReport(small=report_small, large=report_large, ratios=ratios)


def bench_csv(report: BenchReport) -> str:
    """The report as CSV, one row per timed variant."""
    lines = ["expr,min,lq,mean,median,uq,max,neval"]
    for name, s in report.summaries.items():
        lines.append(
            f"{name},{s.min:.9f},{s.lq:.9f},{s.mean:.9f},"
            f"{s.median:.9f},{s.uq:.9f},{s.max:.9f},{s.neval}"
        )
    return "\n".join(lines) + "\n"


def bench_table(report: BenchReport) -> str:
    """The report as an aligned text table (times in seconds)."""
    header = ("expr", "min", "lq", "mean", "median", "uq", "max", "neval")
    rows = [header]
    for name, s in report.summaries.items():
        rows.append(
            (
                name,
                f"{s.min:.7f}",
                f"{s.lq:.7f}",
                f"{s.mean:.7f}",
                f"{s.median:.7f}",
                f"{s.uq:.7f}",
                f"{s.max:.7f}",
                str(s.neval),
            )
        )
    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    out = []
    for row in rows:
        cells = [
            row[0].ljust(widths[0]),
            *(row[c].rjust(widths[c]) for c in range(1, len(header))),
        ]
        out.append("  ".join(cells))
    return "\n".join(out) + "\n"
