"""Budget estimation strategies attached to a built forest structure.

Estimators assign each region an integer budget in 0..|R| and return a new
family; the surrounding bound and curve algorithms never depend on which
estimator produced the budgets.  Two strategies ship: the trivial one, which
makes every budget vacuous, and a concentration-based one built on the
one-sided Dvoretzky-Kiefer-Wolfowitz inequality with Massart's constant.
Third-party estimates plug in through :func:`apply_zetas`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidProbabilityError
from .forest import ForestFamily, RegionKey, region_members


def zeta_trivial(family: ForestFamily) -> ForestFamily:
    """Set every region's budget to its size (no information)."""
    return family.with_zetas(
        {key: family.region_size(key) for key in family.keys()}
    )


def upper_null_count(pvalues: np.ndarray, alpha: float) -> int:
    """Level-(1-alpha) upper confidence count of true nulls in one region.

    Null p-values are super-uniform, so with probability at least 1 - alpha
    the one-sided DKW bound gives, for every threshold t,

        #{p > t}  >=  n0 * (1 - t) - sqrt(n0 * log(1/alpha) / 2),

    where n0 is the number of true nulls.  Solving the quadratic in sqrt(n0)
    at each observed threshold and taking the smallest root bound yields the
    confidence count; the candidate thresholds 0 and the observed p-values
    are where the piecewise bound attains its infimum.
    """
    n = pvalues.size
    if n == 0:
        return 0
    c = math.log(1.0 / alpha) / 2.0
    ps = np.sort(pvalues)
    ts = np.concatenate(([0.0], ps))
    ts = ts[ts < 1.0]
    if ts.size == 0:
        return n
    exceed = n - np.searchsorted(ps, ts, side="right")
    gap = 1.0 - ts
    x = (math.sqrt(c) + np.sqrt(c + 4.0 * gap * exceed)) / (2.0 * gap)
    bound = math.floor(float(np.min(x * x)))
    return min(n, bound)


def zeta_dkwm(
    family: ForestFamily, pvalues: Sequence[float], alpha: float
) -> ForestFamily:
    """Budgets from per-region DKW upper confidence counts of true nulls.

    Each region's bound is computed at level alpha individually, with no
    multiplicity adjustment across regions; joint validity of the family is
    the caller's concern.  Regions full of small p-values get budgets well
    below their size, so they saturate quickly in the curve algorithms;
    regions compatible with uniform p-values keep the vacuous budget.
    """
    arr = np.asarray(pvalues, dtype=float)
    if arr.shape != (family.m,):
        raise InvalidProbabilityError(
            f"expected {family.m} p-values, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
        raise InvalidProbabilityError("p-values must be finite and within [0, 1]")
    if not 0.0 < alpha < 1.0:
        raise InvalidProbabilityError(f"alpha must be in (0, 1), got {alpha}")
    estimates = {}
    for key in family.keys():
        members = region_members(family, key)
        estimates[key] = upper_null_count(
            arr[members.start - 1 : members.stop - 1], alpha
        )
    return apply_zetas(family, estimates)


def apply_zetas(
    family: ForestFamily, estimates: Mapping[RegionKey, int]
) -> ForestFamily:
    """Attach raw budget estimates, clamping them into 0..|R|.

    Entry point for third-party estimation strategies; emits a warning when
    any estimate had to be clamped (the shipped estimators stay in range by
    construction).  Regions absent from ``estimates`` keep their budget.
    """
    zetas = {}
    clamped_keys = []
    for key, z in estimates.items():
        size = family.region_size(key)
        clamped = min(max(int(z), 0), size)
        if clamped != z:
            clamped_keys.append(key)
        zetas[key] = clamped
    if clamped_keys:
        warnings.warn(
            f"clamped {len(clamped_keys)} zeta estimate(s) into the "
            "structural range 0..|R|",
            stacklevel=2,
        )
    return family.with_zetas(zetas)


@dataclass(frozen=True)
class ZetaEstimator:
    """Named budget strategy: ``trivial`` or ``dkwm`` (with its alpha)."""

    method: str = "trivial"
    alpha: float = 0.05

    def __post_init__(self) -> None:
        if self.method not in ("trivial", "dkwm"):
            raise ValueError(f"unknown zeta method {self.method!r}")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidProbabilityError(
                f"alpha must be in (0, 1), got {self.alpha}"
            )

    def apply(
        self, family: ForestFamily, pvalues: Sequence[float] | None = None
    ) -> ForestFamily:
        if self.method == "trivial":
            return zeta_trivial(family)
        if pvalues is None:
            raise InvalidProbabilityError("dkwm estimation needs p-values")
        return zeta_dkwm(family, pvalues, self.alpha)
