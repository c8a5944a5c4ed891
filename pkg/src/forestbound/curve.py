"""Incremental computation of the whole bound curve along a nested path.

Growing the selection set one hypothesis at a time lets the bound be updated
in O(depth) per step instead of recomputing it from scratch: each region
keeps a counter of how many selected hypotheses it has absorbed, frozen once
it reaches the region's budget.  A step adds 1 to the bound unless the new
hypothesis falls inside an already-saturated region, in which case the bound
is unchanged.  Total cost is O(m + sum of region spans), versus the quadratic
cost of calling the single-evaluation bound once per prefix.

The audit mode re-derives the same values through the partition-tracking
formulation and asserts, at every step, that the bound equals both the summed
root counters and the summed capped budgets over the tracked partition; on
small inputs it additionally cross-checks every active region's counter
against an independent bound evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bounds import _require_complete, validate_path, vstar
from .errors import InvalidProbabilityError
from .forest import ForestFamily, RegionKey


@dataclass(frozen=True)
class BoundCurve:
    """The sequence (V_0, V_1, ..., V_T) of bounds along a path prefix."""

    values: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, t: int) -> int:
        return self.values[t]

    def __iter__(self):
        return iter(self.values)

    @property
    def final(self) -> int:
        return self.values[-1]


@dataclass
class CurveState:
    """Mutable bookkeeping of the incremental algorithm (audit mode only).

    ``eta`` maps regions to their absorbed counts, ``saturated`` is the set
    of frozen regions, and ``partition`` tracks a partition-realizing region
    subset whose capped budgets sum to the current bound.
    """

    eta: dict[RegionKey, int]
    saturated: set[RegionKey]
    v_current: int = 0
    t: int = 0
    partition: set[RegionKey] = field(default_factory=set)


def fast_curve(
    family: ForestFamily,
    path: Sequence[int],
    *,
    audit: bool = False,
    auto_complete: bool = False,
) -> BoundCurve:
    """Bound values for every prefix of ``path`` in a single forward pass.

    ``path`` must be a prefix of a permutation of 1..m; the returned curve
    has one entry per prefix length, starting at V_0 = 0.  Pruning the family
    first is optional and does not change the output.  With ``audit=True``
    the per-step identities of the partition-tracking formulation are
    asserted (slow; meant for verification on small inputs).
    """
    family = _require_complete(family, auto_complete)
    steps = validate_path(family.m, path)
    if audit:
        values, _ = _fast_curve_audit(family, steps)
        return BoundCurve(values)

    lay = family._layout()
    atom_of = family._atom_of()
    chains = lay.chains
    zeta = lay.zeta
    left = lay.left
    right = lay.right
    eta = [0] * len(zeta)
    covered = bytearray(family.n_atoms + 1)
    for r in lay.zeta_zero:
        span = right[r] - left[r] + 1
        covered[left[r] : right[r] + 1] = b"\x01" * span

    v = 0
    values = [0]
    append = values.append
    for idx in steps:
        n = atom_of[idx]
        if covered[n]:
            append(v)
            continue
        for r in chains[n]:
            e = eta[r] + 1
            eta[r] = e
            if e >= zeta[r]:
                span = right[r] - left[r] + 1
                covered[left[r] : right[r] + 1] = b"\x01" * span
                break
        v += 1
        append(v)
    return BoundCurve(tuple(values))


# Audit runs cross-check every active region against a fresh vstar call when
# m is at most this large; beyond it only the per-step sum identities run.
AUDIT_FULL_CHECK_MAX_M = 32


def _fast_curve_audit(
    family: ForestFamily, steps: tuple[int, ...]
) -> tuple[tuple[int, ...], CurveState]:
    lay = family._layout()
    atom_of = family._atom_of()
    keys = lay.keys
    n_atoms = family.n_atoms

    # Zero-budget regions are saturated from the start, so the maximal ones
    # replace their atoms in the initial partition; otherwise the capped-sum
    # identity would start off broken for atoms trapped under a zero budget.
    pre_covered = bytearray(n_atoms + 1)
    partition: set[RegionKey] = set()
    for r in lay.zeta_zero:  # ordered shallow to deep
        if not pre_covered[lay.left[r]]:
            partition.add(keys[r])
            for n in range(lay.left[r], lay.right[r] + 1):
                pre_covered[n] = 1
    partition.update(
        RegionKey(n, n) for n in range(1, n_atoms + 1) if not pre_covered[n]
    )
    state = CurveState(
        eta={k: 0 for k in keys},
        saturated={keys[r] for r in lay.zeta_zero},
        partition=partition,
    )
    roots = [keys[r] for a, b in lay.level_slices[:1] for r in range(a, b)]
    sel_count = {k: 0 for k in keys}  # |S_t ∩ R_k|, saturation-independent
    selected: set[int] = set()

    def contains(outer: RegionKey, inner: RegionKey) -> bool:
        return outer.i <= inner.i and inner.j <= outer.j

    values = [0]
    for idx in steps:
        state.t += 1
        selected.add(idx)
        n = atom_of[idx]
        chain = [keys[r] for r in lay.chains[n]]
        for k in chain:
            sel_count[k] += 1
        if any(k in state.saturated for k in chain):
            values.append(state.v_current)
        else:
            for k in chain:
                state.eta[k] += 1
                assert state.eta[k] <= family.zeta(k), (
                    f"t={state.t}: counter of {k} exceeded its budget"
                )
                if state.eta[k] >= family.zeta(k):
                    state.saturated.add(k)
                    state.partition = {
                        p for p in state.partition if not contains(k, p)
                    }
                    state.partition.add(k)
                    break
            state.v_current += 1
            values.append(state.v_current)

        _assert_step_identities(family, state, roots, sel_count)
        if family.m <= AUDIT_FULL_CHECK_MAX_M:
            _assert_eta_matches_vstar(family, state, selected)
    return tuple(values), state


def _assert_step_identities(family, state, roots, sel_count) -> None:
    total = sum(state.eta[k] for k in roots)
    assert state.v_current == total, (
        f"t={state.t}: bound {state.v_current} != root counter sum {total}"
    )
    spans = sorted((k.i, k.j) for k in state.partition)
    pos = 1
    for i, j in spans:
        assert i == pos, f"t={state.t}: tracked partition has a gap at atom {pos}"
        pos = j + 1
    assert pos == family.n_atoms + 1, (
        f"t={state.t}: tracked partition stops at atom {pos - 1}"
    )
    capped = sum(
        min(family.zeta(k), sel_count[k]) for k in state.partition
    )
    assert state.v_current == capped, (
        f"t={state.t}: bound {state.v_current} != partition capped sum {capped}"
    )


def _assert_eta_matches_vstar(family, state, selected) -> None:
    # Active regions: those containing at least one tracked-partition member.
    for reg in family.regions():
        if not any(
            reg.key.i <= p.i and p.j <= reg.key.j for p in state.partition
        ):
            continue
        members = set(
            range(
                family._offsets[reg.key.i - 1] + 1,
                family._offsets[reg.key.j] + 1,
            )
        )
        expected = vstar(family, selected & members)
        assert state.eta[reg.key] == expected, (
            f"t={state.t}: counter of {reg.key} is {state.eta[reg.key]}, "
            f"bound of restricted selection is {expected}"
        )


def curve_from_pvalues(
    family: ForestFamily,
    pvalues: Sequence[float],
    *,
    audit: bool = False,
    auto_complete: bool = False,
) -> BoundCurve:
    """Bound curve along the path ordering the p-values increasingly.

    Ties break by ascending hypothesis index (stable sort), so the output is
    deterministic.
    """
    arr = np.asarray(pvalues, dtype=float)
    if arr.shape != (family.m,):
        raise InvalidProbabilityError(
            f"expected {family.m} p-values, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
        raise InvalidProbabilityError("p-values must be finite and within [0, 1]")
    order = np.argsort(arr, kind="stable") + 1
    return fast_curve(
        family, order.tolist(), audit=audit, auto_complete=auto_complete
    )


def fdp_curve(curve: BoundCurve) -> list[Fraction]:
    """Exact proportion bounds V_t / max(t, 1) for t = 1..T."""
    return [
        Fraction(v, max(t, 1))
        for t, v in enumerate(curve.values[1:], start=1)
    ]
