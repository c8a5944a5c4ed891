"""Single-evaluation bound and brute-force reference oracles.

:func:`vstar` computes the interpolated upper bound on the number of false
discoveries in a selection set, as a bottom-up sweep over the forest levels:
each region's value is its own capped budget ``zeta & |S ∩ R|``, further
capped by the sum of its children's values, and the answer is the sum over
the roots.  The sweep runs in O(|S| + N + |K|) per call after the per-family
layout is built.

The three oracle functions recompute the same quantity straight from its
defining optimization problems by exhaustive enumeration.  They exist only to
cross-check ``vstar`` on small instances and refuse anything large.
"""

from __future__ import annotations

import operator
from itertools import accumulate
from typing import TYPE_CHECKING, Collection, Iterator, Sequence

if TYPE_CHECKING:
    from .curve import BoundCurve

import numpy as np

from .errors import (
    IncompleteFamilyError,
    IndexOutOfRangeError,
    NotAPermutationError,
    TooLargeForOracleError,
)
from .forest import ForestFamily, RegionKey, complete_family, region_members

# Families with at least this many atoms go through the compiled or
# vectorized sweep; below it, plain lists beat the per-call overhead.
NUMPY_MIN_ATOMS = 32

try:
    from numba import njit as _njit
except ImportError:  # pragma: no cover - numba is a normal dependency
    _njit = None

ORACLE_MAX_M = 20
ORACLE_MAX_ATOMS = 12
ORACLE_MAX_REGIONS = 20


def atom_hit_counts(family: ForestFamily, selection: Collection[int]) -> list[int]:
    """How many selected hypotheses fall in each atom; entry 0 is padding.

    Interval sums of this vector give the selection overlap of any region.
    Rejects duplicate, non-integer, and out-of-range members.
    """
    if not isinstance(selection, (set, frozenset)):
        items = tuple(selection)
        selection = set(items)
        if len(selection) != len(items):
            raise IndexOutOfRangeError("selection contains duplicate indices")
    atom_of = family._atom_of()
    hits = [0] * (family.n_atoms + 1)
    try:
        for s in selection:
            if s < 1:
                raise IndexError
            hits[atom_of[s]] += 1
    except (IndexError, TypeError):
        raise IndexOutOfRangeError(
            f"selection members must be integers in 1..{family.m}"
        ) from None
    return hits


def _require_complete(family: ForestFamily, auto_complete: bool) -> ForestFamily:
    if family.is_complete:
        return family
    if auto_complete:
        return complete_family(family)
    raise IncompleteFamilyError(
        "family is not complete; call complete_family() or pass auto_complete=True"
    )


def _sweep_py(lay, hits: list[int]) -> int:
    hc = [0] * len(hits)
    run = 0
    for n, h in enumerate(hits):
        run += h
        hc[n] = run
    zeta, left, right = lay.zeta, lay.left, lay.right
    parent, is_atom = lay.parent, lay.is_atom
    acc = [0] * (len(zeta) + 1)
    for r in range(len(zeta) - 1, -1, -1):
        v = zeta[r]
        c = hc[right[r]] - hc[left[r] - 1]
        if c < v:
            v = c
        if not is_atom[r]:
            c = acc[r]
            if c < v:
                v = c
        acc[parent[r]] += v
    return acc[-1]


_ATOM_SENTINEL = 1 << 62


def _sweep_np(lay, hits: list[int]) -> int:
    hc = np.cumsum(np.asarray(hits, dtype=np.int64))
    caps = np.minimum(lay.np_zeta, hc[lay.np_right] - hc[lay.np_left_m1])
    # Atoms have no children; a sentinel in their accumulator slot makes the
    # child-sum cap a no-op for them, sparing a branch per level.
    acc = np.zeros(len(caps) + 1, dtype=np.int64)
    acc[lay.np_atom_rids] = _ATOM_SENTINEL
    for seg, parent in reversed(lay.np_levels):
        np.add.at(acc, parent, np.minimum(caps[seg], acc[seg]))
    return int(acc[-1])


def _sweep_kernel_impl(hits, left_m1, right, zeta, parent, is_atom):
    n = hits.shape[0]
    hc = np.empty(n, np.int64)
    run = 0
    for i in range(n):
        run += hits[i]
        hc[i] = run
    k = zeta.shape[0]
    acc = np.zeros(k + 1, np.int64)
    for r in range(k - 1, -1, -1):
        v = zeta[r]
        c = hc[right[r]] - hc[left_m1[r]]
        if c < v:
            v = c
        if not is_atom[r]:
            c = acc[r]
            if c < v:
                v = c
        p = parent[r]
        if p < 0:
            p = k
        acc[p] += v
    return acc[k]


# Regions sorted by depth put children after their parents, so one reverse
# pass accumulates child sums before each parent consumes them.
_sweep_jit = None if _njit is None else _njit(cache=True)(_sweep_kernel_impl)


def _sweep_fast(lay, hits: list[int]) -> int:
    if _sweep_jit is None:
        return _sweep_np(lay, hits)
    return int(
        _sweep_jit(
            np.asarray(hits, dtype=np.int64),
            lay.np_left_m1,
            lay.np_right,
            lay.np_zeta,
            lay.np_parent_flat,
            lay.np_is_atom,
        )
    )


def vstar(
    family: ForestFamily,
    selection: Collection[int],
    *,
    auto_complete: bool = False,
) -> int:
    """Upper bound on the number of false discoveries in ``selection``.

    The family must be complete (pass ``auto_complete=True`` to complete a
    copy on the fly).  The result is exact for the family's interpolated
    bound: the minimum over partition-realizing region subsets of the summed
    capped budgets.
    """
    family = _require_complete(family, auto_complete)
    hits = atom_hit_counts(family, selection)
    lay = family._layout()
    if family.n_atoms >= NUMPY_MIN_ATOMS:
        return _sweep_fast(lay, hits)
    return _sweep_py(lay, hits)


def validate_path(m: int, path: Sequence[int]) -> tuple[int, ...]:
    """Check that ``path`` is a prefix of a permutation of 1..m."""
    out = []
    seen = set()
    for x in path:
        try:
            xi = operator.index(x)
        except TypeError:
            raise NotAPermutationError(
                f"path entries must be integers, got {x!r}"
            ) from None
        if not 1 <= xi <= m:
            raise NotAPermutationError(f"path entry {xi} outside 1..{m}")
        if xi in seen:
            raise NotAPermutationError(f"path repeats index {xi}")
        seen.add(xi)
        out.append(xi)
    return tuple(out)


def naive_curve(
    family: ForestFamily,
    path: Sequence[int],
    *,
    auto_complete: bool = False,
) -> "BoundCurve":
    """Bound curve along a nested path by independent vstar calls.

    Quadratic in the path length; kept as the reference baseline for
    :func:`forestbound.curve.fast_curve`.  Accepts a prefix of a permutation
    and returns one value per prefix length, starting at V_0 = 0.
    """
    from .curve import BoundCurve

    family = _require_complete(family, auto_complete)
    steps = validate_path(family.m, path)
    values = [0]
    selected: set[int] = set()
    for idx in steps:
        selected.add(idx)
        values.append(vstar(family, selected))
    return BoundCurve(tuple(values))


# -- oracles -------------------------------------------------------------


def _selection_mask(family: ForestFamily, selection: Collection[int]) -> int:
    mask = 0
    for s in selection:
        try:
            si = operator.index(s)
        except TypeError:
            si = 0
        if not 1 <= si <= family.m:
            raise IndexOutOfRangeError(
                f"selection members must be integers in 1..{family.m}"
            )
        mask |= 1 << (si - 1)
    return mask


def _region_masks(family: ForestFamily) -> list[tuple[int, int]]:
    out = []
    for reg in family.regions():
        mask = 0
        for h in region_members(family, reg.key):
            mask |= 1 << (h - 1)
        out.append((mask, reg.zeta))
    return out


def oracle_vstar_sets(family: ForestFamily, selection: Collection[int]) -> int:
    """Defining maximum: the largest subset of S obeying every region budget.

    Restricting the candidate null sets to A ⊆ S loses nothing, since only
    ``|S ∩ A|`` is scored; the budgets constrain ``|A ∩ R| <= zeta`` for
    every region.  Guard: the enumeration size ``min(m, |S|) <= 20``.
    """
    if min(family.m, len(selection)) > ORACLE_MAX_M:
        raise TooLargeForOracleError(
            f"|S|={len(selection)} and m={family.m} both exceed {ORACLE_MAX_M}"
        )
    smask = _selection_mask(family, selection)
    regs = _region_masks(family)
    best = 0
    sub = smask
    while True:
        size = sub.bit_count()
        if size > best and all(
            (sub & rmask).bit_count() <= z for rmask, z in regs
        ):
            best = size
        if sub == 0:
            return best
        sub = (sub - 1) & smask


def _tilings(
    starts: dict[int, list[int]], pos: int, stop: int
) -> Iterator[list[RegionKey]]:
    # All ways to cover atoms pos..stop by family intervals, left to right.
    if pos > stop:
        yield []
        return
    for j in starts.get(pos, ()):
        if j <= stop:
            for rest in _tilings(starts, j + 1, stop):
                yield [RegionKey(pos, j), *rest]


def partition_subsets(family: ForestFamily) -> Iterator[list[RegionKey]]:
    """All region subsets whose intervals tile the atom range exactly."""
    starts: dict[int, list[int]] = {}
    for key in family.keys():
        starts.setdefault(key.i, []).append(key.j)
    yield from _tilings(starts, 1, family.n_atoms)


def oracle_vstar_partitions(
    family: ForestFamily, selection: Collection[int]
) -> int:
    """Partition form: minimum summed capped budget over tiling subsets.

    Requires a complete family (the atoms guarantee at least one tiling).
    Guard: N <= 12.
    """
    if family.n_atoms > ORACLE_MAX_ATOMS:
        raise TooLargeForOracleError(
            f"N={family.n_atoms} exceeds {ORACLE_MAX_ATOMS}"
        )
    if not family.is_complete:
        raise IncompleteFamilyError("partition oracle requires a complete family")
    hits = atom_hit_counts(family, selection)
    prefix = list(accumulate(hits))
    best = None
    for tiling in partition_subsets(family):
        total = 0
        for key in tiling:
            count = prefix[key.j] - prefix[key.i - 1]
            total += min(family.zeta(key), count)
        if best is None or total < best:
            best = total
    assert best is not None
    return best


def oracle_vstar_subsets(family: ForestFamily, selection: Collection[int]) -> int:
    """Free-subset form: min over all region subsets Q of the capped budgets
    plus the uncovered remainder ``|S \\ U Q|``.  Works on incomplete
    families.  Guard: |K| <= 20.
    """
    k = len(family)
    if k > ORACLE_MAX_REGIONS:
        raise TooLargeForOracleError(f"|K|={k} exceeds {ORACLE_MAX_REGIONS}")
    smask = _selection_mask(family, selection)
    regs = _region_masks(family)
    terms = [min(z, (smask & rmask).bit_count()) for rmask, z in regs]
    # Incremental enumeration: reuse the union mask and budget sum of the
    # subset with the lowest bit cleared.
    union = [0] * (1 << k)
    total = [0] * (1 << k)
    best = smask.bit_count()  # Q = empty set
    for q in range(1, 1 << k):
        low = q & -q
        idx = low.bit_length() - 1
        prev = q ^ low
        union[q] = union[prev] | regs[idx][0]
        total[q] = total[prev] + terms[idx]
        cost = total[q] + (smask & ~union[q]).bit_count()
        if cost < best:
            best = cost
    return best
