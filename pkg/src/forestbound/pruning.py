"""Removal of regions whose budget is dominated by a tiling of descendants.

A non-atom region is redundant whenever some chain of family members tiles
its atom interval with budgets summing to no more than its own: such a region
can never be the binding term of the bound, so dropping it leaves every bound
value unchanged while shrinking the family.  The detection runs inside the
same bottom-up sweep as the single-evaluation bound with the full selection
set, where each region's capped budget is just its budget.

:func:`definition_removed_set` re-derives the removed set straight from the
tiling-domination definition by memoized enumeration; it is deliberately
independent of the sweep and exists to cross-check :func:`prune` on small
families.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IncompleteFamilyError
from .forest import ForestFamily, RegionKey, build_family


@dataclass(frozen=True)
class PruneResult:
    """Outcome of pruning: the surviving family, what was removed, and the
    bound of the full selection set, which the sweep yields for free."""

    pruned_family: ForestFamily
    removed: frozenset[RegionKey]
    vstar_full: int


def prune(family: ForestFamily) -> PruneResult:
    """Drop every dominated non-atom region; atoms are never touched.

    Requires a complete family; the result is complete as well, with depths
    recomputed after removal.  For any selection set the pruned family yields
    exactly the same bound.  Pruning an already-pruned family removes
    nothing.
    """
    if not family.is_complete:
        raise IncompleteFamilyError("pruning requires a complete family")
    lay = family._layout()
    zeta, parent, is_atom = lay.zeta, lay.parent, lay.is_atom
    acc = [0] * (len(zeta) + 1)
    removed = []
    for r in range(len(zeta) - 1, -1, -1):
        v = zeta[r]
        if not is_atom[r]:
            child_sum = acc[r]
            if v >= child_sum:
                removed.append(lay.keys[r])
                v = child_sum
        acc[parent[r]] += v
    removed_set = frozenset(removed)
    kept = [
        (k.i, k.j, z)
        for k, z in family._regions.items()
        if k not in removed_set
    ]
    pruned = build_family(family.m, family.atom_sizes, kept)
    return PruneResult(pruned_family=pruned, removed=removed_set, vstar_full=acc[-1])


def compact(result: PruneResult) -> ForestFamily:
    """Rebuild the pruned family with freshly indexed internal structures.

    With this package's storage model pruning already re-derives depths and
    leaves no gaps, so the rebuilt family is semantically identical; compact
    exists as the explicit re-indexing step and guarantees that every lazy
    lookup structure is reconstructed from the surviving regions alone.
    """
    f = result.pruned_family
    return build_family(
        f.m, f.atom_sizes, ((k.i, k.j, z) for k, z in f._regions.items())
    )


def definition_removed_set(family: ForestFamily) -> frozenset[RegionKey]:
    """Removed set per the domination definition, by direct enumeration.

    A region (i, j) is removed when its atom interval can be tiled by at
    least two family members whose budgets sum to at most its own.  Tiling
    costs are minimized by recursion on the leftmost uncovered atom,
    memoized per sub-interval.  Small families only; cross-checks prune().
    """
    ends: dict[int, list[int]] = {}
    for key in family.keys():
        ends.setdefault(key.i, []).append(key.j)
    zeta = {key: family.zeta(key) for key in family.keys()}
    memo: dict[tuple[int, int], float] = {}

    def min_tiling_cost(a: int, b: int) -> float:
        # Cheapest tiling of atoms a..b by family intervals; inf if none.
        if a > b:
            return 0.0
        got = memo.get((a, b))
        if got is not None:
            return got
        best = float("inf")
        for j in ends.get(a, ()):
            if j <= b:
                tail = min_tiling_cost(j + 1, b)
                cost = zeta[RegionKey(a, j)] + tail
                if cost < best:
                    best = cost
        memo[(a, b)] = best
        return best

    removed = set()
    for key in family.keys():
        if key.i == key.j:
            continue
        best_two_pieces = float("inf")
        for j in ends.get(key.i, ()):
            if j < key.j:  # first piece proper, so at least two pieces total
                cost = zeta[RegionKey(key.i, j)] + min_tiling_cost(j + 1, key.j)
                if cost < best_two_pieces:
                    best_two_pieces = cost
        if best_two_pieces <= zeta[key]:
            removed.add(key)
    return frozenset(removed)
