"""Shared fixtures: the m=25 worked example and random family generators.

The example family has 8 atoms of sizes (2, 2, 6, 6, 4, 1, 1, 3) and is used
throughout as a golden instance: its completion adds atoms 2, 6, 8; pruning
removes exactly the region (6, 7); and the bound curve along the fixed
9-step path is (1, 2, 3, 3, 4, 5, 5, 5, 5).
"""

import random

import pytest

import forestbound as fb

EXAMPLE_M = 25
EXAMPLE_ATOMS = (2, 2, 6, 6, 4, 1, 1, 3)
EXAMPLE_REGIONS = [
    (1, 5, 6),
    (1, 1, 2),
    (2, 3, 1),
    (3, 3, 4),
    (4, 5, 4),
    (4, 4, 2),
    (5, 5, 3),
    (6, 7, 2),
    (7, 7, 0),
]
EXAMPLE_COMPLETION = [(2, 2, 2), (6, 6, 1), (8, 8, 3)]
EXAMPLE_PATH = (11, 17, 12, 13, 18, 3, 19, 22, 5)
EXAMPLE_CURVE = (0, 1, 2, 3, 3, 4, 5, 5, 5, 5)


@pytest.fixture
def partial_family():
    """The example family before completion (atoms 2, 6, 8 missing)."""
    return fb.build_family(EXAMPLE_M, EXAMPLE_ATOMS, EXAMPLE_REGIONS)


@pytest.fixture
def example_family():
    """The completed example family (12 regions, height 3)."""
    return fb.build_family(
        EXAMPLE_M, EXAMPLE_ATOMS, EXAMPLE_REGIONS + EXAMPLE_COMPLETION
    )


def random_family(
    rng: random.Random,
    max_atoms: int = 6,
    max_atom_size: int = 3,
    complete: bool = False,
) -> fb.ForestFamily:
    """A random valid family: laminar intervals with uniform random budgets.

    Intervals come from recursive random splitting of the atom range, so
    nesting chains, gaps, and sibling blocks all occur.  With
    ``complete=True`` every atom is included, with a random budget of its
    own (rather than the cardinality default of completion).
    """
    n = rng.randint(1, max_atoms)
    sizes = [rng.randint(1, max_atom_size) for _ in range(n)]
    keys = set()

    def split(i, j, force=False):
        if force or rng.random() < 0.6:
            keys.add((i, j))
        if i == j:
            return
        cuts = sorted(rng.sample(range(i, j), rng.randint(1, min(3, j - i))))
        lo = i
        for cut in cuts + [j]:
            if rng.random() < 0.85:
                split(lo, cut)
            lo = cut + 1

    split(1, n, force=rng.random() < 0.8)
    if complete:
        keys.update((a, a) for a in range(1, n + 1))
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    triples = [
        (i, j, rng.randint(0, offsets[j] - offsets[i - 1])) for (i, j) in keys
    ]
    return fb.build_family(sum(sizes), sizes, triples)


def random_selection(rng: random.Random, m: int) -> set:
    return set(rng.sample(range(1, m + 1), rng.randint(0, m)))


def random_path(rng: random.Random, m: int, partial: bool = False) -> list:
    path = list(range(1, m + 1))
    rng.shuffle(path)
    if partial:
        return path[: rng.randint(0, m)]
    return path
