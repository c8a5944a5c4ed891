"""Incremental curve computation against the naive baseline."""

import random
from fractions import Fraction

import pytest

import forestbound as fb
from forestbound import (
    IncompleteFamilyError,
    InvalidProbabilityError,
    NotAPermutationError,
)

from conftest import EXAMPLE_CURVE, EXAMPLE_PATH, random_family, random_path


class TestFastCurveExample:
    def test_on_pruned_family(self, example_family):
        pruned = fb.prune(example_family).pruned_family
        curve = fb.fast_curve(pruned, EXAMPLE_PATH)
        assert curve.values == EXAMPLE_CURVE

    def test_on_unpruned_family(self, example_family):
        assert fb.fast_curve(example_family, EXAMPLE_PATH).values == EXAMPLE_CURVE

    def test_audit_mode_passes(self, example_family):
        pruned = fb.prune(example_family).pruned_family
        assert fb.fast_curve(pruned, EXAMPLE_PATH, audit=True).values == (
            EXAMPLE_CURVE
        )
        assert fb.fast_curve(example_family, EXAMPLE_PATH, audit=True).values == (
            EXAMPLE_CURVE
        )

    def test_single_atom_family_counts_up(self):
        m = 7
        fam = fb.build_family(m, (m,), [(1, 1, m)])
        path = random_path(random.Random(1), m)
        assert fb.fast_curve(fam, path).values == tuple(range(m + 1))

    def test_curve_properties(self, example_family):
        curve = fb.fast_curve(example_family, EXAMPLE_PATH)
        assert curve[0] == 0
        assert len(curve) == len(EXAMPLE_PATH) + 1
        assert curve.final == 5


class TestLocateChains:
    # The walk's ancestor chains: for hypothesis 7 the chain ends at depth 3,
    # for 1 at depth 2, for 24 at depth 1.
    def test_chain_fixtures(self, example_family):
        lay = example_family._layout()
        atom_of = example_family._atom_of()

        def chain_keys(hyp):
            return [lay.keys[r] for r in lay.chains[atom_of[hyp]]]

        assert chain_keys(7) == [(1, 5), (2, 3), (3, 3)]
        assert chain_keys(1) == [(1, 5), (1, 1)]
        assert chain_keys(24) == [(8, 8)]

    def test_chains_are_nested_and_depth_ordered(self):
        rng = random.Random(89)
        for _ in range(40):
            fam = fb.complete_family(random_family(rng, max_atoms=8))
            lay = fam._layout()
            for n in range(1, fam.n_atoms + 1):
                chain = [lay.keys[r] for r in lay.chains[n]]
                assert chain, f"atom {n} missing from every region"
                for outer, inner in zip(chain, chain[1:]):
                    assert outer.i <= inner.i and inner.j <= outer.j
                    assert outer != inner
                assert chain[-1] == (n, n)  # complete family: atom is deepest


class TestEquivalence:
    def test_fast_equals_naive_random(self):
        rng = random.Random(97)
        for _ in range(150):
            fam = fb.complete_family(random_family(rng, max_atoms=10, max_atom_size=4))
            path = random_path(rng, fam.m, partial=rng.random() < 0.3)
            naive = fb.naive_curve(fam, path)
            fast = fb.fast_curve(fam, path)
            pruned = fb.fast_curve(fb.prune(fam).pruned_family, path)
            assert naive == fast == pruned

    def test_audit_agrees_on_random_instances(self):
        rng = random.Random(101)
        for _ in range(40):
            fam = fb.complete_family(random_family(rng, max_atoms=6))
            path = random_path(rng, fam.m)
            audited = fb.fast_curve(fam, path, audit=True)
            assert audited == fb.naive_curve(fam, path)

    def test_path_endpoint_independent_of_order(self):
        rng = random.Random(103)
        for _ in range(30):
            fam = fb.complete_family(random_family(rng))
            full = set(range(1, fam.m + 1))
            a = fb.fast_curve(fam, random_path(rng, fam.m))
            b = fb.fast_curve(fam, random_path(rng, fam.m))
            assert a.final == b.final == fb.vstar(fam, full)


class TestStepLaw:
    def test_increments_are_zero_or_one(self):
        rng = random.Random(107)
        for _ in range(60):
            fam = fb.complete_family(random_family(rng, max_atoms=8))
            curve = fb.fast_curve(fam, random_path(rng, fam.m))
            assert curve[0] == 0
            for prev, cur in zip(curve, curve.values[1:]):
                assert cur - prev in (0, 1)

    def test_flat_step_iff_saturated_cover(self, example_family):
        # Steps 4, 7, 8, 9 of the example fall inside saturated regions.
        curve = fb.fast_curve(example_family, EXAMPLE_PATH)
        flats = [
            t
            for t in range(1, len(EXAMPLE_PATH) + 1)
            if curve[t] == curve[t - 1]
        ]
        assert flats == [4, 7, 8, 9]


class TestValidation:
    def test_not_a_permutation(self, example_family):
        for bad in ([1, 1], [0], [26], [2.5]):
            with pytest.raises(NotAPermutationError):
                fb.fast_curve(example_family, bad)

    def test_incomplete_family(self, partial_family):
        with pytest.raises(IncompleteFamilyError):
            fb.fast_curve(partial_family, [1])
        curve = fb.fast_curve(partial_family, EXAMPLE_PATH, auto_complete=True)
        assert curve.values == EXAMPLE_CURVE

    def test_empty_path(self, example_family):
        assert fb.fast_curve(example_family, []).values == (0,)


class TestCurveFromPvalues:
    def test_sorts_ascending(self):
        fam = fb.complete_family(fb.build_family(3, (1, 1, 1), [(1, 3, 3)]))
        p = [0.01, 0.5, 0.2]
        curve = fb.curve_from_pvalues(fam, p)
        assert curve == fb.fast_curve(fam, [1, 3, 2])

    def test_stable_ties(self):
        m = 6
        fam = fb.complete_family(fb.build_family(m, (m,), [(1, 1, m)]))
        curve = fb.curve_from_pvalues(fam, [0.5] * m)
        assert curve == fb.fast_curve(fam, list(range(1, m + 1)))

    def test_matches_naive_on_generated_pvalues(self):
        cfg = fb.ScenarioConfig(
            m=32, tree_height=4, signal_leaves=frozenset({1, 3}), n_repl=1, seed=5
        )
        p = fb.gen_pvalues(cfg)
        fam = fb.zeta_dkwm(fb.build_dyadic(4, 4), p, 0.1)
        order = sorted(range(1, 33), key=lambda i: (p[i - 1], i))
        assert fb.curve_from_pvalues(fam, p) == fb.naive_curve(fam, order)

    def test_validation(self, example_family):
        with pytest.raises(InvalidProbabilityError):
            fb.curve_from_pvalues(example_family, [0.5] * 24)  # wrong length
        with pytest.raises(InvalidProbabilityError):
            fb.curve_from_pvalues(example_family, [0.5] * 24 + [1.5])
        with pytest.raises(InvalidProbabilityError):
            fb.curve_from_pvalues(example_family, [0.5] * 24 + [float("nan")])


class TestConcurrentReads:
    def test_shared_family_across_threads(self):
        from concurrent.futures import ThreadPoolExecutor

        fam = fb.zeta_trivial(fb.build_dyadic(6, 2))
        rng = random.Random(131)
        paths = [random_path(rng, fam.m) for _ in range(16)]
        expected = [fb.fast_curve(fam, p) for p in paths]
        with ThreadPoolExecutor(max_workers=8) as pool:
            got = list(pool.map(lambda p: fb.fast_curve(fam, p), paths))
        assert got == expected


class TestFdpCurve:
    def test_linear_curve(self):
        curve = fb.BoundCurve((0, 1, 2, 3))
        assert fb.fdp_curve(curve) == [1, 1, 1]

    def test_example_fractions(self, example_family):
        curve = fb.fast_curve(example_family, EXAMPLE_PATH)
        expected = [
            Fraction(1),
            Fraction(1),
            Fraction(1),
            Fraction(3, 4),
            Fraction(4, 5),
            Fraction(5, 6),
            Fraction(5, 7),
            Fraction(5, 8),
            Fraction(5, 9),
        ]
        assert fb.fdp_curve(curve) == expected

    def test_all_zero(self):
        curve = fb.BoundCurve((0, 0, 0))
        assert fb.fdp_curve(curve) == [0, 0]

    def test_empty(self):
        assert fb.fdp_curve(fb.BoundCurve((0,))) == []
