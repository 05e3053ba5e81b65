import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import naive
from conftest import eset, rand_eset
from sumset_forge import (ESet, collision_energy, diffset, dilate,
                          dilate_intersection_count, field_from_spec,
                          make_field, mult_energy, parse_eset, productset,
                          quotientset, ratio_of_differences, sumset, translate)


class TestESet:
    def test_mask_and_card_stay_consistent(self, f16):
        A = eset(f16, [0, 3, 15])
        assert A.card == 3
        assert bin(A.mask).count("1") == 3
        assert A.mask == (1 << 0) | (1 << 3) | (1 << 15)

    def test_mask_hex_roundtrip(self, f16):
        rng = random.Random(1)
        for _ in range(40):
            A = rand_eset(rng, f16, 0, 16)
            B = ESet.from_mask_hex(f16, A.mask_hex)
            assert A == B and B.card == A.card

    def test_out_of_range_rejected(self, f7):
        with pytest.raises(ValueError):
            eset(f7, [7])
        with pytest.raises(ValueError):
            ESet.from_mask(f7, 1 << 7)

    def test_parse_literals(self, f7):
        assert parse_eset(f7, "{1,2,3}") == eset(f7, [1, 2, 3])
        assert parse_eset(f7, "{}") == eset(f7, [])
        assert parse_eset(f7, "maskhex:0e") == eset(f7, [1, 2, 3])
        with pytest.raises(ValueError):
            parse_eset(f7, "1,2,3")

    def test_parse_poly_elements(self, f9):
        assert parse_eset(f9, "{1+2*x,x}") == eset(f9, [7, 3])

    def test_render_reparses(self, f9):
        rng = random.Random(2)
        for _ in range(20):
            A = rand_eset(rng, f9, 0, 9)
            assert parse_eset(f9, A.render()) == A

    def test_mixed_context_rejected(self, f7, f9):
        with pytest.raises(ValueError):
            sumset(eset(f7, [1]), eset(f9, [1]))


class TestSumProductSets:
    def test_spec_examples_f7(self, f7):
        A = eset(f7, [1, 2, 3])
        assert sorted(sumset(A, A)) == [2, 3, 4, 5, 6]
        assert sorted(productset(A, A)) == [1, 2, 3, 4, 6]

    def test_identity_cases(self, f7):
        zero = eset(f7, [0])
        one = eset(f7, [1])
        A = eset(f7, [2, 4, 5])
        assert sumset(zero, zero) == zero
        assert productset(one, A) == A
        assert translate(A, 0) == A
        assert dilate(1, A) == A

    def test_empty_conventions(self, f7):
        A = eset(f7, [1, 2])
        empty = eset(f7, [])
        for op in (sumset, diffset, productset, quotientset):
            assert op(A, empty).card == 0
            assert op(empty, A).card == 0

    def test_quotient_by_zero_only_divisor(self, f7):
        with pytest.raises(ValueError):
            quotientset(eset(f7, [1, 2]), eset(f7, [0]))

    def test_quotient_drops_zero_divisor(self, f7):
        A = eset(f7, [2])
        B = eset(f7, [0, 2])
        assert quotientset(A, B) == eset(f7, [1])

    def test_dilate_examples(self, f7):
        A = eset(f7, [1, 2, 3])
        assert sorted(dilate(2, A)) == [2, 4, 6]
        assert dilate(0, A) == eset(f7, [0])
        assert dilate(0, eset(f7, [])).card == 0
        assert dilate(3, A).card == A.card

    @pytest.mark.parametrize("spec", ["7^1", "2^4", "3^2", "5^2"])
    def test_against_naive_oracle(self, spec):
        ctx = field_from_spec(spec)
        params = naive.params_of(ctx)
        rng = random.Random("setops:" + spec)
        for _ in range(60):
            A = rand_eset(rng, ctx, 0, 8)
            B = rand_eset(rng, ctx, 0, 8)
            assert set(sumset(A, B)) == naive.sumset(params, set(A), set(B))
            assert set(diffset(A, B)) == naive.diffset(params, set(A), set(B))
            assert set(productset(A, B)) == naive.productset(params, set(A), set(B))
            c = rng.randrange(ctx.q)
            assert set(dilate(c, A)) == naive.dilate(params, c, set(A))

    def test_cardinality_bounds(self, f64):
        rng = random.Random(4)
        for _ in range(100):
            A = rand_eset(rng, f64, 1, 10)
            B = rand_eset(rng, f64, 1, 10)
            ns = sumset(A, B).card
            assert max(A.card, B.card) <= ns <= A.card * B.card
            np_ = productset(A, B).card
            assert np_ <= A.card * B.card
            # a zero factor collapses products, so the lower bound needs
            # a nonzero element on both sides
            if A.without_zero().card and B.without_zero().card:
                assert np_ >= max(A.without_zero().card, B.without_zero().card)

    @given(st.sets(st.integers(0, 15), max_size=8),
           st.sets(st.integers(0, 15), max_size=8))
    @settings(max_examples=60, deadline=None)
    def test_sumset_commutes_and_is_monotone(self, xs, ys):
        ctx = make_field(2, 4)
        A, B = ESet.from_indices(ctx, xs), ESet.from_indices(ctx, ys)
        assert sumset(A, B) == sumset(B, A)
        assert productset(A, B) == productset(B, A)
        if xs:
            sub = ESet.from_indices(ctx, list(xs)[: len(xs) // 2 + 1])
            assert sumset(sub, B).issubset(sumset(A, B))

    @given(st.integers(0, 80), st.integers(0, 80))
    @settings(max_examples=80, deadline=None)
    def test_digitwise_add_law(self, a, b):
        ctx = make_field(3, 4)
        assert ctx.add(a, b) == naive.add((3, 4, ctx.modulus), a, b)


class TestRatioSet:
    def test_two_element_set(self, f7):
        assert sorted(ratio_of_differences(eset(f7, [0, 1]))) == [0, 1, 6]

    def test_full_field(self, f5):
        A = ESet.full(f5)
        assert ratio_of_differences(A) == A

    def test_always_contains_zero_and_one(self, f64):
        rng = random.Random(6)
        for _ in range(40):
            A = rand_eset(rng, f64, 2, 8)
            R = ratio_of_differences(A)
            assert 0 in R and 1 in R

    def test_singleton_rejected(self, f7):
        with pytest.raises(ValueError):
            ratio_of_differences(eset(f7, [3]))

    @pytest.mark.parametrize("spec", ["7^1", "3^2", "2^4"])
    def test_against_naive_oracle(self, spec):
        ctx = field_from_spec(spec)
        params = naive.params_of(ctx)
        rng = random.Random("ratio:" + spec)
        for _ in range(25):
            A = rand_eset(rng, ctx, 2, 6)
            assert set(ratio_of_differences(A)) == naive.ratio_of_differences(
                params, set(A))


class TestCounts:
    def test_dilate_intersection_examples(self, f7):
        A = eset(f7, [1, 2, 3])
        assert dilate_intersection_count(2, 2, A) == 3
        assert dilate_intersection_count(1, 2, A) == 1
        assert dilate_intersection_count(1, 3, A) == 2
        with pytest.raises(ValueError):
            dilate_intersection_count(0, 1, A)

    def test_collision_energy_examples(self, f7):
        assert collision_energy(eset(f7, [0, 1]), 6) == 6
        assert collision_energy(eset(f7, [4]), 3) == 1
        A = eset(f7, [1, 2, 3])
        R = ratio_of_differences(A)
        for x in range(7):
            if x not in R:
                assert collision_energy(A, x) == A.card ** 2

    def test_collision_energy_x_zero(self, f7):
        A = eset(f7, [1, 2, 5])
        assert collision_energy(A, 0) == A.card ** 3

    @pytest.mark.parametrize("spec", ["7^1", "3^2", "2^4"])
    def test_collision_energy_vs_enumeration(self, spec):
        ctx = field_from_spec(spec)
        params = naive.params_of(ctx)
        rng = random.Random("collision:" + spec)
        for _ in range(25):
            A = rand_eset(rng, ctx, 1, 6)
            x = rng.randrange(ctx.q)
            assert collision_energy(A, x) == naive.collision_energy(
                params, set(A), x)

    def test_collision_decomposes_into_diagonal_plus_even_offdiagonal(self, f11):
        rng = random.Random(8)
        for _ in range(30):
            A = rand_eset(rng, f11, 2, 6)
            x = rng.randrange(1, 11)
            off = collision_energy(A, x) - A.card ** 2
            assert off >= 0 and off % 2 == 0
            reps = sum(1 for a1 in A for a2 in A for b1 in A for b2 in A
                       if b1 != b2 and f11.sub(a1, a2)
                       == f11.mul(x, f11.sub(b1, b2)))
            assert off == reps

    def test_mult_energy_examples(self, f7):
        assert mult_energy(eset(f7, [5])) == 1
        # matrix of dilate-intersection counts: diagonal 3,3,3;
        # off-diagonal 1,2,2 twice each => 9 + 10 = 19
        assert mult_energy(eset(f7, [1, 2, 3])) == 19
        # multiplicative subgroup of order 3: every |aA ∩ bA| = 3
        assert mult_energy(eset(f7, [1, 2, 4])) == 27

    def test_mult_energy_rejects_zero(self, f7):
        with pytest.raises(ValueError):
            mult_energy(eset(f7, [0, 1]))

    def test_mult_energy_identities(self, f64):
        rng = random.Random(9)
        for _ in range(40):
            A = rand_eset(rng, f64, 1, 9, exclude_zero=True)
            e = mult_energy(A)
            direct = sum(dilate_intersection_count(a, b, A)
                         for a in A for b in A)
            assert e == direct
            assert e * productset(A, A).card >= A.card ** 4

    @pytest.mark.parametrize("spec", ["7^1", "3^2"])
    def test_mult_energy_vs_enumeration(self, spec):
        ctx = field_from_spec(spec)
        params = naive.params_of(ctx)
        rng = random.Random("multenergy:" + spec)
        for _ in range(20):
            A = rand_eset(rng, ctx, 1, 6, exclude_zero=True)
            assert mult_energy(A) == naive.mult_energy(params, set(A))


class TestExactExpansion:
    def test_ratio_free_dilate_expands_fully(self, f101):
        rng = random.Random(10)
        for _ in range(25):
            A = rand_eset(rng, f101, 2, 9)
            R = ratio_of_differences(A)
            for x in range(101):
                if x not in R:
                    assert sumset(A, dilate(x, A)).card == A.card ** 2

    def test_cauchy_davenport_sanity(self, f101):
        rng = random.Random(11)
        for _ in range(60):
            A = rand_eset(rng, f101, 1, 30)
            assert sumset(A, A).card >= min(101, 2 * A.card - 1)
