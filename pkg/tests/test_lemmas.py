import random
from fractions import Fraction

import pytest

import naive
from conftest import eset, rand_eset
from sumset_forge import (ESet, collision_energy, diffset, dilate,
                          field_from_spec, ratio_of_differences, subfields,
                          sumset, translate)
from sumset_forge.lemmas import (IneqReport, VacuousBound,
                                 check_cor_dilates, check_cor_products,
                                 check_plunneke_corollary,
                                 check_ruzsa_triangle, is_subfield,
                                 lemma11_witness, lemma13_affine_witness,
                                 plunneke_witness_small)


class TestIneqReport:
    def test_holds_is_exact_rational(self):
        assert IneqReport("t", 3, Fraction(3)).holds
        assert not IneqReport("t", 3, Fraction(8, 3)).holds  # 3 > 8/3
        assert IneqReport("t", 2, Fraction(8, 3)).holds

    def test_tsv(self):
        line = IneqReport("triangle", 4, Fraction(9, 2)).to_tsv()
        assert line == "triangle\t4\t9\t2\t1"


class TestRuzsaTriangle:
    def test_singletons(self, f7):
        S = eset(f7, [0])
        r = check_ruzsa_triangle(S, S, S)
        assert (r.lhs, r.rhs, r.holds) == (1, Fraction(1), True)

    def test_fixed_instance(self, f7):
        # Y+Z = {3, 1}; the right side is |Y-X| |X+Z| / |X| = 2*4/2
        r = check_ruzsa_triangle(eset(f7, [1, 2]), eset(f7, [3]), eset(f7, [0, 5]))
        assert (r.lhs, r.rhs) == (2, Fraction(4))
        assert r.holds

    def test_difference_form_is_false_in_odd_characteristic(self, f101):
        # the plausible-looking variant bounding |X-Z| by the same right side
        # fails; this instance is the frozen counterexample
        X = eset(f101, [1, 5, 61, 63, 75, 82, 89, 90, 94])
        Y = eset(f101, [16])
        Z = eset(f101, [17, 24, 46, 58])
        lhs = diffset(X, Z).card
        rhs = Fraction(diffset(Y, X).card * sumset(X, Z).card, X.card)
        assert lhs > rhs
        assert check_ruzsa_triangle(X, Y, Z).holds

    def test_empty_x_rejected(self, f7):
        with pytest.raises(ValueError):
            check_ruzsa_triangle(eset(f7, []), eset(f7, [1]), eset(f7, [1]))

    def test_random_instances(self, f64, f101):
        rng = random.Random("ruzsa")
        for ctx in (f64, f101):
            for _ in range(500):
                X = rand_eset(rng, ctx, 1, 10)
                Y = rand_eset(rng, ctx, 1, 10)
                Z = rand_eset(rng, ctx, 1, 10)
                assert check_ruzsa_triangle(X, Y, Z).holds


class TestPlunnekeCorollary:
    def test_k1_monotonicity(self, f7):
        X = eset(f7, [0, 1])
        B = eset(f7, [2, 5])
        r = check_plunneke_corollary(X, [B])
        assert r.lhs == B.card and r.holds

    def test_singleton_x(self, f7):
        r = check_plunneke_corollary(eset(f7, [0]),
                                     [eset(f7, [1, 2]), eset(f7, [3])])
        assert (r.lhs, r.rhs, r.holds) == (2, Fraction(2), True)

    def test_random_instances(self, f9):
        rng = random.Random("plunneke")
        for _ in range(200):
            X = rand_eset(rng, f9, 1, 6)
            Bs = [rand_eset(rng, f9, 1, 6) for _ in range(rng.randint(1, 3))]
            assert check_plunneke_corollary(X, Bs).holds


class TestCorDilates:
    def test_equal_dilators(self, f7):
        A = eset(f7, [1, 2, 3])
        r1, r2 = check_cor_dilates(A, 4, 4)
        assert r1.lhs == sumset(A, A).card
        assert r1.holds and r2.holds

    def test_spec_instance(self, f7):
        A = eset(f7, [1, 2, 3])
        r1, r2 = check_cor_dilates(A, 1, 2)
        assert r1.lhs == 7 and r1.rhs == Fraction(25)
        assert r2.holds

    def test_zero_dilator(self, f7):
        with pytest.raises(ValueError):
            check_cor_dilates(eset(f7, [1]), 0, 1)

    def test_empty_intersection_flagged(self, f7):
        with pytest.raises(VacuousBound):
            check_cor_dilates(eset(f7, [1]), 1, 2)

    def test_random_instances(self):
        ctx = field_from_spec("5^2")
        rng = random.Random("cordilates")
        checked = 0
        for _ in range(500):
            A = rand_eset(rng, ctx, 1, 10)
            a, b = rng.randrange(1, 25), rng.randrange(1, 25)
            try:
                r1, r2 = check_cor_dilates(A, a, b)
            except VacuousBound:
                continue
            assert r1.holds and r2.holds
            checked += 1
        assert checked > 300


class TestCorProducts:
    def test_identity_dilators(self, f7):
        A = eset(f7, [1, 2, 3])
        r1, r2 = check_cor_products(A, 1, 1, 1)
        assert r1.lhs == sumset(A, A).card
        assert r1.holds and r2.holds

    def test_spec_instance(self, f7):
        A = eset(f7, [1, 2, 3])
        r1, r2 = check_cor_products(A, 2, 3, 1)
        assert r1.lhs == 5 and r1.rhs == Fraction(625, 6)
        assert r2.lhs == 5 and r2.holds

    def test_random_instances(self):
        ctx = field_from_spec("2^5")
        rng = random.Random("corproducts")
        checked = 0
        for _ in range(500):
            A = rand_eset(rng, ctx, 1, 10)
            a1, a2, b = (rng.randrange(1, 32) for _ in range(3))
            try:
                r1, r2 = check_cor_products(A, a1, a2, b)
            except VacuousBound:
                continue
            assert r1.holds and r2.holds
            checked += 1
        assert checked > 200


class TestPlunnekeWitness:
    def test_k1_whole_set_wins(self, f7):
        X = eset(f7, [0, 1, 3])
        B = eset(f7, [2, 5])
        assert plunneke_witness_small(X, [B]) == X

    def test_spec_instance(self, f7):
        X = eset(f7, [0, 1])
        B = eset(f7, [0, 1])
        X1 = plunneke_witness_small(X, [B, B])
        assert X1 == X  # 3 <= (3/2)^2 * 2 and the largest subset wins ties
        assert sumset(sumset(X1, B), B).card <= Fraction(9, 4) * X1.card

    def test_cap_enforced(self, f64):
        X = ESet.from_indices(f64, range(20))
        with pytest.raises(ValueError):
            plunneke_witness_small(X, [X], cap=16)

    def test_random_instances(self, f9):
        rng = random.Random("witness")
        for _ in range(200):
            X = rand_eset(rng, f9, 1, 6)
            Bs = [rand_eset(rng, f9, 1, 5) for _ in range(rng.randint(1, 3))]
            X1 = plunneke_witness_small(X, Bs)
            assert 0 < X1.card and X1.issubset(X)
            alpha = Fraction(1)
            total = Bs[0]
            for B in Bs[1:]:
                total = sumset(total, B)
            for B in Bs:
                alpha *= Fraction(sumset(X, B).card, X.card)
            assert sumset(X1, total).card <= alpha * X1.card


class TestLemma11Witness:
    def test_pair_set_hypothesis_always_fails(self, f5):
        # the ratio set of any 2-element set is {0, 1, -1}, so |R| < 4 = |A|^2
        with pytest.raises(ValueError):
            lemma11_witness(eset(f5, [0, 1]))

    def test_frozen_instance_f11(self, f11):
        A = eset(f11, [1, 2, 5])
        assert ratio_of_differences(A).card == 11
        w = lemma11_witness(A)
        assert w.x == 2
        assert w.energy == 11
        assert w.sum_card == 8
        assert w.quadruple == (2, 5, 5, 1)

    def test_witness_invariants(self, f101):
        rng = random.Random("lemma11")
        found = 0
        for _ in range(60):
            A = rand_eset(rng, f101, 3, 4)
            R = ratio_of_differences(A)
            if R.card < A.card ** 2:
                continue
            w = lemma11_witness(A)
            found += 1
            a1, a2, b1, b2 = w.quadruple
            assert b1 != b2
            assert f101.sub(a1, a2) == f101.mul(w.x, f101.sub(b1, b2))
            assert w.energy == collision_energy(A, w.x)
            assert w.energy <= 2 * A.card ** 2
            assert w.sum_card * w.energy >= A.card ** 4
            assert w.sum_card == sumset(A, dilate(w.x, A)).card
        assert found > 30


class TestLemma13:
    def test_subset_of_subfield(self, f16):
        G = subfields(f16)[1]
        A = eset(f16, sorted(G.elems)[:3])
        w = lemma13_affine_witness(A, G)
        assert w.contained and w.counterexample is None

    def test_frozen_f4_instance(self, f4):
        G = subfields(f4)[0]
        w = lemma13_affine_witness(eset(f4, [2, 3]), G)
        assert (w.c, w.d, w.contained) == (1, 2, True)

    def test_constructed_cosets(self, f16):
        G = subfields(f16)[1]
        rng = random.Random("lemma13")
        params = naive.params_of(f16)
        for _ in range(100):
            c = rng.randrange(1, 16)
            d = rng.randrange(16)
            coset = sorted(translate(dilate(c, G.elems), d))
            A = eset(f16, rng.sample(coset, 3))
            w = lemma13_affine_witness(A, G)
            assert w.contained
            # replay containment through the naive oracle
            cinv = naive.inv(params, w.c)
            for a in A:
                assert naive.mul(params, naive.sub(params, a, w.d), cinv) in set(G.elems)

    def test_planted_counterexample_detected(self, f16):
        G = subfields(f16)[1]
        rng = random.Random("plant")
        coset_set = set(G.elems)
        outside = [e for e in range(16) if e not in coset_set]
        for _ in range(50):
            A = sorted(rng.sample(sorted(coset_set), 3))
            planted = A[:-1] + [rng.choice(outside)]
            w = lemma13_affine_witness(eset(f16, planted), G)
            assert not w.contained
            assert w.counterexample is not None

    def test_small_set_rejected(self, f16):
        with pytest.raises(ValueError):
            lemma13_affine_witness(eset(f16, [1]), subfields(f16)[0])


class TestIsSubfield:
    def test_examples(self, f4, f7):
        assert is_subfield(eset(f4, [0, 1]))
        assert not is_subfield(eset(f7, [0, 1, 6]))
        assert is_subfield(ESet.full(f7))

    def test_matches_subfield_lattice(self, f16):
        lattice = {G.elems.mask for G in subfields(f16)}
        rng = random.Random("lattice")
        for _ in range(200):
            S = rand_eset(rng, f16, 0, 16)
            assert is_subfield(S) == (S.mask in lattice)

    def test_frobenius_fixed_points(self, f16):
        fixed = [x for x in range(16) if f16.pow(x, 4) == x]
        assert is_subfield(eset(f16, fixed))
