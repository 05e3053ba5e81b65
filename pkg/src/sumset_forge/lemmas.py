"""Exact verifiers and constructive witness extractors for the growth toolkit:
the Ruzsa triangle inequality, iterated sumset growth (Plünnecke–Ruzsa),
dilate-pair and dilate-product bounds, expansion via collision energy, and
affine-coset containment from ratio sets.

Every comparison is exact rational arithmetic (integer cross-multiplication
under the hood, via fractions.Fraction); floating point never decides a
verdict.  These statements are theorems: a report with holds=False on valid
input is an implementation bug, and callers are expected to surface the full
instance when that happens.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ffield import SubfieldDesc
from .setalg import (ESet, collision_energy, diffset, dilate,
                     dilate_intersection_count, productset,
                     ratio_of_differences, sumset)


class VacuousBound(ValueError):
    """A bound whose right side is undefined on this instance (division by an
    empty dilate intersection); not a theorem violation."""


@dataclass(frozen=True)
class IneqReport:
    """One verified inequality instance: holds iff lhs <= rhs, exactly."""
    label: str
    lhs: int
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def to_tsv(self) -> str:
        return (f"{self.label}\t{self.lhs}\t{self.rhs.numerator}"
                f"\t{self.rhs.denominator}\t{int(self.holds)}")


@dataclass(frozen=True)
class Lemma11Witness:
    """Minimum-collision ratio x with one representing quadruple.

    quadruple = (a1, a2, b1, b2) with b1 != b2 and x = (a1-a2)/(b1-b2);
    energy = collision_energy(A, x); sum_card = |A + xA|.
    """
    x: int
    quadruple: tuple[int, int, int, int]
    energy: int
    sum_card: int


@dataclass(frozen=True)
class AffineWitness:
    """Constructive (c, d) with A ⊆ cG + d, or the member that escapes."""
    c: int
    d: int
    contained: bool
    counterexample: int | None = None


def check_ruzsa_triangle(X: ESet, Y: ESet, Z: ESet) -> IneqReport:
    """|Y + Z| <= |Y - X| * |X + Z| / |X|.

    The sum form of the Ruzsa triangle inequality: each element of Y + Z is
    recovered from a (Y - X, X + Z) pair through any fixed section of X, which
    is exactly the instance the dilate-pair difference bound consumes.
    """
    if X.card == 0:
        raise ValueError("X must be nonempty")
    lhs = sumset(Y, Z).card
    rhs = Fraction(diffset(Y, X).card * sumset(X, Z).card, X.card)
    return IneqReport("triangle", lhs, rhs)


def check_plunneke_corollary(X: ESet, Bs: list[ESet]) -> IneqReport:
    """|B_1 + ... + B_k| <= prod_i |X + B_i| / |X|^(k-1)."""
    if X.card == 0:
        raise ValueError("X must be nonempty")
    if not Bs:
        raise ValueError("need at least one summand set")
    total = Bs[0]
    for B in Bs[1:]:
        total = sumset(total, B)
    num = 1
    for B in Bs:
        num *= sumset(X, B).card
    return IneqReport(f"iterated-growth-k{len(Bs)}", total.card,
                      Fraction(num, X.card ** (len(Bs) - 1)))


def check_cor_dilates(A: ESet, a: int, b: int) -> tuple[IneqReport, IneqReport]:
    """|aA + bA| and |aA - bA| are both <= |A+A|^2 / |aA ∩ bA|."""
    if a == 0 or b == 0:
        raise ValueError("zero dilator")
    inter = dilate_intersection_count(a, b, A)
    if inter == 0:
        raise VacuousBound(f"aA ∩ bA empty for a={a}, b={b}")
    rhs = Fraction(sumset(A, A).card ** 2, inter)
    dA, dB = dilate(a, A), dilate(b, A)
    return (IneqReport("dilate-pair-sum", sumset(dA, dB).card, rhs),
            IneqReport("dilate-pair-diff", diffset(dA, dB).card, rhs))


def check_cor_products(A: ESet, a1: int, a2: int, b: int) -> tuple[IneqReport, IneqReport]:
    """|a1*a2*A ± b^2*A| <= |A+A|^4 / (|a1A ∩ bA| * |a2A ∩ bA| * |A|)."""
    if a1 == 0 or a2 == 0 or b == 0:
        raise ValueError("zero dilator")
    if A.card == 0:
        raise ValueError("A must be nonempty")
    i1 = dilate_intersection_count(a1, b, A)
    i2 = dilate_intersection_count(a2, b, A)
    if i1 == 0 or i2 == 0:
        raise VacuousBound(f"empty dilate intersection for a1={a1}, a2={a2}, b={b}")
    ctx = A.ctx
    rhs = Fraction(sumset(A, A).card ** 4, i1 * i2 * A.card)
    P = dilate(ctx.mul(a1, a2), A)
    Q = dilate(ctx.mul(b, b), A)
    return (IneqReport("dilate-product-sum", sumset(P, Q).card, rhs),
            IneqReport("dilate-product-diff", diffset(P, Q).card, rhs))


def plunneke_witness_small(X: ESet, Bs: list[ESet], cap: int = 16) -> ESet:
    """Exhaustively find nonempty X1 ⊆ X with
    |X1 + B_1 + ... + B_k| <= (prod_i |X+B_i|/|X|) * |X1|.

    Guaranteed to exist; ties go to the largest X1, then the least mask.
    """
    if X.card == 0:
        raise ValueError("X must be nonempty")
    if X.card > cap:
        raise ValueError(f"|X| = {X.card} exceeds exhaustive cap {cap}")
    if not Bs:
        raise ValueError("need at least one summand set")
    alpha = Fraction(1)
    for B in Bs:
        alpha *= Fraction(sumset(X, B).card, X.card)
    total = Bs[0]
    for B in Bs[1:]:
        total = sumset(total, B)
    elems = [int(i) for i in X.indices]
    best = None
    for sel in range(1, 1 << len(elems)):
        chosen = [elems[i] for i in range(len(elems)) if sel >> i & 1]
        X1 = ESet.from_indices(X.ctx, chosen)
        if Fraction(sumset(X1, total).card) <= alpha * X1.card:
            key = (X1.card, -X1.mask)
            if best is None or key > best[0]:
                best = (key, X1)
    if best is None:
        raise RuntimeError("no witness subset found; this contradicts the "
                           f"growth lemma on {X.render()}")
    return best[1]


def lemma11_witness(A: ESet) -> Lemma11Witness:
    """Scan the difference-ratio set for the minimum-collision x.

    Requires |R| >= |A|^2 where R is the ratio set; then the returned x has
    collision energy <= 2|A|^2 and |A + xA| >= |A|^2 / 2.
    """
    R = ratio_of_differences(A)
    n = A.card
    if R.card < n * n:
        raise ValueError(f"hypothesis fails: |R| = {R.card} < |A|^2 = {n * n}")
    best_x, best_e = None, None
    for x in R:
        e = collision_energy(A, x)
        if best_e is None or e < best_e:
            best_x, best_e = x, e
    ctx = A.ctx
    quad = None
    elems = [int(i) for i in A.indices]
    for a1 in elems:
        for a2 in elems:
            u = ctx.sub(a1, a2)
            for b1 in elems:
                for b2 in elems:
                    if b1 == b2:
                        continue
                    if u == ctx.mul(best_x, ctx.sub(b1, b2)):
                        quad = (a1, a2, b1, b2)
                        break
                if quad:
                    break
            if quad:
                break
        if quad:
            break
    assert quad is not None  # x in R guarantees a representation
    sum_card = sumset(A, dilate(best_x, A)).card
    return Lemma11Witness(best_x, quad, best_e, sum_card)


def lemma13_affine_witness(A: ESet, G: SubfieldDesc) -> AffineWitness:
    """From R(A) ⊆ G, build (c, d) = (b1 - b2, b2) for the two least members
    and verify A ⊆ cG + d by direct membership; a falsely asserted
    precondition surfaces as a counterexample, never silently."""
    if A.card < 2:
        raise ValueError("need |A| >= 2")
    ctx = A.ctx
    b2, b1 = int(A.indices[0]), int(A.indices[1])
    c = ctx.sub(b1, b2)
    cinv = ctx.inv(c)
    members = G.elems.members()
    for a in A:
        if ctx.mul(ctx.sub(a, b2), cinv) not in members:
            return AffineWitness(c, b2, False, a)
    return AffineWitness(c, b2, True)


def is_subfield(S: ESet) -> bool:
    """True iff S contains 0 and 1 and is closed under + and *; for finite
    subsets of a field this forces a subfield."""
    if 0 not in S or 1 not in S:
        return False
    return sumset(S, S).issubset(S) and productset(S, S).issubset(S)
