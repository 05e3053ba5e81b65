"""The three-case growth pipeline on a concrete set A over GF(q).

Given A, the pipeline lower-bounds max(|A+A|, |AA|) by a power of |A| with an
explicit tracked constant in place of asymptotic notation: it computes the
exact dilate-intersection counts matrix, extracts a near-level set (b0, N, A1)
by dyadic pigeonhole, classifies the difference-ratio set of A1 (a subfield, or
escaping via a sum, or escaping via a product), and assembles the matching
chain of exact inequality instances into a CaseCertificate.

Every certificate is replayable: verify_certificate re-derives the whole chain
through an independent brute-force route (Python sets and table-free scalar
arithmetic instead of the vectorized kernels) and compares every recorded
number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ffield import FieldCtx, subfields
from .lemmas import IneqReport
from .setalg import (ESet, collision_energy, dilate_intersection_count,
                     productset, ratio_of_differences, sumset)
from . import lemmas as _lemmas
from . import setalg as _setalg

CASE_SMALL = "SmallA1"
CASE_FIELD_VIOLATION = "FieldHypothesisViolation"
CASE_FIELD = "FieldCase"
CASE_SUM = "SumCase"
CASE_PRODUCT = "ProductCase"
CASE_DEGENERATE = "Degenerate"

# case_tag -> (w_plus, w_times, e) of the claim  s^w_plus * t^w_times * C >= m^e
CLAIM_EXPONENTS = {
    CASE_SMALL: (0, 48, 49),
    CASE_FIELD: (8, 4, 13),
    CASE_SUM: (17, 8, 26),
    CASE_PRODUCT: (32, 16, 49),
}


@dataclass(frozen=True)
class PigeonholeOutcome:
    """Level set extracted from the counts matrix: N <= |b0 A ∩ a A| < 2N for
    every a in A1, chosen to maximize |A1| * N."""
    b0: int
    N: int
    A1: ESet
    counts: dict[int, int]  # a -> |b0 A ∩ a A| for every a in A
    L: int                  # floor(log2 |A|) + 1

    def key(self) -> tuple:
        return (self.b0, self.N, self.A1.mask_hex,
                tuple(sorted(self.counts.items())), self.L)


@dataclass(frozen=True)
class HypothesisViolation:
    """A subfield image cG + shift meeting A in t elements with t >= |A|^alpha
    and t^2 > |G|."""
    degree: int
    c: int
    shift: int
    t: int

    def to_tsv(self) -> str:
        return f"{self.degree}\t{self.c}\t{self.shift}\t{self.t}"


@dataclass(frozen=True)
class CaseCertificate:
    """Machine-checkable transcript of one pipeline run."""
    case_tag: str
    field_spec: str
    input_mask_hex: str           # A exactly as handed in
    mask_hex: str                 # the working set (zero stripped)
    m: int                        # |A| after stripping
    s: int                        # |A+A|
    t: int                        # |AA|
    pigeonhole: PigeonholeOutcome | None
    x: int | None
    quadruples: tuple[tuple[int, int, int, int], ...]
    ratio_parts: tuple[int, ...]  # (r1, r2) for Sum/Product cases
    energy: int | None            # collision energy of x (field case)
    subfield_degree: int | None   # degree of G when the ratio set is a field
    affine: tuple[int, int] | None  # (c, d) containment witness on violation
    steps: tuple[IneqReport, ...]
    tracked_constant: Fraction | None
    exponent_claim: tuple[int, int, int] | None  # (w_plus, w_times, e)
    notes: tuple[str, ...]

    def key(self) -> tuple:
        """Canonical comparison key covering every recorded quantity."""
        return (self.case_tag, self.field_spec, self.input_mask_hex,
                self.mask_hex, self.m, self.s, self.t,
                self.pigeonhole.key() if self.pigeonhole else None,
                self.x, self.quadruples, self.ratio_parts, self.energy,
                self.subfield_degree, self.affine,
                tuple((r.label, r.lhs, r.rhs) for r in self.steps),
                self.tracked_constant, self.exponent_claim, self.notes)

    def claim_holds(self) -> bool:
        if self.exponent_claim is None:
            return True
        w1, w2, e = self.exponent_claim
        return Fraction(self.m ** e) <= (self.s ** w1) * (self.t ** w2) * self.tracked_constant

    def summary(self) -> str:
        if self.exponent_claim is None:
            return f"CASE {self.case_tag} BOUND none"
        w1, w2, e = self.exponent_claim
        c = self.tracked_constant
        cs = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return f"CASE {self.case_tag} BOUND |A+A|^{w1}*|AA|^{w2} >= |A|^{e} / {cs}"

    def to_text(self) -> str:
        lines = [f"# field {self.field_spec}",
                 f"# set maskhex:{self.input_mask_hex}"]
        for note in self.notes:
            lines.append(f"# note {note}")
        lines.append(f"# m {self.m} s {self.s} t {self.t}")
        if self.pigeonhole is not None:
            ph = self.pigeonhole
            lines.append(f"# pigeonhole b0 {ph.b0} N {ph.N} L {ph.L} "
                         f"A1 maskhex:{ph.A1.mask_hex}")
        if self.x is not None:
            lines.append(f"# x {self.x}")
        for quad in self.quadruples:
            lines.append("# quadruple " + " ".join(str(v) for v in quad))
        if self.subfield_degree is not None:
            lines.append(f"# subfield-degree {self.subfield_degree}")
        if self.affine is not None:
            lines.append(f"# affine c {self.affine[0]} d {self.affine[1]}")
        for step in self.steps:
            lines.append("STEP\t" + step.to_tsv())
        lines.append(self.summary())
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# two interchangeable set-operation backends
# ---------------------------------------------------------------------------

class _FastOps:
    """Vectorized kernels on ESet values (the emission route)."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx

    def make(self, indices):
        return ESet.from_indices(self.ctx, indices)

    def card(self, S):
        return S.card

    def elements(self, S):
        return [int(i) for i in S.indices]

    def contains(self, S, x):
        return x in S

    def sumset(self, S, T):
        return _setalg.sumset(S, T)

    def diffset(self, S, T):
        return _setalg.diffset(S, T)

    def productset(self, S, T):
        return _setalg.productset(S, T)

    def dilate(self, c, S):
        return _setalg.dilate(c, S)

    def inter_card(self, S, T):
        return S.intersection(T).card

    def ratio(self, S):
        return ratio_of_differences(S)

    def ratio_sum_escape(self, R):
        return sumset(R, R).difference(R)

    def ratio_product_escape(self, R):
        return productset(R, R).difference(R)

    def inter_count(self, a, b, S):
        return dilate_intersection_count(a, b, S)

    def energy(self, S, x):
        return collision_energy(S, x)

    def is_subfield(self, S):
        return _lemmas.is_subfield(S)

    def mul(self, a, b):
        return self.ctx.mul(a, b)

    def sub(self, a, b):
        return self.ctx.sub(a, b)

    def neg(self, a):
        return self.ctx.neg(a)

    def div(self, a, b):
        return self.ctx.div(a, b)


class _BruteOps:
    """Plain Python sets and table-free scalar arithmetic (the replay route)."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx

    def make(self, indices):
        return frozenset(int(i) for i in indices)

    def card(self, S):
        return len(S)

    def elements(self, S):
        return sorted(S)

    def contains(self, S, x):
        return x in S

    def sumset(self, S, T):
        add = self.ctx.add
        return frozenset(add(a, b) for a in S for b in T)

    def diffset(self, S, T):
        sub = self.ctx.sub
        return frozenset(sub(a, b) for a in S for b in T)

    def productset(self, S, T):
        mul = self.ctx.mul_no_table
        return frozenset(mul(a, b) for a in S for b in T)

    def dilate(self, c, S):
        if not S:
            return frozenset()
        if c == 0:
            return frozenset((0,))
        mul = self.ctx.mul_no_table
        return frozenset(mul(c, a) for a in S)

    def inter_card(self, S, T):
        return len(S & T)

    def ratio(self, S):
        if len(S) < 2:
            raise ValueError("ratio set needs |A| >= 2")
        D = self.diffset(S, S)
        inv = self.ctx.inv_no_table
        mul = self.ctx.mul_no_table
        invs = [inv(d) for d in D if d != 0]
        return frozenset(mul(n, iv) for n in D for iv in invs)

    def ratio_sum_escape(self, R):
        return self.sumset(R, R) - R

    def ratio_product_escape(self, R):
        mul = self.ctx.mul_no_table
        return frozenset(mul(a, b) for a in R for b in R) - R

    def inter_count(self, a, b, S):
        if a == 0 or b == 0:
            raise ValueError("zero dilator")
        return len(self.dilate(a, S) & self.dilate(b, S))

    def energy(self, S, x):
        n = len(S)
        if n == 0:
            return 0
        if x == 0:
            return n**3
        sub = self.ctx.sub
        mul = self.ctx.mul_no_table
        counts: dict[int, int] = {}
        for a in S:
            for b in S:
                u = sub(a, b)
                counts[u] = counts.get(u, 0) + 1
        return sum(c * counts.get(mul(x, v), 0) for v, c in counts.items())

    def is_subfield(self, S):
        if 0 not in S or 1 not in S:
            return False
        add = self.ctx.add
        mul = self.ctx.mul_no_table
        return (all(add(a, b) in S for a in S for b in S)
                and all(mul(a, b) in S for a in S for b in S))

    def mul(self, a, b):
        return self.ctx.mul_no_table(a, b)

    def sub(self, a, b):
        return self.ctx.sub(a, b)

    def neg(self, a):
        return self.ctx.neg(a)

    def div(self, a, b):
        return self.ctx.mul_no_table(a, self.ctx.inv_no_table(b))


# ---------------------------------------------------------------------------
# pigeonhole
# ---------------------------------------------------------------------------

def _pigeonhole(ops, S) -> tuple[int, int, list[int], dict[int, int], int]:
    """(b0, N, A1-elements, counts-for-b0, L) maximizing |A1|*N; ties by least
    b0, then largest N."""
    elems = ops.elements(S)
    n = len(elems)
    L = n.bit_length()
    dil = {a: ops.dilate(a, S) for a in elems}
    best = None
    best_payload = None
    for b0 in elems:
        counts = {a: ops.inter_card(dil[b0], dil[a]) for a in elems}
        for j in range(L):
            N = 1 << j
            A1 = [a for a in elems if N <= counts[a] < 2 * N]
            if not A1:
                continue
            key = (len(A1) * N, -b0, N)
            if best is None or key > best:
                best = key
                best_payload = (b0, N, A1, counts)
    b0, N, A1, counts = best_payload
    return b0, N, A1, counts, L


def pigeonhole(A: ESet) -> PigeonholeOutcome:
    """Exact dyadic pigeonhole on the dilate-intersection counts matrix.

    Requires 0 not in A and |A| >= 2.  The outcome satisfies, with
    L = floor(log2 |A|) + 1:
        |A1| * N >= |A|^3 / (2 |AA| L)   and   N >= |A|^2 / (2 |AA| L).
    """
    if 0 in A:
        raise ValueError("pigeonhole requires 0 not in A")
    if A.card < 2:
        raise ValueError("pigeonhole requires |A| >= 2")
    ops = _FastOps(A.ctx)
    b0, N, A1, counts, L = _pigeonhole(ops, A)
    return PigeonholeOutcome(b0, N, ESet.from_indices(A.ctx, A1), counts, L)


# ---------------------------------------------------------------------------
# hypothesis scan over subfield images
# ---------------------------------------------------------------------------

def check_hypothesis(A: ESet, alpha: Fraction = Fraction(47, 48)) -> list[HypothesisViolation]:
    """Scan every affine image of every subfield for a heavy intersection.

    Records a violation for each image cG + d with t = |A ∩ (cG + d)|
    satisfying t >= |A|^alpha and t > |G|^(1/2); comparisons are exact
    (t^den >= |A|^num and t^2 > |G|).
    """
    ctx = A.ctx
    num, den = alpha.numerator, alpha.denominator
    m = A.card
    out = []
    for G in subfields(ctx):
        gsize = G.size
        g_idx = G.elems.indices
        g_nonzero = g_idx[g_idx != 0]
        seen_mult = np.zeros(ctx.q, dtype=bool)
        for c in range(1, ctx.q):
            if seen_mult[c]:
                continue
            seen_mult[ctx.mul_arr(np.int64(c), g_nonzero)] = True
            if m == 0:
                continue
            cg = ctx.mul_arr(np.int64(c), g_idx)
            # label each a in A by the least element of its coset a + cG
            cosets = ctx.add_arr(A.indices[:, None], cg[None, :])
            labels = cosets.min(axis=1)
            reps, counts = np.unique(labels, return_counts=True)
            for rep, t in zip(reps, counts):
                t = int(t)
                if t**den >= m**num and t * t > gsize:
                    out.append(HypothesisViolation(G.d, c, int(rep), t))
    return out


# ---------------------------------------------------------------------------
# ratio-set classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    kind: str                      # FieldCase | SumCase | ProductCase
    R: ESet
    x: int | None = None
    parts: tuple[int, int] | None = None
    quadruples: tuple[tuple[int, int, int, int], ...] = ()


def _first_ratio_quadruple(ops, S, r) -> tuple[int, int, int, int]:
    """Least (a1, a2, b1, b2) in index order with b1 != b2 and
    a1 - a2 = r * (b1 - b2)."""
    elems = ops.elements(S)
    for a1 in elems:
        for a2 in elems:
            u = ops.sub(a1, a2)
            for b1 in elems:
                for b2 in elems:
                    if b1 != b2 and u == ops.mul(r, ops.sub(b1, b2)):
                        return (a1, a2, b1, b2)
    raise ValueError(f"{r} is not a ratio of differences of the set")


def _classify(ops, S1):
    """Classification payload as plain values (sets as sorted element lists)."""
    R = ops.ratio(S1)
    if ops.is_subfield(R):
        return {"kind": CASE_FIELD, "R": R, "x": None, "parts": None, "quads": ()}
    esc = ops.ratio_sum_escape(R)
    if esc:
        x = min(esc)
        r1 = next(r for r in sorted(R) if ops.contains(R, ops.sub(x, r)))
        r2 = ops.sub(x, r1)
        quads = (_first_ratio_quadruple(ops, S1, r1),
                 _first_ratio_quadruple(ops, S1, r2))
        return {"kind": CASE_SUM, "R": R, "x": x, "parts": (r1, r2), "quads": quads}
    esc = ops.ratio_product_escape(R)
    # a finite set containing 0 and 1 closed under + and * is a subfield,
    # so one of the two escapes must be nonempty here
    x = min(esc)
    r1 = next(r for r in sorted(R) if r != 0 and ops.contains(R, ops.div(x, r)))
    r2 = ops.div(x, r1)
    quads = (_first_ratio_quadruple(ops, S1, r1),
             _first_ratio_quadruple(ops, S1, r2))
    return {"kind": CASE_PRODUCT, "R": R, "x": x, "parts": (r1, r2), "quads": quads}


def classify_ratio_set(A1: ESet) -> Classification:
    """Decide which growth case the ratio set R = (A1-A1)/(A1-A1) triggers.

    FieldCase when R is a subfield; otherwise the least x in (R+R) \\ R
    (SumCase), falling back to the least x in (R*R) \\ R (ProductCase), with
    the representing quadruples from A1 attached.
    """
    if A1.card < 2:
        raise ValueError("classification requires |A1| >= 2")
    ops = _FastOps(A1.ctx)
    res = _classify(ops, A1)
    return Classification(res["kind"], res["R"], res["x"], res["parts"], res["quads"])


# ---------------------------------------------------------------------------
# certificate assembly (shared by the fast and brute routes)
# ---------------------------------------------------------------------------

def _lemma11_scan(ops, S1):
    """(x, energy) minimizing collision energy over the ratio set, least x on
    ties."""
    best_x, best_e = None, None
    for x in sorted(ops.ratio(S1)):
        e = ops.energy(S1, x)
        if best_e is None or e < best_e:
            best_x, best_e = x, e
    return best_x, best_e


def _sum_of_dilates(ops, A, coeffs):
    """c1*A + c2*A + ... for the given dilation coefficients."""
    acc = ops.dilate(coeffs[0], A)
    for c in coeffs[1:]:
        acc = ops.sumset(acc, ops.dilate(c, A))
    return acc


def _mask_hex_of(ctx: FieldCtx, indices) -> str:
    return ESet.from_indices(ctx, list(indices)).mask_hex


def _assemble(ops, ctx: FieldCtx, input_indices) -> CaseCertificate:
    notes = []
    input_hex = _mask_hex_of(ctx, input_indices)
    work = sorted(set(int(i) for i in input_indices))
    if 0 in work:
        work = [i for i in work if i != 0]
        notes.append("zero-stripped")

    A = ops.make(work)
    m = ops.card(A)
    s = ops.card(ops.sumset(A, A))
    t = ops.card(ops.productset(A, A))
    work_hex = _mask_hex_of(ctx, work)

    if m <= 1:
        notes.append("degenerate:|A|<=1")
        return CaseCertificate(
            CASE_DEGENERATE, ctx.spec, input_hex, work_hex, m, s, t,
            None, None, (), (), None, None, None, (), None, None, tuple(notes))

    b0, N, A1_elems, counts, L = _pigeonhole(ops, A)
    A1 = ops.make(A1_elems)
    n1 = len(A1_elems)
    ph = PigeonholeOutcome(b0, N, ESet.from_indices(ctx, A1_elems),
                           {int(k): int(v) for k, v in counts.items()}, L)

    steps = [
        IneqReport("dyadic-count-lower", m**2, Fraction(2 * L * t * N)),
        IneqReport("dyadic-mass-lower", m**3, Fraction(2 * L * t * n1 * N)),
    ]

    if n1**48 <= m**47:
        steps.append(IneqReport("small-level-set", n1**48, Fraction(m**47)))
        steps.append(IneqReport("count-cap", N, Fraction(m)))
        C = Fraction((2 * L) ** 48)
        steps.append(IneqReport("product-set-growth", m**49, C * t**48))
        return _finish(ops, ctx, CASE_SMALL, input_hex, work_hex, m, s, t, ph,
                       None, (), (), None, None, None, steps, C, notes)

    cls = _classify(ops, A1)
    R = cls["R"]
    r_card = ops.card(R)

    if cls["kind"] == CASE_FIELD:
        degree = round(math.log(r_card, ctx.p))
        if n1 * n1 > r_card:
            # the level set itself overfills an affine subfield image
            aff = _affine_witness(ops, A1_elems, R)
            steps.append(IneqReport("level-set-exceeds-subfield-root",
                                    r_card + 1, Fraction(n1 * n1)))
            return _finish(ops, ctx, CASE_FIELD_VIOLATION, input_hex, work_hex,
                           m, s, t, ph, None, (), (), None, degree, aff,
                           steps, None, notes)
        x, energy = _lemma11_scan(ops, A1)
        quad = _first_ratio_quadruple(ops, A1, x)
        a1, a2, b1, b2 = quad
        u, v = ops.sub(a1, a2), ops.sub(b1, b2)
        sum_x = ops.card(ops.sumset(A1, ops.dilate(x, A1)))
        uv_sum = ops.card(ops.sumset(ops.dilate(u, A1), ops.dilate(v, A1)))
        S4 = _sum_of_dilates(ops, A, [a1, ops.neg(a2), b1, ops.neg(b2)])
        factors = [ops.card(ops.sumset(ops.dilate(b0, A), ops.dilate(c, A)))
                   for c in (a1, ops.neg(a2), b1, ops.neg(b2))]
        steps.append(IneqReport("ratio-hypothesis", n1 * n1, Fraction(r_card)))
        steps.append(IneqReport("collision-energy-cap", energy, Fraction(2 * n1**2)))
        steps.append(IneqReport("collision-lower", n1**4, Fraction(energy * sum_x)))
        steps.append(IneqReport("dilate-bridge-le", sum_x, Fraction(uv_sum)))
        steps.append(IneqReport("dilate-bridge-ge", uv_sum, Fraction(sum_x)))
        steps.append(IneqReport("embed-in-four-dilates", uv_sum, Fraction(ops.card(S4))))
        steps.append(IneqReport("iterated-growth-k4", ops.card(S4),
                                Fraction(factors[0] * factors[1] * factors[2] * factors[3],
                                         m**3)))
        for i, e in enumerate((a1, a2, b1, b2)):
            steps.append(IneqReport(f"dilate-pair-bound-{i + 1}", factors[i],
                                    Fraction(s**2, counts[e])))
            steps.append(IneqReport(f"level-count-floor-{i + 1}", N, Fraction(counts[e])))
        steps.append(IneqReport("combine-collision", n1**4 * N**4 * m**3,
                                Fraction(energy * s**8)))
        steps.append(IneqReport("apply-mass-bound", n1**2 * N**2 * m**9,
                                Fraction(4 * L**2 * energy * s**8 * t**2)))
        C = Fraction(16 * L**4 * energy, n1**2)
        steps.append(IneqReport("apply-count-bound", n1**2 * m**13,
                                Fraction(16 * L**4 * energy * s**8 * t**4)))
        return _finish(ops, ctx, CASE_FIELD, input_hex, work_hex, m, s, t, ph,
                       x, (quad,), (), energy, degree, None, steps, C, notes)

    x = cls["x"]
    r1, r2 = cls["parts"]
    quads = cls["quads"]
    sum_x = ops.card(ops.sumset(A1, ops.dilate(x, A1)))
    steps.append(IneqReport("ratio-free-expansion-le", sum_x, Fraction(n1**2)))
    steps.append(IneqReport("ratio-free-expansion-ge", n1**2, Fraction(sum_x)))

    if cls["kind"] == CASE_SUM:
        (a1, a2, b1, b2), (c1, c2, d1, d2) = quads
        u, v = ops.sub(a1, a2), ops.sub(b1, b2)
        sg, w = ops.sub(c1, c2), ops.sub(d1, d2)
        e1, e2, e3 = ops.mul(v, w), ops.mul(v, sg), ops.mul(u, w)
        S3 = _sum_of_dilates(ops, A, [e1, e2, e3])
        X = ops.dilate(e1, A)
        G1 = ops.card(ops.sumset(X, ops.dilate(e1, A)))
        G2 = ops.card(ops.sumset(X, ops.dilate(e2, A)))
        G3 = ops.card(ops.sumset(X, ops.dilate(e3, A)))
        S4cd = _sum_of_dilates(ops, A, [d1, ops.neg(d2), c1, ops.neg(c2)])
        S4ab = _sum_of_dilates(ops, A, [b1, ops.neg(b2), a1, ops.neg(a2)])
        fac_cd = [ops.card(ops.sumset(ops.dilate(b0, A), ops.dilate(c, A)))
                  for c in (d1, ops.neg(d2), c1, ops.neg(c2))]
        fac_ab = [ops.card(ops.sumset(ops.dilate(b0, A), ops.dilate(c, A)))
                  for c in (b1, ops.neg(b2), a1, ops.neg(a2))]
        steps.append(IneqReport("embed-in-three-dilates", n1**2, Fraction(ops.card(S3))))
        steps.append(IneqReport("iterated-growth-k3", ops.card(S3),
                                Fraction(G1 * G2 * G3, m**2)))
        steps.append(IneqReport("dilate-cancel-1", G1, Fraction(s)))
        steps.append(IneqReport("dilate-cancel-2", G2, Fraction(ops.card(S4cd))))
        steps.append(IneqReport("dilate-cancel-3", G3, Fraction(ops.card(S4ab))))
        steps.append(IneqReport("iterated-growth-k4-cd", ops.card(S4cd),
                                Fraction(fac_cd[0] * fac_cd[1] * fac_cd[2] * fac_cd[3], m**3)))
        steps.append(IneqReport("iterated-growth-k4-ab", ops.card(S4ab),
                                Fraction(fac_ab[0] * fac_ab[1] * fac_ab[2] * fac_ab[3], m**3)))
        for i, (f, e) in enumerate(zip(fac_cd + fac_ab,
                                       (d1, d2, c1, c2, b1, b2, a1, a2))):
            steps.append(IneqReport(f"dilate-pair-bound-{i + 1}", f,
                                    Fraction(s**2, counts[e])))
            steps.append(IneqReport(f"level-count-floor-{i + 1}", N, Fraction(counts[e])))
        steps.append(IneqReport("combine-expansion", n1**2 * N**8 * m**8,
                                Fraction(s**17)))
        steps.append(IneqReport("apply-mass-bound", N**6 * m**14,
                                Fraction(4 * L**2 * s**17 * t**2)))
        C = Fraction(256 * L**8)
        steps.append(IneqReport("apply-count-bound", m**26, C * s**17 * t**8))
        return _finish(ops, ctx, CASE_SUM, input_hex, work_hex, m, s, t, ph,
                       x, quads, (r1, r2), None, None, None, steps, C, notes)

    # product case
    (a10, a11, a30, a31), (a20, a21, a40, a41) = quads
    terms_num = []
    for i, ai in enumerate((a10, a11)):
        for j, aj in enumerate((a20, a21)):
            c = ops.mul(ai, aj)
            terms_num.append(ops.neg(c) if (i + j) % 2 else c)
    terms_den = []
    for i, ai in enumerate((a30, a31)):
        for j, aj in enumerate((a40, a41)):
            c = ops.mul(ai, aj)
            terms_den.append(ops.neg(c) if (i + j) % 2 else c)
    all_terms = terms_num + terms_den
    S8 = _sum_of_dilates(ops, A, all_terms)
    b0sq = ops.mul(b0, b0)
    X = ops.dilate(b0sq, A)
    H = [ops.card(ops.sumset(X, ops.dilate(c, A))) for c in all_terms]
    pair_elems = [(a10, a20), (a10, a21), (a11, a20), (a11, a21),
                  (a30, a40), (a30, a41), (a31, a40), (a31, a41)]
    steps.append(IneqReport("embed-in-eight-dilates", n1**2, Fraction(ops.card(S8))))
    steps.append(IneqReport("iterated-growth-k8", ops.card(S8),
                            Fraction(math.prod(H), m**7)))
    for i, (h, (ea, eb)) in enumerate(zip(H, pair_elems)):
        steps.append(IneqReport(f"dilate-product-bound-{i + 1}", h,
                                Fraction(s**4, counts[ea] * counts[eb] * m)))
    for i, e in enumerate((a10, a11, a20, a21, a30, a31, a40, a41)):
        steps.append(IneqReport(f"level-count-floor-{i + 1}", N, Fraction(counts[e])))
    steps.append(IneqReport("combine-expansion", n1**2 * N**16 * m**15,
                            Fraction(s**32)))
    steps.append(IneqReport("apply-mass-bound", N**14 * m**21,
                            Fraction(4 * L**2 * s**32 * t**2)))
    C = Fraction(65536 * L**16)
    steps.append(IneqReport("apply-count-bound", m**49, C * s**32 * t**16))
    return _finish(ops, ctx, CASE_PRODUCT, input_hex, work_hex, m, s, t, ph,
                   x, quads, (r1, r2), None, None, None, steps, C, notes)


def _affine_witness(ops, A1_elems, R):
    """(c, d) = (b1 - b2, b2) for the two least members, with the containment
    A1 ⊆ c*G + d (G = R, the ratio set of A1) re-checked member by member."""
    b2, b1 = A1_elems[0], A1_elems[1]
    c = ops.sub(b1, b2)
    for a in A1_elems:
        if not ops.contains(R, ops.div(ops.sub(a, b2), c)):
            raise RuntimeError(
                f"affine containment failed at element {a}; this contradicts "
                "the coset-containment lemma")
    return (c, b2)


def _finish(ops, ctx, tag, input_hex, work_hex, m, s, t, ph, x, quads, parts,
            energy, degree, affine, steps, C, notes) -> CaseCertificate:
    cert = CaseCertificate(
        tag, ctx.spec, input_hex, work_hex, m, s, t, ph, x, tuple(quads),
        tuple(parts), energy, degree, affine, tuple(steps), C,
        CLAIM_EXPONENTS.get(tag), tuple(notes))
    bad = [r for r in cert.steps if not r.holds]
    if bad or not cert.claim_holds():
        raise RuntimeError(
            "certificate assembly produced a violated inequality, which "
            f"contradicts a theorem; instance: field {ctx.spec} set "
            f"maskhex:{input_hex} steps {[r.label for r in bad]}")
    return cert


def run_main_theorem(A: ESet) -> CaseCertificate:
    """Run the full pipeline on A and emit a verified CaseCertificate.

    0 is stripped from A with a recorded note; empty and singleton working
    sets yield a Degenerate certificate rather than an error.
    """
    return _assemble(_FastOps(A.ctx), A.ctx, [int(i) for i in A.indices])


def verify_certificate(cert: CaseCertificate, A: ESet) -> bool:
    """Replay the pipeline through the brute-force route and compare every
    recorded quantity; True only on exact agreement with all steps holding.

    Raises ValueError when cert does not belong to (A, field).
    """
    if cert.field_spec != A.ctx.spec:
        raise ValueError(f"field mismatch: certificate for {cert.field_spec}, "
                         f"set lives in {A.ctx.spec}")
    if cert.input_mask_hex != A.mask_hex:
        raise ValueError("set mismatch: certificate was issued for a different set")
    try:
        replay = _assemble(_BruteOps(A.ctx), A.ctx, [int(i) for i in A.indices])
    except (ValueError, RuntimeError):
        return False
    if replay.key() != cert.key():
        return False
    if not all(r.holds for r in cert.steps):
        return False
    if cert.exponent_claim is not None:
        if cert.exponent_claim != CLAIM_EXPONENTS.get(cert.case_tag):
            return False
        if not cert.claim_holds():
            return False
    return True
