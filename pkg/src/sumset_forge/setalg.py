"""Bitmask set algebra over a FieldCtx: sumsets, product sets, dilates,
difference-ratio sets, and the exact counting quantities (collision and
multiplicative energy) that the growth arguments consume.

An ESet is an immutable subset of the field, held as a sorted index array with
a lazily materialized q-bit membership mask.  All operations are pure and
exact; nothing is sampled or approximated.
"""

from __future__ import annotations

import numpy as np

from .ffield import FieldCtx


class ESet:
    """Immutable subset of GF(q) elements, indexed densely."""

    __slots__ = ("ctx", "indices", "card", "_mask", "_members")

    def __init__(self, ctx: FieldCtx, indices: np.ndarray):
        self.ctx = ctx
        self.indices = indices  # sorted unique int64, read-only
        self.card = int(indices.size)
        self._mask = None
        self._members = None

    @classmethod
    def from_indices(cls, ctx: FieldCtx, indices) -> "ESet":
        arr = np.unique(np.asarray(list(indices) if not isinstance(indices, np.ndarray)
                                   else indices, dtype=np.int64))
        if arr.size and (arr[0] < 0 or arr[-1] >= ctx.q):
            raise ValueError(f"element index out of range [0, {ctx.q})")
        arr.setflags(write=False)
        return cls(ctx, arr)

    @classmethod
    def from_mask(cls, ctx: FieldCtx, mask: int) -> "ESet":
        if mask < 0 or mask >> ctx.q:
            raise ValueError("mask has bits beyond q")
        nbytes = (ctx.q + 7) // 8
        raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[: ctx.q]
        arr = np.flatnonzero(bits).astype(np.int64)
        arr.setflags(write=False)
        obj = cls(ctx, arr)
        obj._mask = mask
        return obj

    @classmethod
    def full(cls, ctx: FieldCtx) -> "ESet":
        return cls.from_indices(ctx, np.arange(ctx.q, dtype=np.int64))

    @property
    def mask(self) -> int:
        if self._mask is None:
            bits = np.zeros(self.ctx.q, dtype=np.uint8)
            bits[self.indices] = 1
            self._mask = int.from_bytes(
                np.packbits(bits, bitorder="little").tobytes(), "little")
        return self._mask

    @property
    def mask_hex(self) -> str:
        width = 2 * ((self.ctx.q + 7) // 8)
        return format(self.mask, f"0{width}x")

    @classmethod
    def from_mask_hex(cls, ctx: FieldCtx, hexstr: str) -> "ESet":
        return cls.from_mask(ctx, int(hexstr, 16))

    def members(self) -> frozenset:
        if self._members is None:
            self._members = frozenset(int(i) for i in self.indices)
        return self._members

    def __contains__(self, idx: int) -> bool:
        return int(idx) in self.members()

    def __iter__(self):
        return (int(i) for i in self.indices)

    def __len__(self):
        return self.card

    def __eq__(self, other):
        return (isinstance(other, ESet) and self.ctx.spec == other.ctx.spec
                and self.card == other.card
                and bool(np.array_equal(self.indices, other.indices)))

    def __hash__(self):
        return hash((self.ctx.spec, self.indices.tobytes()))

    def __repr__(self):
        return f"ESet({self.ctx.spec}, {self.render()})"

    def render(self) -> str:
        return "{" + ",".join(str(i) for i in self.indices) + "}"

    def issubset(self, other: "ESet") -> bool:
        _check_ctx(self, other)
        return self.members() <= other.members()

    def intersection(self, other: "ESet") -> "ESet":
        _check_ctx(self, other)
        return ESet.from_indices(
            self.ctx, np.intersect1d(self.indices, other.indices, assume_unique=True))

    def union(self, other: "ESet") -> "ESet":
        _check_ctx(self, other)
        return ESet.from_indices(self.ctx,
                                 np.union1d(self.indices, other.indices))

    def difference(self, other: "ESet") -> "ESet":
        _check_ctx(self, other)
        return ESet.from_indices(
            self.ctx, np.setdiff1d(self.indices, other.indices, assume_unique=True))

    def without_zero(self) -> "ESet":
        return ESet.from_indices(self.ctx, self.indices[self.indices != 0])


def _check_ctx(a: ESet, b: ESet) -> None:
    if a.ctx.spec != b.ctx.spec:
        raise ValueError(f"mismatched field contexts: {a.ctx.spec} vs {b.ctx.spec}")


def parse_eset(ctx: FieldCtx, text: str) -> ESet:
    """Parse "{e1,e2,...}" (elements as indices or polynomial strings) or
    "maskhex:<hex>"."""
    from .ffield import parse_element

    text = text.strip()
    if text.startswith("maskhex:"):
        return ESet.from_mask_hex(ctx, text[len("maskhex:"):])
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"bad set literal {text!r}")
    body = text[1:-1].strip()
    if not body:
        return ESet.from_indices(ctx, [])
    return ESet.from_indices(ctx, [parse_element(ctx, tok) for tok in body.split(",")])


# ---------------------------------------------------------------------------
# pairwise set operators
# ---------------------------------------------------------------------------

def sumset(A: ESet, B: ESet) -> ESet:
    _check_ctx(A, B)
    if A.card == 0 or B.card == 0:
        return ESet.from_indices(A.ctx, [])
    out = A.ctx.add_arr(A.indices[:, None], B.indices[None, :])
    return ESet.from_indices(A.ctx, out.ravel())


def diffset(A: ESet, B: ESet) -> ESet:
    _check_ctx(A, B)
    if A.card == 0 or B.card == 0:
        return ESet.from_indices(A.ctx, [])
    out = A.ctx.add_arr(A.indices[:, None], A.ctx.neg_arr(B.indices)[None, :])
    return ESet.from_indices(A.ctx, out.ravel())


def productset(A: ESet, B: ESet) -> ESet:
    _check_ctx(A, B)
    if A.card == 0 or B.card == 0:
        return ESet.from_indices(A.ctx, [])
    out = A.ctx.mul_arr(A.indices[:, None], B.indices[None, :])
    return ESet.from_indices(A.ctx, out.ravel())


def quotientset(A: ESet, B: ESet) -> ESet:
    """{a/b : a in A, b in B, b != 0}; zero divisors are dropped."""
    _check_ctx(A, B)
    if A.card == 0 or B.card == 0:
        return ESet.from_indices(A.ctx, [])
    bnz = B.indices[B.indices != 0]
    if bnz.size == 0:
        raise ValueError("quotient by all-zero divisor set")
    out = A.ctx.mul_arr(A.indices[:, None], A.ctx.inv_arr(bnz)[None, :])
    return ESet.from_indices(A.ctx, out.ravel())


def dilate(c: int, A: ESet) -> ESet:
    """{c*a : a in A}; dilate(0, A) = {0} for nonempty A."""
    if A.card == 0:
        return A
    if c == 0:
        return ESet.from_indices(A.ctx, [0])
    return ESet.from_indices(A.ctx, A.ctx.mul_arr(np.int64(c), A.indices))


def translate(A: ESet, d: int) -> ESet:
    """{a + d : a in A}."""
    if A.card == 0 or d == 0:
        return A
    return ESet.from_indices(A.ctx, A.ctx.add_arr(A.indices, np.int64(d)))


def ratio_of_differences(A: ESet) -> ESet:
    """All quotients of differences of A over nonzero differences.

    Always contains 0 and 1 for |A| >= 2.
    """
    if A.card < 2:
        raise ValueError("ratio set needs |A| >= 2 for a nonzero denominator")
    D = diffset(A, A)
    return quotientset(D, D)


# ---------------------------------------------------------------------------
# counting quantities
# ---------------------------------------------------------------------------

def dilate_intersection_count(a: int, b: int, A: ESet) -> int:
    """|aA ∩ bA| for nonzero dilators a, b."""
    if a == 0 or b == 0:
        raise ValueError("zero dilator")
    da = A.ctx.mul_arr(np.int64(a), A.indices)
    db = A.ctx.mul_arr(np.int64(b), A.indices)
    return int(np.intersect1d(da, db, assume_unique=True).size)


def _diff_counts(A: ESet) -> np.ndarray:
    """r(u) = #{(a1, a2) in A^2 : a1 - a2 = u} as a length-q array."""
    diffs = A.ctx.add_arr(A.indices[:, None], A.ctx.neg_arr(A.indices)[None, :])
    return np.bincount(diffs.ravel(), minlength=A.ctx.q)


def collision_energy(A: ESet, x: int) -> int:
    """Number of quadruples (a1, a2, b1, b2) in A^4 with a1 + x*b2 = a2 + x*b1.

    Exactly sum_u r(u) * r(u/x) where r counts ordered difference
    representations; |A + xA| >= |A|^4 / energy by Cauchy-Schwarz.
    """
    n = A.card
    if n == 0:
        return 0
    if x == 0:
        return n**3
    r = _diff_counts(A)
    # sum_u r(u) r(u/x) = sum_v r(x*v) r(v)
    support = np.flatnonzero(r)
    ctx = A.ctx
    xv = ctx.mul_arr(np.int64(x), support)
    return sum(int(r[int(v)]) * int(r[int(u)]) for v, u in zip(support, xv))


def mult_energy(A: ESet) -> int:
    """sum_{a,b in A} |aA ∩ bA| = sum_z r_AA(z)^2, for A avoiding 0."""
    if 0 in A:
        raise ValueError("multiplicative energy requires 0 not in A")
    if A.card == 0:
        return 0
    prods = A.ctx.mul_arr(A.indices[:, None], A.indices[None, :])
    r = np.bincount(prods.ravel(), minlength=A.ctx.q)
    return sum(int(v) * int(v) for v in r[r > 0])
