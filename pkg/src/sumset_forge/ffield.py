"""Deterministic models of the finite field GF(p^k) with dense element indexing.

An element a0 + a1*x + ... + a_{k-1}*x^{k-1} (mod a fixed monic irreducible
polynomial) is stored as the integer index a0 + a1*p + ... + a_{k-1}*p^{k-1}.
Addition is digitwise mod-p addition of base-p digits (XOR of indices when
p = 2); multiplication reduces modulo the defining polynomial, or goes through
discrete log/antilog tables when the field is small enough to afford them.

When no defining polynomial is supplied, the lexicographically least monic
irreducible polynomial (coefficients compared constant term first) is chosen,
so two runs anywhere construct the same model of GF(p^k).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

DEFAULT_TABLE_CAP = 1 << 20
TABLE_CAP_ENV = "SUMSET_FORGE_TABLE_CAP"
MAX_FIELD_SIZE = 1 << 28


class FieldError(ValueError):
    """Invalid field description: bad prime, degree, or defining polynomial."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


# ---------------------------------------------------------------------------
# polynomial arithmetic over Z_p (coefficient lists, constant term first)
# ---------------------------------------------------------------------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: list[int], b: list[int], modulus: tuple[int, ...], p: int) -> list[int]:
    """(a*b) mod modulus; inputs have degree < deg(modulus)."""
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    # monic modulus: subtract shifted multiples of it
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c == 0:
            continue
        prod[d] = 0
        for i in range(k):
            prod[d - k + i] = (prod[d - k + i] - c * modulus[i]) % p
    return _poly_trim(prod[:k] if len(prod) > k else prod)


def _poly_powmod(base: list[int], e: int, modulus: tuple[int, ...], p: int) -> list[int]:
    result = [1]
    acc = list(base)
    while e:
        if e & 1:
            result = _poly_mulmod(result, acc, modulus, p)
        acc = _poly_mulmod(acc, acc, modulus, p)
        e >>= 1
    return result


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = list(a), list(b)
    _poly_trim(a)
    _poly_trim(b)
    while b:
        # a mod b with b made monic on the fly
        lead_inv = pow(b[-1], p - 2, p)
        while len(a) >= len(b):
            c = (a[-1] * lead_inv) % p
            shift = len(a) - len(b)
            for i, bi in enumerate(b):
                a[shift + i] = (a[shift + i] - c * bi) % p
            _poly_trim(a)
            if not a:
                break
        a, b = b, a
    return a


def is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """Rabin test for a monic polynomial over Z_p (constant term first)."""
    k = len(coeffs) - 1
    if k < 1 or coeffs[-1] != 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    # x^(p^k) == x (mod f)
    xq = _poly_powmod(x, p**k, coeffs, p)
    if _poly_trim(list(xq)) != [0, 1]:
        return False
    for r in prime_factors(k):
        xe = _poly_powmod(x, p ** (k // r), coeffs, p)
        diff = list(xe) + [0] * (2 - len(xe))
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(diff, list(coeffs), p)
        if len(g) != 1:
            return False
    return True


def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over Z_p."""
    for low in range(p**k):
        coeffs = tuple((low // p**i) % p for i in range(k)) + (1,)
        if is_irreducible(coeffs, p):
            return coeffs
    raise FieldError(f"no irreducible polynomial of degree {k} over Z_{p}")  # unreachable


# ---------------------------------------------------------------------------
# field context
# ---------------------------------------------------------------------------

class FieldCtx:
    """Immutable description of GF(p^k); all element operations live here.

    Elements are integer indices in [0, q).  Safe to share across threads and
    processes: nothing is mutated after construction.
    """

    __slots__ = ("p", "k", "q", "modulus", "spec", "generator",
                 "log_table", "exp_table", "_pows")

    def __init__(self, p: int, k: int, modulus: tuple[int, ...],
                 generator: int | None, log_table, exp_table):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self.spec = f"{p}^{k}:" + ",".join(str(c) for c in modulus)
        self.generator = generator
        self.log_table = log_table
        self.exp_table = exp_table
        self._pows = [p**i for i in range(k + 1)]

    def __repr__(self):
        return f"FieldCtx({self.spec})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    @property
    def has_tables(self) -> bool:
        return self.log_table is not None

    # -- index <-> coefficient vector ------------------------------------

    def digits(self, idx: int) -> tuple[int, ...]:
        p = self.p
        return tuple((idx // self._pows[i]) % p for i in range(self.k))

    def from_digits(self, digits) -> int:
        return sum(int(d) % self.p * self._pows[i] for i, d in enumerate(digits))

    # -- additive structure (digitwise mod p; works on ints and arrays) --

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        out = 0
        for i in range(self.k):
            pi = self._pows[i]
            out = out + ((a // pi + b // pi) % p) * pi
        return out

    def neg(self, a):
        if self.p == 2:
            return a
        p = self.p
        out = 0
        for i in range(self.k):
            pi = self._pows[i]
            out = out + ((-(a // pi)) % p) * pi
        return out

    def sub(self, a, b):
        if self.p == 2:
            return a ^ b
        return self.add(a, self.neg(b))

    # -- multiplicative structure -----------------------------------------

    def mul_no_table(self, a: int, b: int) -> int:
        """Multiplication via polynomial reduction, never via tables."""
        if a == 0 or b == 0:
            return 0
        pa = [d for d in self.digits(a)]
        pb = [d for d in self.digits(b)]
        return self.from_digits_padded(_poly_mulmod(_poly_trim(pa), _poly_trim(pb),
                                                    self.modulus, self.p))

    def from_digits_padded(self, coeffs: list[int]) -> int:
        return sum(c * self._pows[i] for i, c in enumerate(coeffs))

    def pow_no_table(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        e %= self.q - 1
        if e == 0:
            return 1
        coeffs = _poly_powmod(_poly_trim(list(self.digits(a))), e, self.modulus, self.p)
        return self.from_digits_padded(coeffs)

    def inv_no_table(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of 0")
        return self.pow_no_table(a, self.q - 2)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.log_table is not None:
            return int(self.exp_table[(int(self.log_table[a]) + int(self.log_table[b]))
                                      % (self.q - 1)])
        return self.mul_no_table(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of 0")
        if self.log_table is not None:
            return int(self.exp_table[(-int(self.log_table[a])) % (self.q - 1)])
        return self.inv_no_table(a)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("inversion of 0")
            return 0
        if self.log_table is not None:
            return int(self.exp_table[(int(self.log_table[a]) * e) % (self.q - 1)])
        if e < 0:
            return self.pow_no_table(self.inv_no_table(a), -e)
        return self.pow_no_table(a, e)

    def frobenius(self, a: int, d: int = 1) -> int:
        """a^(p^d)."""
        return self.pow(a, self.p**d)

    # -- vector kernels (numpy int64 arrays of element indices) ----------

    def add_arr(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for i in range(self.k):
            pi = self._pows[i]
            out += ((a // pi + b // pi) % p) * pi
        return out

    def neg_arr(self, a):
        if self.p == 2:
            return np.asarray(a)
        p = self.p
        out = np.zeros(np.shape(a), dtype=np.int64)
        for i in range(self.k):
            pi = self._pows[i]
            out += ((-(a // pi)) % p) * pi
        return out

    def mul_arr(self, a, b):
        """Elementwise product of broadcastable index arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.log_table is not None:
            za = a == 0
            zb = b == 0
            la = self.log_table[np.where(za, 1, a)]
            lb = self.log_table[np.where(zb, 1, b)]
            out = self.exp_table[(la + lb) % (self.q - 1)]
            return np.where(za | zb, 0, out)
        shape = np.broadcast(a, b).shape
        aa, bb = np.broadcast_arrays(a, b)
        flat = [self.mul_no_table(int(x), int(y))
                for x, y in zip(aa.ravel(), bb.ravel())]
        return np.array(flat, dtype=np.int64).reshape(shape)

    def inv_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inversion of 0")
        if self.log_table is not None:
            return self.exp_table[(-self.log_table[a]) % (self.q - 1)]
        return np.array([self.inv_no_table(int(x)) for x in a.ravel()],
                        dtype=np.int64).reshape(a.shape)

    def pow_arr(self, a, e: int):
        """Elementwise a^e for e >= 0 (0^0 = 1)."""
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        if self.log_table is not None:
            z = a == 0
            la = self.log_table[np.where(z, 1, a)]
            out = self.exp_table[(la * (e % (self.q - 1))) % (self.q - 1)]
            return np.where(z, 0, out)
        return np.array([self.pow_no_table(int(x), e) for x in a.ravel()],
                        dtype=np.int64).reshape(a.shape)


def _build_tables(p: int, k: int, modulus: tuple[int, ...]):
    """Find the least-index generator and fill exp/log tables."""
    q = p**k

    def mul_idx(a, b):
        pows = [p**i for i in range(k)]
        da = _poly_trim([(a // pi) % p for pi in pows])
        db = _poly_trim([(b // pi) % p for pi in pows])
        c = _poly_mulmod(da, db, modulus, p)
        return sum(ci * p**i for i, ci in enumerate(c))

    def pow_idx(a, e):
        r = 1
        while e:
            if e & 1:
                r = mul_idx(r, a)
            a = mul_idx(a, a)
            e >>= 1
        return r

    factors = prime_factors(q - 1)
    generator = None
    for g in range(2, q):
        if all(pow_idx(g, (q - 1) // r) != 1 for r in factors):
            generator = g
            break
    if generator is None:  # q == 2: trivial group
        generator = 1

    # permutation idx -> g*idx, built digit-plane by digit-plane
    basis_img = [mul_idx(generator, p**j) for j in range(k)]
    perm = np.zeros(q, dtype=np.int64)
    pows_np = [p**i for i in range(k)]

    def vec_add_scalar(vec, s):
        if p == 2:
            return np.bitwise_xor(vec, s)
        out = np.zeros_like(vec)
        for i in range(k):
            pi = pows_np[i]
            out += ((vec // pi + (s // pi) % p) % p) * pi
        return out

    for j in range(k):
        block = perm[: p**j].copy()
        for d in range(1, p):
            img = sum((d * ((basis_img[j] // p**i) % p)) % p * p**i for i in range(k))
            perm[d * p**j: (d + 1) * p**j] = vec_add_scalar(block, img)

    perm_list = perm.tolist()
    exp = [0] * (q - 1)
    cur = 1
    for j in range(q - 1):
        exp[j] = cur
        cur = perm_list[cur]
    log = np.full(q, -1, dtype=np.int64)
    exp_arr = np.array(exp, dtype=np.int64)
    log[exp_arr] = np.arange(q - 1, dtype=np.int64)
    exp_arr.setflags(write=False)
    log.setflags(write=False)
    return generator, log, exp_arr


def make_field(p: int, k: int, modulus=None, table_cap: int | None = None) -> FieldCtx:
    """Construct GF(p^k) with a verified-irreducible defining polynomial.

    With modulus omitted, picks the lexicographically least monic irreducible
    polynomial of degree k (constant term compared first), a reproducible
    choice.  Log/antilog tables are built when q <= table_cap (default 2^20,
    overridable via the SUMSET_FORGE_TABLE_CAP environment variable).
    """
    if not is_prime(p):
        raise FieldError(f"p = {p} is not prime")
    if k < 1:
        raise FieldError(f"degree k = {k} must be >= 1")
    q = p**k
    if q > MAX_FIELD_SIZE:
        raise FieldError(f"q = {q} exceeds the dense-indexing limit 2^28")
    if modulus is None:
        modulus = least_irreducible(p, k)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree k")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {list(modulus)} is reducible over Z_{p}")
    if table_cap is None:
        table_cap = int(os.environ.get(TABLE_CAP_ENV, DEFAULT_TABLE_CAP))
    if q <= table_cap:
        generator, log_table, exp_table = _build_tables(p, k, modulus)
    else:
        generator, log_table, exp_table = None, None, None
    return FieldCtx(p, k, modulus, generator, log_table, exp_table)


def arith(ctx: FieldCtx, op: str, *operands: int) -> int:
    """Scalar field arithmetic dispatch: add, sub, mul, inv, pow."""
    if op == "add":
        return ctx.add(operands[0], operands[1])
    if op == "sub":
        return ctx.sub(operands[0], operands[1])
    if op == "mul":
        return ctx.mul(operands[0], operands[1])
    if op == "inv":
        return ctx.inv(operands[0])
    if op == "pow":
        return ctx.pow(operands[0], operands[1])
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# subfields and affine images
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubfieldDesc:
    """One subfield of GF(p^k): the fixed points of the d-fold Frobenius."""
    d: int
    elems: "ESet"  # noqa: F821 - setalg imports ffield, annotation only

    @property
    def size(self) -> int:
        return self.elems.card


def subfields(ctx: FieldCtx) -> list[SubfieldDesc]:
    """All subfields, one per divisor d of k, ascending by d (d = k included)."""
    from .setalg import ESet

    idx = np.arange(ctx.q, dtype=np.int64)
    out = []
    for d in divisors(ctx.k):
        image = ctx.pow_arr(idx, ctx.p**d)
        fixed = idx[image == idx]
        out.append(SubfieldDesc(d, ESet.from_indices(ctx, fixed)))
    return out


def affine_images(ctx: FieldCtx, G: SubfieldDesc) -> list[tuple[int, int]]:
    """Representatives (c, d) of the distinct affine images cG + d, c != 0.

    Greedy least-index choice for both c and d, so representatives are
    canonical for the model: each image is listed once and there are
    ((q-1)/(|G|-1)) * (q/|G|) of them.
    """
    q = ctx.q
    g_nonzero = G.elems.indices[G.elems.indices != 0]
    c_reps = []
    seen_mult = np.zeros(q, dtype=bool)
    for c in range(1, q):
        if seen_mult[c]:
            continue
        c_reps.append(c)
        seen_mult[ctx.mul_arr(np.int64(c), g_nonzero)] = True
    out = []
    for c in c_reps:
        cg = ctx.mul_arr(np.int64(c), G.elems.indices)
        seen_add = np.zeros(q, dtype=bool)
        for d in range(q):
            if seen_add[d]:
                continue
            out.append((c, d))
            seen_add[ctx.add_arr(cg, np.int64(d))] = True
    return out


# ---------------------------------------------------------------------------
# parsing / rendering
# ---------------------------------------------------------------------------

def parse_field_spec(text: str) -> tuple[int, int, tuple[int, ...] | None]:
    """Parse "p^k" or "p^k:c0,c1,...,ck" (bare "p" means k = 1)."""
    text = text.strip()
    modulus = None
    if ":" in text:
        head, _, tail = text.partition(":")
        try:
            modulus = tuple(int(c) for c in tail.split(","))
        except ValueError:
            raise FieldError(f"bad modulus coefficients in {text!r}") from None
    else:
        head = text
    if "^" in head:
        ps, _, ks = head.partition("^")
    else:
        ps, ks = head, "1"
    try:
        p, k = int(ps), int(ks)
    except ValueError:
        raise FieldError(f"bad field spec {text!r}") from None
    return p, k, modulus


def field_from_spec(text: str, table_cap: int | None = None) -> FieldCtx:
    p, k, modulus = parse_field_spec(text)
    return make_field(p, k, modulus, table_cap=table_cap)


def render_element(ctx: FieldCtx, idx: int, poly: bool = False) -> str:
    """Decimal index, or the polynomial string "c0+c1*x+..." when poly=True."""
    if not poly:
        return str(idx)
    if idx == 0:
        return "0"
    terms = []
    for i, c in enumerate(ctx.digits(idx)):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            xs = "x" if i == 1 else f"x^{i}"
            terms.append(xs if c == 1 else f"{c}*{xs}")
    return "+".join(terms)


def parse_element(ctx: FieldCtx, text: str) -> int:
    """Accept a decimal index or a polynomial string "c0+c1*x+c2*x^2"."""
    text = text.strip()
    if text.isdigit():
        idx = int(text)
        if idx >= ctx.q:
            raise FieldError(f"element index {idx} out of range for q={ctx.q}")
        return idx
    coeffs = [0] * ctx.k
    for term in text.replace(" ", "").split("+"):
        if not term:
            raise FieldError(f"bad element {text!r}")
        if "x" not in term:
            coeffs[0] = (coeffs[0] + int(term)) % ctx.p
            continue
        cs, _, xs = term.partition("x")
        c = int(cs.rstrip("*")) if cs.rstrip("*") else 1
        e = int(xs[1:]) if xs.startswith("^") else 1
        if e >= ctx.k:
            raise FieldError(f"exponent {e} out of range in {text!r}")
        coeffs[e] = (coeffs[e] + c) % ctx.p
    return ctx.from_digits(coeffs)
