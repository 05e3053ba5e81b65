"""Independent brute-force oracle for the tests.

Deliberately reimplements field arithmetic and set operations from the raw
definitions (digit vectors, schoolbook polynomial reduction, scan-based
inversion, pairwise set comprehensions) so that package results are checked
against code that shares nothing with the package kernels.
"""

from __future__ import annotations


def digits(idx: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(idx % p)
        idx //= p
    return out


def index(ds, p: int) -> int:
    out = 0
    for d in reversed(ds):
        out = out * p + (d % p)
    return out


def add(params, a: int, b: int) -> int:
    p, k, _ = params
    return index([(x + y) % p for x, y in zip(digits(a, p, k), digits(b, p, k))], p)


def neg(params, a: int) -> int:
    p, k, _ = params
    return index([(-x) % p for x in digits(a, p, k)], p)


def sub(params, a: int, b: int) -> int:
    return add(params, a, neg(params, b))


def mul(params, a: int, b: int) -> int:
    p, k, modulus = params
    da, db = digits(a, p, k), digits(b, p, k)
    prod = [0] * (2 * k - 1) if k > 1 else [0]
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for i in range(k):
                prod[d - k + i] = (prod[d - k + i] - c * modulus[i]) % p
    return index(prod[:k], p)


def inv(params, a: int) -> int:
    """Inversion by exhaustive scan; independent of any smarter route."""
    p, k, _ = params
    q = p**k
    if a == 0:
        raise ZeroDivisionError
    for b in range(q):
        if mul(params, a, b) == 1:
            return b
    raise AssertionError("no inverse found; field arithmetic is broken")


def params_of(ctx) -> tuple[int, int, tuple[int, ...]]:
    return (ctx.p, ctx.k, ctx.modulus)


def sumset(params, A, B) -> set[int]:
    return {add(params, a, b) for a in A for b in B}


def diffset(params, A, B) -> set[int]:
    return {sub(params, a, b) for a in A for b in B}


def productset(params, A, B) -> set[int]:
    return {mul(params, a, b) for a in A for b in B}


def dilate(params, c, A) -> set[int]:
    if not A:
        return set()
    if c == 0:
        return {0}
    return {mul(params, c, a) for a in A}


def ratio_of_differences(params, A) -> set[int]:
    D = diffset(params, A, A)
    return {mul(params, n, inv(params, d)) for n in D for d in D if d != 0}


def collision_energy(params, A, x) -> int:
    return sum(1 for a1 in A for a2 in A for b1 in A for b2 in A
               if add(params, a1, mul(params, x, b2))
               == add(params, a2, mul(params, x, b1)))


def mult_energy(params, A) -> int:
    return sum(1 for a in A for b in A for c in A for d in A
               if mul(params, a, c) == mul(params, b, d))
