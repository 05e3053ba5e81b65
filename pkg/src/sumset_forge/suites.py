"""Seeded randomized verification suites.

Each suite draws deterministic pseudo-random instances (the generator is
seeded per trial from seed, suite name, field spec, and trial index, so runs
are reproducible and embarrassingly parallel) and emits one IneqReport line
per checked inequality.  holds=False anywhere means an implementation bug:
each such line comes with a replayable instance description.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .ffield import FieldCtx, field_from_spec, subfields
from .garaev import pigeonhole, run_main_theorem, verify_certificate
from .lemmas import (IneqReport, VacuousBound, check_cor_dilates,
                     check_cor_products, check_plunneke_corollary,
                     check_ruzsa_triangle, lemma13_affine_witness,
                     plunneke_witness_small)
from .setalg import (ESet, collision_energy, dilate, dilate_intersection_count,
                     mult_energy, productset, ratio_of_differences, sumset,
                     translate)

SUITES = ("ruzsa", "plunneke-cor", "cor-dilates", "cor-products",
          "plunneke-witness", "ratio-free", "energy", "collision",
          "pigeonhole", "lemma13", "certificates")


def _rng(seed: int, suite: str, spec: str, i: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{spec}:{i}")


def _sample_set(rng: random.Random, ctx: FieldCtx, lo: int, hi: int,
                exclude_zero: bool = False) -> ESet:
    pool = range(1, ctx.q) if exclude_zero else range(ctx.q)
    size = rng.randint(lo, min(hi, len(pool)))
    return ESet.from_indices(ctx, rng.sample(pool, size))


def _nonzero(rng: random.Random, ctx: FieldCtx) -> int:
    return rng.randrange(1, ctx.q)


def _trial(suite: str, ctx: FieldCtx, rng: random.Random) -> tuple[list[IneqReport], str]:
    """(reports, replay description) for one trial."""
    if suite == "ruzsa":
        X = _sample_set(rng, ctx, 1, 10)
        Y = _sample_set(rng, ctx, 1, 10)
        Z = _sample_set(rng, ctx, 1, 10)
        return ([check_ruzsa_triangle(X, Y, Z)],
                f"X={X.render()} Y={Y.render()} Z={Z.render()}")

    if suite == "plunneke-cor":
        k = rng.randint(1, 4)
        X = _sample_set(rng, ctx, 1, 8)
        Bs = [_sample_set(rng, ctx, 1, 8) for _ in range(k)]
        return ([check_plunneke_corollary(X, Bs)],
                f"X={X.render()} Bs={[B.render() for B in Bs]}")

    if suite == "cor-dilates":
        A = _sample_set(rng, ctx, 1, 10)
        a, b = _nonzero(rng, ctx), _nonzero(rng, ctx)
        desc = f"A={A.render()} a={a} b={b}"
        try:
            r1, r2 = check_cor_dilates(A, a, b)
            return [r1, r2], desc
        except VacuousBound:
            return [IneqReport("dilate-pair-vacuous", 0, Fraction(0))], desc

    if suite == "cor-products":
        A = _sample_set(rng, ctx, 1, 10)
        a1, a2, b = (_nonzero(rng, ctx) for _ in range(3))
        desc = f"A={A.render()} a1={a1} a2={a2} b={b}"
        try:
            r1, r2 = check_cor_products(A, a1, a2, b)
            return [r1, r2], desc
        except VacuousBound:
            return [IneqReport("dilate-product-vacuous", 0, Fraction(0))], desc

    if suite == "plunneke-witness":
        k = rng.randint(1, 3)
        X = _sample_set(rng, ctx, 1, 6)
        Bs = [_sample_set(rng, ctx, 1, 5) for _ in range(k)]
        alpha = Fraction(1)
        total = Bs[0]
        for B in Bs[1:]:
            total = sumset(total, B)
        for B in Bs:
            alpha *= Fraction(sumset(X, B).card, X.card)
        X1 = plunneke_witness_small(X, Bs)
        return ([IneqReport("growth-witness", sumset(X1, total).card,
                            alpha * X1.card)],
                f"X={X.render()} Bs={[B.render() for B in Bs]} X1={X1.render()}")

    if suite == "ratio-free":
        A = _sample_set(rng, ctx, 2, 10)
        R = ratio_of_differences(A)
        target = A.card ** 2
        exceptions = sum(
            1 for x in range(ctx.q)
            if x not in R and sumset(A, dilate(x, A)).card != target)
        return ([IneqReport("ratio-free-exceptions", exceptions, Fraction(0))],
                f"A={A.render()}")

    if suite == "energy":
        A = _sample_set(rng, ctx, 1, 10, exclude_zero=True)
        direct = sum(dilate_intersection_count(a, b, A) for a in A for b in A)
        e = mult_energy(A)
        return ([IneqReport("product-energy-identity-gap", abs(e - direct),
                            Fraction(0)),
                 IneqReport("product-energy-lower", A.card ** 4,
                            Fraction(e * productset(A, A).card))],
                f"A={A.render()}")

    if suite == "collision":
        A = _sample_set(rng, ctx, 1, 6)
        xs = {rng.randrange(ctx.q) for _ in range(3)}
        ctxadd, ctxmul = ctx.add, ctx.mul
        gaps = 0
        for x in xs:
            direct = sum(
                1 for a1 in A for a2 in A for b1 in A for b2 in A
                if ctxadd(a1, ctxmul(x, b2)) == ctxadd(a2, ctxmul(x, b1)))
            if direct != collision_energy(A, x):
                gaps += 1
        return ([IneqReport("collision-enumeration-gap", gaps, Fraction(0))],
                f"A={A.render()} xs={sorted(xs)}")

    if suite == "pigeonhole":
        A = _sample_set(rng, ctx, 2, 14, exclude_zero=True)
        out = pigeonhole(A)
        t = productset(A, A).card
        m = A.card
        off_class = sum(1 for a in out.A1
                        if not out.N <= out.counts[a] < 2 * out.N)
        return ([IneqReport("dyadic-class-membership", off_class, Fraction(0)),
                 IneqReport("dyadic-count-lower", m**2,
                            Fraction(2 * out.L * t * out.N)),
                 IneqReport("dyadic-mass-lower", m**3,
                            Fraction(2 * out.L * t * out.A1.card * out.N))],
                f"A={A.render()}")

    if suite == "lemma13":
        G = rng.choice(subfields(ctx))
        c = _nonzero(rng, ctx)
        d = rng.randrange(ctx.q)
        coset = sorted(translate(dilate(c, G.elems), d))
        size = rng.randint(2, min(8, len(coset)))
        A = ESet.from_indices(ctx, rng.sample(coset, size))
        w = lemma13_affine_witness(A, G)
        reports = [IneqReport("affine-witness", 0 if w.contained else 1,
                              Fraction(0))]
        outside = [e for e in range(ctx.q) if e not in set(coset)]
        if outside and A.card >= 3:
            planted = sorted(A)[:-1] + [rng.choice(outside)]
            w2 = lemma13_affine_witness(ESet.from_indices(ctx, planted), G)
            reports.append(IneqReport("affine-witness-plant-detected",
                                      0 if not w2.contained else 1, Fraction(0)))
        return reports, f"G=d{G.d} c={c} d={d} A={A.render()}"

    if suite == "certificates":
        A = _sample_set(rng, ctx, 2, 12)
        cert = run_main_theorem(A)
        ok = verify_certificate(cert, A)
        reports = [IneqReport("certificate-replay", 0 if ok else 1, Fraction(0))]
        if cert.exponent_claim is not None:
            w1, w2, e = cert.exponent_claim
            reports.append(IneqReport(
                "certificate-claim", cert.m ** e,
                cert.s ** w1 * cert.t ** w2 * cert.tracked_constant))
        return reports, f"A={A.render()} case={cert.case_tag}"

    raise ValueError(f"unknown suite {suite!r}")


def _suite_block(spec: str, suite: str, seed: int, lo: int, hi: int,
                 table_cap: int | None) -> tuple[list[str], list[str]]:
    """(tsv lines, violation descriptions) for trials [lo, hi)."""
    ctx = field_from_spec(spec, table_cap=table_cap)
    lines: list[str] = []
    violations: list[str] = []
    for i in range(lo, hi):
        reports, desc = _trial(suite, ctx, _rng(seed, suite, spec, i))
        for rep in reports:
            lines.append(rep.to_tsv())
            if not rep.holds:
                violations.append(
                    f"suite={suite} field={spec} trial={i} seed={seed} "
                    f"label={rep.label} instance: {desc}")
    return lines, violations


def _suite_block_star(args):
    return _suite_block(*args)


def run_suite(ctx: FieldCtx, suite: str, trials: int, seed: int,
              jobs: int = 1) -> tuple[list[str], list[str]]:
    """Run one suite; returns (tsv lines, violation descriptions) in a
    deterministic order independent of jobs."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; pick from {', '.join(SUITES)}")
    if trials <= 0:
        return [], []
    if jobs > 1 and trials > 1:
        nblocks = min(jobs * 4, trials)
        bounds = [trials * i // nblocks for i in range(nblocks + 1)]
        args = [(ctx.spec, suite, seed, bounds[i], bounds[i + 1], None)
                for i in range(nblocks)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_suite_block_star, args))
        lines = [ln for pair in results for ln in pair[0]]
        violations = [v for pair in results for v in pair[1]]
        return lines, violations
    return _suite_block(ctx.spec, suite, seed, 0, trials, None)
