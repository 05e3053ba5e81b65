"""Exhaustive and randomized exploration of small fields for sets minimizing
max(|A+A|, |AA|) relative to |A|^(49/48), with a resumable TSV store.

Exhaustive enumeration walks m-subsets in colex order (cheap rank/unrank, so
shard ranges and resume cursors are just rank intervals).  Scores are kept as
the exact integer pair (max(s,t)^48, m^49); no floats anywhere near the
ordering.
"""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .ffield import FieldCtx, field_from_spec
from .garaev import run_main_theorem, check_hypothesis
from .setalg import ESet, productset, sumset

STORE_MAGIC = "#sumset-forge v1"
DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(ValueError):
    """Exhaustive enumeration would exceed the configured subset budget."""


class StoreError(ValueError):
    """Malformed or mismatched search store file."""


@dataclass(frozen=True)
class SearchRecord:
    field_spec: str
    mask_hex: str
    m: int
    s: int
    t: int
    hypothesis_ok: bool | None
    case_tag: str | None

    @property
    def max_st(self) -> int:
        return max(self.s, self.t)

    @property
    def score_num(self) -> int:
        """max(s,t)^48, compared against score_den = m^49 exactly."""
        return self.max_st ** 48

    @property
    def score_den(self) -> int:
        return self.m ** 49

    def to_tsv(self) -> str:
        hyp = "-" if self.hypothesis_ok is None else str(int(self.hypothesis_ok))
        tag = self.case_tag if self.case_tag is not None else "-"
        return (f"{self.field_spec}\t{self.mask_hex}\t{self.m}\t{self.s}"
                f"\t{self.t}\t{hyp}\t{tag}")

    @classmethod
    def from_tsv(cls, line: str) -> "SearchRecord":
        parts = line.split("\t")
        if len(parts) != 7:
            raise ValueError(f"expected 7 columns, got {len(parts)}")
        spec, mask_hex, m, s, t, hyp, tag = parts
        return cls(spec, mask_hex, int(m), int(s), int(t),
                   None if hyp == "-" else bool(int(hyp)),
                   None if tag == "-" else tag)


@dataclass(frozen=True)
class SearchConfig:
    mode: str                       # "exhaustive" | "random"
    m: int
    sample_count: int = 0
    seed: int = 0
    exclude_zero: bool = True
    hypothesis_filter: bool = False  # drop records violating the hypothesis
    classify: bool = True            # populate case_tag / hypothesis_ok


# ---------------------------------------------------------------------------
# colex subset ranking
# ---------------------------------------------------------------------------

def colex_rank(positions) -> int:
    """Rank of an ascending position tuple in colex order."""
    return sum(math.comb(c, i + 1) for i, c in enumerate(positions))

def colex_unrank(r: int, n: int, m: int) -> list[int]:
    """Ascending m-subset of {0..n-1} with colex rank r."""
    out = [0] * m
    k = m
    while k > 0:
        lo = k - 1
        while lo < n:
            mid = (lo + n + 1) // 2
            if r < math.comb(mid, k):
                n = mid - 1
            else:
                lo = mid
        r -= math.comb(n, k)
        k -= 1
        out[k] = n
    return out


def _ground(ctx: FieldCtx, exclude_zero: bool) -> list[int]:
    return list(range(1, ctx.q)) if exclude_zero else list(range(ctx.q))


def _populate(ctx: FieldCtx, indices, classify: bool) -> SearchRecord:
    A = ESet.from_indices(ctx, indices)
    s = sumset(A, A).card
    t = productset(A, A).card
    hyp = tag = None
    if classify:
        hyp = not check_hypothesis(A)
        tag = run_main_theorem(A).case_tag
    return SearchRecord(ctx.spec, A.mask_hex, A.card, s, t, hyp, tag)


# ---------------------------------------------------------------------------
# exhaustive minimum
# ---------------------------------------------------------------------------

def _exhaustive_block(spec: str, m: int, exclude_zero: bool,
                      lo: int, hi: int) -> tuple[int | None, list[tuple[int, ...]]]:
    """Scan colex ranks [lo, hi): (local min of max(s,t), achieving subsets)."""
    ctx = field_from_spec(spec)
    ground = _ground(ctx, exclude_zero)
    n = len(ground)
    best = None
    achievers: list[tuple[int, ...]] = []
    for rank in range(lo, hi):
        positions = colex_unrank(rank, n, m)
        indices = tuple(ground[i] for i in positions)
        A = ESet.from_indices(ctx, indices)
        v = max(sumset(A, A).card, productset(A, A).card)
        if best is None or v < best:
            best, achievers = v, [indices]
        elif v == best:
            achievers.append(indices)
    return best, achievers


def exhaustive_min(ctx: FieldCtx, m: int, exclude_zero: bool = True,
                   budget: int = DEFAULT_BUDGET, jobs: int = 1,
                   rank_range: tuple[int, int] | None = None) -> list[SearchRecord]:
    """All fully populated records achieving min max(|A+A|, |AA|) over the
    m-subsets of F (or F minus 0), scanned in colex order.

    rank_range restricts the scan to a shard [lo, hi) of colex ranks; the
    budget always applies to the full enumeration size.
    """
    ground = _ground(ctx, exclude_zero)
    n = len(ground)
    if not 1 <= m <= n:
        raise ValueError(f"m = {m} out of range for ground set of size {n}")
    total = math.comb(n, m)
    if total > budget:
        raise BudgetExceeded(f"C({n},{m}) = {total} exceeds budget {budget}")
    lo, hi = rank_range if rank_range is not None else (0, total)
    if not 0 <= lo <= hi <= total:
        raise ValueError(f"bad rank range [{lo}, {hi}) for {total} subsets")

    if jobs > 1 and hi - lo > 1:
        span = hi - lo
        nblocks = min(jobs * 4, span)
        bounds = [lo + span * i // nblocks for i in range(nblocks + 1)]
        args = [(ctx.spec, m, exclude_zero, bounds[i], bounds[i + 1])
                for i in range(nblocks)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_exhaustive_block_star, args))
    else:
        results = [_exhaustive_block(ctx.spec, m, exclude_zero, lo, hi)]

    best = min((r[0] for r in results if r[0] is not None), default=None)
    if best is None:
        return []
    achievers = [idx for local, idxs in results if local == best for idx in idxs]
    return [_populate(ctx, indices, classify=True) for indices in achievers]


def _exhaustive_block_star(args):
    return _exhaustive_block(*args)


# ---------------------------------------------------------------------------
# random scan
# ---------------------------------------------------------------------------

def _random_block(spec: str, cfg: SearchConfig, lo: int, hi: int) -> list[SearchRecord]:
    ctx = field_from_spec(spec)
    ground = _ground(ctx, cfg.exclude_zero)
    out = []
    for i in range(lo, hi):
        rng = random.Random(f"{cfg.seed}:{spec}:{cfg.m}:{i}")
        indices = sorted(rng.sample(ground, cfg.m))
        rec = _populate(ctx, indices, cfg.classify or cfg.hypothesis_filter)
        if cfg.hypothesis_filter and rec.hypothesis_ok is False:
            continue
        out.append(rec)
    return out


def _random_block_star(args):
    return _random_block(*args)


def random_scan(ctx: FieldCtx, config: SearchConfig, jobs: int = 1) -> list[SearchRecord]:
    """sample_count seeded uniform m-subsets; same seed and config always
    produce the same records, whatever the parallelism."""
    if config.mode != "random":
        raise ValueError(f"config.mode is {config.mode!r}, expected 'random'")
    ground = _ground(ctx, config.exclude_zero)
    if not 1 <= config.m <= len(ground):
        raise ValueError(f"m = {config.m} out of range for ground set of "
                         f"size {len(ground)}")
    count = config.sample_count
    if count == 0:
        return []
    if jobs > 1 and count > 1:
        nblocks = min(jobs * 4, count)
        bounds = [count * i // nblocks for i in range(nblocks + 1)]
        args = [(ctx.spec, config, bounds[i], bounds[i + 1]) for i in range(nblocks)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(_random_block_star, args))
        return [rec for block in blocks for rec in block]
    return _random_block(ctx.spec, config, 0, count)


# ---------------------------------------------------------------------------
# store I/O
# ---------------------------------------------------------------------------

def _footer_line(records: list[SearchRecord]) -> str | None:
    if not records:
        return None
    best = min(r.max_st for r in records)
    mask = min(r.mask_hex for r in records if r.max_st == best)
    return f"#min {best} {mask}"


def write_store(path: str, field_spec: str, records: list[SearchRecord]) -> None:
    lines = [f"{STORE_MAGIC} {field_spec}"]
    lines += [r.to_tsv() for r in records]
    footer = _footer_line(records)
    if footer:
        lines.append(footer)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_store(path: str) -> tuple[str, list[SearchRecord]]:
    """(field_spec, records); malformed lines are rejected with line numbers."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith(STORE_MAGIC + " "):
        raise StoreError(f"{path}:1: missing '{STORE_MAGIC} <field_spec>' header")
    field_spec = lines[0][len(STORE_MAGIC) + 1:].strip()
    records = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line.startswith("#min "):
            continue
        if line.startswith("#"):
            raise StoreError(f"{path}:{ln}: unknown comment line")
        try:
            rec = SearchRecord.from_tsv(line)
        except ValueError as exc:
            raise StoreError(f"{path}:{ln}: {exc}") from None
        if rec.field_spec != field_spec:
            raise StoreError(f"{path}:{ln}: record field {rec.field_spec!r} "
                             f"does not match store field {field_spec!r}")
        records.append(rec)
    return field_spec, records


def merge_results(path: str, new_records: list[SearchRecord],
                  field_spec: str | None = None) -> list[SearchRecord]:
    """Append new records to the store at path, deduplicating on
    (field_spec, mask_hex); rewrites the running-minimum footer.  Returns the
    merged record list."""
    if os.path.exists(path):
        store_spec, records = read_store(path)
    else:
        if not new_records and field_spec is None:
            raise ValueError("empty merge into a missing store needs a field_spec")
        store_spec = field_spec or new_records[0].field_spec
        records = []
    if field_spec is not None and field_spec != store_spec:
        raise StoreError(f"{path}: store is for {store_spec}, not {field_spec}")
    seen = {(r.field_spec, r.mask_hex) for r in records}
    for rec in new_records:
        if rec.field_spec != store_spec:
            raise StoreError(f"{path}: cannot merge record for {rec.field_spec} "
                             f"into store for {store_spec}")
        key = (rec.field_spec, rec.mask_hex)
        if key in seen:
            continue
        seen.add(key)
        records.append(rec)
    write_store(path, store_spec, records)
    return records


# ---------------------------------------------------------------------------
# resume cursor
# ---------------------------------------------------------------------------

def cursor_path(store_path: str) -> str:
    return store_path + ".cursor"


def read_cursor(store_path: str) -> int | None:
    """Rank after the last completed block, or None."""
    try:
        with open(cursor_path(store_path), encoding="utf-8") as fh:
            return int(fh.read().strip())
    except FileNotFoundError:
        return None


def write_cursor(store_path: str, rank: int) -> None:
    with open(cursor_path(store_path), "w", encoding="utf-8") as fh:
        fh.write(f"{rank}\n")
