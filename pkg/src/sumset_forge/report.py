"""Aggregate search stores into plot-ready TSV, optionally rendering the
matching matplotlib figures to files alongside the delimited output."""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .search import SearchRecord

CASE_COLUMNS = ("SmallA1", "FieldCase", "SumCase", "ProductCase",
                "FieldHypothesisViolation", "Degenerate")

HEADER = ("field_spec", "m", "count", "min_max_st", "median_max_st",
          "hypothesis_ok") + tuple(f"n_{c}" for c in CASE_COLUMNS) + ("n_unclassified",)


@dataclass(frozen=True)
class ReportRow:
    field_spec: str
    m: int
    count: int
    min_max_st: int
    median_max_st: Fraction
    hypothesis_ok: int
    case_counts: dict[str, int]
    unclassified: int

    def to_tsv(self) -> str:
        med = self.median_max_st
        med_str = str(med.numerator) if med.denominator == 1 else str(float(med))
        cells = [self.field_spec, str(self.m), str(self.count),
                 str(self.min_max_st), med_str, str(self.hypothesis_ok)]
        cells += [str(self.case_counts.get(c, 0)) for c in CASE_COLUMNS]
        cells.append(str(self.unclassified))
        return "\t".join(cells)


def _median(values: list[int]) -> Fraction:
    vs = sorted(values)
    n = len(vs)
    if n % 2:
        return Fraction(vs[n // 2])
    return Fraction(vs[n // 2 - 1] + vs[n // 2], 2)


def aggregate(records: list[SearchRecord]) -> list[ReportRow]:
    """One row per (field_spec, m), sorted; deterministic for a given input."""
    groups: dict[tuple[str, int], list[SearchRecord]] = {}
    for rec in records:
        groups.setdefault((rec.field_spec, rec.m), []).append(rec)
    rows = []
    for (spec, m) in sorted(groups):
        recs = groups[(spec, m)]
        maxes = [r.max_st for r in recs]
        cases: dict[str, int] = {}
        unclassified = 0
        for r in recs:
            if r.case_tag is None:
                unclassified += 1
            else:
                cases[r.case_tag] = cases.get(r.case_tag, 0) + 1
        rows.append(ReportRow(
            spec, m, len(recs), min(maxes), _median(maxes),
            sum(1 for r in recs if r.hypothesis_ok), cases, unclassified))
    return rows


def render_tsv(rows: list[ReportRow]) -> str:
    lines = ["\t".join(HEADER)]
    lines += [row.to_tsv() for row in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

def _safe_name(field_spec: str) -> str:
    return "".join(ch if ch.isalnum() else "-" for ch in field_spec).strip("-")


def render_figures(rows: list[ReportRow], outdir: str) -> list[str]:
    """Write one growth figure and one case-histogram figure per field.

    Returns the written paths.  Import of matplotlib is deferred so that
    data-only runs never touch it.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(outdir, exist_ok=True)
    written = []
    specs = sorted({row.field_spec for row in rows})
    for spec in specs:
        sub = sorted((r for r in rows if r.field_spec == spec), key=lambda r: r.m)
        ms = [r.m for r in sub]
        safe = _safe_name(spec)

        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(ms, [r.min_max_st for r in sub], "o-", label="min max(|A+A|,|AA|)")
        ax.plot(ms, [float(r.median_max_st) for r in sub], "s--",
                label="median max(|A+A|,|AA|)")
        ax.plot(ms, [m ** (49 / 48) for m in ms], ":", color="gray",
                label="|A|^(49/48)")
        ax.set_xlabel("|A|")
        ax.set_ylabel("max(|A+A|, |AA|)")
        ax.set_title(f"growth over {spec}")
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = os.path.join(outdir, f"growth_{safe}.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

        fig, ax = plt.subplots(figsize=(6, 4))
        bottoms = [0.0] * len(sub)
        for case in CASE_COLUMNS:
            heights = [r.case_counts.get(case, 0) for r in sub]
            if not any(heights):
                continue
            ax.bar(ms, heights, bottom=bottoms, label=case)
            bottoms = [b + h for b, h in zip(bottoms, heights)]
        unc = [r.unclassified for r in sub]
        if any(unc):
            ax.bar(ms, unc, bottom=bottoms, label="unclassified")
        ax.set_xlabel("|A|")
        ax.set_ylabel("records")
        ax.set_title(f"certificate cases over {spec}")
        ax.legend(fontsize=8)
        fig.tight_layout()
        path = os.path.join(outdir, f"cases_{safe}.png")
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
