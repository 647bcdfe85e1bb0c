"""Multi-view prompt compliance scoring and grading reliability statistics.

A grader's record holds the binary execution gate X and five binary
criteria per required view: view presence V, mark correctness M, encoding
correctness E, non-hallucination H, and linking L (fixed to 1 when no
linking was requested).  The score is the execution-gated mean over all
5N criteria; multi-grader results aggregate as the mean of per-grader
scores, with the per-criterion mean table reported separately (its
entries are fractional under disagreement).

All per-grader inputs must be exactly 0 or 1.  The V/M/E/H implication
rules (a missing view scores M=E=0; a blank view cannot hallucinate) are
grading-rubric conventions, not ingestion constraints: recorded data may
deviate and still aggregate.

``krippendorff_alpha`` implements the nominal-data coincidence-matrix
form; ``correlations`` returns Pearson's r and Spearman's rho with
average ranks for ties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_CRITERIA = ("v", "m", "e", "h", "l")


class MetricsError(ValueError):
    pass


def _check_binary(value, what: str) -> int:
    if isinstance(value, bool):
        raise MetricsError(f"{what} must be 0 or 1, got a boolean")
    if value not in (0, 1):
        raise MetricsError(f"{what} must be 0 or 1, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class ViewCriteria:
    v: int
    m: int
    e: int
    h: int
    l: int

    def __post_init__(self) -> None:
        for name in _CRITERIA:
            _check_binary(getattr(self, name), f"criterion {name}")

    def total(self) -> int:
        return self.v + self.m + self.e + self.h + self.l


@dataclass(frozen=True)
class GraderRecord:
    x: int
    views: tuple[ViewCriteria, ...]

    def __post_init__(self) -> None:
        _check_binary(self.x, "execution gate x")
        if not self.views:
            raise MetricsError("a grader record needs at least one view")


@dataclass(frozen=True)
class PromptResult:
    prompt: str
    graders: tuple[GraderRecord, ...]
    category: str | None = None  # I | S | C

    def __post_init__(self) -> None:
        if not self.graders:
            raise MetricsError("a prompt result needs at least one grader")
        lengths = {len(g.views) for g in self.graders}
        if len(lengths) != 1:
            raise MetricsError("all graders must score the same number of views")

    @property
    def n_views(self) -> int:
        return len(self.graders[0].views)


def vmpc(record: GraderRecord) -> float:
    """Execution-gated mean of the five criteria across the record's views."""
    n = len(record.views)
    return record.x * sum(view.total() for view in record.views) / (5 * n)


@dataclass(frozen=True)
class Aggregate:
    mean_vmpc: float
    grader_vmpcs: tuple[float, ...]
    mean_x: float
    criterion_means: tuple[dict, ...]  # one {v,m,e,h,l} table per view


def aggregate(result: PromptResult) -> Aggregate:
    """Mean of per-grader scores plus the per-criterion mean table."""
    scores = tuple(vmpc(g) for g in result.graders)
    n_graders = len(result.graders)
    tables = []
    for view_index in range(result.n_views):
        table = {
            name: sum(
                getattr(g.views[view_index], name) for g in result.graders
            )
            / n_graders
            for name in _CRITERIA
        }
        tables.append(table)
    return Aggregate(
        mean_vmpc=sum(scores) / n_graders,
        grader_vmpcs=scores,
        mean_x=sum(g.x for g in result.graders) / n_graders,
        criterion_means=tuple(tables),
    )


def krippendorff_alpha(matrix: list) -> float:
    """Krippendorff's alpha for nominal (binary) ratings.

    ``matrix`` is graders x items; ``None`` marks a missing rating.
    Items with fewer than two ratings are excluded.  When every pairable
    rating is identical there is no expected disagreement; by convention
    the result is 1.0.
    """
    if len(matrix) < 2:
        raise MetricsError("alpha needs at least two graders")
    n_items = {len(row) for row in matrix}
    if len(n_items) != 1:
        raise MetricsError("all grader rows must have equal length")
    items = n_items.pop()
    if items < 2:
        raise MetricsError("alpha needs at least two items")

    values: set = set()
    pairable_units: list[list] = []
    for item in range(items):
        ratings = [row[item] for row in matrix if row[item] is not None]
        for r in ratings:
            _check_binary(r, "rating")
        if len(ratings) >= 2:
            pairable_units.append(ratings)
            values.update(ratings)
    if not pairable_units:
        raise MetricsError("no item has two or more ratings")

    # Coincidence counts o[c][k]; nominal distance is 0/1.
    cats = sorted(values)
    o = {c: {k: 0.0 for k in cats} for c in cats}
    for ratings in pairable_units:
        m = len(ratings)
        for i, c in enumerate(ratings):
            for j, k in enumerate(ratings):
                if i != j:
                    o[c][k] += 1.0 / (m - 1)
    n_total = sum(o[c][k] for c in cats for k in cats)
    n_c = {c: sum(o[c][k] for k in cats) for c in cats}

    d_o = sum(o[c][k] for c in cats for k in cats if c != k) / n_total
    d_e = sum(
        n_c[c] * n_c[k] for c in cats for k in cats if c != k
    ) / (n_total * (n_total - 1))
    if d_e == 0.0:
        return 1.0
    return 1.0 - d_o / d_e


def _rank(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def pearson_r(xs: list[float], ys: list[float]) -> float:
    if len(xs) != len(ys):
        raise MetricsError("sequences must have equal length")
    n = len(xs)
    if n < 2:
        raise MetricsError("correlation needs at least two points")
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        raise MetricsError("correlation undefined for zero-variance input")
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / math.sqrt(sxx * syy)


def correlations(xs: list[float], ys: list[float]) -> tuple[float, float]:
    """(Pearson r, Spearman rho); rho is Pearson over average-ranked data."""
    r = pearson_r(xs, ys)
    rho = pearson_r(_rank(list(xs)), _rank(list(ys)))
    return r, rho


# -- ingestion --------------------------------------------------------------------


def record_from_dict(doc: dict) -> GraderRecord:
    views = tuple(
        ViewCriteria(
            v=view["v"], m=view["m"], e=view["e"], h=view["h"], l=view["l"]
        )
        for view in doc.get("views", [])
    )
    return GraderRecord(x=doc.get("x", 0), views=views)


def result_from_dict(doc: dict) -> PromptResult:
    graders = tuple(record_from_dict(g) for g in doc.get("graders", []))
    result = PromptResult(
        prompt=str(doc.get("prompt", "")),
        graders=graders,
        category=doc.get("category"),
    )
    n_views = doc.get("n_views")
    if n_views is not None and n_views != result.n_views:
        raise MetricsError(
            f"n_views={n_views} does not match the {result.n_views} scored views"
        )
    return result


def score_table(results: list[PromptResult]) -> dict:
    """Per-category and overall mean tables (the mean-VMPC summary block)."""
    by_cat: dict[str, list[PromptResult]] = {}
    for result in results:
        by_cat.setdefault(result.category or "-", []).append(result)

    def summary(group: list[PromptResult]) -> dict:
        aggs = [aggregate(r) for r in group]
        crits = {
            name: sum(
                table[name] for agg in aggs for table in agg.criterion_means
            )
            / sum(len(agg.criterion_means) for agg in aggs)
            for name in _CRITERIA
        }
        return {
            "prompts": len(group),
            "mean_vmpc": sum(a.mean_vmpc for a in aggs) / len(aggs),
            "mean_x": sum(a.mean_x for a in aggs) / len(aggs),
            "criteria": crits,
        }

    table = {cat: summary(group) for cat, group in sorted(by_cat.items())}
    table["all"] = summary(results)
    return table
