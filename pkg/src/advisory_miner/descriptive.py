"""Per-group descriptive statistics (mean, deviation, median, mode,
standard error, skewness, excess kurtosis)."""

from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .data_model import Dataset, partition_by
from .errors import EmptyInput, NotNominal, NotNumeric

FIELDS = ("n", "mean", "st_dev", "median", "mode", "std_error", "kurtosis", "skewness")


@dataclass(frozen=True)
class DescriptiveSummary:
    """Fields that need more observations than available are ``None``;
    ``missing`` maps each such field to the reason."""

    n: int
    mean: float
    median: float
    mode: float | None = None
    st_dev: float | None = None
    std_error: float | None = None
    skewness: float | None = None
    kurtosis: float | None = None
    missing: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def _mode(values):
    counts = Counter(values)
    top = max(counts.values())
    if top == 1:
        return None
    return min(v for v, c in counts.items() if c == top)


def summarize(values: Sequence[float]) -> DescriptiveSummary:
    values = [float(v) for v in values]
    n = len(values)
    if n == 0:
        raise EmptyInput("cannot summarize an empty sample")
    mean = statistics.fmean(values)
    out = dict(n=n, mean=mean, median=statistics.median(values), mode=_mode(values))
    missing = {}
    if out["mode"] is None:
        missing["mode"] = "no value occurs more than once"
    if n < 2:
        missing.update(st_dev="needs n >= 2", std_error="needs n >= 2",
                       skewness="needs n >= 3", kurtosis="needs n >= 4")
        return DescriptiveSummary(**out, missing=missing)

    ss = math.fsum((v - mean) ** 2 for v in values)
    sd = math.sqrt(ss / (n - 1))
    out["st_dev"] = sd
    out["std_error"] = sd / math.sqrt(n)
    if sd == 0.0:
        missing.update(skewness="zero variance", kurtosis="zero variance")
        return DescriptiveSummary(**out, missing=missing)
    z = [(v - mean) / sd for v in values]
    if n >= 3:
        out["skewness"] = n / ((n - 1) * (n - 2)) * math.fsum(t ** 3 for t in z)
    else:
        missing["skewness"] = "needs n >= 3"
    if n >= 4:
        out["kurtosis"] = (n * (n + 1) / ((n - 1) * (n - 2) * (n - 3)) * math.fsum(t ** 4 for t in z)
                           - 3.0 * (n - 1) ** 2 / ((n - 2) * (n - 3)))
    else:
        missing["kurtosis"] = "needs n >= 4"
    return DescriptiveSummary(**out, missing=missing)


def summarize_by_group(ds: Dataset, value_attr: str, group_attr: str) -> dict[str, DescriptiveSummary]:
    """One summary per non-empty group, in the group attribute's value order."""
    if not ds.attribute(value_attr).is_numeric:
        raise NotNumeric(f"{value_attr} is not numeric")
    if not ds.attribute(group_attr).is_nominal:
        raise NotNominal(f"{group_attr} is not nominal")
    return {g: summarize(sub.column(value_attr)) for g, sub in partition_by(ds, group_attr).items()}
