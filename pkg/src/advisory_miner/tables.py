"""Grid layouts for the descriptive, ANOVA, t-test and classifier tables,
as aligned text or CSV."""

from __future__ import annotations

import csv
import io
import math
from typing import Sequence

from .descriptive import DescriptiveSummary
from .errors import UnsupportedFormat
from .evaluation import EvaluationReport
from .inferential import AnovaTable, TTestResult

GROUP_LABELS = {"ExpectedToGraduate": "Expected", "InStudy": "In Study"}
CLASS_LABELS = {"Normal": "Normal", "NearToRisk": "Near To Risk", "UnderRisk": "Under Risk"}
ALGO_LABELS = {"c45": "C4.5", "nb": "NaiveBayes classifier", "knn": "K-nearest neighbour"}

STAT_ROWS = (
    ("Mean μ", "mean"), ("St. dev.", "st_dev"), ("Median", "median"), ("Mode", "mode"),
    ("Standard Error", "std_error"), ("Kurtosis", "kurtosis"), ("Skewness", "skewness"),
)


def num(v, digits: int = 7) -> str:
    if v is None:
        return "-"
    if isinstance(v, int):
        return str(v)
    if math.isnan(v):
        return "nan"
    return f"{v:.{digits}g}"


def render(rows: Sequence[Sequence[str]], fmt: str = "text") -> str:
    if fmt == "csv":
        out = io.StringIO()
        csv.writer(out, lineterminator="\n").writerows(rows)
        return out.getvalue()
    if fmt != "text":
        raise UnsupportedFormat(f"unsupported table format {fmt!r}")
    widths = [max(len(r[j]) if j < len(r) else 0 for r in rows) for j in range(max(map(len, rows)))]
    lines = []
    for i, r in enumerate(rows):
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def descriptive_rows(by_attr: dict[str, dict[str, DescriptiveSummary]]) -> list[list[str]]:
    attrs = list(by_attr)
    groups = list(next(iter(by_attr.values()))) if attrs else []
    rows = [["Statistic", "Student Group", *attrs]]
    for label, key in STAT_ROWS:
        for k, g in enumerate(groups):
            rows.append([label if k == 0 else "", GROUP_LABELS.get(g, g),
                         *(num(getattr(by_attr[a][g], key)) if g in by_attr[a] else "-" for a in attrs)])
    rows.append(["Observations", "", *[""] * len(attrs)])
    for g in groups:
        rows.append(["", GROUP_LABELS.get(g, g), *(num(by_attr[a][g].n) if g in by_attr[a] else "-"
                                                    for a in attrs)])
    return rows


def anova_rows(t: AnovaTable) -> list[list[str]]:
    return [
        ["Source of Variation", "SS", "Df", "MS", "F", "P-value", "F crit."],
        ["Between Groups", num(t.ss_between), str(t.df_between), num(t.ms_between), num(t.f),
         num(t.p_value), num(t.f_crit)],
        ["Within Groups", num(t.ss_within), str(t.df_within), num(t.ms_within), "", "", ""],
        ["Total", num(t.ss_total), str(t.df_total), "", "", "", ""],
    ]


def ttest_rows(t: TTestResult, names=("Group with high GPA (Good Group)", "Group with Low GPA (Poor Group)")):
    d = 10
    return [
        ["", *names],
        ["Mean", num(t.mean1, d), num(t.mean2, d)],
        ["Variance", num(t.variance1, d), num(t.variance2, d)],
        ["Observations", str(t.n1), str(t.n2)],
        ["Pooled Variance", num(t.pooled_variance, d), ""],
        ["Hypothesized Mean Difference", num(t.hypothesized_mean_diff, d), ""],
        ["Df", str(t.df), ""],
        ["t Stat", num(t.t_stat, d), ""],
        ["P(T<=t) one-tail", num(t.p_one_tail, d), ""],
        ["t Critical one-tail", num(t.t_crit_one_tail, d), ""],
        ["P(T<=t) two-tail", num(t.p_two_tail, d), ""],
        ["t Critical two-tail", num(t.t_crit_two_tail, d), ""],
    ]


def metrics_rows(reports: dict[str, EvaluationReport]) -> list[list[str]]:
    rows = [["", "correctly classified instances %", "Kappa statistic", "Mean absolute error",
             "Root mean squared error", "Relative absolute error %", "Root relative squared error %"]]
    for algo, r in reports.items():
        rows.append([ALGO_LABELS.get(algo, algo), f"{100 * r.accuracy:.4f} %", f"{r.kappa:.4f}",
                     f"{r.mae:.4f}", f"{r.rmse:.4f}", f"{r.rae_percent:.3f} %", f"{r.rrse_percent:.4f} %"])
    return rows


def prf_rows(reports: dict[str, EvaluationReport]) -> list[list[str]]:
    rows = [["", "Precision", "Recall", "F-Measure", "Class"]]
    for algo, r in reports.items():
        for k, s in enumerate([*r.per_class, r.weighted]):
            rows.append([ALGO_LABELS.get(algo, algo) if k == 0 else "", f"{s.precision:.3f}",
                         f"{s.recall:.3f}", f"{s.f_measure:.3f}", CLASS_LABELS.get(s.label, s.label)])
    return rows


def confusion_rows(r: EvaluationReport) -> list[list[str]]:
    labels = r.confusion.labels
    rows = [["actual \\ predicted", *labels]]
    for lab, counts in zip(labels, r.confusion.counts):
        rows.append([lab, *map(str, counts)])
    return rows
