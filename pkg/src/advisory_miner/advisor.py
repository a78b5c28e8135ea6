"""Advisor-facing layer: decision rules from a fitted tree, the cohort
statistics battery, and the annual academic report form."""

from __future__ import annotations

import json
import re
import statistics
from dataclasses import asdict, dataclass, field

from .classifiers import DecisionTreeModel, Model
from .data_model import (
    COHORT_COLUMNS,
    DIFF,
    GEN,
    GPA,
    L_STATUS,
    REG,
    GAIN,
    Dataset,
    StudentRecord,
    gpa_band,
    partition_by,
)
from .descriptive import summarize_by_group
from .errors import AdvisoryError, MissingGroup, UnsupportedFormat
from .inferential import one_way_anova, t_test_from_samples

EXPECTED = "ExpectedToGraduate"
DESCRIBED = (REG, GAIN, DIFF, GPA)


@dataclass(frozen=True)
class AdvisingRule:
    conditions: tuple  # of (attribute, relation, value) with relation in {"=", "<=", ">"}
    conclusion: str
    support: int
    confidence: float

    def matches(self, named: dict) -> bool:
        for attr, rel, value in self.conditions:
            v = named[attr]
            if rel == "=" and v != value:
                return False
            if rel == "<=" and not v <= value:
                return False
            if rel == ">" and not v > value:
                return False
        return True

    def __str__(self):
        cond = " AND ".join(f"{a} {r} {v}" for a, r, v in self.conditions) or "TRUE"
        return f"IF {cond} THEN {self.conclusion} (support {self.support}, confidence {self.confidence:.3f})"

    def to_json(self) -> dict:
        return {"conditions": [list(c) for c in self.conditions], "conclusion": self.conclusion,
                "support": self.support, "confidence": self.confidence}


def extract_rules(tree: DecisionTreeModel) -> list[AdvisingRule]:
    """One rule per leaf that holds training cases, by descending support."""
    schema = tree.schema
    labels = tree.class_values
    rules = []

    def walk(node, path):
        if node.is_leaf:
            support = int(round(node.n))
            if support == 0 and node is not tree.root:
                return
            c = node.majority()
            rules.append(AdvisingRule(tuple(path), labels[c], support, node.dist[c]))
            return
        spec = schema[node.attr]
        if node.threshold is not None:
            walk(node.children[0], path + [(spec.name, "<=", node.threshold)])
            walk(node.children[1], path + [(spec.name, ">", node.threshold)])
        else:
            for value, child in zip(spec.values, node.children):
                walk(child, path + [(spec.name, "=", value)])

    walk(tree.root, [])
    rules.sort(key=lambda r: -r.support)
    return rules


# ---------------------------------------------------------------------------
# cohort statistics battery

def _section(fn):
    try:
        return {"ok": True, "result": fn()}
    except AdvisoryError as exc:
        return {"ok": False, "error": type(exc).__name__, "message": str(exc)}


def composition(ds: Dataset) -> dict:
    n = ds.n
    gen = ds.column(GEN)
    ls = ds.column(L_STATUS)
    female = sum(1 for g in gen if g == "Female")
    expected = sum(1 for s in ls if s == EXPECTED)
    return {
        "n": n, "female": female, "male": n - female, "expected": expected, "in_study": n - expected,
        "female_percent": 100.0 * female / n if n else 0.0,
        "male_percent": 100.0 * (n - female) / n if n else 0.0,
        "expected_percent": 100.0 * expected / n if n else 0.0,
    }


def composition_line(c: dict) -> str:
    return (f"Out of {c['n']} students, {c['expected']} (~{c['expected_percent']:.0f}%) are expected "
            f"to graduate; {c['female_percent']:.0f}% are Female and {c['male_percent']:.0f}% Male.")


def band_samples(ds: Dataset) -> dict[str, list]:
    """Diff_G_R_C_H values of the Good and Poor GPA bands."""
    out = {"Good": [], "Poor": []}
    for gpa, diff in zip(ds.column(GPA), ds.column(DIFF)):
        band = gpa_band(gpa)
        if band in out:
            out[band].append(diff)
    return out


def anova_groups(ds: Dataset) -> tuple[list[str], list[list]]:
    """Diff_G_R_C_H by gender within the ExpectedToGraduate partition."""
    parts = partition_by(ds, L_STATUS)
    if EXPECTED not in parts:
        raise MissingGroup("no ExpectedToGraduate students")
    by_gen = partition_by(parts[EXPECTED], GEN)
    if len(by_gen) < 2:
        raise MissingGroup(f"only one gender ({', '.join(by_gen)}) among expected graduates")
    return list(by_gen), [sub.column(DIFF) for sub in by_gen.values()]


def ttest_population(ds: Dataset, scope: str) -> Dataset:
    if scope == "all":
        return ds
    parts = partition_by(ds, L_STATUS)
    if scope not in parts:
        raise MissingGroup(f"no {scope} students")
    return parts[scope]


def cohort_analysis(ds: Dataset, alpha: float = 0.05, ttest_scope: str = EXPECTED) -> dict:
    """Run the statistics battery. Each section is ``{"ok": True, "result": ...}``
    or ``{"ok": False, "error": ..., "message": ...}``; one failing section
    does not stop the others."""

    def describe():
        return {attr: summarize_by_group(ds, attr, L_STATUS) for attr in DESCRIBED}

    def anova():
        names, groups = anova_groups(ds)
        return {"groups": names, "table": one_way_anova(groups, alpha)}

    def ttest():
        samples = band_samples(ttest_population(ds, ttest_scope))
        for band, vals in samples.items():
            if len(vals) < 2:
                raise MissingGroup(f"GPA band {band} has {len(vals)} student(s); need 2")
        return {"scope": ttest_scope, "groups": ["Good", "Poor"],
                "table": t_test_from_samples(samples["Good"], samples["Poor"], 0.0, alpha)}

    return {
        "alpha": alpha,
        "describe": _section(describe),
        "anova": _section(anova),
        "ttest": _section(ttest),
        "composition": _section(lambda: composition(ds)),
    }


# ---------------------------------------------------------------------------
# annual academic report

SEMESTERS = ("First Academic Semester", "Second Academic Semester", "Summer Semester")
PROBLEM_TYPES = ("Academic", "Psychological", "Social")
COURSE_ROWS = 6


@dataclass
class SemesterEntry:
    recommended: list = field(default_factory=list)
    selected: list = field(default_factory=list)
    problem: bool | None = None
    problem_type: str | None = None
    solution: str = ""


@dataclass
class AdvisingReport:
    student: StudentRecord
    predicted_risk: str
    distribution: dict  # class -> probability, class order
    gpa_band: str
    diff_flag: bool
    diff_threshold: float
    semesters: list = field(default_factory=lambda: [SemesterEntry() for _ in SEMESTERS])
    advisor_name: str = ""

    def __post_init__(self):
        top = max(self.distribution.values())
        if self.distribution.get(self.predicted_risk) != top:
            raise AdvisoryError("predicted risk is not an argmax of its distribution")
        if len(self.semesters) != len(SEMESTERS):
            raise AdvisoryError(f"expected {len(SEMESTERS)} semester entries")
        for s in self.semesters:
            if s.problem_type is not None and s.problem_type not in PROBLEM_TYPES:
                raise AdvisoryError(f"unknown problem type {s.problem_type!r}")
            if len(s.recommended) > COURSE_ROWS or len(s.selected) > COURSE_ROWS:
                raise AdvisoryError(f"at most {COURSE_ROWS} courses per column")

    def to_json(self) -> dict:
        return {
            "student": dict(zip(COHORT_COLUMNS, self.student.to_row())),
            "prediction": {"class": self.predicted_risk, "distribution": dict(self.distribution)},
            "gpa_band": self.gpa_band,
            "diff_flag": self.diff_flag,
            "diff_threshold": self.diff_threshold,
            "advisor_name": self.advisor_name,
            "semesters": [dict(name=name, **asdict(s)) for name, s in zip(SEMESTERS, self.semesters)],
        }

    @classmethod
    def from_json(cls, d: dict) -> "AdvisingReport":
        st = d["student"]
        student = StudentRecord.from_row(tuple(st[c] for c in COHORT_COLUMNS))
        sems = [SemesterEntry(list(s.get("recommended", [])), list(s.get("selected", [])),
                              s.get("problem"), s.get("problem_type"), s.get("solution", ""))
                for s in d["semesters"]]
        return cls(student, d["prediction"]["class"], dict(d["prediction"]["distribution"]),
                   d["gpa_band"], d["diff_flag"], d["diff_threshold"], sems, d.get("advisor_name", ""))


def default_diff_threshold(ds: Dataset) -> float:
    """Cohort mean of Diff_G_R_C_H plus one sample standard deviation."""
    diffs = ds.column(DIFF)
    if len(diffs) < 2:
        return float(diffs[0]) if diffs else 0.0
    return statistics.fmean(diffs) + statistics.stdev(diffs)


def build_report(model: Model, student: StudentRecord, diff_threshold: float,
                 semesters=None, advisor_name: str = "") -> AdvisingReport:
    named = dict(zip(COHORT_COLUMNS, student.to_row()))
    dist = model.predict_proba(named)
    labels = model.class_values
    diff = named[DIFF]
    return AdvisingReport(
        student=student, predicted_risk=model.predict(named),
        distribution={c: float(p) for c, p in zip(labels, dist)},
        gpa_band=gpa_band(student.cum_gpa), diff_flag=diff > diff_threshold,
        diff_threshold=float(diff_threshold),
        semesters=semesters or [SemesterEntry() for _ in SEMESTERS], advisor_name=advisor_name,
    )


def _box(flag: bool) -> str:
    return "[x]" if flag else "[ ]"


def _problem_cell(s: SemesterEntry) -> str:
    return f"Is there any problem confronted student? Yes {_box(s.problem is True)} No {_box(s.problem is False)}"


def _type_cell(s: SemesterEntry) -> str:
    return "Problem type: " + " ".join(f"{t} {_box(s.problem_type == t)}" for t in PROBLEM_TYPES)


def _clean(text: str) -> str:
    if "|" in text or "\n" in text:
        raise AdvisoryError(f"text fields may not contain '|' or newlines: {text!r}")
    return text


def render_text(r: AdvisingReport) -> str:
    st = dict(zip(COHORT_COLUMNS, r.student.to_row()))
    lines = ["Annual Academic Report", "=" * 22]
    lines += [f"{k}: {v!r}" if isinstance(v, float) else f"{k}: {v}" for k, v in st.items()]
    lines.append(f"GPA band: {r.gpa_band}")
    lines.append(f"Advisor's name: {_clean(r.advisor_name)}")
    lines.append("")

    cells = []  # rows of 6 cells (two per semester)
    cells.append([x for name in SEMESTERS for x in (name, "")])
    cells.append([x for _ in SEMESTERS for x in ("Recommended Courses", "Actually selected Courses")])
    for i in range(COURSE_ROWS):
        row = []
        for s in r.semesters:
            rec = _clean(s.recommended[i]) if i < len(s.recommended) else ""
            sel = _clean(s.selected[i]) if i < len(s.selected) else ""
            row += [f"{i + 1}. {rec}".rstrip(), f"{i + 1}. {sel}".rstrip()]
        cells.append(row)
    widths = [max(len(row[j]) for row in cells) for j in range(6)]
    for row in cells:
        lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |")
    pair = [widths[2 * k] + 3 + widths[2 * k + 1] for k in range(3)]
    wide = [
        [_problem_cell(s) for s in r.semesters],
        [_type_cell(s) for s in r.semesters],
        [f"Solution: {_clean(s.solution)}".rstrip() for s in r.semesters],
        ["Student's signature: Advisor's name: Advisor's signature:"] * 3,
    ]
    pair = [max(p, *(len(row[k]) for row in wide)) for k, p in enumerate(pair)]
    for row in wide:
        lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(row, pair)) + " |")
    lines.append("")
    diff = st[DIFF]
    if r.diff_flag:
        lines.append(f"Problem: {DIFF} = {diff} exceeds threshold {r.diff_threshold!r}")
    else:
        lines.append(f"Problem: none flagged ({DIFF} = {diff}, threshold {r.diff_threshold!r})")
    lines.append(f"Risk prediction: {r.predicted_risk}")
    lines.append("Distribution: " + " ".join(f"{c}={p!r}" for c, p in r.distribution.items()))
    return "\n".join(lines) + "\n"


_CELL_NUM = re.compile(r"^(\d+)\.\s?(.*)$")


def parse_text(text: str) -> AdvisingReport:
    """Inverse of :func:`render_text` for every non-layout field."""
    lines = text.splitlines()
    kv = {}
    grid = []
    for line in lines:
        if line.startswith("|"):
            grid.append([c.strip() for c in line.strip().strip("|").split("|")])
        elif ": " in line or line.endswith(":"):
            key, _, value = line.partition(":")
            kv.setdefault(key.strip(), value.strip())
    student = {}
    for col in COHORT_COLUMNS:
        raw = kv[col]
        if col in (GPA,):
            student[col] = float(raw)
        elif col in (REG, GAIN, DIFF, "Total_Cur_C_H"):
            student[col] = int(raw)
        else:
            student[col] = raw
    sems = [SemesterEntry() for _ in SEMESTERS]
    for row in grid[2:2 + COURSE_ROWS]:
        for k in range(3):
            for slot, cell in (("recommended", row[2 * k]), ("selected", row[2 * k + 1])):
                m = _CELL_NUM.match(cell)
                if m and m.group(2):
                    getattr(sems[k], slot).append(m.group(2))
    wide = grid[2 + COURSE_ROWS:]
    for k in range(3):
        cell = wide[0][k]
        sems[k].problem = True if "Yes [x]" in cell else (False if "No [x]" in cell else None)
        sems[k].problem_type = next((t for t in PROBLEM_TYPES if f"{t} [x]" in wide[1][k]), None)
        sems[k].solution = wide[2][k].partition("Solution:")[2].strip()
    dist = {}
    for item in kv["Distribution"].split():
        c, _, p = item.partition("=")
        dist[c] = float(p)
    threshold = float(re.search(r"threshold ([-0-9.e+]+)", kv["Problem"]).group(1).rstrip(")"))
    return AdvisingReport(
        student=StudentRecord.from_row(tuple(student[c] for c in COHORT_COLUMNS)),
        predicted_risk=kv["Risk prediction"], distribution=dist, gpa_band=kv["GPA band"],
        diff_flag=not kv["Problem"].startswith("none"), diff_threshold=threshold,
        semesters=sems, advisor_name=kv.get("Advisor's name", ""),
    )


def render_report(r: AdvisingReport, format: str = "text") -> str:
    if format == "text":
        return render_text(r)
    if format == "json":
        return json.dumps(r.to_json(), indent=2)
    raise UnsupportedFormat(f"unsupported report format {format!r}; use text or json")


def load_semesters(d: list | None) -> list[SemesterEntry] | None:
    """Narrative input for the report form: a list of three semester dicts."""
    if d is None:
        return None
    if len(d) != len(SEMESTERS):
        raise AdvisoryError(f"narrative must list {len(SEMESTERS)} semesters")
    return [SemesterEntry(list(s.get("recommended", [])), list(s.get("selected", [])),
                          s.get("problem"), s.get("problem_type"), s.get("solution", "")) for s in d]

