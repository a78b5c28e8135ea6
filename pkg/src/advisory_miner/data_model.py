"""Cohort schema, record validation, CSV/JSON ingestion and the derived
registered-minus-gained hours column.

A :class:`Dataset` is a generic typed table (the classifiers and the
statistics modules work on any schema); the cohort-specific pieces are
:data:`COHORT_SCHEMA`, :class:`StudentRecord` and :func:`parse_cohort_csv`.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .errors import (
    DataError,
    MalformedHeader,
    NegativeDiff,
    NotNominal,
    SchemaMismatch,
    UnknownAttribute,
)

NUMERIC = "numeric"
NOMINAL = "nominal"
STRING = "string"  # opaque identifiers only

ID, FEATURE, CLASS, DERIVED = "id", "feature", "class", "derived"
_ROLES = (ID, FEATURE, CLASS, DERIVED)


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    kind: str
    values: tuple[str, ...] = ()
    role: str = FEATURE

    def __post_init__(self):
        if not self.name:
            raise DataError("attribute name must be non-empty")
        if self.role not in _ROLES:
            raise DataError(f"{self.name}: unknown role {self.role!r}")
        if self.kind == NOMINAL:
            object.__setattr__(self, "values", tuple(self.values))
            if not self.values:
                raise DataError(f"{self.name}: nominal value list is empty")
            if len(set(self.values)) != len(self.values):
                raise DataError(f"{self.name}: duplicate nominal values")
        elif self.kind == NUMERIC:
            if self.values:
                raise DataError(f"{self.name}: numeric attribute with a value list")
        elif self.kind == STRING:
            if self.role != ID:
                raise DataError(f"{self.name}: string attributes must have role 'id'")
        else:
            raise DataError(f"{self.name}: unknown kind {self.kind!r}")
        if self.role == CLASS and self.kind != NOMINAL:
            raise DataError(f"{self.name}: class attribute must be nominal")

    @property
    def is_nominal(self) -> bool:
        return self.kind == NOMINAL

    @property
    def is_numeric(self) -> bool:
        return self.kind == NUMERIC

    def to_json(self) -> dict:
        d = {"name": self.name, "kind": self.kind, "role": self.role}
        if self.kind == NOMINAL:
            d["values"] = list(self.values)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "AttributeSpec":
        return cls(d["name"], d["kind"], tuple(d.get("values", ())), d.get("role", FEATURE))


def _check_value(spec: AttributeSpec, v, where: str):
    if spec.kind == NOMINAL:
        if v not in spec.values:
            raise SchemaMismatch(f"{where}{spec.name}: {v!r} not in {list(spec.values)}")
    elif spec.kind == NUMERIC:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise SchemaMismatch(f"{where}{spec.name}: {v!r} is not a finite number")
    elif not isinstance(v, str):
        raise SchemaMismatch(f"{where}{spec.name}: {v!r} is not a string")


@dataclass(frozen=True)
class Dataset:
    """Typed attribute schema plus instances. Immutable."""

    schema: tuple[AttributeSpec, ...]
    instances: tuple[tuple, ...]
    class_index: int
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "schema", tuple(self.schema))
        object.__setattr__(self, "instances", tuple(tuple(r) for r in self.instances))
        names = [a.name for a in self.schema]
        if len(set(names)) != len(names):
            raise DataError("duplicate attribute names")
        classes = [i for i, a in enumerate(self.schema) if a.role == CLASS]
        if len(classes) != 1:
            raise DataError(f"expected exactly one class attribute, found {len(classes)}")
        if classes[0] != self.class_index:
            raise DataError("class_index does not point at the class attribute")
        width = len(self.schema)
        for r, row in enumerate(self.instances):
            if len(row) != width:
                raise SchemaMismatch(f"instance {r}: {len(row)} values for {width} attributes")
            for spec, v in zip(self.schema, row):
                _check_value(spec, v, f"instance {r}: ")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @classmethod
    def from_rows(cls, schema: Sequence[AttributeSpec], rows: Iterable[Sequence],
                  class_name: str | None = None) -> "Dataset":
        schema = list(schema)
        if class_name is not None:
            schema = [replace(a, role=CLASS) if a.name == class_name
                      else (replace(a, role=FEATURE) if a.role == CLASS else a)
                      for a in schema]
        idx = next((i for i, a in enumerate(schema) if a.role == CLASS), -1)
        return cls(tuple(schema), tuple(tuple(r) for r in rows), idx)

    def __len__(self):
        return len(self.instances)

    @property
    def n(self) -> int:
        return len(self.instances)

    @property
    def names(self) -> list[str]:
        return [a.name for a in self.schema]

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownAttribute(f"unknown attribute {name!r}") from None

    def attribute(self, name: str) -> AttributeSpec:
        return self.schema[self.index_of(name)]

    def column(self, name: str) -> list:
        i = self.index_of(name)
        return [row[i] for row in self.instances]

    @property
    def class_attribute(self) -> AttributeSpec:
        return self.schema[self.class_index]

    @property
    def class_values(self) -> tuple[str, ...]:
        return self.class_attribute.values

    def class_labels(self) -> list[int]:
        """Class of every instance as an index into :attr:`class_values`."""
        lookup = {v: i for i, v in enumerate(self.class_values)}
        ci = self.class_index
        return [lookup[row[ci]] for row in self.instances]

    def class_counts(self) -> list[int]:
        counts = [0] * len(self.class_values)
        for c in self.class_labels():
            counts[c] += 1
        return counts

    @property
    def feature_indices(self) -> list[int]:
        return [i for i, a in enumerate(self.schema) if a.role in (FEATURE, DERIVED)]

    def subset(self, indices: Iterable[int]) -> "Dataset":
        rows = self.instances
        return Dataset(self.schema, tuple(rows[i] for i in indices), self.class_index)

    def drop(self, names: Iterable[str]) -> "Dataset":
        """Remove attributes by name. The class attribute cannot be dropped."""
        drop = {self.index_of(n) for n in names}
        if self.class_index in drop:
            raise DataError("cannot drop the class attribute")
        keep = [i for i in range(len(self.schema)) if i not in drop]
        schema = tuple(self.schema[i] for i in keep)
        rows = tuple(tuple(r[i] for i in keep) for r in self.instances)
        return Dataset(schema, rows, keep.index(self.class_index))

    def to_json(self) -> dict:
        return {
            "schema": [a.to_json() for a in self.schema],
            "class": self.class_attribute.name,
            "rows": [list(r) for r in self.instances],
        }

    @classmethod
    def from_json(cls, d: dict) -> "Dataset":
        schema = [AttributeSpec.from_json(a) for a in d["schema"]]
        return cls.from_rows(schema, d["rows"], d.get("class"))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


# ---------------------------------------------------------------------------
# cohort schema

SID = "Sid"
REG = "Total_Reg_C_H"
GAIN = "Total_Gain_C_H"
CUR = "Total_Cur_C_H"
GPA = "CUM_GPA"
DIFF = "Diff_G_R_C_H"
L_STATUS = "L_STATUS"
GEN = "GEN"
AD_STATUS = "Ad_STATUS"
PLAN = "Plan_Study"

L_STATUS_VALUES = ("InStudy", "ExpectedToGraduate")
GEN_VALUES = ("Male", "Female")
AD_STATUS_VALUES = ("Normal", "NearToRisk", "UnderRisk")
PLAN_VALUES = ("Old", "New", "Developed")

COHORT_SCHEMA = (
    AttributeSpec(SID, STRING, role=ID),
    AttributeSpec(REG, NUMERIC),
    AttributeSpec(GAIN, NUMERIC),
    AttributeSpec(CUR, NUMERIC),
    AttributeSpec(GPA, NUMERIC),
    AttributeSpec(DIFF, NUMERIC, role=DERIVED),
    AttributeSpec(L_STATUS, NOMINAL, L_STATUS_VALUES),
    AttributeSpec(GEN, NOMINAL, GEN_VALUES),
    AttributeSpec(PLAN, NOMINAL, PLAN_VALUES),
    AttributeSpec(AD_STATUS, NOMINAL, AD_STATUS_VALUES, role=CLASS),
)
COHORT_COLUMNS = tuple(a.name for a in COHORT_SCHEMA)
REQUIRED_COLUMNS = tuple(c for c in COHORT_COLUMNS if c != DIFF)

GPA_MAX = 5.0


def _key(s: str) -> str:
    return re.sub(r"[^a-z0-9]", "", s.lower())


def _aliases(values, extra=()):
    table = {_key(v): v for v in values}
    table.update(extra)
    return table


_VOCAB = {
    L_STATUS: _aliases(L_STATUS_VALUES, {"expected": "ExpectedToGraduate"}),
    GEN: _aliases(GEN_VALUES, {"m": "Male", "f": "Female"}),
    AD_STATUS: _aliases(AD_STATUS_VALUES),
    PLAN: _aliases(PLAN_VALUES),
}


def canonical_value(attr: str, text: str) -> str:
    """Map a spelling such as ``"Near To Risk"`` or ``"F"`` to its canonical value."""
    try:
        return _VOCAB[attr][_key(text)]
    except KeyError:
        raise DataError(f"{attr}: {text!r} is not one of {list(_VOCAB[attr].values())}") from None


@dataclass(frozen=True)
class StudentRecord:
    sid: str
    total_reg_ch: int
    total_gain_ch: int
    total_cur_ch: int
    cum_gpa: float
    l_status: str
    gen: str
    ad_status: str
    plan_study: str
    diff_g_r_ch: int | None = None

    def __post_init__(self):
        for name in ("total_reg_ch", "total_gain_ch", "total_cur_ch"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise DataError(f"{name} must be a non-negative integer, got {v!r}")
        g = self.cum_gpa
        if isinstance(g, bool) or not isinstance(g, (int, float)) or not 0.0 <= g <= GPA_MAX:
            raise DataError(f"CUM_GPA must lie in [0, {GPA_MAX}], got {g!r}")
        for attr, name in ((L_STATUS, "l_status"), (GEN, "gen"),
                           (AD_STATUS, "ad_status"), (PLAN, "plan_study")):
            if getattr(self, name) not in _VOCAB[attr].values():
                raise DataError(f"{attr}: {getattr(self, name)!r} is not a valid value")
        if self.diff_g_r_ch is not None:
            if self.diff_g_r_ch != self.total_reg_ch - self.total_gain_ch:
                raise DataError(
                    f"{DIFF} = {self.diff_g_r_ch} but {REG} - {GAIN} = "
                    f"{self.total_reg_ch - self.total_gain_ch}")
            if self.diff_g_r_ch < 0:
                raise NegativeDiff(f"{GAIN} exceeds {REG}")

    def to_row(self) -> tuple:
        diff = self.diff_g_r_ch if self.diff_g_r_ch is not None else derive_diff(self).diff_g_r_ch
        return (self.sid, self.total_reg_ch, self.total_gain_ch, self.total_cur_ch,
                self.cum_gpa, diff, self.l_status, self.gen, self.plan_study, self.ad_status)

    @classmethod
    def from_row(cls, row: Sequence) -> "StudentRecord":
        sid, reg, gain, cur, gpa, diff, ls, gen, plan, ad = row
        return cls(sid, reg, gain, cur, gpa, ls, gen, ad, plan, diff)


def derive_diff(record: StudentRecord) -> StudentRecord:
    """Fill in registered-minus-gained hours. Idempotent."""
    diff = record.total_reg_ch - record.total_gain_ch
    if diff < 0:
        raise NegativeDiff(
            f"{GAIN} ({record.total_gain_ch}) exceeds {REG} ({record.total_reg_ch})")
    return replace(record, diff_g_r_ch=diff)


def gpa_band(cum_gpa: float) -> str:
    """``Good`` for [3.76, 5.00], ``Poor`` for [2.00, 3.75], else ``BelowScale``.

    GPAs are compared at two decimals, so 3.755 belongs to ``Good``.
    """
    g = round(cum_gpa + 1e-12, 2)
    if g >= 3.76:
        return "Good"
    if g >= 2.0:
        return "Poor"
    return "BelowScale"


def cohort_dataset(records: Iterable[StudentRecord]) -> Dataset:
    return Dataset(COHORT_SCHEMA, tuple(r.to_row() for r in records), COHORT_COLUMNS.index(AD_STATUS))


def student_records(ds: Dataset) -> list[StudentRecord]:
    if tuple(ds.names) != COHORT_COLUMNS:
        raise SchemaMismatch("dataset does not carry the full cohort schema")
    return [StudentRecord.from_row(r) for r in ds.instances]


def partition_by(ds: Dataset, attr: str) -> dict[str, Dataset]:
    """Split on a nominal attribute; empty groups are omitted, value order kept."""
    i = ds.index_of(attr)
    spec = ds.schema[i]
    if not spec.is_nominal:
        raise NotNominal(f"{attr} is not nominal")
    buckets: dict[str, list[int]] = {v: [] for v in spec.values}
    for r, row in enumerate(ds.instances):
        buckets[row[i]].append(r)
    return {v: ds.subset(rows) for v, rows in buckets.items() if rows}


# ---------------------------------------------------------------------------
# CSV

def _parse_int(text: str, col: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise DataError(f"{col}: {text!r} is not a whole number of hours", line) from None


def parse_cohort_csv(text) -> Dataset:
    """Parse cohort CSV from a string or text stream.

    The header must name exactly the cohort columns (any order);
    ``Diff_G_R_C_H`` may be omitted, in which case it is derived.
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    reader = csv.reader(stream)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise MalformedHeader("empty input: no header line") from None
    seen = set()
    for h in header:
        if h not in COHORT_COLUMNS:
            raise MalformedHeader(f"unknown column {h!r}")
        if h in seen:
            raise MalformedHeader(f"duplicate column {h!r}")
        seen.add(h)
    missing = [c for c in REQUIRED_COLUMNS if c not in seen]
    if missing:
        raise MalformedHeader(f"missing column(s): {', '.join(missing)}")

    records = []
    for line, fields in enumerate(reader, start=2):
        if not fields or all(not f.strip() for f in fields):
            continue
        if len(fields) != len(header):
            raise DataError(f"expected {len(header)} fields, got {len(fields)}", line)
        raw = {h: f.strip() for h, f in zip(header, fields)}
        for h, v in raw.items():
            if v == "":
                raise DataError(f"{h}: missing value", line)
        try:
            gpa = float(raw[GPA])
        except ValueError:
            raise DataError(f"{GPA}: {raw[GPA]!r} is not a number", line) from None
        if not (0.0 <= gpa <= GPA_MAX):
            raise DataError(f"{GPA}: {gpa} outside [0, {GPA_MAX}]", line)
        try:
            rec = StudentRecord(
                sid=raw[SID],
                total_reg_ch=_parse_int(raw[REG], REG, line),
                total_gain_ch=_parse_int(raw[GAIN], GAIN, line),
                total_cur_ch=_parse_int(raw[CUR], CUR, line),
                cum_gpa=gpa,
                l_status=canonical_value(L_STATUS, raw[L_STATUS]),
                gen=canonical_value(GEN, raw[GEN]),
                ad_status=canonical_value(AD_STATUS, raw[AD_STATUS]),
                plan_study=canonical_value(PLAN, raw[PLAN]),
                diff_g_r_ch=_parse_int(raw[DIFF], DIFF, line) if DIFF in raw else None,
            )
            rec = derive_diff(rec)
        except DataError as exc:
            if exc.row is not None:
                raise
            raise type(exc)(str(exc), line) from None
        records.append(rec)
    return cohort_dataset(records)


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def to_csv(ds: Dataset) -> str:
    """Serialize any dataset as header + rows. Floats use ``repr`` so values round-trip."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(ds.names)
    for row in ds.instances:
        w.writerow([_fmt(v) for v in row])
    return out.getvalue()
