"""Seeded synthetic cohorts with a fixed cohort composition and
per-group hour/GPA moments, and a planted link between risk status and
registered-minus-gained hours.

Generation order (all draws from one :class:`~advisory_miner.rng.Lcg64`):

1. shuffle ``range(n)``; the first ``round(n * female_fraction)`` are Female;
2. shuffle again; the first ``round(n * expected_fraction)`` are ExpectedToGraduate;
3. for each student in order: risk (weighted draw), registered hours,
   registered-minus-gained hours (truncated to ``[0, registered]``), GPA
   (truncated to ``[0, 5]``), current-semester hours (uniform integer),
   plan of study (weighted draw).

Normal draws are truncated by rejection (at most 1000 tries, then clamped)
and rounded: hours to integers, GPA to two decimals.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import asdict, dataclass, field

from .data_model import (
    AD_STATUS_VALUES,
    GEN_VALUES,
    GPA_MAX,
    L_STATUS_VALUES,
    PLAN_VALUES,
    Dataset,
    StudentRecord,
    cohort_dataset,
)
from .errors import InvalidParams
from .rng import Lcg64

EXPECTED, IN_STUDY = "ExpectedToGraduate", "InStudy"

# location/scale of each cohort group: mean and sample deviation per L_STATUS
GROUP_REG = {EXPECTED: (175.5385, 20.50911), IN_STUDY: (109.3381, 41.40297)}
GROUP_DIFF = {EXPECTED: (20.05128, 15.59175), IN_STUDY: (24.24286, 12.7697)}
GROUP_GPA = {EXPECTED: (3.81359, 0.581158), IN_STUDY: (3.370762, 0.767264)}

# risk-conditional shifts around the group means; with the default priors
# the mixture means stay close to the group means above
_DIFF_SHIFT = {"Normal": (-9.0, 4.0), "NearToRisk": (14.0, 4.0), "UnderRisk": (32.0, 5.0)}
_GPA_SHIFT = {"Normal": (0.3, 0.35), "NearToRisk": (-0.6, 0.35), "UnderRisk": (-1.2, 0.35)}


def _default_reg():
    return {r: {ls: list(GROUP_REG[ls]) for ls in L_STATUS_VALUES} for r in AD_STATUS_VALUES}


def _default_diff():
    return {r: {ls: [GROUP_DIFF[ls][0] + _DIFF_SHIFT[r][0], _DIFF_SHIFT[r][1]]
                for ls in L_STATUS_VALUES} for r in AD_STATUS_VALUES}


def _default_gpa():
    return {r: {ls: [GROUP_GPA[ls][0] + _GPA_SHIFT[r][0], _GPA_SHIFT[r][1]]
                for ls in L_STATUS_VALUES} for r in AD_STATUS_VALUES}


@dataclass
class GeneratorParams:
    n: int = 249
    female_fraction: float = 0.46
    expected_fraction: float = 39 / 249
    risk_priors: dict = field(default_factory=lambda: {"Normal": 0.70, "NearToRisk": 0.15, "UnderRisk": 0.15})
    # risk -> L_STATUS -> [mean, sd]
    reg: dict = field(default_factory=_default_reg)
    diff: dict = field(default_factory=_default_diff)
    gpa: dict = field(default_factory=_default_gpa)
    cur_hours: tuple = (13, 19)
    # L_STATUS -> plan -> weight; near-graduation students mostly follow the old plan
    plan_weights: dict = field(default_factory=lambda: {
        EXPECTED: {"Old": 0.85, "New": 0.15, "Developed": 0.0},
        IN_STUDY: {"Old": 0.05, "New": 0.55, "Developed": 0.40},
    })
    seed: int = 42

    def validate(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidParams(f"n must be a positive integer, got {self.n!r}")
        for name in ("female_fraction", "expected_fraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidParams(f"{name} must lie in [0, 1], got {v}")
        if set(self.risk_priors) != set(AD_STATUS_VALUES):
            raise InvalidParams(f"risk_priors must cover {list(AD_STATUS_VALUES)}")
        if any(p < 0 for p in self.risk_priors.values()) or abs(sum(self.risk_priors.values()) - 1) > 1e-9:
            raise InvalidParams("risk_priors must be non-negative and sum to 1")
        for name in ("reg", "diff", "gpa"):
            table = getattr(self, name)
            for r in AD_STATUS_VALUES:
                for ls in L_STATUS_VALUES:
                    try:
                        mean, sd = table[r][ls]
                    except (KeyError, TypeError, ValueError):
                        raise InvalidParams(f"{name}[{r}][{ls}] must be [mean, sd]") from None
                    if not (math.isfinite(mean) and math.isfinite(sd)) or sd < 0:
                        raise InvalidParams(f"{name}[{r}][{ls}]: sd must be >= 0 and values finite")
        lo, hi = self.cur_hours
        if not (isinstance(lo, int) and isinstance(hi, int) and 0 <= lo <= hi):
            raise InvalidParams("cur_hours must be integers 0 <= lo <= hi")
        if set(self.plan_weights) != set(L_STATUS_VALUES):
            raise InvalidParams(f"plan_weights must be keyed by {list(L_STATUS_VALUES)}")
        for ls, weights in self.plan_weights.items():
            if set(weights) != set(PLAN_VALUES) or any(w < 0 for w in weights.values()) \
                    or sum(weights.values()) <= 0:
                raise InvalidParams(f"plan_weights[{ls}] must give non-negative weights to {list(PLAN_VALUES)}")

    def to_json(self) -> dict:
        d = asdict(self)
        d["cur_hours"] = list(self.cur_hours)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "GeneratorParams":
        """Defaults overridden by whatever keys ``d`` provides (nested tables merge)."""
        p = cls()
        unknown = set(d) - set(p.to_json())
        if unknown:
            raise InvalidParams(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        for key, value in d.items():
            if key == "plan_weights":
                merged = copy.deepcopy(p.plan_weights)
                for ls, weights in value.items():
                    if ls not in merged:
                        raise InvalidParams(f"plan_weights: unknown L_STATUS {ls!r}")
                    merged[ls] = dict(weights)
                p.plan_weights = merged
            elif key in ("reg", "diff", "gpa"):
                table = copy.deepcopy(getattr(p, key))
                for r, by_ls in value.items():
                    if r not in table:
                        raise InvalidParams(f"{key}: unknown risk class {r!r}")
                    for ls, pair in by_ls.items():
                        if ls not in table[r]:
                            raise InvalidParams(f"{key}: unknown L_STATUS {ls!r}")
                        table[r][ls] = list(pair)
                setattr(p, key, table)
            elif key == "cur_hours":
                p.cur_hours = tuple(value)
            else:
                setattr(p, key, value)
        return p

    @classmethod
    def load(cls, path) -> "GeneratorParams":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _truncated(rng: Lcg64, mean: float, sd: float, lo: float, hi: float) -> float:
    if sd == 0:
        return min(max(mean, lo), hi)
    for _ in range(1000):
        v = rng.normal(mean, sd)
        if lo <= v <= hi:
            return v
    return min(max(mean, lo), hi)


def generate_records(p: GeneratorParams) -> list[StudentRecord]:
    p.validate()
    rng = Lcg64(p.seed)
    n = p.n
    order = list(range(n))
    rng.shuffle(order)
    female = set(order[: round(n * p.female_fraction)])
    order = list(range(n))
    rng.shuffle(order)
    expected = set(order[: round(n * p.expected_fraction)])

    risks = list(AD_STATUS_VALUES)
    risk_w = [p.risk_priors[r] for r in risks]
    plans = list(PLAN_VALUES)
    plan_w = {ls: [p.plan_weights[ls][v] for v in plans] for ls in L_STATUS_VALUES}
    lo, hi = p.cur_hours
    width = len(str(n))

    out = []
    for i in range(n):
        ls = EXPECTED if i in expected else IN_STUDY
        risk = risks[rng.choice_weighted(risk_w)]
        m, s = p.reg[risk][ls]
        reg = int(round(_truncated(rng, m, s, 0.0, math.inf)))
        m, s = p.diff[risk][ls]
        diff = int(round(_truncated(rng, m, s, 0.0, float(reg))))
        diff = min(max(diff, 0), reg)
        m, s = p.gpa[risk][ls]
        gpa = round(_truncated(rng, m, s, 0.0, GPA_MAX), 2)
        gpa = min(max(gpa, 0.0), GPA_MAX)
        cur = lo + rng.below(hi - lo + 1)
        plan = plans[rng.choice_weighted(plan_w[ls])]
        out.append(StudentRecord(
            sid=f"S{i + 1:0{width}d}", total_reg_ch=reg, total_gain_ch=reg - diff, total_cur_ch=cur,
            cum_gpa=gpa, l_status=ls, gen=GEN_VALUES[1] if i in female else GEN_VALUES[0],
            ad_status=risk, plan_study=plan, diff_g_r_ch=diff,
        ))
    return out


def generate_cohort(p: GeneratorParams | None = None) -> Dataset:
    return cohort_dataset(generate_records(p or GeneratorParams()))
