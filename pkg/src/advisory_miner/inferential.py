"""One-way ANOVA and the pooled-variance two-sample t-test."""

from __future__ import annotations

import math
import statistics
from dataclasses import asdict, dataclass
from typing import Sequence

from .errors import DomainError
from .special import f_inv, f_sf, t_inv, t_sf


@dataclass(frozen=True)
class GroupSummary:
    n: int
    mean: float
    variance: float

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"a group needs at least 2 observations, got {self.n}")
        if self.variance < 0:
            raise DomainError("variance must be non-negative")

    @classmethod
    def of(cls, sample: Sequence[float]) -> "GroupSummary":
        if len(sample) < 2:
            raise DomainError(f"a group needs at least 2 observations, got {len(sample)}")
        return cls(len(sample), statistics.fmean(sample), statistics.variance(sample))


@dataclass(frozen=True)
class AnovaTable:
    ss_between: float
    ss_within: float
    ss_total: float
    df_between: int
    df_within: int
    df_total: int
    ms_between: float
    ms_within: float
    f: float
    p_value: float
    f_crit: float
    alpha: float = 0.05

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TTestResult:
    mean1: float
    mean2: float
    variance1: float
    variance2: float
    n1: int
    n2: int
    pooled_variance: float
    hypothesized_mean_diff: float
    df: int
    t_stat: float
    p_one_tail: float
    t_crit_one_tail: float
    p_two_tail: float
    t_crit_two_tail: float
    alpha: float = 0.05

    def as_dict(self) -> dict:
        return asdict(self)


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def anova_from_ss(ss_between: float, ss_within: float, k: int, n: int,
                  alpha: float = 0.05) -> AnovaTable:
    if k < 2 or n <= k:
        raise DomainError(f"need k >= 2 groups and n > k observations (k={k}, n={n})")
    if ss_between < 0 or ss_within < 0:
        raise DomainError("sums of squares must be non-negative")
    if ss_within == 0:
        raise DomainError("zero within-group variance: F is undefined")
    _check_alpha(alpha)
    df_b, df_w = k - 1, n - k
    ms_b, ms_w = ss_between / df_b, ss_within / df_w
    f = ms_b / ms_w
    return AnovaTable(
        ss_between=ss_between, ss_within=ss_within, ss_total=ss_between + ss_within,
        df_between=df_b, df_within=df_w, df_total=n - 1,
        ms_between=ms_b, ms_within=ms_w, f=f,
        p_value=f_sf(f, df_b, df_w), f_crit=f_inv(1.0 - alpha, df_b, df_w), alpha=alpha,
    )


def one_way_anova(groups: Sequence[Sequence[float]], alpha: float = 0.05) -> AnovaTable:
    groups = [[float(v) for v in g] for g in groups]
    if len(groups) < 2 or any(len(g) == 0 for g in groups):
        raise DomainError("need at least two non-empty groups")
    n = sum(len(g) for g in groups)
    grand = math.fsum(math.fsum(g) for g in groups) / n
    means = [statistics.fmean(g) for g in groups]
    ss_b = math.fsum(len(g) * (m - grand) ** 2 for g, m in zip(groups, means))
    ss_w = math.fsum((v - m) ** 2 for g, m in zip(groups, means) for v in g)
    return anova_from_ss(ss_b, ss_w, len(groups), n, alpha)


def t_test_equal_var(g1: GroupSummary, g2: GroupSummary, hypothesized_diff: float = 0.0,
                     alpha: float = 0.05) -> TTestResult:
    """Two-sample t-test assuming equal variances.

    The one-tail p-value is taken against |t|, so it never exceeds 0.5.
    """
    _check_alpha(alpha)
    df = g1.n + g2.n - 2
    pooled = ((g1.n - 1) * g1.variance + (g2.n - 1) * g2.variance) / df
    if pooled == 0:
        raise DomainError("pooled variance is zero")
    t = (g1.mean - g2.mean - hypothesized_diff) / math.sqrt(pooled * (1.0 / g1.n + 1.0 / g2.n))
    p1 = t_sf(abs(t), df)
    return TTestResult(
        mean1=g1.mean, mean2=g2.mean, variance1=g1.variance, variance2=g2.variance,
        n1=g1.n, n2=g2.n, pooled_variance=pooled, hypothesized_mean_diff=hypothesized_diff,
        df=df, t_stat=t,
        p_one_tail=p1, t_crit_one_tail=t_inv(1.0 - alpha, df),
        p_two_tail=min(1.0, 2.0 * p1), t_crit_two_tail=t_inv(1.0 - alpha / 2.0, df),
        alpha=alpha,
    )


def t_test_from_samples(s1: Sequence[float], s2: Sequence[float], hypothesized_diff: float = 0.0,
                        alpha: float = 0.05) -> TTestResult:
    return t_test_equal_var(GroupSummary.of(s1), GroupSummary.of(s2), hypothesized_diff, alpha)
