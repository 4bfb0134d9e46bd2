"""Two-sample comparison used in the metrics export.

Student's pooled-variance t-test, one-sided for mean(A) > mean(B), with
df = nA + nB - 2. The statistic and degrees of freedom are computed here
from the textbook formula; only the t-distribution tail probability is
delegated to scipy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import fmean
from typing import Sequence

from scipy.stats import t as t_dist

from .errors import DegenerateVariance


@dataclass(frozen=True)
class TTestResult:
    t: float
    p: float
    df: int


def t_test_one_sided(group_a: Sequence[float], group_b: Sequence[float]) -> TTestResult:
    """One-sided pooled-variance t-test of mean(A) > mean(B).

    Raises DegenerateVariance when both samples are constant and equal,
    where the statistic is 0/0. Constant but unequal samples yield an
    infinite statistic with a 0 or 1 p-value.
    """
    n_a, n_b = len(group_a), len(group_b)
    if n_a < 2 or n_b < 2:
        raise ValueError("each group needs at least 2 observations")
    mean_a, mean_b = fmean(group_a), fmean(group_b)
    ss_a = sum((x - mean_a) ** 2 for x in group_a)
    ss_b = sum((x - mean_b) ** 2 for x in group_b)
    df = n_a + n_b - 2
    pooled_var = (ss_a + ss_b) / df
    scale = math.sqrt(pooled_var * (1 / n_a + 1 / n_b))
    diff = mean_a - mean_b
    if scale == 0.0:
        if diff == 0.0:
            raise DegenerateVariance("both groups are constant and equal")
        t = math.inf if diff > 0 else -math.inf
        return TTestResult(t=t, p=0.0 if diff > 0 else 1.0, df=df)
    t = diff / scale
    p = float(t_dist.sf(t, df))
    return TTestResult(t=t, p=p, df=df)
