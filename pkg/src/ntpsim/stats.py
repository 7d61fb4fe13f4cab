"""Performance indicators and one-tailed two-sample tests.

Both tests ask whether sample ``x`` beats sample ``y`` by more than a
hypothesised margin ``d_h``: the null is ``x - y <= d_h`` and a small
p-value is evidence that ``x`` exceeds ``y + d_h``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.stats import rankdata

ALPHA_LEVEL = 0.05


class DegenerateSampleError(ValueError):
    pass


def welch_one_tailed(x, y, d_h: float = 0.0) -> float:
    """Upper-tail p-value of Welch's t statistic for ``mean(x) - mean(y) - d_h``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or y.size < 2:
        raise DegenerateSampleError("Welch's test needs at least two observations per sample")
    diff = x.mean() - y.mean() - d_h
    vx = x.var(ddof=1) / x.size
    vy = y.var(ddof=1) / y.size
    se2 = vx + vy
    if se2 == 0.0:
        # both samples constant: the difference is known exactly
        return 0.5 if diff == 0.0 else (0.0 if diff > 0.0 else 1.0)
    t = diff / math.sqrt(se2)
    df = se2 ** 2 / (vx ** 2 / (x.size - 1) + vy ** 2 / (y.size - 1))
    return float(special.stdtr(df, -t))


@dataclass(frozen=True)
class RankSumResult:
    u: float
    z: float
    p: float


def rank_sum_test(x, y, d_h: float = 0.0) -> RankSumResult:
    """Wilcoxon rank-sum (Mann-Whitney U) of ``x`` against ``y + d_h``.

    Normal approximation with midranks, tie correction and a continuity
    correction of one half.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float) + d_h
    nx, ny = x.size, y.size
    if nx < 8 or ny < 8:
        raise DegenerateSampleError("rank-sum normal approximation needs at least 8 per sample")
    pooled = np.concatenate([x, y])
    ranks = rankdata(pooled)
    u = ranks[:nx].sum() - nx * (nx + 1) / 2.0
    n = nx + ny
    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_term = float(np.sum(tie_counts.astype(float) ** 3 - tie_counts))
    var = nx * ny / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0.0:
        return RankSumResult(u, 0.0, 0.5)
    z = (u - nx * ny / 2.0 - 0.5) / math.sqrt(var)
    return RankSumResult(float(u), z, float(special.ndtr(-z)))


def wilcoxon_rank_sum(x, y, d_h: float = 0.0) -> float:
    return rank_sum_test(x, y, d_h).p


def sample_skewness(x) -> float:
    """Adjusted Fisher-Pearson skewness (0 for constant samples)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 3:
        return 0.0
    dev = x - x.mean()
    m2 = np.mean(dev ** 2)
    if m2 == 0.0:
        return 0.0
    g1 = np.mean(dev ** 3) / m2 ** 1.5
    return float(g1 * math.sqrt(n * (n - 1)) / (n - 2))


@dataclass(frozen=True)
class IndicatorCell:
    gamma_1: float
    gamma_2: float
    gamma_disc: float
    mean_pi_hq: float
    fbi: float
    sbi: float
    bpi: float
    d_h: float
    p_welch: float
    p_wilcoxon: float

    @property
    def significant(self) -> bool:
        return self.p_welch < ALPHA_LEVEL and self.p_wilcoxon < ALPHA_LEVEL

    @property
    def significance_class(self) -> str:
        """Cell colour: green both tests significant, yellow only the rank-sum,
        blue only Welch, white neither."""
        welch = self.p_welch < ALPHA_LEVEL
        wilcoxon = self.p_wilcoxon < ALPHA_LEVEL
        if welch and wilcoxon:
            return "green"
        if wilcoxon:
            return "yellow"
        if welch:
            return "blue"
        return "white"


def indicators(cell_profits, pi_fb: float, pi_sb: float, baseline_profits,
               gamma_1: float = float("nan"), gamma_2: float = float("nan"),
               gamma_disc: float = float("nan"), margin: float = 0.01) -> IndicatorCell:
    """First-best, second-best and baseline indicators plus both tests.

    The hypothesised difference is `margin` times the baseline mean profit.
    """
    if not (pi_fb > 0 and pi_sb > 0):
        raise ValueError("benchmark profits must be positive")
    cell = np.asarray(cell_profits, dtype=float)
    base = np.asarray(baseline_profits, dtype=float)
    if base.size == 0 or cell.size == 0:
        raise DegenerateSampleError("empty sample")
    mean = float(cell.mean())
    base_mean = float(base.mean())
    d_h = base_mean * margin
    return IndicatorCell(
        gamma_1=gamma_1, gamma_2=gamma_2, gamma_disc=gamma_disc, mean_pi_hq=mean,
        fbi=mean / pi_fb,
        sbi=(mean - pi_sb) / pi_sb,
        bpi=(mean - base_mean) / base_mean,
        d_h=d_h,
        p_welch=welch_one_tailed(cell, base, d_h),
        p_wilcoxon=wilcoxon_rank_sum(cell, base, d_h),
    )


def weighted_gamma_mean(cells, which: str = "gamma_1") -> float | None:
    """BPI-weighted mean sharing parameter over significant, improving cells.

    Returns None when no cell qualifies.
    """
    used = [c for c in cells if c.significant and c.bpi > 0]
    if not used:
        return None
    num = sum(getattr(c, which) * c.bpi for c in used)
    den = sum(c.bpi for c in used)
    return num / den
