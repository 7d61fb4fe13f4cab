"""Independent textbook recomputations used as test oracles."""
import math

import numpy as np
from scipy import stats


def welch_textbook(x, y, d_h):
    nx, ny = len(x), len(y)
    mx, my = sum(x) / nx, sum(y) / ny
    sx2 = sum((v - mx) ** 2 for v in x) / (nx - 1)
    sy2 = sum((v - my) ** 2 for v in y) / (ny - 1)
    se = math.sqrt(sx2 / nx + sy2 / ny)
    t = (mx - my - d_h) / se
    df = (sx2 / nx + sy2 / ny) ** 2 / ((sx2 / nx) ** 2 / (nx - 1) + (sy2 / ny) ** 2 / (ny - 1))
    return float(stats.t.sf(t, df))


def rank_sum_brute(x, y, d_h):
    """U by pairwise comparison, tie-corrected normal tail with continuity 0.5."""
    y = [v + d_h for v in y]
    nx, ny = len(x), len(y)
    u = 0.0
    for a in x:
        for b in y:
            u += 1.0 if a > b else (0.5 if a == b else 0.0)
    pooled = list(x) + y
    n = nx + ny
    ties = {}
    for v in pooled:
        ties[v] = ties.get(v, 0) + 1
    t_sum = sum(c ** 3 - c for c in ties.values())
    var = nx * ny / 12.0 * ((n + 1) - t_sum / (n * (n - 1)))
    z = (u - nx * ny / 2.0 - 0.5) / math.sqrt(var)
    return u, 0.5 * math.erfc(z / math.sqrt(2.0))


def skewness_two_pass(x):
    n = len(x)
    m = sum(x) / n
    m2 = sum((v - m) ** 2 for v in x) / n
    m3 = sum((v - m) ** 3 for v in x) / n
    return m3 / m2 ** 1.5 * math.sqrt(n * (n - 1)) / (n - 2)


def fixture_pairs():
    """Ten reproducible (x, y, d_h) triples with varied sizes, spreads and ties."""
    rng = np.random.default_rng(2024)
    out = []
    for k in range(10):
        nx, ny = 8 + 7 * k, 12 + 5 * k
        x = rng.normal(10 + 0.2 * k, 1 + 0.3 * k, nx)
        y = rng.normal(10, 1.5, ny)
        if k % 3 == 0:
            x, y = np.round(x, 1), np.round(y, 1)    # introduce ties
        out.append((x.tolist(), y.tolist(), 0.05 * k))
    return out
