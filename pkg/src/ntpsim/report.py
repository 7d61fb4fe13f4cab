"""Tabular outputs built from grid results: summaries, indicators, timelines.

All writers emit UTF-8 CSV with LF line endings and floats at six
significant digits.
"""
from __future__ import annotations

import csv
import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

from .analytic import first_best, optimal_gammas, second_best
from .runner import SERIES, TRACE_SERIES, GridCell, GridResults, summarize
from .stats import IndicatorCell, indicators, weighted_gamma_mean

log = logging.getLogger(__name__)

CELL_FIELDS = ("lambda_1", "lambda_2", "gamma_1", "gamma_2", "discount", "sigma", "policy")
INDICATOR_FIELDS = CELL_FIELDS + ("mean_pi_hq", "sd", "skewness", "fbi", "sbi", "bpi",
                                  "p_welch", "p_wilcoxon", "significance_class")
SUMMARY_FIELDS = ("lambda_s",) + CELL_FIELDS + ("series", "n", "mean", "sd", "skewness",
                                                "p25", "p50", "p75", "whisker_lo", "whisker_hi",
                                                "first_best", "second_best")
GAMMA_RULE_FIELDS = ("lambda_1", "lambda_2", "discount", "sigma", "policy", "n_significant",
                     "gamma_1_weighted", "gamma_2_weighted", "gamma_1_sb", "gamma_2_sb")
TIMELINE_FIELDS = CELL_FIELDS + ("series", "step", "mean", "p25", "p50", "p75",
                                 "whisker_lo", "whisker_hi")
BASELINE_TOL = 0.01


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6g}"
    if v is None:
        return ""
    return str(v)


def write_csv(fh: IO[str], header: Iterable[str], rows: Iterable[Iterable]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(list(header))
    for row in rows:
        w.writerow([fmt(v) for v in row])


def cell_coords(cell: GridCell) -> tuple:
    s = cell.spec
    return (s.params.lambda_1, s.params.lambda_2, s.rule.gamma_1, s.rule.gamma_2,
            s.gamma, s.params.sigma, s.policy.name)


def _benchmark_value(spec, series: str, which: str) -> float:
    sol = first_best(spec.params, spec.rule) if which == "fb" else second_best(spec.params, spec.rule)
    return float(getattr(sol, series))


def summary_rows(results: GridResults, series: Iterable[str] = SERIES):
    for cell in results.cells:
        for name in series:
            sm = summarize(cell.column(name))
            yield ((cell.spec.params.lambda_s,) + cell_coords(cell)
                   + (name, sm.n, sm.mean, sm.sd, sm.skewness, sm.p25, sm.p50, sm.p75,
                      sm.whisker_lo, sm.whisker_hi,
                      _benchmark_value(cell.spec, name, "fb"),
                      _benchmark_value(cell.spec, name, "sb")))


def _group_key(cell: GridCell) -> tuple:
    s = cell.spec
    return (s.params, s.gamma, s.policy.name, s.t_learn, s.t_eval,
            s.freeze_eval, s.greedy_eval)


def find_baseline(results: GridResults, cell: GridCell) -> GridCell | None:
    """Cell sharing everything with `cell` except a sharing rule at the optimum."""
    opt = optimal_gammas(cell.spec.params)
    best, best_gap = None, BASELINE_TOL
    for other in results.cells:
        if _group_key(other) != _group_key(cell):
            continue
        gap = max(abs(other.spec.rule.gamma_1 - opt.gamma_1),
                  abs(other.spec.rule.gamma_2 - opt.gamma_2))
        if gap <= best_gap + 1e-12:
            best, best_gap = other, gap
    return best


@dataclass
class IndicatorRow:
    cell: GridCell
    indicator: IndicatorCell

    def as_row(self) -> tuple:
        pi = self.cell.column("pi_hq")
        sm = summarize(pi)
        ic = self.indicator
        return cell_coords(self.cell) + (ic.mean_pi_hq, sm.sd, sm.skewness, ic.fbi, ic.sbi,
                                         ic.bpi, ic.p_welch, ic.p_wilcoxon,
                                         ic.significance_class)


def indicator_rows(results: GridResults, margin: float = 0.01) -> list[IndicatorRow]:
    rows = []
    for cell in results.cells:
        base = find_baseline(results, cell)
        if base is None:
            log.warning("no baseline cell for %s; indicators skipped", cell.key)
            continue
        spec = cell.spec
        pi_fb = first_best(spec.params).pi_hq
        pi_sb = second_best(spec.params, spec.rule).pi_hq
        try:
            ic = indicators(cell.column("pi_hq"), pi_fb, pi_sb, base.column("pi_hq"),
                            spec.rule.gamma_1, spec.rule.gamma_2, spec.gamma, margin)
        except ValueError as exc:
            log.warning("indicators skipped for %s: %s", cell.key, exc)
            continue
        rows.append(IndicatorRow(cell, ic))
    return rows


def gamma_rule_rows(rows: list[IndicatorRow]):
    """Weighted rule-of-thumb sharing parameter per (lambda, discount, sigma, policy)."""
    groups: dict[tuple, list[IndicatorRow]] = defaultdict(list)
    for r in rows:
        s = r.cell.spec
        groups[(s.params.lambda_1, s.params.lambda_2, s.gamma, s.params.sigma,
                s.policy.name)].append(r)
    for key, members in groups.items():
        ics = [m.indicator for m in members]
        opt = optimal_gammas(members[0].cell.spec.params)
        n_sig = sum(1 for c in ics if c.significant and c.bpi > 0)
        yield key + (n_sig, weighted_gamma_mean(ics, "gamma_1"),
                     weighted_gamma_mean(ics, "gamma_2"), opt.gamma_1, opt.gamma_2)


def timeline_rows(results: GridResults):
    """Per-step modified-boxplot statistics across replications."""
    for cell in results.cells:
        if cell.traces is None:
            continue
        coords = cell_coords(cell)
        tr = cell.traces.astype(float)
        q25, q50, q75 = np.percentile(tr, [25, 50, 75], axis=0)
        mean = tr.mean(axis=0)
        iqr = q75 - q25
        lo_fence, hi_fence = q25 - 1.5 * iqr, q75 + 1.5 * iqr
        inside = (tr >= lo_fence) & (tr <= hi_fence)
        w_lo = np.where(inside, tr, np.inf).min(axis=0)
        w_hi = np.where(inside, tr, -np.inf).max(axis=0)
        for si, name in enumerate(TRACE_SERIES):
            for k, step in enumerate(cell.trace_steps):
                yield coords + (name, int(step), mean[k, si], q25[k, si], q50[k, si],
                                q75[k, si], w_lo[k, si], w_hi[k, si])


def replication_rows(results: GridResults):
    for cell in results.cells:
        coords = cell_coords(cell)
        for r, vals in enumerate(cell.eval_means):
            yield coords + (r,) + tuple(vals)


REPLICATION_FIELDS = CELL_FIELDS + ("run",) + SERIES
