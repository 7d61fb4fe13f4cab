"""Self-check suite behind ``ntpsim validate``.

Each check returns a :class:`Check`; none of them raises on a failed
comparison. The analytic functions are looked up on their module at call
time so a patched formula is picked up by the checks.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import analytic, reference
from .exploration import PolicyConfig, PolicyKind, boltzmann_beta, boltzmann_probabilities, egreedy_epsilon
from .fuzzy import PAPER_PARTITION, activations
from .model import FirmParams, InvestmentVector, SharingRule

TABLE_TOL = 0.01 + 1e-9      # two printed decimals
GRAD_TOL = 1e-4
FD_STEP = 1e-5
CLOSED_FORM_RTOL = 1e-6


@dataclass
class Check:
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return asdict(self)


def _params(l1: float, l2: float) -> FirmParams:
    return FirmParams(lambda_s=1.0, lambda_1=l1, lambda_2=l2)


def check_table(which: str) -> Check:
    rows = reference.FIRST_BEST_ROWS if which == "first_best" else reference.SECOND_BEST_ROWS
    worst, worst_at = 0.0, ""
    for row in rows:
        l1, l2 = row[3], row[4]
        p = _params(l1, l2)
        rule = analytic.optimal_gammas(p)
        sol = analytic.first_best(p, rule) if which == "first_best" else analytic.second_best(p, rule)
        for name, expected in zip(reference.ROW_FIELDS, row[5:]):
            err = abs(getattr(sol, name) - expected)
            if err > worst:
                worst, worst_at = err, f"lambda=({l1}, {l2}) {name}"
    return Check(f"table_{which}", worst <= TABLE_TOL,
                 f"{len(rows)} rows, max abs error {worst:.3g}" + (f" at {worst_at}" if worst_at else ""))


def check_gamma_stationarity() -> Check:
    worst = 0.0
    for l1, l2 in reference.LAMBDA_CONFIGS:
        p = _params(l1, l2)
        g = analytic.optimal_gammas(p)
        f = analytic.expected_hq_profit_at
        h = FD_STEP
        d1 = (f(p, SharingRule(g.gamma_1 + h, g.gamma_2)) - f(p, SharingRule(g.gamma_1 - h, g.gamma_2))) / (2 * h)
        d2 = (f(p, SharingRule(g.gamma_1, g.gamma_2 + h)) - f(p, SharingRule(g.gamma_1, g.gamma_2 - h))) / (2 * h)
        worst = max(worst, math.hypot(d1, d2))
    return Check("gamma_stationarity", worst < GRAD_TOL,
                 f"max |grad| {worst:.3g} over {len(reference.LAMBDA_CONFIGS)} configurations")


def check_investment_stationarity() -> Check:
    worst = 0.0
    for l1, l2 in reference.LAMBDA_CONFIGS:
        p = _params(l1, l2)
        fb = analytic.first_best(p)
        base = np.array([fb.i_s, fb.i_1, fb.i_2])
        grad = []
        for k in range(3):
            e = np.zeros(3)
            e[k] = FD_STEP
            up = analytic.expected_hq_profit(p, InvestmentVector(*(base + e)))
            dn = analytic.expected_hq_profit(p, InvestmentVector(*(base - e)))
            grad.append((up - dn) / (2 * FD_STEP))
        worst = max(worst, float(np.linalg.norm(grad)))
    return Check("investment_stationarity", worst < GRAD_TOL, f"max |grad| {worst:.3g}")


def check_closed_form_profit() -> Check:
    worst = 0.0
    for l1, l2 in reference.LAMBDA_CONFIGS:
        p = _params(l1, l2)
        composed = analytic.expected_hq_profit_at(p, analytic.optimal_gammas(p))
        direct = analytic.hq_profit_at_optimal_gammas(p)
        worst = max(worst, abs(composed - direct) / abs(direct))
    return Check("closed_form_hq_profit", worst < CLOSED_FORM_RTOL, f"max rel diff {worst:.3g}")


def check_dominance() -> Check:
    bad = []
    grids = [(g, g) for g in reference.SYMMETRIC_GAMMA_GRID] + list(reference.NONSYMMETRIC_GAMMA_GRID)
    for l1, l2 in reference.LAMBDA_CONFIGS:
        p = _params(l1, l2)
        fb = analytic.first_best(p)
        for g1, g2 in grids:
            sb = analytic.second_best(p, SharingRule(g1, g2))
            if (sb.pi_hq > fb.pi_hq + 1e-9 or sb.i_s > fb.i_s + 1e-9
                    or sb.i_1 > fb.i_1 + 1e-9 or sb.i_2 > fb.i_2 + 1e-9):
                bad.append((l1, l2, g1, g2))
    return Check("second_best_dominated", not bad,
                 "ok" if not bad else f"{len(bad)} violations, first {bad[0]}")


def check_partition_of_unity(n: int = 1000, seed: int = 12345) -> Check:
    rng = np.random.default_rng(seed)
    states = rng.uniform(-5.0, 55.0, size=(n, 3))
    worst = max(abs(activations(PAPER_PARTITION, s).sum() - 1.0) for s in states)
    return Check("partition_of_unity", bool(worst < 1e-9), f"{n} states, max |sum-1| {worst:.3g}")


def check_schedules() -> Check:
    bm = PolicyConfig(PolicyKind.BOLTZMANN)
    eg = PolicyConfig(PolicyKind.EGREEDY)
    got = {
        "beta_s(1)": (boltzmann_beta(bm, 0, 1), 100.0),
        "beta_s(2000)": (boltzmann_beta(bm, 0, 2000), 20.0),
        "beta_1(1)": (boltzmann_beta(bm, 1, 1), 50.0),
        "beta_1(2000)": (boltzmann_beta(bm, 1, 2000), 10.0),
        "eps(1)": (egreedy_epsilon(eg, 1), 1.0),
        "eps(2000)": (egreedy_epsilon(eg, 2000), 0.0),
    }
    bad = [f"{k}={v!r}" for k, (v, want) in got.items() if v != want]
    return Check("schedule_boundaries", not bad, "exact" if not bad else ", ".join(bad))


def check_boltzmann(seed: int = 7) -> Check:
    rng = np.random.default_rng(seed)
    worst, monotone = 0.0, True
    for _ in range(200):
        q = rng.normal(0, 50, size=11)
        p = boltzmann_probabilities(q, float(rng.uniform(1, 100)))
        worst = max(worst, abs(p.sum() - 1.0))
        order = np.argsort(q)
        monotone &= bool(np.all(np.diff(p[order]) >= -1e-15))
    return Check("boltzmann_probabilities", worst < 1e-12 and monotone,
                 f"max |sum-1| {worst:.3g}, monotone={monotone}")


CHECKS = (
    lambda: check_table("first_best"),
    lambda: check_table("second_best"),
    check_gamma_stationarity,
    check_investment_stationarity,
    check_closed_form_profit,
    check_dominance,
    check_partition_of_unity,
    check_schedules,
    check_boltzmann,
)


def run_all() -> list[Check]:
    out = []
    for fn in CHECKS:
        try:
            out.append(fn())
        except Exception as exc:  # noqa: BLE001 - a crashing check is a failed check
            name = getattr(fn, "__name__", "check")
            out.append(Check(name, False, f"{type(exc).__name__}: {exc}"))
    return out
