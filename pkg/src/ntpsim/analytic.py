"""Closed-form first-best and second-best benchmarks.

All closed forms are evaluated at the expected state variables. Investments
are never clamped: parameters outside the interior-optimum domain are
rejected instead.
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import (FirmParams, InvestmentVector, MarketDraw, ParameterError,
                    SharingRule, division_profits)

FIFTY_FIFTY = SharingRule(0.5, 0.5)


@dataclass(frozen=True)
class FirstBestSolution:
    i_s: float
    i_1: float
    i_2: float
    q_1: float
    q_2: float
    pi_hq: float
    pi_s: float
    pi_1: float
    pi_2: float


@dataclass(frozen=True)
class SecondBestSolution:
    i_s: float
    i_1: float
    i_2: float
    q_1: float
    q_2: float
    pi_hq: float
    pi_s: float
    pi_1: float
    pi_2: float
    gamma_1: float
    gamma_2: float


def _margins(p: FirmParams) -> tuple[float, float, float]:
    d1 = p.e_theta_1 - p.e_theta_s
    d2 = p.e_theta_2 - p.e_theta_s
    return d1, d2, p.e_theta_1 - p.e_theta_2


def expected_draw(params: FirmParams) -> MarketDraw:
    return MarketDraw(params.e_theta_s, params.e_theta_1, params.e_theta_2)


def best_response_quantities(params: FirmParams, inv: InvestmentVector) -> tuple[float, float]:
    """Ex-post efficient quantities at the expected state, unclamped."""
    b = params.b
    return ((params.e_theta_1 - params.e_theta_s + inv.i_s + inv.i_1) / b,
            (params.e_theta_2 - params.e_theta_s + inv.i_s + inv.i_2) / b)


def expected_hq_profit(params: FirmParams, inv: InvestmentVector) -> float:
    """Expected HQ profit for given investments when quantities respond efficiently."""
    q1, q2 = best_response_quantities(params, inv)
    return division_profits(expected_draw(params), inv, q1, q2, FIFTY_FIFTY, params).pi_hq


def first_best(params: FirmParams, rule: SharingRule = FIFTY_FIFTY) -> FirstBestSolution:
    """First-best investments, quantities and HQ profit.

    `rule` only affects how the divisional profits are reported; the
    first-best allocation itself does not depend on it.
    """
    b, ls, l1, l2 = params.b, params.lambda_s, params.lambda_1, params.lambda_2
    d1, d2, d12 = _margins(params)
    den = params.denominator
    if not den > 0:
        raise ParameterError(f"first-best denominator must be > 0 (got {den})")

    i_s = (d1 * (b * l1 * l2 - l1) + d2 * (b * l1 * l2 - l2)) / den
    i_1 = (d1 * (b * l2 * ls - l2 - ls) + d2 * l2) / den
    i_2 = (d2 * (b * l1 * ls - l1 - ls) + d1 * l1) / den
    q_1 = d1 / b + (d1 * (b * l1 * l2 + b * l2 * ls - l1 - l2 - ls) + d2 * b * l1 * l2) / (b * den)
    q_2 = d2 / b + (d2 * (b * l1 * l2 + b * l1 * ls - l1 - l2 - ls) + d1 * b * l1 * l2) / (b * den)
    pi_hq = (d1 ** 2 * (b * l1 * l2 * ls - l1 * ls)
             + d2 ** 2 * (b * l1 * l2 * ls - l2 * ls)
             - d12 ** 2 * l1 * l2) / (2.0 * den)

    prof = division_profits(expected_draw(params), InvestmentVector(i_s, i_1, i_2),
                            q_1, q_2, rule, params)
    return FirstBestSolution(i_s, i_1, i_2, q_1, q_2, pi_hq, prof.pi_s, prof.pi_1, prof.pi_2)


def second_best_denominator(params: FirmParams, rule: SharingRule) -> float:
    b, ls, l1, l2 = params.b, params.lambda_s, params.lambda_1, params.lambda_2
    g1, g2 = rule.gamma_1, rule.gamma_2
    return (b * b * l1 * l2 * ls
            - b * ((1 - g1) * l2 * ls + (1 - g2) * l1 * ls + (g1 + g2) * l1 * l2)
            + (1 - g1) * (1 - g2) * ls + g1 * (1 - g2) * l1 + (1 - g1) * g2 * l2)


def second_best(params: FirmParams, rule: SharingRule) -> SecondBestSolution:
    """Subgame-perfect investments and expected quantities for a given sharing rule.

    The HQ profit is obtained by evaluating the profit functions at the
    equilibrium, which is valid for any rule (the dedicated closed form
    `hq_profit_at_optimal_gammas` only holds at the optimal rule).
    """
    b, ls, l1, l2 = params.b, params.lambda_s, params.lambda_1, params.lambda_2
    g1, g2 = rule.gamma_1, rule.gamma_2
    d1, d2, d12 = _margins(params)
    den = second_best_denominator(params, rule)
    if not den > 0:
        raise ParameterError(f"second-best denominator must be > 0 (got {den:.6g})")

    i_s = ((g1 * d1 + g2 * d2) * b * l1 * l2
           - d1 * g1 * (1 - g2) * l1
           - d2 * (1 - g1) * g2 * l2) / den
    i_1 = (d1 * (1 - g1) * b * l2 * ls
           - d1 * (1 - g1) * (1 - g2) * ls
           - d12 * (1 - g1) * g2 * l2) / den
    i_2 = (d2 * (1 - g2) * b * l1 * ls
           - d2 * (1 - g1) * (1 - g2) * ls
           + d12 * g1 * (1 - g2) * l1) / den
    q_1 = d1 / b + (d1 * (b * l2 * ((1 - g1) * ls + g1 * l1)
                          - g1 * (1 - g2) * l1
                          - (1 - g1) * g2 * l2
                          - (1 - g1) * (1 - g2) * ls)
                    + d2 * g2 * b * l1 * l2) / (b * den)
    q_2 = d2 / b + (d2 * (b * l1 * ((1 - g2) * ls + g2 * l2)
                          - (1 - g1) * g2 * l2
                          - (1 - g2) * g1 * l1
                          - (1 - g1) * (1 - g2) * ls)
                    + d1 * g1 * b * l1 * l2) / (b * den)

    prof = division_profits(expected_draw(params), InvestmentVector(i_s, i_1, i_2),
                            q_1, q_2, rule, params)
    return SecondBestSolution(i_s, i_1, i_2, q_1, q_2, prof.pi_hq,
                              prof.pi_s, prof.pi_1, prof.pi_2, g1, g2)


def optimal_gammas(params: FirmParams) -> SharingRule:
    """Sharing rule that maximises expected HQ profit in the subgame-perfect equilibrium."""
    b, ls, l1, l2 = params.b, params.lambda_s, params.lambda_1, params.lambda_2
    d1, d2, d12 = _margins(params)
    d21 = -d12

    num1 = (d1 * ls * (b * l1 * (l1 + l2 - b * l1 * l2) - l1)
            + d2 * ls * (b * l1 * l2 * (2 - b * l1) - l2))
    den1 = (d1 * l1 * ls * (b * (l1 + 4 * l2 + ls) - b * b * l2 * (l1 + l2 + ls) - 3)
            + d2 * l2 * ls * (b * l1 - 1)
            + d12 * l1 * l2 * (b * l1 + b * l2 - 2))
    num2 = (d2 * ls * (b * l2 * (l1 + l2 - b * l1 * l2) - l2)
            + d1 * ls * (b * l1 * l2 * (2 - b * l2) - l1))
    den2 = (d2 * l2 * ls * (b * (l2 + 4 * l1 + ls) - b * b * l1 * (l1 + l2 + ls) - 3)
            + d1 * l1 * ls * (b * l2 - 1)
            + d21 * l1 * l2 * (b * l1 + b * l2 - 2))
    if den1 == 0 or den2 == 0:
        raise ParameterError("optimal sharing rule is undefined (zero denominator)")
    return SharingRule(num1 / den1, num2 / den2)


def expected_hq_profit_at(params: FirmParams, rule: SharingRule) -> float:
    return second_best(params, rule).pi_hq


def hq_profit_at_optimal_gammas(params: FirmParams) -> float:
    """Closed-form expected HQ profit at the optimal sharing rule.

    Kept separate from `expected_hq_profit_at` so the two can cross-check
    each other.
    """
    b, ls, l1, l2 = params.b, params.lambda_s, params.lambda_1, params.lambda_2
    d1, d2, d12 = _margins(params)
    cube = l1 * l2 * ls * ls + l1 * l2 * l2 * ls + l1 * l1 * l2 * ls
    lsum = l1 + l2 + ls
    num = (d1 ** 2 * (b * b * cube - b * (l1 * ls * ls + 3 * l1 * l2 * ls + l1 * l1 * ls) + 2 * l1 * ls)
           + d2 ** 2 * (b * b * cube - b * (l2 * ls * ls + 3 * l1 * l2 * ls + l2 * l2 * ls) + 2 * l2 * ls)
           - d12 ** 2 * (b * (l1 * l2 * l2 + l1 * l1 * l2) - 2 * l1 * l2))
    den = 2.0 * (b ** 3 * cube
                 - b * b * lsum * (l1 * ls + 2 * l1 * l2 + l2 * ls)
                 + b * (lsum ** 2 + 4 * l1 * l2 + l1 * ls + l2 * ls)
                 - 2 * lsum)
    if den == 0:
        raise ParameterError("closed-form optimal HQ profit is undefined (zero denominator)")
    return num / den
