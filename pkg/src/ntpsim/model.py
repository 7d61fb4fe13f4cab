"""Firm arithmetic: costs, revenues, contribution margins and profits.

One supplying division S sells an intermediate product to two buying
divisions 1 and 2. Every function here is pure and works on plain floats.
"""
from __future__ import annotations

from dataclasses import dataclass


class ParameterError(ValueError):
    """Raised when firm parameters leave the domain with interior optima."""


@dataclass(frozen=True)
class FirmParams:
    b: float = 12.0
    e_theta_s: float = 60.0
    e_theta_1: float = 100.0
    e_theta_2: float = 100.0
    sigma: float = 0.0
    lambda_s: float = 1.0
    lambda_1: float = 0.5
    lambda_2: float = 0.5

    def __post_init__(self) -> None:
        if not self.b > 0:
            raise ParameterError(f"b must be > 0 (got {self.b})")
        for name in ("lambda_s", "lambda_1", "lambda_2"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be > 0 (got {getattr(self, name)})")
        if not self.sigma >= 0:
            raise ParameterError(f"sigma must be >= 0 (got {self.sigma})")
        if not self.denominator > 0:
            raise ParameterError(
                "denominator b^2*lS*l1*l2 - b*(l1*lS + l2*lS + 2*l1*l2) + l1 + l2 + lS must be > 0 "
                f"(got {self.denominator:.6g})"
            )

    @property
    def denominator(self) -> float:
        """Shared denominator of the first-best closed forms."""
        b, ls, l1, l2 = self.b, self.lambda_s, self.lambda_1, self.lambda_2
        return b * b * l1 * l2 * ls - b * (l1 * ls + l2 * ls + 2 * l1 * l2) + l1 + l2 + ls

    @property
    def lambdas(self) -> tuple[float, float, float]:
        return (self.lambda_s, self.lambda_1, self.lambda_2)

    @property
    def means(self) -> tuple[float, float, float]:
        return (self.e_theta_s, self.e_theta_1, self.e_theta_2)

    def swapped(self) -> "FirmParams":
        """The same firm with buying divisions 1 and 2 relabelled."""
        return FirmParams(
            b=self.b, e_theta_s=self.e_theta_s,
            e_theta_1=self.e_theta_2, e_theta_2=self.e_theta_1,
            sigma=self.sigma, lambda_s=self.lambda_s,
            lambda_1=self.lambda_2, lambda_2=self.lambda_1,
        )


@dataclass(frozen=True)
class SharingRule:
    """Seller's share of each contribution margin (its bargaining power)."""

    gamma_1: float = 0.5
    gamma_2: float = 0.5

    def __post_init__(self) -> None:
        for name in ("gamma_1", "gamma_2"):
            g = getattr(self, name)
            if not 0.0 <= g <= 1.0:
                raise ParameterError(f"{name} must lie in [0, 1] (got {g})")


@dataclass(frozen=True)
class MarketDraw:
    theta_s: float
    theta_1: float
    theta_2: float


@dataclass(frozen=True)
class InvestmentVector:
    i_s: float
    i_1: float
    i_2: float

    def __post_init__(self) -> None:
        if min(self.i_s, self.i_1, self.i_2) < 0:
            raise ValueError(f"investments must be nonnegative: {self}")


@dataclass(frozen=True)
class ProfitBreakdown:
    pi_s: float
    pi_1: float
    pi_2: float
    pi_hq: float
    m_1: float
    m_2: float
    q_1: float
    q_2: float


def supplying_cost(theta_s: float, i_s: float, q1: float, q2: float) -> float:
    return (theta_s - i_s) * (q1 + q2)


def net_revenue(theta_j: float, i_j: float, q_j: float, b: float) -> float:
    return (theta_j - 0.5 * b * q_j + i_j) * q_j


def investment_cost(lambda_j: float, i_j: float) -> float:
    return 0.5 * lambda_j * i_j * i_j


def contribution_margin(theta_j: float, theta_s: float, i_j: float, i_s: float,
                        q_j: float, b: float) -> float:
    """Buyer j's net revenue less the seller's cost of the traded units."""
    return net_revenue(theta_j, i_j, q_j, b) - (theta_s - i_s) * q_j


def division_profits(draw: MarketDraw, inv: InvestmentVector, q1: float, q2: float,
                     rule: SharingRule, params: FirmParams) -> ProfitBreakdown:
    """Divisional and headquarters profits under linear margin sharing.

    The headquarters profit is computed from revenues and costs directly,
    not as the sum of divisional profits, so the adding-up identity is a
    genuine check.
    """
    b = params.b
    m1 = contribution_margin(draw.theta_1, draw.theta_s, inv.i_1, inv.i_s, q1, b)
    m2 = contribution_margin(draw.theta_2, draw.theta_s, inv.i_2, inv.i_s, q2, b)
    w_s = investment_cost(params.lambda_s, inv.i_s)
    w_1 = investment_cost(params.lambda_1, inv.i_1)
    w_2 = investment_cost(params.lambda_2, inv.i_2)
    pi_s = rule.gamma_1 * m1 + rule.gamma_2 * m2 - w_s
    pi_1 = (1.0 - rule.gamma_1) * m1 - w_1
    pi_2 = (1.0 - rule.gamma_2) * m2 - w_2
    pi_hq = (net_revenue(draw.theta_1, inv.i_1, q1, b)
             + net_revenue(draw.theta_2, inv.i_2, q2, b)
             - supplying_cost(draw.theta_s, inv.i_s, q1, q2)
             - w_s - w_1 - w_2)
    return ProfitBreakdown(pi_s, pi_1, pi_2, pi_hq, m1, m2, q1, q2)
