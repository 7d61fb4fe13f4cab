"""One period of the agentized firm: draw the market, trade, pay out."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (FirmParams, InvestmentVector, MarketDraw, ProfitBreakdown,
                    SharingRule, division_profits)

INITIAL_STATE = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class EnvStep:
    draw: MarketDraw
    investments: InvestmentVector
    quantities: tuple[float, float]
    profits: ProfitBreakdown
    next_state: tuple[float, float, float]

    @property
    def rewards(self) -> tuple[float, float, float]:
        p = self.profits
        return (p.pi_s, p.pi_1, p.pi_2)


def draw_thetas(params: FirmParams, rng: np.random.Generator) -> MarketDraw:
    """Independent, untruncated normal state variables."""
    z = rng.standard_normal(3)
    s = params.sigma
    return MarketDraw(params.e_theta_s + s * z[0],
                      params.e_theta_1 + s * z[1],
                      params.e_theta_2 + s * z[2])


def negotiated_quantities(draw: MarketDraw, inv: InvestmentVector, b: float) -> tuple[float, float]:
    """Ex-post efficient quantities; negative solutions mean no trade."""
    q1 = (draw.theta_1 - draw.theta_s + inv.i_s + inv.i_1) / b
    q2 = (draw.theta_2 - draw.theta_s + inv.i_s + inv.i_2) / b
    return max(0.0, q1), max(0.0, q2)


def next_state(inv: InvestmentVector) -> tuple[float, float, float]:
    """Agents observe the previous period's investment triple."""
    return (inv.i_s, inv.i_1, inv.i_2)


def env_step(state, actions: InvestmentVector, params: FirmParams, rule: SharingRule,
             rng: np.random.Generator) -> EnvStep:
    # investments are sunk before the market is observed
    draw = draw_thetas(params, rng)
    q1, q2 = negotiated_quantities(draw, actions, params.b)
    profits = division_profits(draw, actions, q1, q2, rule, params)
    return EnvStep(draw, actions, (q1, q2), profits, next_state(actions))
