"""Action-index selection for the three exploration policies.

Indices are 0-based. Each selector comes in two flavours: ``*_index`` maps
pre-drawn uniforms to an index deterministically (used by the simulation
kernels, whose random-number layout is fixed) and ``*_select`` draws the
uniforms from a numpy Generator.

Ties in every argmax go to the lowest index.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

SELLER, BUYER_1, BUYER_2 = 0, 1, 2
AGENTS = ("S", "1", "2")


class PolicyKind(enum.IntEnum):
    BOLTZMANN = 0
    EGREEDY = 1
    UCB = 2


_ALIASES = {
    "boltzmann": PolicyKind.BOLTZMANN, "bm": PolicyKind.BOLTZMANN,
    "softmax": PolicyKind.BOLTZMANN,
    "egreedy": PolicyKind.EGREEDY, "greedy": PolicyKind.EGREEDY,
    "epsilon-greedy": PolicyKind.EGREEDY, "epsilon_greedy": PolicyKind.EGREEDY,
    "ucb": PolicyKind.UCB,
}


def parse_policy_kind(name: str | PolicyKind) -> PolicyKind:
    if isinstance(name, PolicyKind):
        return name
    try:
        return _ALIASES[str(name).strip().lower()]
    except KeyError:
        raise ValueError(f"unknown exploration policy {name!r}; "
                         f"expected one of boltzmann/BM, egreedy/Greedy, ucb") from None


@dataclass(frozen=True)
class PolicyConfig:
    kind: PolicyKind = PolicyKind.BOLTZMANN
    # (numerator, offset) of the rational temperature schedule, per agent
    boltzmann: tuple[tuple[float, float], ...] = ((49975.0, 498.75),
                                                  (24987.5, 498.75),
                                                  (24987.5, 498.75))
    t_learn: int = 2000
    ucb_c: tuple[float, float, float] = (60.0, 30.0, 30.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", parse_policy_kind(self.kind))
        if len(self.boltzmann) != 3 or len(self.ucb_c) != 3:
            raise ValueError("policy constants are needed for exactly three agents")
        if any(b1 <= 0 or b2 <= -1 for b1, b2 in self.boltzmann):
            raise ValueError("Boltzmann schedule must stay positive for t >= 1")
        if any(c < 0 for c in self.ucb_c):
            raise ValueError("UCB constants must be >= 0")
        if self.t_learn < 2:
            raise ValueError("t_learn must be at least 2")

    @property
    def name(self) -> str:
        return self.kind.name.lower()

    def kernel_params(self) -> np.ndarray:
        """Per-agent constants in the (3, 2) layout the kernels expect."""
        out = np.zeros((3, 2))
        if self.kind is PolicyKind.BOLTZMANN:
            out[:] = self.boltzmann
        elif self.kind is PolicyKind.EGREEDY:
            out[:, 0] = self.t_learn
        else:
            out[:, 0] = self.ucb_c
        return out


def boltzmann_beta(config: PolicyConfig, agent: int, t: int) -> float:
    b1, b2 = config.boltzmann[agent]
    return b1 / (b2 + t)


def boltzmann_probabilities(q_row, beta: float) -> np.ndarray:
    q = np.asarray(q_row, dtype=float)
    z = np.exp((q - q.max()) / beta)
    return z / z.sum()


def boltzmann_index(q_row, beta: float, u: float) -> int:
    """Inverse-CDF draw from the softmax of `q_row / beta` for uniform `u`."""
    m = max(q_row)
    weights = [math.exp((q - m) / beta) for q in q_row]
    total = 0.0
    for w in weights:
        total += w
    target = u * total
    acc = 0.0
    for k, w in enumerate(weights):
        acc += w
        if target < acc:
            return k
    return len(weights) - 1


def boltzmann_select(q_row, beta: float, rng: np.random.Generator) -> int:
    return boltzmann_index(q_row, beta, rng.random())


def greedy_index(q_row) -> int:
    best, best_k = q_row[0], 0
    for k in range(1, len(q_row)):
        if q_row[k] > best:
            best, best_k = q_row[k], k
    return best_k


def egreedy_epsilon(config: PolicyConfig, t: int) -> float:
    """Linear decay from 1 at t=1 to 0 at t=t_learn, zero afterwards."""
    t_l = config.t_learn
    if t >= t_l:
        return 0.0
    return min(1.0, max(0.0, (t_l - t) / (t_l - 1)))


def egreedy_index(q_row, epsilon: float, u_explore: float, u_pick: float) -> int:
    if u_explore < epsilon:
        return min(int(u_pick * len(q_row)), len(q_row) - 1)
    return greedy_index(q_row)


def egreedy_select(q_row, epsilon: float, rng: np.random.Generator) -> int:
    return egreedy_index(q_row, epsilon, rng.random(), rng.random())


def ucb_index(q_row, counts_row, c: float, t: int, u_pick: float) -> int:
    """Untried actions first (uniformly), else the largest upper confidence bound."""
    untried = [k for k, n in enumerate(counts_row) if n == 0]
    if untried:
        return untried[min(int(u_pick * len(untried)), len(untried) - 1)]
    log_t = math.log(t)
    best_k = 0
    best = q_row[0] + c * math.sqrt(log_t / counts_row[0])
    for k in range(1, len(q_row)):
        v = q_row[k] + c * math.sqrt(log_t / counts_row[k])
        if v > best:
            best, best_k = v, k
    return best_k


def ucb_select(q_row, counts_row, c: float, t: int, rng: np.random.Generator) -> int:
    return ucb_index(q_row, counts_row, c, t, rng.random())
