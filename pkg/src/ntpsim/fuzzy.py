"""Zero-order Takagi-Sugeno rule base with fuzzy Q-learning.

Each of the three state dimensions is covered by triangular membership
functions forming a strong fuzzy partition. A rule is a triple of labels,
so with P labels per dimension there are P**3 rules. Rules are numbered
``i = l_s * P**2 + l_1 * P + l_2`` (0-based labels).

Because at most two labels are non-zero on each dimension, at most eight
rules fire for any state. `active_rules` returns those eight rules in a fixed
slot order; the simulation kernels consume random numbers per slot, so the
order is part of the reproducibility contract.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import IO

import numpy as np

N_DIMS = 3
N_SLOTS = 2 ** N_DIMS


@dataclass(frozen=True)
class MembershipPartition:
    peaks: tuple[float, ...] = (0.0, 12.5, 25.0, 37.5, 50.0)

    def __post_init__(self) -> None:
        p = np.asarray(self.peaks, dtype=float)
        if p.size < 2 or np.any(np.diff(p) <= 0):
            raise ValueError("peaks must be strictly increasing with at least two entries")

    @property
    def n_labels(self) -> int:
        return len(self.peaks)

    def clamp(self, s: float) -> float:
        return min(max(float(s), self.peaks[0]), self.peaks[-1])

    def bracket(self, s: float) -> tuple[int, float, float]:
        """Lower label index and the grades of the lower and upper label."""
        s = self.clamp(s)
        peaks = self.peaks
        lo = len(peaks) - 2
        for k in range(len(peaks) - 1):
            if s < peaks[k + 1]:
                lo = k
                break
        upper = (s - peaks[lo]) / (peaks[lo + 1] - peaks[lo])
        return lo, 1.0 - upper, upper

    def membership(self, s: float) -> np.ndarray:
        grades = np.zeros(self.n_labels)
        lo, w_lo, w_hi = self.bracket(s)
        grades[lo] = w_lo
        grades[lo + 1] = w_hi
        return grades


PAPER_PARTITION = MembershipPartition()
PAPER_ACTIONS = tuple(5.0 * k for k in range(11))


def rule_index(labels: tuple[int, int, int], n_labels: int) -> int:
    ls, l1, l2 = labels
    return (ls * n_labels + l1) * n_labels + l2


def rule_labels(i: int, n_labels: int) -> tuple[int, int, int]:
    ls, rest = divmod(i, n_labels * n_labels)
    l1, l2 = divmod(rest, n_labels)
    return ls, l1, l2


def active_rules(partition: MembershipPartition, state) -> tuple[np.ndarray, np.ndarray]:
    """The eight candidate rules for `state` and their T-norm product weights.

    Slot ``b = 4*b_s + 2*b_1 + b_2`` takes the lower (0) or upper (1) label
    on each dimension. Some weights may be zero.
    """
    P = partition.n_labels
    brackets = [partition.bracket(s) for s in state]
    idx = np.empty(N_SLOTS, dtype=np.intp)
    w = np.empty(N_SLOTS)
    for slot in range(N_SLOTS):
        labels = []
        weight = 1.0
        for d in range(N_DIMS):
            bit = (slot >> (N_DIMS - 1 - d)) & 1
            lo, w_lo, w_hi = brackets[d]
            labels.append(lo + bit)
            weight *= w_hi if bit else w_lo
        idx[slot] = rule_index(tuple(labels), P)
        w[slot] = weight
    return idx, w


def activations(partition: MembershipPartition, state) -> np.ndarray:
    """Truth value of every rule for `state` (length P**3, sums to one)."""
    grades = [partition.membership(s) for s in state]
    return np.einsum("i,j,k->ijk", *grades).ravel()


@dataclass
class RuleBase:
    """Stored actions, q-values and selection counts of one agent."""

    actions: np.ndarray
    q: np.ndarray
    counts: np.ndarray
    partition: MembershipPartition = field(default=PAPER_PARTITION)

    @classmethod
    def zeros(cls, partition: MembershipPartition = PAPER_PARTITION,
              action_values=PAPER_ACTIONS) -> "RuleBase":
        n_rules = partition.n_labels ** N_DIMS
        row = np.asarray(action_values, dtype=float)
        actions = np.tile(row, (n_rules, 1))
        return cls(actions, np.zeros_like(actions), np.zeros_like(actions), partition)

    @property
    def n_rules(self) -> int:
        return self.q.shape[0]

    @property
    def n_actions(self) -> int:
        return self.q.shape[1]


def infer(rb: RuleBase, act: np.ndarray, chosen: np.ndarray) -> tuple[float, float]:
    """Inferred action and q-value for per-rule action indices `chosen`."""
    chosen = np.asarray(chosen)
    if chosen.shape != (rb.n_rules,):
        raise IndexError(f"need one chosen index per rule ({rb.n_rules}), got {chosen.shape}")
    if chosen.min() < 0 or chosen.max() >= rb.n_actions:
        raise IndexError("chosen action index out of range")
    rows = np.arange(rb.n_rules)
    return float(act @ rb.actions[rows, chosen]), float(act @ rb.q[rows, chosen])


def greedy_value(rb: RuleBase, act: np.ndarray) -> float:
    return float(act @ rb.q.max(axis=1))


def td_update(rb: RuleBase, act_t: np.ndarray, chosen: np.ndarray, reward: float,
              act_next: np.ndarray, alpha: float, gamma: float) -> float:
    """Apply one fuzzy Q-learning step in place and return the TD error.

    Only the chosen cell of each firing rule moves, by its truth value
    times the TD error.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"learning rate must be in (0, 1], got {alpha}")
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"discount factor must be in [0, 1), got {gamma}")
    _, q_now = infer(rb, act_t, chosen)
    delta = alpha * (reward + gamma * greedy_value(rb, act_next) - q_now)
    firing = np.flatnonzero(act_t > 0)
    rb.q[firing, np.asarray(chosen)[firing]] += act_t[firing] * delta
    return delta


def dump_rule_base(rb: RuleBase, fh: IO[str], agent: str = "") -> None:
    """Write one CSV row per (rule, stored action)."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["agent", "rule", "label_s", "label_1", "label_2",
                     "action_index", "action", "q", "count"])
    P = rb.partition.n_labels
    for i in range(rb.n_rules):
        ls, l1, l2 = rule_labels(i, P)
        for k in range(rb.n_actions):
            writer.writerow([agent, i, ls, l1, l2, k, f"{rb.actions[i, k]:.6g}",
                             f"{rb.q[i, k]:.6g}", int(rb.counts[i, k])])
