import io
import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ntpsim.fuzzy import (PAPER_PARTITION, MembershipPartition, RuleBase, activations,
                          active_rules, dump_rule_base, greedy_value, infer, rule_index,
                          rule_labels, td_update)

P = PAPER_PARTITION.n_labels


@pytest.mark.parametrize("s,expected", [
    (10.0, (0.2, 0.8, 0, 0, 0)),
    (0.0, (1, 0, 0, 0, 0)),
    (25.0, (0, 0, 1, 0, 0)),
    (50.0, (0, 0, 0, 0, 1)),
    (60.0, (0, 0, 0, 0, 1)),     # clamped to the hull
])
def test_membership(s, expected):
    assert PAPER_PARTITION.membership(s) == pytest.approx(expected)


def test_partition_rejects_unsorted_peaks():
    with pytest.raises(ValueError):
        MembershipPartition((0.0, 10.0, 5.0))


def test_rule_index_roundtrip():
    for labels in itertools.product(range(P), repeat=3):
        assert rule_labels(rule_index(labels, P), P) == labels
    assert sorted(rule_index(l, P) for l in itertools.product(range(P), repeat=3)) == list(range(P ** 3))


def test_corner_state_is_one_hot():
    act = activations(PAPER_PARTITION, (0, 0, 0))
    assert act[0] == 1.0 and act.sum() == 1.0


def test_activation_of_off_peak_seller_state():
    act = activations(PAPER_PARTITION, (10, 0, 0))
    assert act[rule_index((0, 0, 0), P)] == pytest.approx(0.2)
    assert act[rule_index((1, 0, 0), P)] == pytest.approx(0.8)
    assert np.count_nonzero(act) == 2


@settings(max_examples=200, deadline=None)
@given(st.tuples(*[st.floats(-10, 60, allow_nan=False)] * 3))
def test_partition_of_unity(state):
    act = activations(PAPER_PARTITION, state)
    assert abs(act.sum() - 1.0) < 1e-9
    assert act.min() >= 0.0


@settings(max_examples=100, deadline=None)
@given(st.tuples(*[st.floats(0, 50)] * 3))
def test_active_rules_cover_all_mass(state):
    idx, w = active_rules(PAPER_PARTITION, state)
    dense = np.zeros(P ** 3)
    np.add.at(dense, idx, w)
    assert dense == pytest.approx(activations(PAPER_PARTITION, state), abs=1e-15)


def test_infer_zero_table():
    rb = RuleBase.zeros()
    act = activations(PAPER_PARTITION, (17, 3, 44))
    chosen = np.full(rb.n_rules, 4)
    A, Q = infer(rb, act, chosen)
    assert Q == 0.0 and A == pytest.approx(20.0)


def test_infer_one_hot():
    rb = RuleBase.zeros()
    r = rule_index((2, 3, 1), P)
    rb.q[r, 6] = 7.5
    act = np.zeros(rb.n_rules)
    act[r] = 1.0
    chosen = np.zeros(rb.n_rules, dtype=int)
    chosen[r] = 6
    assert infer(rb, act, chosen) == (30.0, 7.5)


def test_infer_convex_combination_of_equal_actions():
    rb = RuleBase.zeros()
    act = activations(PAPER_PARTITION, (10, 0, 0))
    A, _ = infer(rb, act, np.full(rb.n_rules, 2))
    assert A == pytest.approx(10.0)


@pytest.mark.parametrize("chosen", [np.zeros(3, dtype=int), np.full(125, 11)])
def test_infer_rejects_bad_indices(chosen):
    rb = RuleBase.zeros()
    with pytest.raises(IndexError):
        infer(rb, activations(PAPER_PARTITION, (0, 0, 0)), chosen)


def test_greedy_value_brute_force():
    rng = np.random.default_rng(3)
    rb = RuleBase.zeros()
    rb.q[:] = rng.normal(size=rb.q.shape)
    act = activations(PAPER_PARTITION, (10, 0, 0))
    firing = np.flatnonzero(act)
    best = max(sum(act[r] * rb.q[r, k] for r, k in zip(firing, ks))
               for ks in itertools.product(range(rb.n_actions), repeat=len(firing)))
    assert greedy_value(rb, act) == pytest.approx(best, rel=1e-12)


def test_td_zero_error_leaves_table():
    rb = RuleBase.zeros()
    rb.q[0, 3] = 4.0
    act = activations(PAPER_PARTITION, (0, 0, 0))
    chosen = np.full(rb.n_rules, 3)
    before = rb.q.copy()
    assert td_update(rb, act, chosen, 4.0, act, 0.5, 0.0) == 0.0
    assert np.array_equal(rb.q, before)


def test_td_single_step():
    rb = RuleBase.zeros()
    act = activations(PAPER_PARTITION, (0, 0, 0))
    chosen = np.full(rb.n_rules, 5)
    td_update(rb, act, chosen, 10.0, act, 0.5, 0.0)
    assert rb.q[0, 5] == 5.0
    assert np.count_nonzero(rb.q) == 1


def test_td_two_rule_split():
    rb = RuleBase.zeros()
    rb.q[:, :] = 1.0
    act = activations(PAPER_PARTITION, (10, 0, 0))
    nxt = activations(PAPER_PARTITION, (0, 0, 0))
    chosen = np.full(rb.n_rules, 2)
    r_lo, r_hi = rule_index((0, 0, 0), P), rule_index((1, 0, 0), P)
    # Q = 1, max next = 1: delta = 0.5 * (6 + 0.9 - 1)
    delta = td_update(rb, act, chosen, 6.0, nxt, 0.5, 0.9)
    assert delta == pytest.approx(2.95)
    assert rb.q[r_lo, 2] == pytest.approx(1 + 0.2 * 2.95)
    assert rb.q[r_hi, 2] == pytest.approx(1 + 0.8 * 2.95)


def test_td_locality():
    rng = np.random.default_rng(11)
    rb = RuleBase.zeros()
    rb.q[:] = rng.normal(size=rb.q.shape)
    act = activations(PAPER_PARTITION, (13, 31, 49))
    chosen = rng.integers(0, rb.n_actions, size=rb.n_rules)
    before = rb.q.copy()
    td_update(rb, act, chosen, 3.0, activations(PAPER_PARTITION, (5, 5, 5)), 0.5, 0.5)
    changed = np.argwhere(rb.q != before)
    for r, k in changed:
        assert act[r] > 0 and chosen[r] == k


@pytest.mark.parametrize("alpha,gamma", [(0.0, 0.5), (1.5, 0.5), (0.5, 1.0), (0.5, -0.1)])
def test_td_rejects_bad_rates(alpha, gamma):
    rb = RuleBase.zeros()
    act = activations(PAPER_PARTITION, (0, 0, 0))
    with pytest.raises(ValueError):
        td_update(rb, act, np.zeros(rb.n_rules, dtype=int), 1.0, act, alpha, gamma)


def test_dump_rule_base():
    rb = RuleBase.zeros()
    rb.q[7, 2] = 1.25
    buf = io.StringIO()
    dump_rule_base(rb, buf, "S")
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith("agent,rule,label_s")
    assert len(lines) == 1 + 125 * 11
    assert "S,7,0,1,2,2,10,1.25,0" in lines
