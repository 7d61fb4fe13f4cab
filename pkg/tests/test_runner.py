import dataclasses
import os
import subprocess
import sys

import numpy as np
import pytest

from ntpsim import kernel
from ntpsim.exploration import PolicyConfig, PolicyKind
from ntpsim.model import FirmParams, SharingRule
from ntpsim.runner import (COL, ScenarioSpec, retained_steps, run_grid, run_replication,
                           simulate_raw, summarize)

SHORT = dict(t_learn=60, t_eval=10, n_runs=6, base_seed=99)
HAS_CYTHON = "cython" in kernel.BACKENDS


def spec(**kw):
    return ScenarioSpec(**{**SHORT, **kw})


ALL_POLICIES = [PolicyConfig(k) for k in PolicyKind]


@pytest.mark.parametrize("policy", ALL_POLICIES, ids=lambda p: p.name)
def test_replication_is_deterministic(policy):
    s = spec(policy=policy, gamma=0.5, params=FirmParams(sigma=5.0))
    a, b = run_replication(s, 3, trace="full"), run_replication(s, 3, trace="full")
    assert np.array_equal(a.series, b.series)
    assert not np.array_equal(a.series, run_replication(s, 4, trace="full").series)


@pytest.mark.skipif(not HAS_CYTHON, reason="compiled kernel not built")
@pytest.mark.parametrize("policy", ALL_POLICIES, ids=lambda p: p.name)
@pytest.mark.parametrize("flags", [{}, {"freeze_eval": True}, {"greedy_eval": True}])
def test_backends_bit_identical(policy, flags):
    s = spec(policy=policy, gamma=0.9, params=FirmParams(sigma=10.0, lambda_1=0.3), **flags)
    fast = simulate_raw(s, 1, "cython")
    slow = simulate_raw(s, 1, "python")
    for x, y in zip(fast, slow):
        assert np.array_equal(x, y)


def test_pure_python_env_switch():
    code = "from ntpsim import kernel; print(kernel.BACKEND)"
    env = {**os.environ, "NTPSIM_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError, match="not available"):
        simulate_raw(spec(), 0, "fortran")


@pytest.mark.parametrize("policy", ALL_POLICIES, ids=lambda p: p.name)
def test_bounds_and_adding_up(policy):
    s = spec(policy=policy, gamma=0.9, params=FirmParams(sigma=10.0))
    out, q, counts = simulate_raw(s, 0)
    inv = out[:, [COL["i_s"], COL["i_1"], COL["i_2"]]]
    assert np.all((inv >= 0) & (inv <= 50))
    assert np.all(out[:, [COL["q_1"], COL["q_2"]]] >= 0)
    total = out[:, COL["pi_s"]] + out[:, COL["pi_1"]] + out[:, COL["pi_2"]]
    assert np.allclose(total, out[:, COL["pi_hq"]], rtol=0, atol=1e-9)
    assert np.isfinite(q).all()


def test_freeze_eval_stops_learning():
    s = spec(freeze_eval=True)
    full = dataclasses.replace(s, t_eval=1)
    _, q_long, _ = simulate_raw(s, 2)
    _, q_short, _ = simulate_raw(full, 2)
    # frozen tables stop moving once the evaluation window starts
    assert np.array_equal(q_long, q_short)
    _, q_live, _ = simulate_raw(dataclasses.replace(s, freeze_eval=False), 2)
    assert not np.array_equal(q_live, q_short)


def test_phase_accounting():
    s = spec()
    rec = run_replication(s, 0, trace="eval")
    assert len(rec.steps) == s.t_eval and rec.steps[0] == s.t_learn + 1
    assert np.array_equal(rec.eval_means, rec.series.mean(axis=0))


def test_sparse_trace_layout():
    steps = retained_steps(ScenarioSpec(), "sparse")
    assert len(steps) == 200 + 100
    assert steps[0] == 10 and steps[-1] == 2100


def test_summarize_linear_quartiles():
    sm = summarize(np.arange(1, 101))
    assert (sm.p25, sm.p50, sm.p75) == (25.75, 50.5, 75.25)
    assert (sm.whisker_lo, sm.whisker_hi) == (1, 100)


def test_summarize_constant():
    sm = summarize([4.0] * 7)
    assert sm.sd == 0 and sm.skewness == 0 and sm.p25 == sm.p75 == sm.whisker_hi == 4.0


def test_summarize_whiskers_exclude_outliers():
    sm = summarize([1, 2, 3, 4, 5, 6, 7, 8, 100])
    assert sm.whisker_hi == 8


def test_single_cell_grid_equals_replications():
    s = spec(n_runs=5)
    res = run_grid([s], threads=2, block_size=2)
    manual = np.array([run_replication(s, r).eval_means for r in range(5)])
    assert np.array_equal(res.cells[0].eval_means, manual)


def _grid():
    return [spec(rule=SharingRule(g, g), gamma=d, n_runs=7)
            for g in (0.3, 0.5) for d in (0.0, 0.9)]


def test_thread_count_does_not_change_results():
    a = run_grid(_grid(), threads=1, block_size=3, trace="sparse")
    b = run_grid(_grid(), threads=4, block_size=2, trace="sparse")
    for x, y in zip(a.cells, b.cells):
        assert x.eval_means.tobytes() == y.eval_means.tobytes()
        assert x.traces.tobytes() == y.traces.tobytes()


def test_grid_lookup():
    res = run_grid(_grid(), threads=2)
    assert len(res.cells) == 4
    cell = res.find(gamma_1=0.5, discount=0.9)
    assert len(cell) == 1 and res[cell[0].key] is cell[0]


def test_grid_records_failures(monkeypatch):
    from ntpsim import runner

    good, bad = spec(n_runs=2), spec(n_runs=2, gamma=0.3)
    real = runner.simulate_raw

    def flaky(s, r, backend=None):
        if s.gamma == 0.3:
            raise FloatingPointError("boom")
        return real(s, r, backend)

    monkeypatch.setattr(runner, "simulate_raw", flaky)
    res = run_grid([good, bad], threads=2)
    assert [c.key for c in res.cells] == [good.key]
    assert "boom" in res.failures[bad.key]


def test_empty_grid():
    with pytest.raises(ValueError):
        run_grid([])


@pytest.mark.parametrize("kw", [{"gamma": 1.0}, {"alpha": 0.0}, {"n_runs": 0}, {"t_learn": 1}])
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        spec(**kw)


def test_policy_horizon_follows_spec():
    assert spec(policy=PolicyConfig(PolicyKind.EGREEDY)).policy.t_learn == SHORT["t_learn"]
