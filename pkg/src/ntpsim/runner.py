"""Replications and scenario grids.

Every replication owns a random stream derived from ``(base_seed,
run_index)`` with numpy's SeedSequence spawn keys, so results do not depend
on thread count or execution order.
"""
from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernel
from .exploration import PolicyConfig
from .fuzzy import N_SLOTS, PAPER_ACTIONS, PAPER_PARTITION, MembershipPartition
from .model import FirmParams, SharingRule
from .stats import sample_skewness

log = logging.getLogger(__name__)

SERIES = ("i_s", "i_1", "i_2", "q_1", "q_2", "pi_s", "pi_1", "pi_2", "pi_hq")
COL = {name: k for k, name in enumerate(SERIES)}
TRACE_MODES = ("eval", "sparse", "full")
TRACE_SERIES = ("i_s", "i_1", "i_2", "pi_hq")
_TRACE_COLS = [COL[n] for n in TRACE_SERIES]


@dataclass(frozen=True)
class ScenarioSpec:
    params: FirmParams = field(default_factory=FirmParams)
    rule: SharingRule = field(default_factory=SharingRule)
    gamma: float = 0.0
    policy: PolicyConfig = field(default_factory=PolicyConfig)
    t_learn: int = 2000
    t_eval: int = 100
    n_runs: int = 10000
    base_seed: int = 0
    alpha: float = 0.5
    freeze_eval: bool = False
    greedy_eval: bool = False
    partition: MembershipPartition = PAPER_PARTITION
    actions: tuple[float, ...] = PAPER_ACTIONS

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"discount factor must be in [0, 1), got {self.gamma}")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"learning rate must be in (0, 1], got {self.alpha}")
        if self.n_runs < 1 or self.t_eval < 1 or self.t_learn < 2:
            raise ValueError("n_runs and t_eval must be >= 1 and t_learn >= 2")
        if self.policy.t_learn != self.t_learn:
            object.__setattr__(self, "policy",
                               dataclasses.replace(self.policy, t_learn=self.t_learn))

    @property
    def t_total(self) -> int:
        return self.t_learn + self.t_eval

    @property
    def key(self) -> tuple:
        p = self.params
        return (p.lambda_s, p.lambda_1, p.lambda_2, self.rule.gamma_1, self.rule.gamma_2,
                self.gamma, p.sigma, self.policy.name)

    def firm_vector(self) -> np.ndarray:
        p = self.params
        return np.array([p.b, p.e_theta_s, p.e_theta_1, p.e_theta_2, p.sigma,
                         p.lambda_s, p.lambda_1, p.lambda_2,
                         self.rule.gamma_1, self.rule.gamma_2], dtype=float)


@dataclass
class RunRecord:
    run_index: int
    steps: np.ndarray          # retained 1-based time steps
    series: np.ndarray         # (len(steps), len(SERIES))
    eval_means: np.ndarray     # (len(SERIES),) mean over the last t_eval steps
    q: np.ndarray | None = None        # (3, n_rules, K) final q-tables
    counts: np.ndarray | None = None

    def eval_mean(self, name: str) -> float:
        return float(self.eval_means[COL[name]])


def replication_rng(base_seed: int, run_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(run_index,))
    return np.random.Generator(np.random.PCG64(ss))


def draw_streams(spec: ScenarioSpec, run_index: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniforms (T, agent, slot, 2) and standard normals (T, 3) for one replication."""
    rng = replication_rng(spec.base_seed, run_index)
    uniforms = rng.random((spec.t_total, 3, N_SLOTS, 2))
    normals = rng.standard_normal((spec.t_total, 3))
    return uniforms, normals


def retained_steps(spec: ScenarioSpec, trace: str) -> np.ndarray:
    t = np.arange(1, spec.t_total + 1)
    if trace == "full":
        return t
    eval_mask = t > spec.t_learn
    if trace == "eval":
        return t[eval_mask]
    if trace == "sparse":
        return t[eval_mask | (t % 10 == 0)]
    raise ValueError(f"trace must be one of {TRACE_MODES}, got {trace!r}")


def simulate_raw(spec: ScenarioSpec, run_index: int, backend: str | None = None):
    """Run one replication; returns the full (T, 9) trace and final tables."""
    n_rules = spec.partition.n_labels ** 3
    n_act = len(spec.actions)
    q = np.zeros((3, n_rules, n_act))
    counts = np.zeros((3, n_rules, n_act))
    out = np.empty((spec.t_total, len(SERIES)))
    uniforms, normals = draw_streams(spec, run_index)
    kernel.get_simulate(backend)(
        uniforms, normals, spec.firm_vector(),
        np.asarray(spec.partition.peaks, dtype=float), np.asarray(spec.actions, dtype=float),
        int(spec.policy.kind), spec.policy.kernel_params(), float(spec.alpha), float(spec.gamma),
        int(spec.t_learn), bool(spec.freeze_eval), bool(spec.greedy_eval), q, counts, out,
    )
    return out, q, counts


def run_replication(spec: ScenarioSpec, run_index: int, *, trace: str = "sparse",
                    keep_rule_bases: bool = False, backend: str | None = None) -> RunRecord:
    out, q, counts = simulate_raw(spec, run_index, backend)
    steps = retained_steps(spec, trace)
    eval_means = out[spec.t_learn:].mean(axis=0)
    return RunRecord(run_index, steps, out[steps - 1].copy(), eval_means,
                     q if keep_rule_bases else None, counts if keep_rule_bases else None)


@dataclass(frozen=True)
class Summary:
    n: int
    mean: float
    sd: float
    skewness: float
    p25: float
    p50: float
    p75: float
    whisker_lo: float
    whisker_hi: float

    FIELDS = ("mean", "sd", "skewness", "p25", "p50", "p75", "whisker_lo", "whisker_hi")


def summarize(x) -> Summary:
    """Mean, sd, skewness, linear-interpolation quartiles and Tukey whiskers.

    Whiskers reach the most extreme observations within 1.5 IQR of the box.
    """
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        raise ValueError("cannot summarize an empty sample")
    p25, p50, p75 = np.percentile(x, [25, 50, 75])
    iqr = p75 - p25
    inside = x[(x >= p25 - 1.5 * iqr) & (x <= p75 + 1.5 * iqr)]
    sd = float(x.std(ddof=1)) if x.size > 1 else 0.0
    return Summary(int(x.size), float(x.mean()), sd, sample_skewness(x),
                   float(p25), float(p50), float(p75),
                   float(inside.min()), float(inside.max()))


@dataclass
class GridCell:
    spec: ScenarioSpec
    eval_means: np.ndarray     # (n_runs, len(SERIES))
    trace_steps: np.ndarray | None = None
    traces: np.ndarray | None = None   # float32 (n_runs, len(trace_steps), len(TRACE_SERIES))

    @property
    def key(self) -> tuple:
        return self.spec.key

    def column(self, name: str) -> np.ndarray:
        return self.eval_means[:, COL[name]]

    def summary(self, name: str) -> Summary:
        return summarize(self.column(name))


@dataclass
class GridResults:
    cells: list[GridCell]
    failures: dict[tuple, str] = field(default_factory=dict)

    def __getitem__(self, key: tuple) -> GridCell:
        for c in self.cells:
            if c.key == key:
                return c
        raise KeyError(key)

    def find(self, **match) -> list[GridCell]:
        out = []
        for c in self.cells:
            p, r = c.spec.params, c.spec.rule
            attrs = {"lambda_s": p.lambda_s, "lambda_1": p.lambda_1, "lambda_2": p.lambda_2,
                     "gamma_1": r.gamma_1, "gamma_2": r.gamma_2, "discount": c.spec.gamma,
                     "sigma": p.sigma, "policy": c.spec.policy.name}
            if all(abs(attrs[k] - v) < 1e-12 if isinstance(v, float) else attrs[k] == v
                   for k, v in match.items()):
                out.append(c)
        return out


def _run_block(spec: ScenarioSpec, start: int, stop: int, backend: str | None,
               means: np.ndarray, traces: np.ndarray | None, steps: np.ndarray | None) -> None:
    for r in range(start, stop):
        out, _, _ = simulate_raw(spec, r, backend)
        means[r] = out[spec.t_learn:].mean(axis=0)
        if traces is not None:
            traces[r] = out[steps - 1][:, _TRACE_COLS]


def run_grid(grid: list[ScenarioSpec], *, threads: int = 1, backend: str | None = None,
             block_size: int = 50, trace: str | None = None, progress=None) -> GridResults:
    """Run every cell; failures are recorded per cell instead of aborting.

    Replications are split into blocks and farmed out to a thread pool (the
    compiled kernel releases the GIL). Results are written back by run index.
    With ``trace`` set to one of TRACE_MODES the per-step investment and
    headquarters-profit series are kept as well (float32).
    """
    if not grid:
        raise ValueError("grid is empty")
    arrays = [np.empty((s.n_runs, len(SERIES))) for s in grid]
    steps = [retained_steps(s, trace) if trace else None for s in grid]
    traces = [np.empty((s.n_runs, len(st), len(TRACE_SERIES)), dtype=np.float32)
              if st is not None else None for s, st in zip(grid, steps)]
    failures: dict[tuple, str] = {}
    tasks = [(ci, start, min(start + block_size, s.n_runs))
             for ci, s in enumerate(grid) for start in range(0, s.n_runs, block_size)]

    def work(task):
        ci, start, stop = task
        _run_block(grid[ci], start, stop, backend, arrays[ci], traces[ci], steps[ci])

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        futures = [(task, pool.submit(work, task)) for task in tasks]
        for n_done, (task, fut) in enumerate(futures, 1):
            try:
                fut.result()
            except Exception as exc:  # noqa: BLE001 - surfaced per cell
                key = grid[task[0]].key
                log.error("cell %s failed: %s", key, exc)
                failures.setdefault(key, f"{type(exc).__name__}: {exc}")
            if progress is not None:
                progress(n_done, len(futures))

    cells = [GridCell(s, a, st, tr) for s, a, st, tr in zip(grid, arrays, steps, traces)
             if s.key not in failures]
    return GridResults(cells, failures)
