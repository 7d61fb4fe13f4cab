"""Scenario files: INI sections whose values may be lists.

Example::

    [scenario1]
    lambda_1 = [0.5]
    gamma_1 = [0.5]
    discount = [0, 0.9]
    sigma = [0]
    exploration = [boltzmann]
    runs = 10000

``lambda_2``/``gamma_2`` default to ``lambda_1``/``gamma_1``. The lambda
lists are paired positionally, as are the gamma lists; the grid is the
product of lambda pairs, gamma pairs, discount factors, sigmas and policies.
"""
from __future__ import annotations

import configparser
import hashlib
import re
import zlib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .analytic import optimal_gammas
from .exploration import PolicyConfig, parse_policy_kind
from .model import FirmParams, ParameterError, SharingRule
from .runner import ScenarioSpec

LIST_KEYS = {"lambda_1", "lambda_2", "gamma_1", "gamma_2", "discount", "sigma", "exploration"}
SCALAR_KEYS = {
    "description": str, "b": float, "e_theta_s": float, "e_theta_1": float, "e_theta_2": float,
    "lambda_s": float, "runs": int, "t_learn": int, "t_eval": int, "alpha": float, "seed": int,
    "baseline": bool, "freeze_eval": bool, "greedy_eval": bool,
    "boltzmann_s": "pair", "boltzmann_b": "pair", "ucb_c_s": float, "ucb_c_b": float,
}
KNOWN_KEYS = LIST_KEYS | set(SCALAR_KEYS)
BASELINE_TOL = 0.01


class ConfigError(Exception):
    pass


@dataclass
class ScenarioGrid:
    name: str
    description: str
    seed: int
    specs: list[ScenarioSpec]
    baseline_keys: set = field(default_factory=set)   # cells added only to serve as baselines


def bundled_scenarios() -> dict[str, Path]:
    root = resources.files("ntpsim") / "scenarios"
    return {Path(str(p)).stem: Path(str(p)) for p in root.iterdir() if str(p).endswith(".cfg")}


def resolve_scenario_path(name_or_path: str) -> Path:
    p = Path(name_or_path)
    if p.exists():
        return p
    bundled = bundled_scenarios()
    stem = p.stem if p.suffix == ".cfg" else name_or_path
    if stem in bundled:
        return bundled[stem]
    raise ConfigError(f"scenario file {name_or_path!r} not found "
                      f"(bundled: {', '.join(sorted(bundled))})")


def _line_of(text: str, section: str, key: str) -> int | None:
    in_section = False
    for n, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if s.startswith("["):
            in_section = s.strip("[]").strip() == section
        elif in_section and re.match(rf"{re.escape(key)}\s*[=:]", s, re.IGNORECASE):
            return n
    return None


def _split_list(raw: str) -> list[str]:
    raw = raw.strip()
    if raw.startswith("[") or raw.startswith("("):
        if raw[-1] not in "])":
            raise ValueError(f"unterminated list {raw!r}")
        raw = raw[1:-1]
    items = [x.strip().strip("'\"") for x in raw.split(",")]
    items = [x for x in items if x]
    if not items:
        raise ValueError("empty list")
    return items


def _to_bool(raw: str) -> bool:
    v = raw.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def derive_seed(seed: int, key: tuple) -> int:
    """Stable per-cell seed from the grid seed and the cell coordinates."""
    canon = "|".join(f"{v:.6g}" if isinstance(v, float) else str(v) for v in key)
    ss = np.random.SeedSequence([seed, zlib.crc32(canon.encode())])
    return int(ss.generate_state(1, np.uint64)[0])


def config_digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def parse_text(text: str, source: str = "<string>") -> dict[str, ScenarioGrid]:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    if not cp.sections():
        raise ConfigError(f"{source}: no scenario sections")
    return {name: _section_grid(cp[name], name, text, source) for name in cp.sections()}


def load(path: str | Path) -> dict[str, ScenarioGrid]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc
    return parse_text(text, str(path))


def _section_grid(sec, name: str, text: str, source: str) -> ScenarioGrid:
    def where(key):
        line = _line_of(text, name, key)
        return f"{source}:{line}" if line else f"{source} [{name}]"

    vals: dict = {}
    for key, raw in sec.items():
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{where(key)}: unknown key {key!r} in section [{name}]")
        try:
            if key in LIST_KEYS:
                items = _split_list(raw)
                vals[key] = items if key == "exploration" else [float(x) for x in items]
            else:
                kind = SCALAR_KEYS[key]
                if kind is bool:
                    vals[key] = _to_bool(raw)
                elif kind == "pair":
                    pair = [float(x) for x in _split_list(raw)]
                    if len(pair) != 2:
                        raise ValueError("expected two numbers")
                    vals[key] = tuple(pair)
                else:
                    vals[key] = kind(raw.strip())
        except ValueError as exc:
            raise ConfigError(f"{where(key)}: bad value for {key!r}: {exc}") from None

    lam1 = vals.get("lambda_1", [0.5])
    lam2 = vals.get("lambda_2", lam1)
    g1 = vals.get("gamma_1", [0.5])
    g2 = vals.get("gamma_2", g1)
    if len(lam1) != len(lam2):
        raise ConfigError(f"{where('lambda_2')}: lambda_1 and lambda_2 lists differ in length")
    if len(g1) != len(g2):
        raise ConfigError(f"{where('gamma_2')}: gamma_1 and gamma_2 lists differ in length")
    try:
        kinds = [parse_policy_kind(k) for k in vals.get("exploration", ["boltzmann"])]
    except ValueError as exc:
        raise ConfigError(f"{where('exploration')}: {exc}") from None

    t_learn = vals.get("t_learn", 2000)
    bs = vals.get("boltzmann_s", (49975.0, 498.75))
    bb = vals.get("boltzmann_b", (24987.5, 498.75))
    c_s, c_b = vals.get("ucb_c_s", 60.0), vals.get("ucb_c_b", 30.0)
    seed = vals.get("seed", 0)

    specs: list[ScenarioSpec] = []
    baseline_keys: set = set()
    try:
        for l1, l2 in zip(lam1, lam2):
            for disc in vals.get("discount", [0.0]):
                for sig in vals.get("sigma", [0.0]):
                    params = FirmParams(b=vals.get("b", 12.0), e_theta_s=vals.get("e_theta_s", 60.0),
                                        e_theta_1=vals.get("e_theta_1", 100.0),
                                        e_theta_2=vals.get("e_theta_2", 100.0),
                                        sigma=sig, lambda_s=vals.get("lambda_s", 1.0),
                                        lambda_1=l1, lambda_2=l2)
                    rules = [SharingRule(a, b) for a, b in zip(g1, g2)]
                    if vals.get("baseline", True):
                        opt = optimal_gammas(params)
                        if not any(max(abs(r.gamma_1 - opt.gamma_1),
                                       abs(r.gamma_2 - opt.gamma_2)) <= BASELINE_TOL for r in rules):
                            rules.append(opt)
                            extra = opt
                        else:
                            extra = None
                    else:
                        extra = None
                    for rule in rules:
                        for kind in kinds:
                            policy = PolicyConfig(kind=kind, boltzmann=(bs, bb, bb), t_learn=t_learn,
                                                  ucb_c=(c_s, c_b, c_b))
                            spec = ScenarioSpec(params=params, rule=rule, gamma=disc, policy=policy,
                                                t_learn=t_learn, t_eval=vals.get("t_eval", 100),
                                                n_runs=vals.get("runs", 10000),
                                                alpha=vals.get("alpha", 0.5),
                                                freeze_eval=vals.get("freeze_eval", False),
                                                greedy_eval=vals.get("greedy_eval", False))
                            spec = _with_seed(spec, seed)
                            specs.append(spec)
                            if rule is extra:
                                baseline_keys.add(spec.key)
    except (ParameterError, ValueError) as exc:
        raise ConfigError(f"{source} [{name}]: {exc}") from None
    return ScenarioGrid(name, vals.get("description", ""), seed, specs, baseline_keys)


def _with_seed(spec: ScenarioSpec, seed: int) -> ScenarioSpec:
    import dataclasses
    return dataclasses.replace(spec, base_seed=derive_seed(seed, spec.key))


def with_overrides(grid: ScenarioGrid, *, runs: int | None = None, seed: int | None = None,
                   freeze_eval: bool | None = None, greedy_eval: bool | None = None) -> ScenarioGrid:
    import dataclasses
    new_seed = grid.seed if seed is None else seed
    specs = []
    for s in grid.specs:
        changes = {}
        if runs is not None:
            changes["n_runs"] = runs
        if freeze_eval is not None:
            changes["freeze_eval"] = freeze_eval
        if greedy_eval is not None:
            changes["greedy_eval"] = greedy_eval
        s = dataclasses.replace(s, **changes)
        specs.append(_with_seed(s, new_seed))
    return ScenarioGrid(grid.name, grid.description, new_seed, specs, set(grid.baseline_keys))
