"""Monte Carlo experiment orchestration.

Runs policies over a grid of payoff scales, N seeded runs per cell, and
aggregates rescaled pseudo-regret with standard errors into a CSV-backed
table. Per-run randomness is derived so the table is a pure function of the
config, independent of the worker count (runtime columns excepted).
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import (
    BanditProblem,
    RunRecord,
    TruncatedGaussian,
    problem_from_dict,
    scale_problem,
)
from .policies import make_policy

__all__ = [
    "paper_problem",
    "policy_label",
    "derive_seed",
    "run_single",
    "rescaled_regret",
    "ExperimentConfig",
    "RegretRow",
    "RegretTable",
    "run_experiment",
    "write_results",
    "read_results",
]


def paper_problem(scale: float = 1.0, variance: float = 0.25) -> BanditProblem:
    """The 10-armed truncated-Gaussian benchmark at a given payoff scale.

    Arm 0: scale * clip(N(0.6, V), 0, 1.2); arms 1..9: scale * clip(N(0.5, V),
    0, 1). Arm 0 is the unique optimal arm and the range is [0, 1.2 scale].
    """
    if not scale > 0:
        raise ValueError("scale must be positive")
    if not variance > 0:
        raise ValueError("variance must be positive")
    best = TruncatedGaussian(0.6, variance, 0.0, 1.2, scale)
    rest = TruncatedGaussian(0.5, variance, 0.0, 1.0, scale)
    return BanditProblem(arms=(best,) + (rest,) * 9)


def policy_label(spec: dict) -> str:
    """Canonical row key for a policy descriptor."""
    kind = spec["kind"]
    if kind == "ahb":
        return f"ahb(alpha={float(spec.get('alpha', 0.5)):g})"
    if kind in ("known_m_adahedge", "known_m_tsallis"):
        return f"{kind}(M={float(spec['M']):g})"
    if kind == "ucb":
        return f"ucb(sigma={float(spec['sigma']):g})"
    return kind


def derive_seed(base_seed: int, policy_id: str, scale_index: int, run_index: int) -> int:
    """Stable 64-bit per-run seed: base_seed XOR sha256(policy, scale, run).

    Uses a cryptographic digest, not Python's salted hash(), so seeds are
    reproducible across processes and sessions.
    """
    tag = f"{policy_id}|{scale_index}|{run_index}".encode()
    digest = hashlib.sha256(tag).digest()
    return (int(base_seed) ^ int.from_bytes(digest[:8], "little")) % 2**64


def run_single(policy_spec: dict, problem: BanditProblem, horizon: int, seed: int) -> RunRecord:
    """One seeded episode: T rounds of act / sample reward / observe.

    Action draws and reward draws come from two independent child streams of
    the seed, so the action stream stays aligned across problems that only
    differ by payoff scale (one uniform per round on each stream).
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    act_ss, reward_ss = np.random.SeedSequence(seed).spawn(2)
    act_rng = np.random.default_rng(act_ss)
    reward_rng = np.random.default_rng(reward_ss)
    policy = make_policy(policy_spec, problem.K, horizon)
    arms = problem.arms
    actions = np.empty(horizon, dtype=np.int64)
    for t in range(horizon):
        a = policy.act(act_rng)
        policy.observe(a, arms[a].sample(reward_rng))
        actions[t] = a
    return RunRecord.from_actions(seed, actions, problem)


def rescaled_regret(record: RunRecord, problem: BanditProblem, scale: float) -> float:
    """Pseudo-regret divided by the payoff scale (exact arm means)."""
    if not scale > 0:
        raise ValueError("scale must be positive")
    return record.final_pseudo_regret() / scale


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one benchmark table.

    policies: descriptor dicts (see make_policy). scales: positive payoff
    multipliers. variance: the truncated-Gaussian V (ignored when an explicit
    problem is given). couple_scales keeps per-run seeds identical across
    scale cells so scale-free policies produce identical rows. Known-M
    descriptors state M in scale-1 units; each cell multiplies it by the
    cell's scale, since an upper payoff bound transforms with the payoffs.
    """

    policies: tuple
    scales: tuple[float, ...] = (1.0,)
    horizon: int = 20000
    runs: int = 50
    base_seed: int = 0
    variance: float = 0.25
    problem: dict | None = None
    couple_scales: bool = True
    out: str | None = None

    def __post_init__(self):
        if self.horizon < 1 or self.runs < 1:
            raise ValueError("horizon and runs must be at least 1")
        if not self.scales or any(not s > 0 for s in self.scales):
            raise ValueError("scales must be positive")
        if not self.policies:
            raise ValueError("need at least one policy")
        object.__setattr__(self, "policies", tuple(dict(p) for p in self.policies))
        object.__setattr__(self, "scales", tuple(float(s) for s in self.scales))

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def problem_at(self, scale: float) -> BanditProblem:
        if self.problem is not None:
            return scale_problem(problem_from_dict(self.problem), scale)
        return paper_problem(scale, self.variance)


@dataclass(frozen=True)
class RegretRow:
    policy: str
    scale: float
    rescaled_regret: float
    stderr: float
    runtime_s: float


@dataclass
class RegretTable:
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def __post_init__(self):
        keys = [(r.policy, r.scale) for r in self.rows]
        if len(set(keys)) != len(keys):
            raise ValueError("rows must be keyed uniquely by (policy, scale)")

    def row(self, policy: str, scale: float) -> RegretRow:
        for r in self.rows:
            if r.policy == policy and r.scale == scale:
                return r
        raise KeyError((policy, scale))


def _cell_policy_spec(spec: dict, scale: float) -> dict:
    if spec.get("kind") in ("known_m_adahedge", "known_m_tsallis"):
        spec = dict(spec)
        spec["M"] = float(spec["M"]) * scale
    return spec


def _run_cell_entry(args):
    pspec, problem, horizon, seed, scale = args
    start = time.perf_counter()
    record = run_single(pspec, problem, horizon, seed)
    value = rescaled_regret(record, problem, scale)
    return value, time.perf_counter() - start


def _summarize(values: np.ndarray) -> tuple[float, float]:
    mean = float(values.mean())
    if len(values) > 1:
        se = float(values.std(ddof=1) / math.sqrt(len(values)))
    else:
        se = 0.0
    return mean, se


def run_experiment(config: ExperimentConfig, workers: int = 1) -> RegretTable:
    """Fill the (policy x scale) table with N-run regret estimates.

    Individual run failures are collected into table.failures as
    (policy, scale, run index, message) and excluded from that cell's
    statistics; a cell with no surviving runs gets NaN estimates.
    """
    tasks = []
    for pspec in config.policies:
        pid = policy_label(pspec)
        for si, scale in enumerate(config.scales):
            problem = config.problem_at(scale)
            cell_spec = _cell_policy_spec(pspec, scale)
            seed_scale_index = 0 if config.couple_scales else si
            for ri in range(config.runs):
                seed = derive_seed(config.base_seed, pid, seed_scale_index, ri)
                tasks.append(((pid, scale), ri, (cell_spec, problem, config.horizon, seed, scale)))

    results: dict = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = pool.map(_run_cell_entry_safe, [t[2] for t in tasks], chunksize=4)
            for (key, ri, _), outcome in zip(tasks, outcomes):
                results[(key, ri)] = outcome
    else:
        for key, ri, args in tasks:
            results[(key, ri)] = _run_cell_entry_safe(args)

    table = RegretTable()
    for pspec in config.policies:
        pid = policy_label(pspec)
        for scale in config.scales:
            values, runtime = [], 0.0
            for ri in range(config.runs):
                outcome = results[((pid, scale), ri)]
                if isinstance(outcome, str):
                    table.failures.append((pid, scale, ri, outcome))
                    continue
                value, elapsed = outcome
                values.append(value)
                runtime += elapsed
            if values:
                mean, se = _summarize(np.asarray(values))
            else:
                mean, se = math.nan, math.nan
            table.rows.append(RegretRow(pid, scale, mean, se, runtime))
    return table


def _run_cell_entry_safe(args):
    try:
        return _run_cell_entry(args)
    except Exception as exc:  # noqa: BLE001 - failures feed the report
        return f"{type(exc).__name__}: {exc}"


_CSV_HEADER = "policy,scale,rescaled_regret,stderr,runtime_s"


def write_results(table: RegretTable, path) -> None:
    """CSV with floats at 17 significant digits (lossless round-trip)."""
    try:
        with open(path, "w") as fh:
            fh.write(_CSV_HEADER + "\n")
            for r in table.rows:
                fh.write(
                    f"{r.policy},{r.scale:.17g},{r.rescaled_regret:.17g},"
                    f"{r.stderr:.17g},{r.runtime_s:.17g}\n"
                )
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


def read_results(path) -> RegretTable:
    try:
        with open(path) as fh:
            lines = [ln.rstrip("\n") for ln in fh]
    except OSError as exc:
        raise OSError(f"cannot read results from {path}: {exc}") from exc
    if not lines or lines[0] != _CSV_HEADER:
        raise ValueError(f"{path} is not a results file (bad header)")
    rows = []
    for ln in lines[1:]:
        if not ln:
            continue
        policy, scale, mean, se, rt = ln.split(",")
        rows.append(RegretRow(policy, float(scale), float(mean), float(se), float(rt)))
    return RegretTable(rows=rows)
