"""Seeded experiment driver.

Every (parameter point, trial) pair is an independent job whose seed is
``derive_seed(base_seed, crc32(experiment), n, T, K, round(1e6 * xi), trial)``.
Inside a trial each random quantity has its own tagged substream, so adding
or removing a method never perturbs another method's draws.

Data budget: SBA sees two independent graphs on the first ``n // 2`` labels
(2T graphs when T > 1); USVT and LG share a single graph on all ``n`` labels.
"""

from __future__ import annotations

import csv
import io
import json
import time
import warnings
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Iterable

import numpy as np

from .baselines import DEFAULT_ETA, largest_gap, usvt
from .distance import FULL, NeighborhoodPolicy
from .errors import ConfigError, DomainError
from .graphon import (
    BlockGraphon,
    apply_mask,
    draw_mask,
    graphon_from_dict,
    reference_blockmodel,
    random_blockmodel,
    sample_adjacency,
    sample_graphs,
    sample_labels,
)
from .metrics import mae, mse
from .model_selection import DeltaGrid, default_grid, select_delta
from .sba import cluster, estimate_block_probabilities
from .seeding import derive_seed, make_rng

EXPERIMENTS = {
    "grown": "GrowN",
    "growt": "GrowT",
    "growk": "GrowK",
    "missinglinks": "MissingLinks",
    "continuous": "Continuous",
}
METHODS = ("SBA", "USVT", "LG")

DESK_TRIALS = 50
PAPER_TRIALS = 100
DESK_N_GRID = (50, 100, 200, 400)
PAPER_N_GRID = (100, 200, 400, 600, 800, 1000)

# substream tags inside one trial
_GRAPHON, _LABELS, _SBA_GRAPHS, _SBA_MASK, _CLUSTER, _BASE_GRAPH, _BASE_MASK = range(7)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    graphon: dict | None = None
    n_values: tuple[int, ...] = (200,)
    T_values: tuple[int, ...] = (1,)
    K_values: tuple[int, ...] = ()
    xi_values: tuple[float, ...] = (0.0,)
    trials: int = DESK_TRIALS
    base_seed: int = 0
    methods: tuple[str, ...] = ("SBA",)
    delta: float | None = None
    delta_grid: tuple[float, ...] | None = None
    neighborhood_size: int | None = None
    eta: float = DEFAULT_ETA
    lg_blocks: int | None = None
    directed: bool = True

    def __post_init__(self):
        _validate(self)

    @property
    def cross_validated(self) -> bool:
        return self.delta is None

    @property
    def policy(self) -> NeighborhoodPolicy:
        if self.neighborhood_size is None:
            return FULL
        return NeighborhoodPolicy.random_subset(self.neighborhood_size)

    @property
    def grid(self) -> DeltaGrid:
        return default_grid() if self.delta_grid is None else DeltaGrid(self.delta_grid)

    def points(self) -> list[tuple[int, int, int | None, float]]:
        ks = self.K_values if self.experiment == "GrowK" else (None,)
        return [(n, T, K, xi) for n in self.n_values for T in self.T_values for K in ks for xi in self.xi_values]

    def build_graphon(self):
        return graphon_from_dict(self.graphon)

    @classmethod
    def from_dict(cls, d: dict, paper_scale: bool = False) -> "ExperimentConfig":
        d = dict(d)
        raw = str(d.pop("experiment", ""))
        exp = EXPERIMENTS.get(raw.replace("_", "").lower())
        if exp is None:
            raise ConfigError("experiment", f"unknown experiment {raw!r}; choose from {sorted(EXPERIMENTS.values())}")
        known = {f.name for f in fields(cls)} | {"neighborhood"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown config field")

        kw: dict = {"experiment": exp}
        defaults = _experiment_defaults(exp, paper_scale)
        for name in ("n_values", "T_values", "K_values", "xi_values"):
            kw[name] = _tuple(d.pop(name, defaults.get(name, getattr(cls, name))), name)
        kw["graphon"] = d.pop("graphon", defaults.get("graphon"))
        kw["trials"] = d.pop("trials", PAPER_TRIALS if paper_scale else DESK_TRIALS)

        delta = d.pop("delta", "crossval")
        if isinstance(delta, str) and delta == "crossval":
            kw["delta"] = None
        elif isinstance(delta, dict) and set(delta) == {"crossval"}:
            kw["delta"], kw["delta_grid"] = None, _tuple(delta["crossval"], "delta")
        elif isinstance(delta, (int, float)) and not isinstance(delta, bool):
            kw["delta"] = float(delta)
        else:
            raise ConfigError("delta", "expected a number, \"crossval\", or {\"crossval\": [grid]}")
        if "delta_grid" in d:
            kw["delta_grid"] = _tuple(d.pop("delta_grid"), "delta_grid")

        hood = d.pop("neighborhood", "full")
        if hood == "full":
            kw["neighborhood_size"] = None
        elif isinstance(hood, dict) and set(hood) == {"random"}:
            kw["neighborhood_size"] = hood["random"]
        else:
            raise ConfigError("neighborhood", "expected \"full\" or {\"random\": S}")
        if "methods" in d:
            kw["methods"] = _tuple(d.pop("methods"), "methods")
        kw.update(d)
        return cls(**kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["delta"] = {"crossval": list(self.grid.values)} if self.delta is None else self.delta
        d.pop("delta_grid")
        size = d.pop("neighborhood_size")
        d["neighborhood"] = "full" if size is None else {"random": size}
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


def _tuple(v, name: str) -> tuple:
    if isinstance(v, (str, bytes)) or not isinstance(v, Iterable):
        raise ConfigError(name, "expected a list")
    return tuple(v)


def _experiment_defaults(exp: str, paper_scale: bool) -> dict:
    n_grid = PAPER_N_GRID if paper_scale else DESK_N_GRID
    blocks = reference_blockmodel().to_dict()
    return {
        "GrowN": {"n_values": n_grid, "graphon": blocks},
        "GrowT": {"T_values": (1, 2, 4, 8, 16), "graphon": blocks},
        "GrowK": {"K_values": (2, 4, 8)},
        "MissingLinks": {"xi_values": (0.0, 0.2, 0.4), "graphon": blocks},
        "Continuous": {"n_values": n_grid, "graphon": {"type": "formula", "formula": "w1_logistic"}},
    }[exp]


def _validate(c: ExperimentConfig) -> None:
    if c.experiment not in EXPERIMENTS.values():
        raise ConfigError("experiment", f"unknown experiment {c.experiment!r}")
    if not c.methods:
        raise ConfigError("methods", "at least one method is required")
    for m in c.methods:
        if m not in METHODS:
            raise ConfigError("methods", f"unknown method {m!r}; choose from {METHODS}")
    if len(set(c.methods)) != len(c.methods):
        raise ConfigError("methods", "duplicate method")
    if not isinstance(c.trials, int) or c.trials < 1:
        raise ConfigError("trials", "must be a positive integer")
    if not isinstance(c.base_seed, int) or not 0 <= c.base_seed < 2**64:
        raise ConfigError("base_seed", "must be an unsigned 64-bit integer")
    for name in ("n_values", "T_values", "xi_values"):
        if not getattr(c, name):
            raise ConfigError(name, "must not be empty")
    if any(not isinstance(n, int) or n < 6 for n in c.n_values):
        raise ConfigError("n_values", "every n must be an integer >= 6")
    if any(not isinstance(t, int) or t < 1 for t in c.T_values):
        raise ConfigError("T_values", "every T must be a positive integer")
    if any(not 0.0 <= xi <= 1.0 for xi in c.xi_values):
        raise ConfigError("xi_values", "every xi must lie in [0, 1]")
    if c.experiment == "GrowK":
        if not c.K_values or any(not isinstance(k, int) or k < 1 for k in c.K_values):
            raise ConfigError("K_values", "GrowK needs positive integer K values")
    elif c.graphon is None:
        raise ConfigError("graphon", f"{c.experiment} needs a graphon")
    else:
        try:
            g = graphon_from_dict(c.graphon)
        except (DomainError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError("graphon", str(exc)) from None
        if "LG" in c.methods and c.lg_blocks is None and not isinstance(g, BlockGraphon):
            raise ConfigError("lg_blocks", "LG on a formula graphon needs an explicit block count")
    if c.delta is not None and not c.delta > 0:
        raise ConfigError("delta", "must be positive")
    if c.delta_grid is not None:
        try:
            DeltaGrid(c.delta_grid)
        except DomainError as exc:
            raise ConfigError("delta", str(exc)) from None
    if c.neighborhood_size is not None:
        if not isinstance(c.neighborhood_size, int) or c.neighborhood_size < 1:
            raise ConfigError("neighborhood", "size must be a positive integer")
        if c.neighborhood_size > min(c.n_values) // 2 - 2:
            raise ConfigError("neighborhood", "size exceeds n/2 - 2 for the smallest n")
    if not c.eta > 0:
        raise ConfigError("eta", "must be positive")
    if c.lg_blocks is not None and (not isinstance(c.lg_blocks, int) or c.lg_blocks < 1):
        raise ConfigError("lg_blocks", "must be a positive integer")


def load_config(path, paper_scale: bool = False, **overrides) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("config", str(exc)) from None
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be a JSON object")
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict(raw, paper_scale=paper_scale)


@dataclass(frozen=True)
class TrialResult:
    experiment: str
    method: str
    n: int
    T: int
    K_true: int | None
    xi: float
    seed: int
    mae: float
    mse: float
    K_estimated: int | None
    delta_used: float | None
    wall_time_ms: float
    n_used: int


CSV_COLUMNS = [f.name for f in fields(TrialResult)]


def trial_seed(config: ExperimentConfig, point, trial: int) -> int:
    n, T, K, xi = point
    tag = zlib.crc32(config.experiment.encode())
    return derive_seed(config.base_seed, tag, n, T, K or 0, round(xi * 1_000_000), trial)


def run_trial(config: ExperimentConfig, point, trial: int) -> list[TrialResult]:
    n, T, K, xi = point
    seed = trial_seed(config, point, trial)

    def stream(tag):
        return make_rng(derive_seed(seed, tag))

    if config.experiment == "GrowK":
        g = random_blockmodel(K, stream(_GRAPHON))
    else:
        g = config.build_graphon()
    k_true = g.num_blocks if isinstance(g, BlockGraphon) else None
    labels = sample_labels(n, stream(_LABELS))
    common = dict(experiment=config.experiment, n=n, T=T, K_true=k_true, xi=xi, seed=seed)
    rows = []

    if "SBA" in config.methods:
        sba_labels = labels[: n // 2]
        samples = sample_graphs(g, sba_labels, 2 * T, config.directed, stream(_SBA_GRAPHS))
        if xi > 0:
            samples = apply_mask(samples, xi, stream(_SBA_MASK))
        t0 = time.perf_counter()
        if config.cross_validated:
            blocking = select_delta(samples, config.grid, config.policy, stream(_CLUSTER)).blocking
        else:
            blocking = cluster(samples, config.delta, config.policy, stream(_CLUSTER))
        with warnings.catch_warnings():
            # fully masked block pairs are expected at high xi; they score as 0.5
            warnings.simplefilter("ignore", RuntimeWarning)
            est = estimate_block_probabilities(samples, blocking)
        ms = 1000.0 * (time.perf_counter() - t0)
        rows.append(TrialResult(
            method="SBA", mae=mae(g, sba_labels, est), mse=mse(g, sba_labels, est),
            K_estimated=blocking.num_blocks, delta_used=blocking.delta,
            wall_time_ms=ms, n_used=sba_labels.size, **common,
        ))

    if "USVT" in config.methods or "LG" in config.methods:
        adj = sample_adjacency(g, labels, config.directed, stream(_BASE_GRAPH))
        if xi > 0:
            adj = adj * draw_mask(adj.shape, xi, config.directed, stream(_BASE_MASK))
        for method in ("USVT", "LG"):
            if method not in config.methods:
                continue
            t0 = time.perf_counter()
            if method == "USVT":
                est, k_est = usvt(adj, config.eta), None
            else:
                k_est = min(config.lg_blocks or k_true, n)
                est = largest_gap(adj, k_est)
            ms = 1000.0 * (time.perf_counter() - t0)
            rows.append(TrialResult(
                method=method, mae=mae(g, labels, est), mse=mse(g, labels, est),
                K_estimated=k_est, delta_used=None, wall_time_ms=ms, n_used=n, **common,
            ))
    return rows


def _job(args):
    config, point, trial = args
    return run_trial(config, point, trial)


def run_experiment(config: ExperimentConfig, threads: int = 1) -> list[TrialResult]:
    """All rows, ordered by parameter point, then trial, then method."""
    jobs = [(config, p, t) for p in config.points() for t in range(config.trials)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_job, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        chunks = [_job(j) for j in jobs]
    return [row for chunk in chunks for row in chunk]


def _cell(v, timing: bool, name: str) -> str:
    if name == "wall_time_ms" and not timing:
        return ""
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def results_csv(rows: list[TrialResult], include_timing: bool = False) -> str:
    """CSV text with a header row. Wall time is left blank unless requested,
    which keeps the output a pure function of the config."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_cell(getattr(r, c), include_timing, c) for c in CSV_COLUMNS])
    return buf.getvalue()


def read_results_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def mean_by(rows: Iterable[TrialResult], key: str, metric: str = "mae") -> dict:
    """Mean of ``metric`` grouped by (method, value of ``key``)."""
    groups: dict = {}
    for r in rows:
        groups.setdefault((r.method, getattr(r, key)), []).append(getattr(r, metric))
    return {k: float(np.mean(v)) for k, v in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1]))}


def with_overrides(config: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
