"""Command-line entry point: ``graphon-sba <subcommand> ...``.

Exit codes: 0 on success, 1 on usage or configuration errors, 2 on runtime
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as sio
from .baselines import DEFAULT_ETA, largest_gap, usvt
from .distance import FULL, NeighborhoodPolicy
from .errors import ConfigError, ContractError, DomainError
from .graphon import apply_mask, sample_graphs, sample_labels
from .harness import load_config, results_csv, run_experiment
from .metrics import mae, mse
from .model_selection import DeltaGrid, default_grid, risk_curve_csv, select_delta
from .sba import cluster, estimate_block_probabilities
from .seeding import derive_seed, make_rng


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _policy(args) -> NeighborhoodPolicy:
    return FULL if args.neighborhood_size is None else NeighborhoodPolicy.random_subset(args.neighborhood_size)


def _grid(args) -> DeltaGrid:
    try:
        return default_grid() if not args.grid else DeltaGrid(tuple(args.grid))
    except DomainError as exc:
        raise ConfigError("--grid", str(exc)) from None


def _load_samples(args):
    labels = sio.load_labels(args.labels) if getattr(args, "labels", None) else None
    return sio.load_samples(args.samples, labels)


def cmd_generate(args) -> None:
    try:
        g = sio.load_graphon(args.graphon)
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError("--graphon", str(exc)) from None
    seed = args.seed
    labels = sample_labels(args.n, make_rng(derive_seed(seed, 0)))
    samples = sample_graphs(g, labels, args.obs, not args.undirected, make_rng(derive_seed(seed, 1)))
    if args.xi is not None:
        samples = apply_mask(samples, args.xi, make_rng(derive_seed(seed, 2)))
    _emit(sio.format_samples(samples), args.out)
    if args.labels_out:
        sio.save_labels(labels, args.labels_out)


def cmd_estimate(args) -> None:
    samples = _load_samples(args)
    rng = make_rng(args.seed)
    if args.crossval:
        cv = select_delta(samples, _grid(args), _policy(args), rng)
        blocking = cv.blocking
    else:
        if args.delta is None:
            raise ConfigError("--delta", "give --delta or --crossval")
        if not args.delta > 0:
            raise ConfigError("--delta", "must be positive")
        blocking = cluster(samples, args.delta, _policy(args), rng)
    est = estimate_block_probabilities(samples, blocking)
    result = {"blocking": blocking.to_dict(), "estimate": est.to_dict()}
    if est.has_empty_cells:
        result["empty_cells"] = est.empty_cells.tolist()
    if args.truth:
        if args.labels is None:
            raise ConfigError("--labels", "metrics against --truth need the latent labels")
        g = sio.load_graphon(args.truth)
        result["metrics"] = {"mae": mae(g, samples.labels, est), "mse": mse(g, samples.labels, est)}
    _emit(json.dumps(result) + "\n", args.out)


def cmd_crossval(args) -> None:
    samples = _load_samples(args)
    cv = select_delta(samples, _grid(args), _policy(args), make_rng(args.seed))
    _emit(risk_curve_csv(cv), args.out)


def cmd_baseline(args) -> None:
    samples = _load_samples(args)
    if args.method == "usvt":
        est = usvt(samples.observations.mean(axis=0), args.eta)
    else:
        if args.k is None:
            raise ConfigError("--k", "lg needs a block count")
        est = largest_gap(samples.observations[0], args.k)
    _emit(sio.matrix_csv(est.matrix), args.out)


def cmd_experiment(args) -> None:
    config = load_config(args.config, paper_scale=args.paper_scale, base_seed=args.seed, trials=args.trials)
    rows = run_experiment(config, threads=args.threads)
    _emit(results_csv(rows, include_timing=args.timing), args.out)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="graphon-sba", description="Graphon estimation by stochastic blockmodel approximation.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    g = sub.add_parser("generate", help="sample graphs from a graphon spec")
    g.add_argument("--graphon", required=True, help="graphon JSON file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--obs", type=int, default=2, help="number of observations 2T")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--undirected", action="store_true")
    g.add_argument("--xi", type=float, default=None, help="missing-entry probability")
    g.add_argument("--out")
    g.add_argument("--labels-out", help="write the latent labels as JSON")
    g.set_defaults(func=cmd_generate)

    def sample_args(sp):
        sp.add_argument("--samples", required=True, help="sample-set file")
        sp.add_argument("--labels", help="latent labels JSON from generate --labels-out")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--neighborhood-size", type=int, default=None)
        sp.add_argument("--out")

    e = sub.add_parser("estimate", help="cluster and estimate block probabilities")
    sample_args(e)
    e.add_argument("--delta", type=float)
    e.add_argument("--crossval", action="store_true")
    e.add_argument("--grid", type=float, nargs="+")
    e.add_argument("--truth", help="graphon JSON; adds MAE/MSE (requires --labels)")
    e.set_defaults(func=cmd_estimate)

    c = sub.add_parser("crossval", help="risk curve over a delta grid as CSV")
    sample_args(c)
    c.add_argument("--grid", type=float, nargs="+")
    c.set_defaults(func=cmd_crossval)

    b = sub.add_parser("baseline", help="USVT or largest-gap estimate as matrix CSV")
    b.add_argument("method", choices=["usvt", "lg"])
    sample_args(b)
    b.add_argument("--eta", type=float, default=DEFAULT_ETA)
    b.add_argument("--k", type=int, help="block count for lg")
    b.set_defaults(func=cmd_baseline)

    x = sub.add_parser("experiment", help="run a configured experiment, CSV out")
    x.add_argument("--config", required=True)
    x.add_argument("--seed", type=int, default=None, help="override base_seed")
    x.add_argument("--trials", type=int, default=None)
    x.add_argument("--paper-scale", action="store_true", help="100 trials and the larger n grid")
    x.add_argument("--threads", type=int, default=1)
    x.add_argument("--timing", action="store_true", help="fill wall_time_ms (output no longer byte-stable)")
    x.add_argument("--out")
    x.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return 1
        args.func(args)
    except (_UsageError, ConfigError) as exc:
        print(exc, file=sys.stderr)
        return 1
    except (ContractError, DomainError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
