"""Readers and writers for the on-disk formats.

Sample-set text format::

    n=<n> obs=<2T> directed=<0|1>
    <2T blocks of n rows of n space-separated 0/1 digits>
    <2T mask blocks, same layout, only for masked sample sets>

The reader tells masked from unmasked files by the row count. Blank lines
between blocks are ignored.
"""

from __future__ import annotations

import csv
import io
import json
import re
from pathlib import Path

import numpy as np

from .errors import ContractError
from .graphon import Graphon, GraphSampleSet, graphon_from_dict

_HEADER = re.compile(r"^n=(\d+) obs=(\d+) directed=([01])$")


def load_graphon(path) -> Graphon:
    return graphon_from_dict(json.loads(Path(path).read_text()))


def save_graphon(g: Graphon, path) -> None:
    Path(path).write_text(json.dumps(g.to_dict(), indent=2) + "\n")


def _format_block(m: np.ndarray) -> str:
    return "\n".join(" ".join("1" if v else "0" for v in row) for row in m)


def format_samples(samples: GraphSampleSet) -> str:
    header = f"n={samples.n} obs={samples.num_observations} directed={int(samples.directed)}"
    parts = [header]
    parts += [_format_block(m) for m in samples.observations]
    if samples.masks is not None:
        parts += [_format_block(m) for m in samples.masks]
    return "\n".join(parts) + "\n"


def parse_samples(text: str, labels=None) -> GraphSampleSet:
    """Parse the sample-set format. Labels are not stored in the file;
    pass them in or get NaN placeholders."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ContractError("empty sample-set file")
    m = _HEADER.match(lines[0])
    if not m:
        raise ContractError(f"bad sample-set header: {lines[0]!r}")
    n, obs, directed = int(m.group(1)), int(m.group(2)), m.group(3) == "1"
    rows = lines[1:]
    if len(rows) == obs * n:
        masked = False
    elif len(rows) == 2 * obs * n:
        masked = True
    else:
        raise ContractError(f"expected {obs * n} or {2 * obs * n} matrix rows, found {len(rows)}")
    blocks = obs * (2 if masked else 1)
    try:
        data = np.array([[int(tok) for tok in r.split()] for r in rows], dtype=np.int64)
    except ValueError as exc:
        raise ContractError(f"non-integer matrix entry: {exc}") from None
    if data.shape != (blocks * n, n):
        raise ContractError("every matrix row must hold n entries")
    data = data.reshape(blocks, n, n)
    observations = data[:obs]
    masks = data[obs:] if masked else None
    if labels is None:
        labels = np.full(n, np.nan)
    return GraphSampleSet(np.asarray(labels, dtype=np.float64), observations, masks, directed)


def load_samples(path, labels=None) -> GraphSampleSet:
    return parse_samples(Path(path).read_text(), labels)


def save_samples(samples: GraphSampleSet, path) -> None:
    Path(path).write_text(format_samples(samples))


def save_labels(labels, path) -> None:
    Path(path).write_text(json.dumps([float(u) for u in labels]) + "\n")


def load_labels(path) -> np.ndarray:
    return np.asarray(json.loads(Path(path).read_text()), dtype=np.float64)


def matrix_csv(m: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(m, dtype=np.float64):
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def read_matrix_csv(text: str) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in csv.reader(io.StringIO(text)) if row])
