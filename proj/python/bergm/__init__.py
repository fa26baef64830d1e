"""Bipartite exponential random graph models.

Networks, models and fits are plain JSON-compatible dicts (the same documents
the ``bergm`` command reads and writes); paths to such files are accepted too.
"""

from __future__ import annotations

import json
import os
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from . import _bergm
from ._bergm import NumericalError, ValidationError, __version__

__all__ = [
    "NumericalError",
    "ValidationError",
    "__version__",
    "build",
    "change_statistics",
    "describe",
    "fit",
    "gof",
    "load",
    "run_cli",
    "simulate",
]

Document = Mapping[str, Any] | Sequence[Any] | str | os.PathLike


def load(path: str | os.PathLike) -> Any:
    """Read a JSON document."""
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def _text(document: Document) -> str:
    if isinstance(document, (str, os.PathLike)):
        with open(document, encoding="utf-8") as handle:
            return handle.read()
    return json.dumps(document)


def _sampler(nsim: int, seed: int, burn_in: int | None, interval: int | None, proposal: str, chains: int) -> str:
    return json.dumps(
        {
            "sample_count": nsim,
            "seed": seed,
            "burn_in": burn_in,
            "interval": interval,
            "proposal": proposal,
            "chains": chains,
        }
    )


def build(corpus: str | os.PathLike, dictionary: Document, attributes: Iterable[str | os.PathLike] = ()) -> dict:
    """Build a skill-by-document network from a directory of .txt files."""
    csvs = []
    for path in attributes:
        with open(path, encoding="utf-8") as handle:
            csvs.append(handle.read())
    return json.loads(_bergm.build(os.fspath(corpus), _text(dictionary), csvs))


def describe(
    network: Document,
    metrics: Sequence[str] = ("degree", "eigenvector"),
    importance: str = "importance",
    by: Sequence[str] | None = None,
    centrality_rank: str = "competition",
) -> dict:
    """Degree ranking, centrality correlations and sub-graph summaries."""
    return json.loads(
        _bergm.describe(_text(network), list(metrics), importance, None if by is None else list(by), centrality_rank)
    )


def fit(
    network: Document,
    model: Document,
    method: str = "mple",
    *,
    nsim: int = 1000,
    seed: int = 0,
    burn_in: int | None = None,
    interval: int | None = None,
    proposal: str = "tnt",
    chains: int = 1,
    max_iterations: int = 20,
    inflate_se: bool = False,
) -> dict:
    """Fit a model by "mple", "mcmle" or "exact"; returns the fit document."""
    sampler = _sampler(nsim, seed, burn_in, interval, proposal, chains)
    return json.loads(_bergm.fit(_text(network), _text(model), method, sampler, max_iterations, inflate_se))


def gof(
    network: Document,
    fitted: Document,
    *,
    nsim: int = 1000,
    seed: int = 0,
    burn_in: int | None = None,
    interval: int | None = None,
    proposal: str = "tnt",
    chains: int = 1,
    pinv: bool = False,
    degree_gof: bool = False,
) -> dict:
    """Simulation-based goodness of fit for a fit document."""
    sampler = _sampler(nsim, seed, burn_in, interval, proposal, chains)
    return json.loads(_bergm.gof(_text(network), _text(fitted), sampler, pinv, degree_gof))


def simulate(
    network: Document,
    model: Document,
    theta: Sequence[float],
    *,
    nsim: int = 1000,
    seed: int = 0,
    burn_in: int | None = None,
    interval: int | None = None,
    proposal: str = "tnt",
    chains: int = 1,
) -> tuple[list[str], np.ndarray]:
    """Statistic names and an (nsim, terms) array of simulated statistics."""
    sampler = _sampler(nsim, seed, burn_in, interval, proposal, chains)
    names, stats = _bergm.simulate(_text(network), _text(model), [float(t) for t in theta], sampler)
    return list(names), np.asarray(stats)


def change_statistics(network: Document, model: Document, first: str, second: str) -> list[float]:
    """Change in each statistic from adding the tie (first, second)."""
    return list(_bergm.change_statistics(_text(network), _text(model), first, second))


def run_cli(args: Sequence[str]) -> tuple[int, str, str]:
    """Run the command-line interface in-process: (exit code, stdout, stderr)."""
    return _bergm.run_cli([os.fspath(a) for a in args])
