"""Pairs of orthogonal projections: Halmos forms, meet/join, symbol calculus, truncation labs."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import RunConfig, __version__, run_json

_FIELDS = {
    "seed", "strict", "tol", "tol_cluster", "pair", "p_file", "q_file", "word", "random_words",
    "max_degree", "family", "dims", "epsilon", "p_list", "poly_p", "poly_q", "poly_r", "dmin",
    "dmax", "model", "proj", "proj2", "support_tol", "grid", "phi", "winding_grid",
}


def run(subcommand, **options):
    """Run a CLI subcommand in process and return the decoded report {"header", "payload"}."""
    cfg = RunConfig()
    cfg.subcommand = subcommand
    for key, value in options.items():
        if key not in _FIELDS:
            raise TypeError(f"unknown option {key!r}")
        setattr(cfg, key, value)
    return _json.loads(run_json(cfg))
