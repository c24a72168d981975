"""Bi-free extreme value calculus: distribution functions, copulas and checks."""

import csv
import io
import json

from ._core import (  # noqa: F401
    BivariateDF,
    Copula,
    PickandsConstraintError,
    PickandsFn,
    UnivariateDF,
    bifree_copula,
    bifree_ev,
    bifree_maxconv,
    bifree_power,
    check_copula,
    classical_maxid_check,
    copula,
    couple,
    doa_distance,
    ev_copula,
    free_maxconv,
    from_exponent_measure,
    gaussian,
    is_bifree_maxid,
    marginal,
    pickands,
    transform_Q,
    transform_T,
)
from ._core import _run_experiment


def run_experiment(name, **params):
    """Run a named experiment; returns (rows, summary) with rows as dicts."""
    text, summary = _run_experiment(name, json.dumps(params))
    rows = [
        {"n": int(r["n"]), "diagnostic": r["diagnostic"], "value": float(r["value"])}
        for r in csv.DictReader(io.StringIO(text))
    ]
    return rows, json.loads(summary)
