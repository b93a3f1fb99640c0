"""Chemostat with wall growth under randomly perturbed dilution.

Thin Python layer over the C++ core. Report-like results come back as plain
dicts; trajectories and noise paths as numpy arrays.
"""

import json

from ._chemowall import (
    BlowUp,
    ChemowallError,
    Config,
    ConfigError,
    InvalidInput,
    Params,
    PositivityViolation,
    ProportionUndefined,
    SingularInput,
    auto_band,
    derive_seed,
    ensemble_seed,
    load_config,
    parse_config,
    preset,
    preset_names,
    rhs,
    sample_ou,
    sample_wiener,
    simulate,
)
from . import _chemowall

__all__ = [
    "BlowUp",
    "ChemowallError",
    "Config",
    "ConfigError",
    "InvalidInput",
    "Params",
    "PositivityViolation",
    "ProportionUndefined",
    "SingularInput",
    "attractor_bounds",
    "auto_band",
    "classify",
    "derive_seed",
    "ensemble",
    "ensemble_seed",
    "load_config",
    "ou_stats",
    "parse_config",
    "preset",
    "preset_names",
    "rhs",
    "run_scenario",
    "sample_ou",
    "sample_wiener",
    "simulate",
]


def attractor_bounds(params, b1, b2, n=None):
    """Closed-form absorbing-set bounds for the dilution band (b1, b2)."""
    return json.loads(_chemowall._bounds_json(params, b1, b2, n))


def classify(params, b1, b2):
    """Extinction / persistence / indeterminate verdict with both test sides."""
    return json.loads(_chemowall._classify_json(params, b1, b2))


def ou_stats(beta, gamma, seed, dt, t_end):
    """Time averages, sup and lag-1 autocorrelation of one stationary O-U path."""
    return json.loads(_chemowall._ou_stats_json(beta, gamma, seed, dt, t_end))


def run_scenario(config):
    """Runs every seed of the config; per-seed reports, no trajectories."""
    return json.loads(_chemowall._scenario_json(config))


def ensemble(config, n, master_seed, threads=0, with_csv=False):
    """Monte-Carlo summary over n derived seeds.

    With ``with_csv`` the per-time mean/min/max table is returned as well, in
    the same text form the command line tool writes.
    """
    summary, csv = _chemowall._ensemble(config, n, master_seed, threads)
    summary = json.loads(summary)
    return (summary, csv) if with_csv else summary
