"""Certification campaigns and a finite-difference solver for the sigma_k geodesic equation."""

import json

from ._gseq import (
    ConfigError,
    DomainError,
    Grid,
    certify,
    comparison_field,
    cone_test,
    cosine_slice,
    eval_fk,
    fk_field,
    newton_transform,
    p_poly,
    set_threads,
    shifted_sigma_poly,
    sigma_k,
    sigma_k_matrix,
    solve,
    sweep,
)
from . import _gseq


def certify_campaign(n, k, samples, seed=0, threads=1):
    """Randomized certification report as a dict."""
    return json.loads(_gseq.certify_campaign(n, k, samples, seed, threads))


def verify_bounds(grid, u, a):
    """Empirical a priori bounds of a solved field as a dict."""
    return json.loads(_gseq.verify_bounds(grid, u, a))


def run_config(config):
    """Runs a gs configuration given as a dict or JSON text; returns (exit code, log)."""
    text = config if isinstance(config, str) else json.dumps(config)
    return _gseq.run_config(text)


__all__ = [
    "ConfigError",
    "DomainError",
    "Grid",
    "certify",
    "certify_campaign",
    "comparison_field",
    "cone_test",
    "cosine_slice",
    "eval_fk",
    "fk_field",
    "newton_transform",
    "p_poly",
    "run_config",
    "set_threads",
    "shifted_sigma_poly",
    "sigma_k",
    "sigma_k_matrix",
    "solve",
    "sweep",
    "verify_bounds",
]
