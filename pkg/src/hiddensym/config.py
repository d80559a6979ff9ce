"""Run configuration: one versioned JSON document, command-line flags override it.

Keys (all optional; defaults shown by ``hiddensym config``)::

    version                 must be 1
    oracle.points           number of random sample points
    oracle.seed             RNG seed for the sample points
    oracle.r_min/r_max      radial range of the sample points
    oracle.fd_step          finite-difference step h
    oracle.fd_order         central-difference order (2..10, even)
    oracle.tolerance        max relative residual for a zero identity
    oracle.nonzero_floor    min aggregate residual for a nonzero identity
    oracle.precision        "extended" or "double"
    oracle.a, oracle.m      numerical values of the symbols a and m
    oracle.step_check       also run every check at h/2
    spectrum.nodes          coarse grid size (the fine grid has 2N-1 nodes)
    spectrum.r_min/r_max    radial box in units of 1/(m a)
    spectrum.tolerance      relative accuracy required of each level
    spectrum.count          levels per sector
    spectrum.partner_factor +-k partners must agree within this many error estimates
    spectrum.alpha_tolerance  bound on the A^2 eigenvalue of the ground state
    lamb.power              exponent s of the beta r^s perturbation
    lamb.lambdas            exact strengths checked for linearity
"""
from __future__ import annotations

import copy
import json
from pathlib import Path

from . import oracle as O
from . import radial as R

CONFIG_VERSION = 1

DEFAULTS = {
    "version": CONFIG_VERSION,
    "oracle": {
        "points": 100,
        "seed": 1,
        "r_min": 0.55,
        "r_max": 2.0,
        "fd_step": 1e-2,
        "fd_order": 8,
        "tolerance": 1e-6,
        "nonzero_floor": 1e-2,
        "precision": "extended",
        "a": 0.4,
        "m": 1.3,
        "step_check": True,
    },
    "spectrum": {
        "nodes": R.DEFAULT_NODES,
        "r_min": R.DEFAULT_R_MIN,
        "r_max": R.DEFAULT_R_MAX,
        "tolerance": 1e-5,
        "count": 3,
        "partner_factor": 2.0,
        "alpha_tolerance": 1e-6,
    },
    "lamb": {"power": -2, "lambdas": [0, 1, 2, 3]},
}


class ConfigError(ValueError):
    pass


def load(path: str | Path | None) -> dict:
    """Defaults merged with the file at ``path`` (unknown keys are rejected)."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is None:
        return cfg
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    if data.get("version", CONFIG_VERSION) != CONFIG_VERSION:
        raise ConfigError(f"unsupported config version {data.get('version')!r}")
    for section, values in data.items():
        if section == "version":
            continue
        if section not in DEFAULTS or not isinstance(values, dict):
            raise ConfigError(f"unknown config section {section!r}")
        for key, val in values.items():
            if key not in DEFAULTS[section]:
                raise ConfigError(f"unknown config key {section}.{key}")
            cfg[section][key] = val
    return cfg


def oracle_config(cfg: dict) -> O.TestConfig:
    o = cfg["oracle"]
    return O.TestConfig.sample(
        int(o["points"]), seed=int(o["seed"]), r_min=float(o["r_min"]), r_max=float(o["r_max"]),
        fd_step=float(o["fd_step"]), fd_order=int(o["fd_order"]), tolerance=float(o["tolerance"]),
        nonzero_floor=float(o["nonzero_floor"]), precision=str(o["precision"]),
        a=float(o["a"]), m=float(o["m"]))
