"""Gradient Ricci-harmonic solitons on warped products.

JSON-shaped results (reports, case parameters, probe summaries) come back as
plain dicts; matrices come back as numpy arrays.
"""

import json

from . import _core
from ._core import (
    Candidate,
    ConfigError,
    DomainError,
    GridSpec,
    Interval,
    NumericalError,
    default_grid,
    default_tolerance,
    fd_ricci,
    gallery_defaults,
    gallery_grid,
    gallery_ids,
    gallery_variants,
    grhs_residual,
    integrate_geodesic,
    mu_constant,
    reduced_residuals_base,
    reduced_residuals_fiber,
    warped_ricci,
)

__all__ = [
    "Candidate",
    "ConfigError",
    "DomainError",
    "GridSpec",
    "Interval",
    "NumericalError",
    "candidate_from_dict",
    "candidate_to_dict",
    "construct",
    "default_case_params",
    "default_grid",
    "default_tolerance",
    "fd_ricci",
    "gallery",
    "gallery_defaults",
    "gallery_grid",
    "gallery_ids",
    "gallery_variants",
    "grhs_residual",
    "integrate_geodesic",
    "mu_constant",
    "probe",
    "reduced_residuals_base",
    "reduced_residuals_fiber",
    "verify",
    "warped_ricci",
]


def gallery(id, params=None, variant=""):
    return _core.gallery(id, params or {}, variant)


def default_case_params(case):
    return json.loads(_core.default_case_params(case))


def construct(params):
    """Build a candidate from a caseparams-v1 dict. Missing keys take the case defaults."""
    return _core.construct(json.dumps(params))


def verify(candidate, grid=None, tol=None):
    return json.loads(_core.verify(candidate, grid, tol))


def probe(candidate, count=50, s_max=1e3, seed=0):
    return json.loads(_core.probe(candidate, count, s_max, seed))


def candidate_to_dict(candidate):
    return json.loads(candidate.to_json())


def candidate_from_dict(data):
    return Candidate.from_json(json.dumps(data))
