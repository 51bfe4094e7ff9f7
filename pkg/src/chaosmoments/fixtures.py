"""
Reference coefficient sequences used throughout the tests, demos and CLI.

``target``
    ``(1/sqrt2, -1/sqrt2)``: the normal product law (classical) or the
    tetilla law (free).
``impostor``
    ``(1/sqrt2, 1/sqrt2)``: a centered chi-square with two degrees of
    freedom. Every even cumulant matches the target's, the third does not.
``counterexample``
    Three coefficients whose second and sixth moments match the target's
    while the fourth moment is strictly smaller (about 8.2567 < 9). The
    published four-digit values are rescaled to unit variance exactly.
"""

from __future__ import annotations

import math

import numpy as np

from .optimize import OptimizationProblem
from .spectral import CoefficientSequence, target_coefficients

__all__ = [
    "COUNTEREXAMPLE_ROUNDED",
    "counterexample",
    "counterexample_problem",
    "impostor",
    "target",
    "FIXTURES",
]

COUNTEREXAMPLE_ROUNDED = (0.7624, 0.5370, -0.3610)


def target(kind="classical"):
    return target_coefficients(kind)


def impostor(kind="classical"):
    h = 1.0 / math.sqrt(2.0)
    return CoefficientSequence(kind, (h, h))


def counterexample(kind="classical"):
    lam = np.array(COUNTEREXAMPLE_ROUNDED)
    return CoefficientSequence(kind, lam / np.linalg.norm(lam))


def counterexample_problem(restarts=64, seed=0):
    """Minimize the fourth moment at fixed second and sixth moments, signs (+, +, -)."""
    return OptimizationProblem(
        kind="classical",
        k=3,
        objective="minimize_mu4",
        constraints=((2, 1.0), (6, 225.0)),
        sign_pattern=("+", "+", "-"),
        restarts=restarts,
        seed=seed,
    )


FIXTURES = {"target": target, "impostor": impostor, "counterexample": counterexample}
