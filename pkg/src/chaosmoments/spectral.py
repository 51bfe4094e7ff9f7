"""
Second-chaos random variables described by their spectral coefficients.

A classical element is ``F = sum_z lam_z (N_z**2 - 1) / sqrt(2)`` with i.i.d.
standard normals; a free element is ``F = sum_z lam_z (S_z**2 - 1)`` with
freely independent standard semicirculars. Only power sums of the
coefficients enter the cumulants, so a coefficient sequence is simply a
finite signed list.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "ChaosKind",
    "CoefficientSequence",
    "CumulantSequence",
    "MomentSequence",
    "canonicalize",
    "cumulants_from_coefficients",
    "split_signed_parts",
    "target_coefficients",
    "classical_cumulant_factor",
]

NORMALIZATION_TOL = 1e-8


class ChaosKind(str, enum.Enum):
    CLASSICAL = "classical"
    FREE = "free"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidInputError(
                f"unknown chaos kind {value!r}; expected 'classical' or 'free'"
            ) from None


@dataclass(frozen=True)
class CoefficientSequence:
    """
    Spectral coefficients of a second-chaos element.

    Zeros are dropped on construction; ordering is left untouched, use
    :func:`canonicalize` for the two-sided canonical order.
    """

    kind: ChaosKind
    lambdas: tuple

    def __post_init__(self):
        object.__setattr__(self, "kind", ChaosKind.parse(self.kind))
        vals = tuple(float(x) for x in np.ravel(np.asarray(self.lambdas, dtype=float)))
        if not all(math.isfinite(x) for x in vals):
            raise InvalidInputError("coefficients must be finite reals")
        object.__setattr__(self, "lambdas", tuple(x for x in vals if x != 0.0))

    def __len__(self):
        return len(self.lambdas)

    def as_array(self):
        return np.array(self.lambdas, dtype=float)

    def power_sum(self, r):
        return float(np.sum(self.as_array() ** r))

    @property
    def variance(self):
        return self.power_sum(2)

    def is_normalized(self, tol=NORMALIZATION_TOL):
        return abs(self.variance - 1.0) <= tol

    def require_normalized(self, tol=NORMALIZATION_TOL):
        if not self.is_normalized(tol):
            raise InvalidInputError(
                f"coefficients must satisfy sum(lambda**2) = 1 within {tol:g}; "
                f"got {self.variance!r}"
            )

    def is_symmetric(self):
        """Exact multiset check: every positive value has a matching negative."""
        pos, neg = split_signed_parts(self)
        return sorted(pos.lambdas) == sorted(neg.lambdas)

    def to_json(self):
        return {"kind": self.kind.value, "lambda": list(self.lambdas)}

    @classmethod
    def from_json(cls, payload):
        if not isinstance(payload, dict) or "lambda" not in payload:
            raise InvalidInputError('coefficient payload must be {"kind": ..., "lambda": [...]}')
        return cls(payload.get("kind", "classical"), payload["lambda"])


class _OrderIndexed:
    """Order-indexed values ``v[1..R]`` with 1-based ``__getitem__``."""

    __slots__ = ()

    def __getitem__(self, r):
        if not 1 <= r <= self.R:
            raise IndexError(f"order {r} outside 1..{self.R}")
        return self.values[r - 1]

    @property
    def R(self):
        return len(self.values)

    def as_array(self):
        """Float view, index 0 holds order 1."""
        return np.array([float(v) for v in self.values], dtype=float)

    def truncated(self, R):
        if R > self.R:
            raise InvalidInputError(f"requested order {R} exceeds available order {self.R}")
        return type(self)(self.kind, self.values[:R])

    def is_exact(self):
        return all(isinstance(v, (int, Fraction)) for v in self.values)

    def to_json(self, field):
        out = {"kind": self.kind.value, field: [float(v) for v in self.values]}
        if self.is_exact():
            out[field + "_exact"] = [
                {"num": Fraction(v).numerator, "den": Fraction(v).denominator}
                for v in self.values
            ]
        return out


def _coerce_values(values):
    out = []
    for v in values:
        if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
            out.append(v)
        else:
            out.append(float(v))
    return tuple(out)


@dataclass(frozen=True)
class CumulantSequence(_OrderIndexed):
    """Classical cumulants or free cumulants of orders 1..R."""

    kind: ChaosKind
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "kind", ChaosKind.parse(self.kind))
        object.__setattr__(self, "values", _coerce_values(self.values))


@dataclass(frozen=True)
class MomentSequence(_OrderIndexed):
    """Moments (classical expectation or tracial state) of orders 1..R."""

    kind: ChaosKind
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "kind", ChaosKind.parse(self.kind))
        object.__setattr__(self, "values", _coerce_values(self.values))


def canonicalize(seq):
    """
    Positive coefficients descending, then negative ones by decreasing
    magnitude (the most negative coefficient comes first among them).
    """
    pos = sorted((x for x in seq.lambdas if x > 0), reverse=True)
    neg = sorted(x for x in seq.lambdas if x < 0)
    return CoefficientSequence(seq.kind, tuple(pos + neg))


def split_signed_parts(seq):
    """Split into the positive part and the magnitudes of the negative part."""
    seq = canonicalize(seq)
    pos = tuple(x for x in seq.lambdas if x > 0)
    neg = tuple(-x for x in seq.lambdas if x < 0)
    return CoefficientSequence(seq.kind, pos), CoefficientSequence(seq.kind, neg)


def classical_cumulant_factor(r):
    """``2**(r/2 - 1) * (r - 1)!``, the power-sum prefactor of the r-th cumulant."""
    return 2.0 ** (r / 2 - 1) * math.factorial(r - 1)


def cumulants_from_coefficients(seq, R):
    """
    Cumulants of orders ``1..R`` from power sums of the coefficients.

    Classical: ``kappa_r = 2**(r/2-1) (r-1)! sum lam**r``; free:
    ``kappa_r = sum lam**r``. The first cumulant is zero for both.
    """
    if not isinstance(R, (int, np.integer)) or R < 2:
        raise InvalidInputError(f"max order must be an integer >= 2, got {R!r}")
    lam = seq.as_array()
    values = [0.0]
    for r in range(2, R + 1):
        p = float(np.sum(lam**r))
        if seq.kind is ChaosKind.CLASSICAL:
            p *= classical_cumulant_factor(r)
        values.append(p)
    return CumulantSequence(seq.kind, tuple(values))


def target_coefficients(kind):
    """Coefficients ``(1/sqrt 2, -1/sqrt 2)`` of the normal-product / tetilla law."""
    h = 1.0 / math.sqrt(2.0)
    return CoefficientSequence(kind, (h, -h))
