"""
Characterizations, inequalities and gap functionals for second-chaos laws.

Every check returns a :class:`CriterionReport` whose ``gap`` is oriented so
that a positive value is the favourable side of the inequality. Bounds that
carry an unspecified multiplicative constant are exposed only through the
bracket under the square root, never through a verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb
from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError, PreconditionError, UnsupportedKindError
from .moments import moments_from_cumulants_recursive, target_cumulants, target_moments
from .partitions import catalan_number, enumerate_set_partitions, partition_counts
from .spectral import (
    NORMALIZATION_TOL,
    ChaosKind,
    CoefficientSequence,
    canonicalize,
    cumulants_from_coefficients,
    split_signed_parts,
)

__all__ = [
    "HOLDS",
    "VIOLATED",
    "EQUALITY",
    "CriterionReport",
    "make_report",
    "delta_gap",
    "delta_gap_spectral",
    "characterization_check",
    "cumulant_ladder_report",
    "moment_lower_bound_report",
    "moment_gap_ratio_report",
    "symmetric_upper_bound_report",
    "DominantPair",
    "dominant_pair_detect",
    "hypercontractivity_report",
    "classical_moment_constant",
    "classical_moment_constant_partition",
    "free_sharp_moment_constant",
    "w2_gap",
    "w2_bound_shape",
    "polynomial_identity_check",
    "coupling_distance",
    "target_coupling_distance_squared",
]

HOLDS = "holds"
VIOLATED = "violated"
EQUALITY = "equality"

DEFAULT_RTOL = 1e-9


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of one inequality or identity check."""

    name: str
    lhs: float
    rhs: float
    gap: float
    verdict: str
    tolerance: float
    details: dict = field(default_factory=dict, compare=False)

    def to_dict(self, with_details=False):
        out = {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
        }
        if with_details and self.details:
            out["details"] = dict(self.details)
        return out


def _verdict(gap, tol):
    if abs(gap) <= tol:
        return EQUALITY
    return HOLDS if gap > 0 else VIOLATED


def make_report(name, lhs, rhs, gap=None, tol=None, rtol=DEFAULT_RTOL, **details):
    """
    Build a report; ``tol`` defaults to ``rtol * max(1, |lhs|, |rhs|)``.
    """
    lhs, rhs = float(lhs), float(rhs)
    gap = lhs - rhs if gap is None else float(gap)
    if tol is None:
        tol = rtol * max(1.0, abs(lhs), abs(rhs))
    return CriterionReport(name, lhs, rhs, gap, _verdict(gap, tol), float(tol), details)


def _need(seq, order, what):
    if seq.R < order:
        raise InvalidInputError(f"{what} needs values up to order {order}, only {seq.R} given")


def _f(seq, r):
    return float(seq[r])


# ---------------------------------------------------------------------------
# gamma-difference variance


def _check_pair(n, m):
    if not (isinstance(n, int) and isinstance(m, int)) or n < 1 or m < 1:
        raise InvalidInputError(f"n and m must be positive integers, got {(n, m)}")
    if n == m:
        raise InvalidInputError("n and m must differ")
    if (n + m) % 2:
        raise InvalidInputError(f"n + m must be even, got n={n}, m={m}")


def delta_gap(c, n, m):
    """
    Variance of the difference of iterated gamma variables, from cumulants.

    Classical: ``k_2n/(2n-1)! - 2 k_{n+m}/(n+m-1)! + k_2m/(2m-1)!``.
    Free: ``2^m k_2m + 2^n k_2n - 2^((n+m+2)/2) k_{n+m}``.
    """
    _check_pair(n, m)
    _need(c, 2 * max(n, m), "delta_gap")
    if c.kind is ChaosKind.CLASSICAL:
        return (
            _f(c, 2 * n) / math.factorial(2 * n - 1)
            - 2 * _f(c, n + m) / math.factorial(n + m - 1)
            + _f(c, 2 * m) / math.factorial(2 * m - 1)
        )
    return (
        2.0**m * _f(c, 2 * m)
        + 2.0**n * _f(c, 2 * n)
        - 2.0 ** ((n + m + 2) / 2) * _f(c, n + m)
    )


def delta_gap_spectral(seq, n, m):
    """Same quantity as a sum of squares over the coefficients (classical only)."""
    if seq.kind is not ChaosKind.CLASSICAL:
        raise UnsupportedKindError("the sum-of-squares form is only available for classical chaos")
    _check_pair(n, m)
    lam = seq.as_array()
    return 0.5 * float(np.sum((2 ** (n / 2) * lam**n - 2 ** (m / 2) * lam**m) ** 2))


def characterization_check(seq, tol=1e-9):
    """
    Decide whether ``seq`` has the target law: both the (3,1) gamma gap and
    the third cumulant must vanish.
    """
    seq.require_normalized()
    c = cumulants_from_coefficients(seq, 6)
    d = delta_gap(c, 3, 1)
    k3 = _f(c, 3)
    lhs = max(d, abs(k3))
    verdict = EQUALITY if d <= tol and abs(k3) <= tol else VIOLATED
    return CriterionReport(
        "characterization", lhs, 0.0, lhs, verdict, float(tol),
        {"delta_3_1": d, "kappa_3": k3},
    )


# ---------------------------------------------------------------------------
# cumulant and moment inequalities


def cumulant_ladder_report(c, r, tol=None):
    """Even-cumulant ladder: growth of ``k_2r`` is at least ``r-1`` fourth-order steps."""
    if r < 2:
        raise InvalidInputError(f"ladder needs r >= 2, got {r}")
    _need(c, max(2 * r, 4), "cumulant ladder")
    k2 = _f(c, 2)
    if k2 <= 0:
        raise InvalidInputError(f"second cumulant must be positive, got {k2}")
    if c.kind is ChaosKind.CLASSICAL:
        lhs = _f(c, 2 * r) / (math.factorial(2 * r - 1) * k2) - 1
        rhs = (r - 1) * (_f(c, 4) / (6 * k2) - 1)
    else:
        lhs = 2.0 ** (r - 1) * _f(c, 2 * r) - k2
        rhs = (r - 1) * (2 * _f(c, 4) - k2)
    return make_report("cumulant_ladder", lhs, rhs, tol=tol, r=r)


def _fourth_threshold(kind):
    return (9.0, "E(F^4) >= 9") if kind is ChaosKind.CLASSICAL else (2.5, "phi(F^4) >= 5/2")


def _require_unit_variance(m):
    if abs(_f(m, 2) - 1.0) > NORMALIZATION_TOL:
        raise PreconditionError(
            f"second moment must equal 1 within {NORMALIZATION_TOL:g}, got {_f(m, 2)!r}"
        )


def _require_fourth_moment(m):
    threshold, label = _fourth_threshold(m.kind)
    if _f(m, 4) < threshold * (1 - DEFAULT_RTOL):
        raise PreconditionError(f"hypothesis {label} fails: fourth moment is {_f(m, 4)!r}")


def _target_even_moment(kind, order):
    return float(target_moments(kind, order)[order])


def moment_lower_bound_report(m, r, tol=None):
    """Even moments dominate the target's once the fourth moment does."""
    if r < 1:
        raise InvalidInputError(f"r must be >= 1, got {r}")
    _need(m, max(2 * r, 4), "moment lower bound")
    _require_unit_variance(m)
    _require_fourth_moment(m)
    target = _target_even_moment(m.kind, 2 * r)
    return make_report("moment_lower_bound", _f(m, 2 * r), target, tol=tol, r=r)


def moment_gap_ratio_report(m, m_small, n_large, tol=None):
    """
    Higher even-moment gap dominates a combinatorial multiple of a lower one:
    ``C(2n-2m, 2)`` classical, ``Catalan(n-m)`` free.
    """
    if not 2 <= m_small <= n_large:
        raise InvalidInputError(f"need 2 <= m <= n, got m={m_small}, n={n_large}")
    _need(m, 2 * n_large, "moment gap ratio")
    _require_unit_variance(m)
    _require_fourth_moment(m)
    if m.kind is ChaosKind.CLASSICAL:
        factor = comb(2 * n_large - 2 * m_small, 2)
    else:
        factor = catalan_number(n_large - m_small)
    high = _f(m, 2 * n_large) - _target_even_moment(m.kind, 2 * n_large)
    low = _f(m, 2 * m_small) - _target_even_moment(m.kind, 2 * m_small)
    return make_report(
        "moment_gap_ratio", high, factor * low, tol=tol,
        m=m_small, n=n_large, factor=factor,
    )


def symmetric_upper_bound_report(seq, r, tol=None):
    """
    For spectrally symmetric sequences with variance at most one, even
    cumulants and moments are dominated by the target's.
    """
    if r < 2:
        raise InvalidInputError(f"r must be >= 2, got {r}")
    if not seq.is_symmetric():
        raise PreconditionError("sequence is not spectrally symmetric")
    if seq.variance > 1 + NORMALIZATION_TOL:
        raise PreconditionError(f"variance {seq.variance!r} exceeds 1")
    c = cumulants_from_coefficients(seq, 2 * r)
    mom = moments_from_cumulants_recursive(c)
    t_kappa = float(target_cumulants(seq.kind, 2 * r)[2 * r])
    t_mu = _target_even_moment(seq.kind, 2 * r)
    report = make_report(
        "symmetric_upper_bound", t_mu, _f(mom, 2 * r), tol=tol,
        r=r, cumulant_gap=t_kappa - _f(c, 2 * r),
    )
    # equality at some r >= 2 forces the target law
    report.details["matches_target"] = report.verdict == EQUALITY
    return report


# ---------------------------------------------------------------------------
# dominant pair


class DominantPair(NamedTuple):
    k: int
    l: int
    residual: float
    within_eps: bool


def dominant_pair_detect(x, eps):
    """
    Locate the two entries close to 1/2 in a probability vector with large
    squared norm.

    Requires ``eps < 1/6``, ``sum(x) = 1``, ``max(x) < 1/2`` and
    ``sum(x**2) > 1/2 - eps``. Returns the 0-based indices of the two largest
    entries (ascending), the mass outside them (always below ``2*eps``) and
    whether both entries are within ``eps`` of 1/2.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise InvalidInputError("x must be a vector with at least two entries")
    if np.any(x < 0):
        raise InvalidInputError("x must be non-negative")
    if not 0 < eps < 1 / 6:
        raise PreconditionError(f"eps must lie in (0, 1/6), got {eps}")
    failed = []
    if abs(x.sum() - 1) > NORMALIZATION_TOL:
        failed.append("||x||_1 = 1")
    if x.max() >= 0.5:
        failed.append("||x||_inf < 1/2")
    if float(np.dot(x, x)) <= 0.5 - eps:
        failed.append("||x||_2^2 > 1/2 - eps")
    if failed:
        raise PreconditionError("hypothesis failed: " + ", ".join(failed))
    order = np.argsort(-x, kind="stable")
    k, l = sorted(int(i) for i in order[:2])
    residual = float(x.sum() - x[k] - x[l])
    within = bool(0.5 - x[k] < eps and 0.5 - x[l] < eps)
    return DominantPair(k, l, residual, within)


# ---------------------------------------------------------------------------
# hypercontractivity


def classical_moment_constant(n):
    """``2^(-n/2) sum_k C(n,k) (-1)^(n-k) (2k-1)!!`` (exact up to the power of 2)."""
    s = sum(
        comb(n, k) * (-1) ** (n - k) * math.factorial(2 * k) // (math.factorial(k) * 2**k)
        for k in range(n + 1)
    )
    return s * 2.0 ** (-n / 2)


def classical_moment_constant_partition(n):
    """Same constant as a sum over singleton-free set partitions."""
    total = 0.0
    for p in enumerate_set_partitions(n):
        if p.has_singleton():
            continue
        total += 2.0 ** (-len(p)) * math.prod(math.factorial(s - 1) for s in p.block_sizes)
    return 2.0 ** (n / 2) * total


def free_sharp_moment_constant(n):
    """Number of singleton-free non-crossing partitions: the moment of ``S^2 - 1``."""
    return partition_counts(n, "noncrossing_no_singleton")


def hypercontractivity_report(kind, c, m, n, tol=None):
    """
    Compare ``|k_n|`` and ``|mu_n|`` against their variance-power bounds.

    Returns a list of reports: cumulant bound, moment bound and, for free
    chaos, the moment bound with the sharp singleton-free constant.
    """
    kind = ChaosKind.parse(kind)
    if c.kind is not kind or m.kind is not kind:
        raise InvalidInputError("cumulant/moment kinds must match the requested kind")
    if n < 2:
        raise InvalidInputError(f"n must be >= 2, got {n}")
    _need(c, n, "hypercontractivity")
    _need(m, n, "hypercontractivity")
    k2 = _f(c, 2)
    scale = max(k2, 0.0) ** (n / 2)
    kn, mn = abs(_f(c, n)), abs(_f(m, n))
    if kind is ChaosKind.CLASSICAL:
        k_const = 2.0 ** (n / 2 - 1) * math.factorial(n - 1)
        m_const = classical_moment_constant(n)
        return [
            make_report("hypercontractivity_cumulant", k_const * scale, kn, tol=tol, n=n, constant=k_const),
            make_report("hypercontractivity_moment", m_const * scale, mn, tol=tol, n=n, constant=m_const),
        ]
    cat = catalan_number(n)
    sharp = free_sharp_moment_constant(n)
    return [
        make_report("hypercontractivity_cumulant", scale, kn, tol=tol, n=n, constant=1),
        make_report("hypercontractivity_moment", cat * scale, mn, tol=tol, n=n, constant=cat),
        make_report("hypercontractivity_moment_sharp", sharp * scale, mn, tol=tol, n=n, constant=sharp),
    ]


# ---------------------------------------------------------------------------
# Wasserstein-2 brackets and the sextic polynomial identity


def w2_gap(m, mode="sextic", r=None):
    """
    Moment bracket controlling the Wasserstein-2 distance to the target law.

    ``mode="sextic"``: ``(mu6 - 225) - 55 (mu4 - 9)`` classical,
    ``(phi6 - 8.25) - 7 (phi4 - 2.5)`` free. ``mode="even"``: ``mu_2r`` minus
    the target moment, valid when the fourth moment dominates the target's.
    The multiplicative constant of the bound is unknown and not applied.
    """
    _require_unit_variance(m)
    if mode == "sextic":
        _need(m, 6, "sextic bracket")
        if m.kind is ChaosKind.CLASSICAL:
            return (_f(m, 6) - 225.0) - 55.0 * (_f(m, 4) - 9.0)
        return (_f(m, 6) - 8.25) - 7.0 * (_f(m, 4) - 2.5)
    if mode in ("even", "even_2r"):
        if r is None or r < 2:
            raise InvalidInputError("even mode needs r >= 2")
        _need(m, max(2 * r, 4), "even-moment bracket")
        _require_fourth_moment(m)
        return _f(m, 2 * r) - _target_even_moment(m.kind, 2 * r)
    raise InvalidInputError(f"unknown w2 bracket mode {mode!r}")


def w2_bound_shape(m, mode="sextic", r=None):
    """Square root of :func:`w2_gap`; rounding noise below zero is clipped."""
    return math.sqrt(max(w2_gap(m, mode, r), 0.0))


def polynomial_identity_check(seq, rtol=DEFAULT_RTOL):
    """
    Evaluate the sextic test polynomial two ways.

    Left side from moments; right side from the gamma gap and the third
    cumulant: ``120 Delta_31 + 10 k3^2`` classical (the gap in its
    sum-of-squares form), ``Delta_31 / 8 + 3 k3^2`` free, which expands to
    ``k6 - k4 + k2/4 + 3 k3^2``.
    """
    seq.require_normalized()
    c = cumulants_from_coefficients(seq, 6)
    mom = moments_from_cumulants_recursive(c)
    mu2, mu4, mu6 = _f(mom, 2), _f(mom, 4), _f(mom, 6)
    k3 = _f(c, 3)
    if seq.kind is ChaosKind.CLASSICAL:
        lhs = mu6 - 55 * mu4 + 331 * mu2 - 61
        rhs = 120 * delta_gap_spectral(seq, 3, 1) + 10 * k3**2
    else:
        lhs = mu6 - 7 * mu4 + 37 / 4 * mu2
        rhs = delta_gap(c, 3, 1) / 8 + 3 * k3**2
    return make_report("polynomial_identity", lhs, rhs, rtol=rtol)


# ---------------------------------------------------------------------------
# coupling through shared noise


def _aligned(a, b):
    pa, na = split_signed_parts(a)
    pb, nb = split_signed_parts(b)
    width_p = max(len(pa), len(pb))
    width_n = max(len(na), len(nb))

    def pad(v, w):
        return np.pad(v.as_array(), (0, w - len(v)))

    left = np.concatenate([pad(pa, width_p), -pad(na, width_n)])
    right = np.concatenate([pad(pb, width_p), -pad(nb, width_n)])
    return left, right


def coupling_distance(a, b):
    """
    l2 distance between coefficient vectors in the canonical two-sided
    alignment (positives matched in decreasing order, negatives from the
    most negative, missing slots zero). It upper-bounds the W2 distance and
    is minimal over all bijections of the coefficient indices.
    """
    if a.kind is not b.kind:
        raise InvalidInputError("coefficient sequences must share the same chaos kind")
    left, right = _aligned(canonicalize(a), canonicalize(b))
    return float(np.sqrt(np.sum((left - right) ** 2)))


def target_coupling_distance_squared(seq):
    """``2 - sqrt2 * lam_1 + sqrt2 * lam_-1`` for a unit-variance sequence."""
    seq.require_normalized()
    pos, neg = split_signed_parts(seq)
    top = pos.lambdas[0] if len(pos) else 0.0
    bottom = -neg.lambdas[0] if len(neg) else 0.0
    return 2 - math.sqrt(2) * top + math.sqrt(2) * bottom
