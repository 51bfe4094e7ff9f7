"""
Moment/cumulant conversion for classical and free cumulants.

Two forward paths are provided. The partition-sum path sums products of
cumulants over all set partitions (classical) or non-crossing partitions
(free) and serves as the reference; the recursive path is the one used
everywhere else. Both are written against plain ``+`` and ``*`` so they
run unchanged on floats, :class:`fractions.Fraction` and the dual numbers
of :mod:`chaosmoments.optimize`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import comb

from .errors import InvalidInputError
from .partitions import block_type_counts
from .spectral import ChaosKind, CumulantSequence, MomentSequence, cumulants_from_coefficients

__all__ = [
    "moments_from_cumulants_enum",
    "moments_from_cumulants_recursive",
    "moments_from_cumulants",
    "cumulants_from_moments",
    "moments_from_coefficients",
    "target_moments",
    "target_cumulants",
    "classical_moment_recursion",
    "free_moment_recursion",
    "double_factorial",
]

CENTERING_TOL = 1e-12


def _check_order(seq, R):
    if R is None:
        return seq.R
    if not isinstance(R, int) or R < 1:
        raise InvalidInputError(f"max order must be a positive integer, got {R!r}")
    if R > seq.R:
        raise InvalidInputError(f"requested order {R} exceeds the {seq.R} available values")
    return R


def _product(values):
    out = 1
    for v in values:
        out = out * v
    return out


def moments_from_cumulants_enum(c, R=None, cap=None):
    """
    Moments by explicit summation over partitions.

    ``mu_n = sum_pi prod_{A in pi} kappa_|A|`` with ``pi`` running over all
    set partitions (classical) or non-crossing partitions (free). Partitions
    sharing a block-size multiset contribute identical products, so their
    multiplicities are taken from one enumeration per order.
    """
    R = _check_order(c, R)
    noncrossing = c.kind is ChaosKind.FREE
    # fail on the cap before paying for any lower-order enumeration
    block_type_counts(R, noncrossing, cap)
    kappa = c.values
    out = []
    for n in range(1, R + 1):
        total = 0
        for sizes, count in block_type_counts(n, noncrossing, cap):
            total = total + count * _product(kappa[s - 1] for s in sizes)
        out.append(total)
    return MomentSequence(c.kind, tuple(out))


def classical_moment_recursion(kappa, R):
    """``mu_n = sum_k C(n-1, k-1) kappa_k mu_{n-k}``; ``kappa[0]`` is order 1."""
    mu = [1]
    for n in range(1, R + 1):
        acc = 0
        for k in range(1, n + 1):
            acc = acc + comb(n - 1, k - 1) * kappa[k - 1] * mu[n - k]
        mu.append(acc)
    return mu[1:]


def _power_coefficients(mu, s_max, j_max):
    # P[s][j] = [z^j] M(z)^s with M(z) = sum_i mu_i z^i, mu[0] = 1
    P = [[1] + [0] * j_max]
    for s in range(1, s_max + 1):
        prev = P[-1]
        row = []
        for j in range(j_max + 1):
            acc = 0
            for i in range(j + 1):
                acc = acc + prev[j - i] * mu[i]
            row.append(acc)
        P.append(row)
    return P


def free_moment_recursion(kappa, R):
    """
    First-block decomposition of non-crossing partitions.

    ``mu_n = sum_s kappa_s * sum_{i_1+...+i_s = n-s} mu_{i_1} ... mu_{i_s}``,
    with ``mu_0 = 1``. The inner sums are coefficients of powers of the
    moment series and are extended one order at a time.
    """
    mu = [1] + [0] * R
    # P[s][j] = [z^j] M(z)^s, filled column by column as moments appear
    P = [[1] + [0] * R for _ in range(R + 1)]
    for n in range(1, R + 1):
        acc = 0
        for s in range(1, n + 1):
            acc = acc + kappa[s - 1] * P[s][n - s]
        mu[n] = acc
        for s in range(1, R + 1):
            col = 0
            for i in range(n + 1):
                col = col + P[s - 1][n - i] * mu[i]
            P[s][n] = col
    return mu[1:]


def moments_from_cumulants_recursive(c, R=None):
    R = _check_order(c, R)
    if c.kind is ChaosKind.CLASSICAL:
        vals = classical_moment_recursion(c.values, R)
    else:
        vals = free_moment_recursion(c.values, R)
    return MomentSequence(c.kind, tuple(vals))


def moments_from_cumulants(c, R=None, method="recursive"):
    if method == "recursive":
        return moments_from_cumulants_recursive(c, R)
    if method == "enum":
        return moments_from_cumulants_enum(c, R)
    raise InvalidInputError(f"unknown conversion method {method!r}")


def moments_from_coefficients(seq, R):
    return moments_from_cumulants_recursive(cumulants_from_coefficients(seq, max(R, 2)), R)


def cumulants_from_moments(m, R=None):
    """
    Invert the forward conversion by forward substitution.

    The forward map is unitriangular in the highest-order cumulant, so each
    ``kappa_n`` is ``mu_n`` minus the contribution of lower orders. Inputs
    must be centered.
    """
    R = _check_order(m, R)
    mu1 = m.values[0]
    if isinstance(mu1, (int, Fraction)):
        centered = mu1 == 0
    else:
        centered = abs(mu1) <= CENTERING_TOL
    if not centered:
        raise InvalidInputError(f"moment sequence must be centered (mu_1 = 0), got {mu1!r}")
    mu = [1] + list(m.values[:R])
    kappa = []
    if m.kind is ChaosKind.CLASSICAL:
        for n in range(1, R + 1):
            acc = mu[n]
            for k in range(1, n):
                acc = acc - comb(n - 1, k - 1) * kappa[k - 1] * mu[n - k]
            kappa.append(acc)
    else:
        P = _power_coefficients(mu, R, R)
        for n in range(1, R + 1):
            acc = mu[n]
            for s in range(1, n):
                acc = acc - kappa[s - 1] * P[s][n - s]
            kappa.append(acc)
    return CumulantSequence(m.kind, tuple(kappa))


def double_factorial(n):
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def _free_target_even_moment(n):
    total = sum(2**k * comb(n, k) * comb(2 * n, k - 1) for k in range(1, n + 1))
    return Fraction(total, 2**n * n)


def target_moments(kind, R):
    """
    Exact moments of the normal product (classical) or tetilla (free) law.

    Entries are ``int`` or :class:`~fractions.Fraction`; use ``as_array`` for
    the float view.
    """
    kind = ChaosKind.parse(kind)
    if R < 2:
        raise InvalidInputError(f"max order must be >= 2, got {R}")
    vals = []
    for order in range(1, R + 1):
        if order % 2:
            vals.append(0)
        elif kind is ChaosKind.CLASSICAL:
            vals.append(double_factorial(order - 1) ** 2)
        else:
            vals.append(_free_target_even_moment(order // 2))
    return MomentSequence(kind, tuple(vals))


def target_cumulants(kind, R):
    """Exact cumulants: ``(2r-1)!`` classical, ``2**(1-n)`` free, odd orders 0."""
    kind = ChaosKind.parse(kind)
    if R < 2:
        raise InvalidInputError(f"max order must be >= 2, got {R}")
    vals = []
    for order in range(1, R + 1):
        if order % 2:
            vals.append(0)
        elif kind is ChaosKind.CLASSICAL:
            vals.append(math.factorial(order - 1))
        else:
            vals.append(Fraction(1, 2 ** (order // 2 - 1)))
    return CumulantSequence(kind, tuple(vals))
