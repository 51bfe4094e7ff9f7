"""
Constrained moment minimization over spectral coefficients.

Objective and constraints are moments of a second-chaos element, hence
polynomials in the coefficients. They are evaluated by running the moment
recursions on dual numbers, which yields exact gradients. The solver is a
multistart augmented Lagrangian with L-BFGS-B inner solves, finished by a
Gauss-Newton projection onto the constraint set.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import InvalidInputError
from .moments import classical_moment_recursion, free_moment_recursion
from .spectral import ChaosKind, CoefficientSequence, canonicalize, classical_cumulant_factor

__all__ = [
    "OptimizationProblem",
    "OptimizationResult",
    "evaluate_problem",
    "moment_values_and_gradients",
    "minimize_fourth_moment",
]

log = logging.getLogger(__name__)

OBJECTIVES = ("minimize_mu4", "maximize_mu4")


class _Jet:
    """First-order dual number: a value and its gradient."""

    __slots__ = ("val", "grad")

    def __init__(self, val, grad):
        self.val = val
        self.grad = grad

    def __add__(self, other):
        if isinstance(other, _Jet):
            return _Jet(self.val + other.val, self.grad + other.grad)
        return _Jet(self.val + other, self.grad)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, _Jet):
            return _Jet(self.val - other.val, self.grad - other.grad)
        return _Jet(self.val - other, self.grad)

    def __mul__(self, other):
        if isinstance(other, _Jet):
            return _Jet(self.val * other.val, self.val * other.grad + other.val * self.grad)
        return _Jet(self.val * other, self.grad * other)

    __rmul__ = __mul__


def moment_values_and_gradients(kind, lambdas, R):
    """
    Moments ``mu_1..mu_R`` of the chaos element with coefficients ``lambdas``
    and their gradients with respect to the coefficients.

    Returns ``(values, jacobian)`` with shapes ``(R,)`` and ``(R, k)``.
    """
    kind = ChaosKind.parse(kind)
    lam = np.asarray(lambdas, dtype=float)
    zero = np.zeros_like(lam)
    kappa = [_Jet(0.0, zero)]
    for r in range(2, R + 1):
        factor = classical_cumulant_factor(r) if kind is ChaosKind.CLASSICAL else 1.0
        kappa.append(_Jet(factor * float(np.sum(lam**r)), factor * r * lam ** (r - 1)))
    if kind is ChaosKind.CLASSICAL:
        mu = classical_moment_recursion(kappa, R)
    else:
        mu = free_moment_recursion(kappa, R)
    # orders below 2 come out as plain ints when all cumulants vanish
    vals = np.array([m.val if isinstance(m, _Jet) else float(m) for m in mu])
    jac = np.array([m.grad if isinstance(m, _Jet) else zero for m in mu])
    return vals, jac


@dataclass(frozen=True)
class OptimizationProblem:
    """
    Minimize (or maximize) the fourth moment subject to moment equalities.

    ``constraints`` holds ``(order, target)`` pairs; ``sign_pattern`` fixes the
    sign of every coefficient, in which case only magnitudes are optimized.
    """

    kind: ChaosKind = ChaosKind.CLASSICAL
    k: int = 3
    objective: str = "minimize_mu4"
    constraints: tuple = ((2, 1.0),)
    sign_pattern: tuple | None = None
    restarts: int = 64
    seed: int = 0
    constraint_tol: float = 1e-10
    stationarity_tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "kind", ChaosKind.parse(self.kind))
        object.__setattr__(
            self, "constraints", tuple((int(o), float(t)) for o, t in self.constraints)
        )
        if self.k < 1:
            raise InvalidInputError(f"k must be >= 1, got {self.k}")
        if self.objective not in OBJECTIVES:
            raise InvalidInputError(f"objective must be one of {OBJECTIVES}")
        for order, _ in self.constraints:
            if order % 2 or not 2 <= order <= 12:
                raise InvalidInputError(f"constraint orders must be even and <= 12, got {order}")
        if self.sign_pattern is not None:
            signs = tuple(_parse_sign(s) for s in self.sign_pattern)
            if len(signs) != self.k:
                raise InvalidInputError("sign_pattern length must equal k")
            object.__setattr__(self, "sign_pattern", signs)
        if self.restarts < 1:
            raise InvalidInputError("restarts must be positive")
        if self.constraint_tol <= 0:
            raise InvalidInputError("constraint_tol must be positive")

    @property
    def max_order(self):
        return max([4] + [o for o, _ in self.constraints])

    @classmethod
    def from_json(cls, payload):
        known = {f for f in cls.__dataclass_fields__}
        extra = set(payload) - known
        if extra:
            raise InvalidInputError(f"unknown problem fields: {sorted(extra)}")
        return cls(**payload)

    def to_json(self):
        return {
            "kind": self.kind.value,
            "k": self.k,
            "objective": self.objective,
            "constraints": [list(c) for c in self.constraints],
            "sign_pattern": None if self.sign_pattern is None
            else ["+" if s > 0 else "-" for s in self.sign_pattern],
            "restarts": self.restarts,
            "seed": self.seed,
            "constraint_tol": self.constraint_tol,
            "stationarity_tol": self.stationarity_tol,
        }


def _parse_sign(s):
    if s in ("+", 1, 1.0, "+1"):
        return 1.0
    if s in ("-", -1, -1.0, "-1"):
        return -1.0
    raise InvalidInputError(f"sign must be '+' or '-', got {s!r}")


@dataclass(frozen=True)
class OptimizationResult:
    lambdas: CoefficientSequence
    objective_value: float
    constraint_violation: float
    converged: bool
    restarts_used: int
    restart_index: int = -1
    history: list = field(default_factory=list, compare=False, repr=False)

    def to_json(self):
        return {
            "kind": self.lambdas.kind.value,
            "lambda": list(self.lambdas.lambdas),
            "objective": self.objective_value,
            "constraint_violation": self.constraint_violation,
            "converged": self.converged,
            "restarts_used": self.restarts_used,
            "restart_index": self.restart_index,
        }


def evaluate_problem(p, lambdas):
    """
    Objective ``mu4``, constraint residuals ``mu_order - target`` and the
    gradient of the objective, all at the raw coefficient vector.
    """
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (p.k,):
        raise InvalidInputError(f"expected {p.k} coefficients, got shape {lam.shape}")
    vals, jac = moment_values_and_gradients(p.kind, lam, p.max_order)
    cons = np.array([vals[o - 1] - t for o, t in p.constraints])
    return float(vals[3]), cons, jac[3].copy()


class _Model:
    """Objective/constraints in the optimization variables (magnitudes when signed)."""

    def __init__(self, p):
        self.p = p
        self.signs = None if p.sign_pattern is None else np.array(p.sign_pattern)
        self.orders = np.array([o for o, _ in p.constraints], dtype=int)
        self.targets = np.array([t for _, t in p.constraints])
        self.scale = np.maximum(1.0, np.abs(self.targets))
        self.direction = 1.0 if p.objective == "minimize_mu4" else -1.0

    def lam(self, x):
        return x if self.signs is None else self.signs * x

    def eval(self, x):
        lam = self.lam(x)
        vals, jac = moment_values_and_gradients(self.p.kind, lam, self.p.max_order)
        if self.signs is not None:
            jac = jac * self.signs
        f = self.direction * vals[3]
        g = self.direction * jac[3]
        c = (vals[self.orders - 1] - self.targets) / self.scale
        cj = jac[self.orders - 1] / self.scale[:, None]
        return f, g, c, cj, vals


def _radius(p):
    for order, target in p.constraints:
        if order == 2 and target > 0:
            return math.sqrt(target)
    return 1.0


def _initial_point(p, rng):
    z = rng.standard_normal(p.k)
    z *= _radius(p) / np.linalg.norm(z)
    return np.abs(z) if p.sign_pattern is not None else z


def _box(p):
    # every point with sum(lam**2) = t satisfies |lam_i| <= sqrt(t); the box
    # keeps the merit bounded while the penalty is still small (maximization)
    limit = 3.0 * _radius(p) if any(o == 2 for o, _ in p.constraints) else 10.0
    low = 0.0 if p.sign_pattern is not None else -limit
    return [(low, limit)] * p.k


def _project(model, x, bounds, iters=30):
    """Gauss-Newton steps onto the constraint set (minimum-norm corrections).

    Steps that do not reduce the violation are rejected, so an inconsistent
    constraint set leaves the iterate where the outer loop put it.
    """
    def violation(z):
        c = model.eval(z)[2]
        return float(np.max(np.abs(c * model.scale))) if c.size else 0.0

    best = violation(x)
    for _ in range(iters):
        if best <= 1e-14 * np.max(model.scale, initial=1.0):
            break
        _, _, c, cj, _ = model.eval(x)
        trial = x + np.linalg.lstsq(cj, -c, rcond=None)[0]
        if bounds is not None:
            trial = np.maximum(trial, 0.0)
        v = violation(trial)
        if not v < best:
            break
        x, best = trial, v
    return x


def _solve_from(p, x0, max_outer=40):
    model = _Model(p)
    bounds = _box(p)
    y = np.zeros(len(p.constraints))
    # maximizing a quartic needs a stiffer start for the merit to be bounded
    rho = 10.0 if model.direction > 0 else 1000.0
    x = x0
    prev_viol = np.inf
    fallback = (np.inf, x0)
    for _ in range(max_outer):
        def merit(z, y=y, rho=rho):
            f, g, c, cj, _ = model.eval(z)
            val = f - y @ c + 0.5 * rho * c @ c
            grad = g + cj.T @ (rho * c - y)
            return val, grad

        res = minimize(
            merit, x, jac=True, method="L-BFGS-B", bounds=bounds,
            options={"maxiter": 2000, "gtol": p.stationarity_tol, "ftol": 1e-15},
        )
        step = float(np.max(np.abs(res.x - x)))
        x = res.x
        _, _, c, _, _ = model.eval(x)
        viol = float(np.max(np.abs(c))) if c.size else 0.0
        if viol < fallback[0]:
            fallback = (viol, x)
        # feasible and no longer moving between multiplier updates
        if viol <= 1e-9 and step <= 1e-8:
            break
        y = y - rho * c
        if viol > 0.25 * prev_viol:
            rho = min(rho * 10.0, 1e10)
        prev_viol = viol
    if fallback[0] < viol:
        # diverging multipliers on an inconsistent problem: keep the closest point
        x = fallback[1]
    x = _project(model, x, bounds if p.sign_pattern is not None else None)
    _, _, c, _, vals = model.eval(x)
    violation = float(np.max(np.abs(c * model.scale))) if c.size else 0.0
    return model.lam(x), float(vals[3]), violation


def minimize_fourth_moment(p, workers=1):
    """
    Multistart solve of ``p``. Restart ``i`` starts from a point drawn from
    the stream ``(seed, i)``; the best feasible restart wins, ties going to
    the lowest index. When no restart is feasible the least-violating one is
    returned with ``converged=False``.
    """

    def run(i):
        rng = np.random.default_rng(np.random.SeedSequence(int(p.seed), spawn_key=(i,)))
        return _solve_from(p, _initial_point(p, rng))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, range(p.restarts)))
    else:
        outcomes = [run(i) for i in range(p.restarts)]

    sign = 1.0 if p.objective == "minimize_mu4" else -1.0
    best = None
    for i, (lam, obj, viol) in enumerate(outcomes):
        feasible = viol <= p.constraint_tol
        key = (not feasible, sign * obj if feasible else viol, i)
        if best is None or key < best[0]:
            best = (key, i, lam, obj, viol, feasible)
    _, idx, lam, obj, viol, feasible = best
    log.debug("restart %d selected: objective=%r violation=%r", idx, obj, viol)
    seq = canonicalize(CoefficientSequence(p.kind, lam))
    return OptimizationResult(
        seq, obj, viol, feasible, p.restarts, idx,
        history=[(o, v) for _, o, v in outcomes],
    )
