"""
Target laws and the fourth-moment criteria.

The normal product N1*N2 and its free analogue, the tetilla law, have
coefficients (1/sqrt2, -1/sqrt2). A chi-square with two degrees of
freedom shares all even cumulants but not the third; the criteria tell
them apart.
"""

# %%
from chaosmoments import (
    characterization_check,
    cumulant_ladder_report,
    cumulants_from_coefficients,
    delta_gap,
    moments_from_coefficients,
    polynomial_identity_check,
    target_moments,
    w2_gap,
)
from chaosmoments.cli import render_report
from chaosmoments.fixtures import counterexample, impostor, target

# %% Exact target moments
for kind in ("classical", "free"):
    m = target_moments(kind, 12)
    print(kind, [str(m[r]) for r in range(2, 13, 2)])

# %% Gamma gap and third cumulant for the three fixtures
for name, make in (("target", target), ("impostor", impostor), ("counterexample", counterexample)):
    seq = make()
    c = cumulants_from_coefficients(seq, 6)
    print(f"{name:>15}: Delta_31 = {delta_gap(c, 3, 1):.6f}, kappa_3 = {c[3]:.6f}")

# %% Reports
reports = [characterization_check(make()) for make in (target, impostor, counterexample)]
reports += [polynomial_identity_check(make()) for make in (target, impostor, counterexample)]
reports.append(cumulant_ladder_report(cumulants_from_coefficients(impostor(), 8), 4))
print(render_report(reports, "csv"))

# %% Sextic bracket controlling W2 (the constant in front is not known)
for name, make in (("target", target), ("impostor", impostor), ("counterexample", counterexample)):
    print(f"{name:>15}: bracket = {w2_gap(moments_from_coefficients(make(), 6)):.4f}")
