"""
Monte Carlo view of the moment criteria.

Samples are reproducible from (seed, count, coefficients). The empirical
W2 to a target batch shrinks along a family approaching the target and
stays away from zero along the chi-square family whose fourth moment also
tends to 9.
"""

# %%
import math

import numpy as np

from chaosmoments import (
    CoefficientSequence,
    empirical_moments,
    empirical_wasserstein2,
    moments_from_coefficients,
    sample_classical,
    target_coefficients,
)
from chaosmoments.montecarlo import moment_standard_errors

target = target_coefficients("classical")
batch = sample_classical(target, 10**6, seed=0xC0FFEE)
m = empirical_moments(batch, 6)
se = moment_standard_errors(batch, 6)
for r in (2, 4, 6):
    print(f"mu{r}: {m[r]:.3f} +- {se[r - 1]:.3f}")

# %% Two families with mu4 -> 9
ref = sample_classical(target, 10**5, seed=1)
print(f"{'t':>6} {'mu4':>7} {'mu6':>8} {'W2 toward':>10} | {'mu4':>7} {'mu6':>8} {'W2 chi2':>8}")
for t in np.linspace(0.45, math.pi / 4, 6):
    good = CoefficientSequence("classical", [math.cos(t), -math.sin(t)])
    bad = CoefficientSequence("classical", [math.cos(t), math.sin(t)])
    mg, mb = moments_from_coefficients(good, 6), moments_from_coefficients(bad, 6)
    wg = empirical_wasserstein2(sample_classical(good, 10**5, seed=2), ref)
    wb = empirical_wasserstein2(sample_classical(bad, 10**5, seed=3), ref)
    print(f"{t:6.3f} {mg[4]:7.3f} {mg[6]:8.2f} {wg:10.4f} | {mb[4]:7.3f} {mb[6]:8.2f} {wb:8.4f}")

# %% Plot-ready export of a small batch
print(sample_classical(target, 5, seed=7).to_csv())
