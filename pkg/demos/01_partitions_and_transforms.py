"""
Partitions and the moment/cumulant transforms.

Run with ``python demos/01_partitions_and_transforms.py``.
"""

# %%
from chaosmoments import (
    CoefficientSequence,
    bell_number,
    catalan_number,
    cumulants_from_coefficients,
    cumulants_from_moments,
    enumerate_noncrossing_partitions,
    enumerate_set_partitions,
    moments_from_cumulants,
    partition_counts,
    target_cumulants,
)

# %% Set partitions vs non-crossing partitions of {1,2,3,4}
sp = enumerate_set_partitions(4)
nc = enumerate_noncrossing_partitions(4)
print(len(sp), "set partitions,", len(nc), "non-crossing")
print("the crossing one:", [str(p) for p in sp if not p.is_noncrossing()])

# %% Counting families
print(f"{'n':>3} {'Bell':>8} {'Catalan':>8} {'no-singleton':>13} {'NC no-singleton':>16}")
for n in range(1, 11):
    print(f"{n:>3} {bell_number(n):>8} {catalan_number(n):>8} "
          f"{partition_counts(n, 'all_no_singleton'):>13} {partition_counts(n, 'noncrossing_no_singleton'):>16}")

# %% Same cumulants, two notions of independence
# kappa_2 = 1 and nothing else is a standard Gaussian (classical) or the
# semicircle (free); the even moments become double factorials or Catalans.
for kind in ("classical", "free"):
    c = target_cumulants(kind, 8)
    gauss = type(c)(kind, (0, 1) + (0,) * 6)
    print(kind, [moments_from_cumulants(gauss)[r] for r in (2, 4, 6, 8)])

# %% From coefficients to cumulants and moments, both paths
seq = CoefficientSequence("classical", [0.6, 0.5, -0.4, -0.3, 0.2, 0.1])
seq = CoefficientSequence("classical", seq.as_array() / seq.variance**0.5)
c = cumulants_from_coefficients(seq, 10)
fast = moments_from_cumulants(c, method="recursive").as_array()
slow = moments_from_cumulants(c, method="enum").as_array()
print("max |enum - recursive| =", abs(fast - slow).max())

# %% and back again
back = cumulants_from_moments(moments_from_cumulants(c)).as_array()
print("round trip error =", abs(back - c.as_array()).max())
