"""Covariant phase-space observables and the zeros of their fiducial.

The observable generated by Weyl translates of a fiducial state tau misses
exactly the directions W(x, xi) where tau's inverse Weyl transform vanishes.
Here we build fiducials with chosen zeros, look at what the observable can
still determine, and see how noise adds zeros.
"""

import numpy as np

from tpic import TaskPremise, annihilator, decide
from tpic.weyl import (
    SYNTHESIS_ALPHA,
    NoiseMeasure,
    ZeroSet,
    coherent_fiducial,
    covariant_observable,
    fiducial_with_zero_set,
    inverse_weyl,
    noise_with_zero_set,
    single_point_analysis,
    smear,
    two_point_prime_analysis,
    zero_set,
)

# a coherent fiducial with real alpha has zeros when d is even
for alpha in (0.5, SYNTHESIS_ALPHA):
    print(f"alpha={alpha:.3f}: zeros at d=4:", zero_set(coherent_fiducial(4, alpha)).sorted())

d = 5
z = ZeroSet.symmetrized(d, [(1, 2)])
tau = fiducial_with_zero_set(d, z)
print("\nrequested", z.sorted(), "got", zero_set(tau).sorted())
print("|tau^| on the grid:\n", np.round(np.abs(inverse_weyl(tau.tau)), 4))
x = annihilator(covariant_observable(tau))
print("annihilator dim:", x.dimension)
for t, p in [(1, 5), (2, 2)]:
    print(f"  ({t},{p}):", decide(x, TaskPremise(t, p, d)).status.value)

print("\n" + single_point_analysis(6, (3, 0)).summary)
print(two_point_prime_analysis(7, (2, 5)).summary)

# noise multiplies transforms, so zero sets add up
mu = noise_with_zero_set(d, ZeroSet.symmetrized(d, [(0, 1)]))
print("\nsmeared zeros:", zero_set(smear(tau, mu)).sorted())
print("uniform noise gives I/d:", np.allclose(smear(tau, NoiseMeasure.uniform(d)).tau, np.eye(d) / d))
