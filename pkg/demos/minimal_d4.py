"""Minimal observables on C^4.

To recognize pure states among all states, 11 outcomes suffice on C^4. The
trick is a 5-dimensional space of traceless operators in which every nonzero
element has two positive and two negative eigenvalues, built from the
quaternion-like matrices sigma^1..sigma^4.
"""

import numpy as np

from tpic import TaskPremise, annihilator, decide, rank_signature
from tpic.constructions import minimal_d4_observable, n_prime, n_prime_subspace

rng = np.random.default_rng(0)
a0, a = rng.standard_normal(), rng.standard_normal(4)
m = n_prime(a0, a)
print("det N'      :", np.linalg.det(m).real)
print("(a0^2+|a|^2)^2:", (a0**2 + a @ a) ** 2)
print("signature   :", tuple(rank_signature(m)))

obs = minimal_d4_observable("pure-vs-all")
x = annihilator(obs)
print(f"\npure-vs-all: {obs.n_outcomes} outcomes, annihilator dim {x.dimension}")
print("same as the image of N':", x.same_as(n_prime_subspace()))
for t, p in [(1, 4), (1, 2), (2, 2)]:
    v = decide(x, TaskPremise(t, p, 4))
    print(f"  ({t},{p}): {v.status.value:14s} via {v.method}")

obs = minimal_d4_observable("rank2-vs-rank2")
x = annihilator(obs)
print(f"\nrank2-vs-rank2: {obs.n_outcomes} outcomes, generator eigenvalues",
      np.round(np.linalg.eigvalsh(x.basis[0]), 4))
print("  (2,2):", decide(x, TaskPremise(2, 2, 4)).status.value)

# the 10-outcome pure-vs-pure candidate is not certified: decide finds a rank-2 element
obs = minimal_d4_observable("pure-vs-pure-upper")
v = decide(annihilator(obs), TaskPremise(1, 1, 4))
print(f"\npure-vs-pure-upper: {obs.n_outcomes} outcomes, (1,1) -> {v.status.value} via {v.method}")
print("  witness eigenvalues:", np.round(np.linalg.eigvalsh(v.witness), 6))
