"""How ``decide`` reaches a verdict.

An observable fails (t, p) exactly when its annihilator contains a nonzero
operator with at most t negative and at most p positive eigenvalues (or the
other way round). ``decide`` looks for such a witness with a sequence of
routes and reports the one that settled the question.
"""

import numpy as np

from tpic import OperatorSubspace, TaskPremise, decide, rank_signature
from tpic.constructions import premise_counterexample, task_counterexample

# one generator: exact answer from its signature
x = premise_counterexample(5, 2)
print("generator eigenvalues:", np.round(np.diag(x.basis[0]).real, 3))
for t, p in [(1, 2), (1, 3)]:
    v = decide(x, TaskPremise(t, p, 5))
    print(f"  ({t},{p}) -> {v.status.value} via {v.method}")

x = task_counterexample(6, 1)
print("\ntask counterexample, (1,6) and (2,2):",
      decide(x, TaskPremise(1, 6, 6)).status.value, decide(x, TaskPremise(2, 2, 6)).status.value)

# two generators: the pencil x + s y is scanned exactly through its singular angles
rng = np.random.default_rng(1)
a = np.diag([1.0, 1, -1, -1]).astype(complex)
b = np.diag([1.0, -1, 1, -1]).astype(complex)
x = OperatorSubspace(4, np.array([a, b]))
v = decide(x, TaskPremise(1, 1, 4))
print("\npencil:", v.status.value, "via", v.method, "witness", tuple(rank_signature(v.witness)))

# a random 3-dimensional annihilator in d = 4. Signature-(1,1) operators have
# codimension 4 among traceless Hermitians, so a generic 3-dimensional space
# misses them and (1,1) holds, but only a witness can certify anything here:
# the honest answer is UNRESOLVED. A single-negative-eigenvalue element, on
# the other hand, shows up among the structured candidates.
basis = []
for _ in range(3):
    h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = h + h.conj().T
    basis.append(h - np.trace(h) / 4 * np.eye(4))
x = OperatorSubspace(4, np.array(basis))
for t, p in [(1, 1), (1, 4)]:
    v = decide(x, TaskPremise(t, p, 4), trials=2000)
    print(f"random 3-dim, ({t},{p}) -> {v.status.value} via {v.method}, {v.trials_used} trials")
