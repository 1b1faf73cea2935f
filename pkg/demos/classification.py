"""Which (task, premise) pairs are really different?

A pair (t, p) asks an observable to tell apart every state of rank <= t from
every other state of rank <= p. Many pairs turn out to be the same
requirement. This script prints the lattice of inequivalent pairs for small
dimensions and checks the class count against brute-force enumeration.
"""

from tpic import TaskPremise, canonicalize, count_classes, implication_lattice

for d in (2, 3, 4, 5):
    print(implication_lattice(d).render())
    print()

# premise p = d - 1 is as good as knowing nothing (p = d)
print(canonicalize(TaskPremise(1, 3, 4)).canonical, "==", canonicalize(TaskPremise(1, 4, 4)).canonical)

# a task beyond d/2 adds nothing: (3, 5) at d = 5 is plain (2, 5)
print(canonicalize(TaskPremise(3, 5, 5)).canonical)

for d in range(2, 13):
    pairs = [(t, p) for p in range(1, d + 1) for t in range(1, p + 1)]
    n = len({canonicalize(TaskPremise(t, p, d)).canonical for t, p in pairs})
    assert n == count_classes(d)
    print(f"d={d:2d}: {n} classes")
